"""Dense state vectors for N qubits.

Basis convention: qubit 0 is the leftmost ket factor, so the basis state
``|x0 x1 ... x_{N-1}>`` lives at index ``sum(x_k * 2**(N-1-k))``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateBranchError, InputError

EPS_NORM = 1e-10
EPS_ZERO = 1e-12
SCHMIDT_TOL = 1e-8
MAX_QUBITS = 20


class StateVector:
    """Immutable vector of ``2**n_qubits`` complex amplitudes.

    Unit norm is checked on construction unless ``normalized=False``; the
    unnormalized form only appears as the output of :func:`project`.
    """

    __slots__ = ("_amps", "_n")

    def __init__(self, amps: Iterable[complex], normalized: bool = True):
        arr = np.array(amps, dtype=np.complex128).reshape(-1)
        dim = arr.size
        n = dim.bit_length() - 1
        if dim < 2 or (1 << n) != dim:
            raise InputError(f"state dimension {dim} is not a power of two >= 2")
        if n > MAX_QUBITS:
            raise InputError(f"{n} qubits exceeds the dense ceiling of {MAX_QUBITS}")
        if not np.all(np.isfinite(arr)):
            raise InputError("amplitudes must be finite")
        if normalized:
            norm2 = float(np.vdot(arr, arr).real)
            if abs(norm2 - 1.0) > EPS_NORM:
                raise InputError(f"state is not normalized (norm^2 = {norm2!r})")
        arr.setflags(write=False)
        self._amps = arr
        self._n = n

    @classmethod
    def unnormalized(cls, amps: Iterable[complex]) -> "StateVector":
        return cls(amps, normalized=False)

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def amps(self) -> np.ndarray:
        """Read-only view of the amplitudes."""
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.size

    def norm2(self) -> float:
        return float(np.vdot(self._amps, self._amps).real)

    def is_normalized(self, tol: float = EPS_NORM) -> bool:
        return abs(self.norm2() - 1.0) <= tol

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit (a fresh copy)."""
        return self._amps.reshape((2,) * self._n).copy()

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def __len__(self) -> int:
        return self._amps.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._amps, other._amps)

    def __hash__(self) -> int:
        return hash((self._n, self._amps.tobytes()))

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self._amps):
            if abs(a) > 1e-9:
                terms.append(f"({a.real:.4g}{a.imag:+.4g}j)|{i:0{self._n}b}>")
        return "StateVector(" + (" + ".join(terms) or "0") + ")"


def _check_qubit(state: StateVector, q: int) -> None:
    if not isinstance(q, (int, np.integer)) or not 0 <= q < state.n_qubits:
        raise InputError(f"qubit index {q!r} out of range for {state.n_qubits} qubits")


def parse_bits(bits: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(bits, str):
        if any(c not in "01" for c in bits):
            raise InputError(f"bit string {bits!r} may only contain 0 and 1")
        return tuple(int(c) for c in bits)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise InputError(f"bits {bits!r} may only contain 0 and 1")
    return out


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_to_bits(index: int, n_qubits: int) -> tuple[int, ...]:
    return tuple((index >> (n_qubits - 1 - k)) & 1 for k in range(n_qubits))


def basis_state(n_qubits: int, bits: str | Sequence[int] | None = None) -> StateVector:
    """Computational basis state; ``bits`` defaults to all zeros."""
    if n_qubits < 1:
        raise InputError("n_qubits must be >= 1")
    if n_qubits > MAX_QUBITS:
        raise InputError(f"{n_qubits} qubits exceeds the dense ceiling of {MAX_QUBITS}")
    b = (0,) * n_qubits if bits is None else parse_bits(bits)
    if len(b) != n_qubits:
        raise InputError(f"expected {n_qubits} bits, got {len(b)}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[bits_to_index(b)] = 1.0
    return StateVector(amps)


def from_amplitudes(amps: Iterable[complex]) -> StateVector:
    """Build a state from arbitrary (nonzero) amplitudes, normalizing them."""
    return normalize(StateVector.unnormalized(amps))


def random_state(n_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    z = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return StateVector(z / np.linalg.norm(z))


def project(state: StateVector, q: int, x: int) -> tuple[StateVector, float]:
    """Zero every amplitude whose ``q``-th bit differs from ``x``.

    Returns the unnormalized projected state and its squared norm.
    """
    _check_qubit(state, q)
    if x not in (0, 1):
        raise InputError(f"projection bit must be 0 or 1, got {x!r}")
    t = state.tensor()
    idx = [slice(None)] * state.n_qubits
    idx[q] = 1 - x
    t[tuple(idx)] = 0.0
    out = StateVector.unnormalized(t.reshape(-1))
    return out, out.norm2()


def normalize(state: StateVector) -> StateVector:
    norm = np.sqrt(state.norm2())
    if norm <= EPS_ZERO:
        raise DegenerateBranchError(f"cannot normalize a branch of norm {norm:.3g}")
    return StateVector(state.amps / norm)


def inner(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise InputError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|**2``, insensitive to global phase."""
    return min(1.0, abs(inner(a, b)) ** 2)


def kron(*states: StateVector) -> StateVector:
    """Tensor product, first argument on the lowest-numbered qubits."""
    if not states:
        raise InputError("kron needs at least one state")
    out = states[0].amps
    for s in states[1:]:
        out = np.kron(out, s.amps)
    return StateVector(out, normalized=all(s.is_normalized() for s in states))


def permute_qubits(state: StateVector, order: Sequence[int]) -> StateVector:
    """Reorder qubits: new qubit ``k`` is old qubit ``order[k]``."""
    n = state.n_qubits
    if sorted(order) != list(range(n)):
        raise InputError(f"{list(order)} is not a permutation of range({n})")
    t = state.amps.reshape((2,) * n).transpose(order)
    return StateVector(t.reshape(-1), normalized=state.is_normalized())


def embed(state: StateVector, n_qubits: int, positions: Sequence[int]) -> StateVector:
    """Place ``state`` on qubits ``positions`` of a register whose other
    qubits are ``|0>``."""
    positions = list(positions)
    if len(positions) != state.n_qubits:
        raise InputError(f"{state.n_qubits}-qubit state needs {state.n_qubits} positions")
    others = [q for q in range(n_qubits) if q not in positions]
    if len(others) + len(positions) != n_qubits:
        raise InputError(f"positions {positions} invalid for {n_qubits} qubits")
    full = kron(state, basis_state(len(others))) if others else state
    layout = positions + others
    return permute_qubits(full, [layout.index(p) for p in range(n_qubits)])


def factor_out(state: StateVector, subset: Sequence[int], tol: float = SCHMIDT_TOL) -> StateVector:
    """Pure state of ``subset`` when the state is a product across the cut.

    Qubits of the returned state follow the order given in ``subset``.
    Raises :class:`InputError` when the Schmidt rank across the cut exceeds
    one (second singular value above ``tol``).
    """
    n = state.n_qubits
    subset = list(subset)
    if len(set(subset)) != len(subset) or any(not 0 <= q < n for q in subset):
        raise InputError(f"invalid qubit subset {subset} for {n} qubits")
    if not subset:
        raise InputError("subset must be nonempty")
    rest = [q for q in range(n) if q not in subset]
    t = state.amps.reshape((2,) * n).transpose(subset + rest)
    mat = t.reshape(1 << len(subset), 1 << len(rest))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size > 1 and s[1] > tol:
        raise InputError(
            f"state is entangled across the cut {subset} | {rest} "
            f"(second Schmidt coefficient {s[1]:.3g})"
        )
    vec = u[:, 0]
    # fix the global phase so the largest amplitude is real and positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    return StateVector(vec / np.linalg.norm(vec))


def to_json(state: StateVector) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }


def from_json(obj: dict) -> StateVector:
    try:
        n = int(obj["n_qubits"])
        amps = [complex(float(re), float(im)) for re, im in obj["amps"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state dump: {exc}") from exc
    if len(amps) != 1 << n:
        raise InputError(f"state dump has {len(amps)} amplitudes for {n} qubits")
    return StateVector(amps)
