"""Discrete unitary gates and their action on state vectors.

``apply`` works directly on the amplitude tensor (one axis per qubit).
``gate_unitary`` builds the full ``2**n x 2**n`` matrix by an unrelated
route (Kronecker product then axis permutation) and exists only so the two
can be checked against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InputError
from .statevec import StateVector

UNITARY_TOL = 1e-10
IDENTITY_TOL = 1e-12
MAX_MATRIX_QUBITS = 12

SQ2 = 1 / np.sqrt(2)
I2 = np.eye(2, dtype=np.complex128)
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Z_MATRIX = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) * SQ2
SWAP_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


class GateKind(str, Enum):
    X = "X"
    Z = "Z"
    H = "H"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    SWAP = "SWAP"
    CU = "CU"
    CUSTOM = "CUSTOM"


_ARITY = {
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.H: 1,
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
    GateKind.SWAP: 2,
}
_FIXED_BASE = {GateKind.X: X_MATRIX, GateKind.Z: Z_MATRIX, GateKind.H: H_MATRIX,
               GateKind.CNOT: X_MATRIX, GateKind.TOFFOLI: X_MATRIX,
               GateKind.SWAP: SWAP_MATRIX}


def _freeze_matrix(m) -> tuple[tuple[complex, ...], ...]:
    arr = np.asarray(m, dtype=np.complex128)
    return tuple(tuple(complex(v) for v in row) for row in arr)


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) < tol


@dataclass(frozen=True)
class UnitaryGate:
    """One unitary circuit element.

    Qubit roles follow the circuit file format: ``CNOT`` targets are
    ``(control, target)`` and ``TOFFOLI`` targets are
    ``(control, control, target)``.  ``CU`` keeps its control qubits in
    ``controls`` and applies ``matrix`` to ``targets`` when all controls
    are 1.  ``CUSTOM`` applies ``matrix`` to ``targets``.
    """

    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    matrix: tuple[tuple[complex, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if kind in _ARITY:
            if len(self.targets) != _ARITY[kind]:
                raise InputError(f"{kind.value} takes {_ARITY[kind]} qubits, got {self.targets}")
            if self.controls or self.matrix is not None:
                raise InputError(f"{kind.value} takes no controls or matrix")
        else:
            if self.matrix is None:
                raise InputError(f"{kind.value} requires a matrix")
            if kind is GateKind.CUSTOM and self.controls:
                raise InputError("CUSTOM takes no controls; use CU")
            if kind is GateKind.CU and not self.controls:
                raise InputError("CU requires at least one control")
            m = np.asarray(self.matrix, dtype=np.complex128)
            k = len(self.targets)
            if m.shape != (1 << k, 1 << k):
                raise InputError(f"matrix shape {m.shape} does not match {k} target qubits")
            if not is_unitary(m):
                raise InputError("gate matrix is not unitary")
            object.__setattr__(self, "matrix", _freeze_matrix(m))
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise InputError(f"gate qubits must be distinct, got {qs}")
        if any(q < 0 for q in qs):
            raise InputError(f"negative qubit index in {qs}")

    @property
    def qubits(self) -> tuple[int, ...]:
        """Every qubit the gate touches, controls first."""
        return self.controls + self.targets

    @property
    def control_qubits(self) -> tuple[int, ...]:
        if self.kind is GateKind.CNOT:
            return self.targets[:1]
        if self.kind is GateKind.TOFFOLI:
            return self.targets[:2]
        return self.controls

    @property
    def acted_qubits(self) -> tuple[int, ...]:
        """Qubits the base matrix acts on (everything except controls)."""
        if self.kind in (GateKind.CNOT, GateKind.TOFFOLI):
            return self.targets[-1:]
        return self.targets

    @property
    def base_matrix(self) -> np.ndarray:
        if self.kind in _FIXED_BASE:
            return _FIXED_BASE[self.kind]
        return np.array(self.matrix, dtype=np.complex128)

    def local_matrix(self) -> np.ndarray:
        """Matrix over ``control_qubits + acted_qubits`` in that order."""
        base = self.base_matrix
        nc = len(self.control_qubits)
        if nc == 0:
            return base.copy()
        d = base.shape[0]
        out = np.eye(d << nc, dtype=np.complex128)
        out[-d:, -d:] = base
        return out

    def is_self_inverse(self) -> bool:
        if self.kind in _FIXED_BASE:
            return True
        b = self.base_matrix
        return float(np.max(np.abs(b @ b - np.eye(b.shape[0])))) < IDENTITY_TOL

    def inverse(self) -> "UnitaryGate":
        if self.kind in _FIXED_BASE:
            return self
        return UnitaryGate(self.kind, self.targets, self.controls,
                           self.base_matrix.conj().T)

    def name(self) -> str:
        return self.kind.value


def x(q: int) -> UnitaryGate:
    return UnitaryGate(GateKind.X, (q,))


def z(q: int) -> UnitaryGate:
    return UnitaryGate(GateKind.Z, (q,))


def h(q: int) -> UnitaryGate:
    return UnitaryGate(GateKind.H, (q,))


def cnot(control: int, target: int) -> UnitaryGate:
    return UnitaryGate(GateKind.CNOT, (control, target))


def toffoli(c1: int, c2: int, target: int) -> UnitaryGate:
    return UnitaryGate(GateKind.TOFFOLI, (c1, c2, target))


def swap(a: int, b: int) -> UnitaryGate:
    return UnitaryGate(GateKind.SWAP, (a, b))


def controlled(matrix, controls: Sequence[int], targets: Sequence[int]) -> UnitaryGate:
    return UnitaryGate(GateKind.CU, tuple(targets), tuple(controls), matrix)


def custom(matrix, targets: Sequence[int]) -> UnitaryGate:
    return UnitaryGate(GateKind.CUSTOM, tuple(targets), (), matrix)


def multi_controlled(base: np.ndarray, controls: Sequence[int], target: int) -> UnitaryGate:
    """Multiply-controlled 1-qubit gate, using the named kinds where they exist."""
    base = np.asarray(base, dtype=np.complex128)
    if np.array_equal(base, X_MATRIX):
        if len(controls) == 1:
            return cnot(controls[0], target)
        if len(controls) == 2:
            return toffoli(controls[0], controls[1], target)
    return controlled(base, controls, (target,))


def _apply_matrix(t: np.ndarray, m: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    mt = m.reshape((2,) * (2 * k))
    out = np.tensordot(mt, t, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def _check_range(gate: UnitaryGate, n_qubits: int) -> None:
    if any(q >= n_qubits for q in gate.qubits):
        raise InputError(f"{gate.name()} on {gate.qubits} out of range for {n_qubits} qubits")


def apply(gate: UnitaryGate, state: StateVector) -> StateVector:
    n = state.n_qubits
    _check_range(gate, n)
    t = state.tensor()
    ctrls = gate.control_qubits
    idx: list = [slice(None)] * n
    for c in ctrls:
        idx[c] = 1
    sub = t[tuple(idx)]  # view; control axes removed
    acted = [q - sum(1 for c in ctrls if c < q) for q in gate.acted_qubits]

    kind = gate.kind
    if kind in (GateKind.X, GateKind.CNOT, GateKind.TOFFOLI):
        sub[...] = np.flip(sub, axis=acted[0]).copy()
    elif kind is GateKind.Z:
        sl: list = [slice(None)] * sub.ndim
        sl[acted[0]] = 1
        sub[tuple(sl)] *= -1
    elif kind is GateKind.SWAP:
        sub[...] = np.swapaxes(sub, acted[0], acted[1]).copy()
    else:
        sub[...] = _apply_matrix(sub, gate.base_matrix, acted)
    return StateVector(t.reshape(-1), normalized=state.is_normalized())


def gate_unitary(gate: UnitaryGate, n_qubits: int) -> np.ndarray:
    """Full matrix of ``gate`` embedded in ``n_qubits`` (verification only)."""
    if n_qubits > MAX_MATRIX_QUBITS:
        raise InputError(f"matrix form limited to {MAX_MATRIX_QUBITS} qubits")
    _check_range(gate, n_qubits)
    order = list(gate.control_qubits + gate.acted_qubits)
    order += [q for q in range(n_qubits) if q not in order]
    k = len(gate.qubits)
    full = np.kron(gate.local_matrix(), np.eye(1 << (n_qubits - k), dtype=np.complex128))
    pos = [order.index(q) for q in range(n_qubits)]
    full = full.reshape((2,) * (2 * n_qubits)).transpose(pos + [n_qubits + p for p in pos])
    return full.reshape(1 << n_qubits, 1 << n_qubits)


def sequence_unitary(gates: Sequence[UnitaryGate], n_qubits: int) -> np.ndarray:
    """Matrix of gates applied left to right (first gate acts first)."""
    u = np.eye(1 << n_qubits, dtype=np.complex128)
    for g in gates:
        u = gate_unitary(g, n_qubits) @ u
    return u


def _close(a: np.ndarray, b: np.ndarray, tol: float = IDENTITY_TOL) -> bool:
    return float(np.max(np.abs(a - b))) < tol


def verify_identity_hzh() -> bool:
    """H Z H equals X."""
    return _close(H_MATRIX @ Z_MATRIX @ H_MATRIX, X_MATRIX)


def verify_identity_swap_from_cnots() -> bool:
    """cNOT(0->1) cNOT(1->0) cNOT(0->1) equals SWAP on two qubits."""
    u = sequence_unitary([cnot(0, 1), cnot(1, 0), cnot(0, 1)], 2)
    return _close(u, gate_unitary(swap(0, 1), 2))


def verify_role_symmetry(base: np.ndarray, k: int) -> bool:
    """True iff the k-controlled ``base`` gate is unchanged by every
    reassignment of which of its k+1 qubits is the target."""
    if not 1 <= k <= 4:
        raise InputError("k must be between 1 and 4")
    n = k + 1
    ref = gate_unitary(multi_controlled(base, tuple(range(k)), k), n)
    for perm in itertools.permutations(range(n)):
        g = multi_controlled(base, perm[:k], perm[k])
        if not _close(gate_unitary(g, n), ref):
            return False
    return True


def verify_mcz_symmetry(k: int) -> bool:
    return verify_role_symmetry(Z_MATRIX, k)


def verify_control_target_exchange(k: int) -> bool:
    """H-conjugating any control of a k-controlled NOT lets it trade places
    with the target, the old target now being H-conjugated."""
    if not 1 <= k <= 4:
        raise InputError("k must be between 1 and 4")
    n = k + 1
    controls = tuple(range(k))
    target = k
    for i, c in enumerate(controls):
        lhs = sequence_unitary([h(c), multi_controlled(X_MATRIX, controls, target), h(c)], n)
        swapped = controls[:i] + (target,) + controls[i + 1:]
        rhs = sequence_unitary([h(target), multi_controlled(X_MATRIX, swapped, c), h(target)], n)
        if not _close(lhs, rhs):
            return False
    return True
