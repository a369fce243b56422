"""The 1-qubit measurement gate and measurements composed from it.

Measuring qubit ``q`` of ``a0|0>|Phi0> + a1|1>|Phi1>`` reports ``x`` with
probability ``|a_x|**2`` and leaves ``|x>|Phi_x>``.  Everything else in this
module (joint measurement, measurement in a rotated basis, resetting a
qubit to ``|0>``) is built out of that one rule plus unitary gates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gates
from .errors import InputError, QMeasureError
from .statevec import EPS_ZERO, StateVector, _check_qubit, bits_to_index, normalize, project


class RandomSource:
    """Seeded uniform stream, owned by one execution at a time.

    Draws are buffered from a PCG64 generator; the buffered sequence is the
    same as drawing one value at a time, so equal seeds always give equal
    outcome sequences.
    """

    _BLOCK = 4096

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)):
            raise InputError(f"seed must be an integer, got {seed!r}")
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._buf: list[float] = []
        self._pos = 0
        self.draws = 0

    def uniform(self) -> float:
        """Next value, uniform in [0, 1)."""
        if self._pos == len(self._buf):
            self._buf = self._gen.random(self._BLOCK).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        self.draws += 1
        return u


@dataclass(frozen=True)
class MeasurementRecord:
    label: str
    qubit: int
    outcome: int
    probability: float

    def as_dict(self) -> dict:
        """Trace-line form: ``{"label", "qubit", "outcome", "prob"}``."""
        return {"label": self.label, "qubit": self.qubit, "outcome": self.outcome,
                "prob": self.probability}


def choose_outcome(p0: float, p1: float, rng: RandomSource) -> int:
    # impossible branches are skipped without consuming a draw
    if p0 < EPS_ZERO and p1 < EPS_ZERO:
        raise QMeasureError("both measurement branches vanish; state is not normalized")
    if p0 < EPS_ZERO:
        return 1
    if p1 < EPS_ZERO:
        return 0
    return 0 if rng.uniform() < p0 else 1


def measure_qubit(state: StateVector, q: int, rng: RandomSource,
                  label: str | None = None) -> tuple[MeasurementRecord, StateVector]:
    _check_qubit(state, q)
    branch0, p0 = project(state, q, 0)
    branch1, p1 = project(state, q, 1)
    x = choose_outcome(p0, p1, rng)
    branch, p = (branch0, p0) if x == 0 else (branch1, p1)
    record = MeasurementRecord(label if label is not None else f"q{q}", int(q), x, p)
    return record, normalize(branch)


def measure_all(state: StateVector, rng: RandomSource,
                order: Sequence[int] | None = None) -> tuple[list[MeasurementRecord], StateVector]:
    """Measure every qubit, one 1-qubit gate at a time, in ``order``
    (ascending by default).  Records come back in measuring order."""
    n = state.n_qubits
    order = list(range(n)) if order is None else [int(q) for q in order]
    if sorted(order) != list(range(n)):
        raise InputError(f"{order} is not a permutation of range({n})")
    records = []
    for q in order:
        rec, state = measure_qubit(state, q, rng)
        records.append(rec)
    return records, state


def _full_unitary(u, n_qubits: int) -> np.ndarray:
    if isinstance(u, gates.UnitaryGate):
        if sorted(u.qubits) != list(range(n_qubits)):
            raise InputError("von Neumann unitary must act on every qubit")
        return gates.gate_unitary(u, n_qubits)
    m = np.asarray(u, dtype=np.complex128)
    if m.shape != (1 << n_qubits, 1 << n_qubits):
        raise InputError(f"unitary shape {m.shape} does not match {n_qubits} qubits")
    if not gates.is_unitary(m):
        raise InputError("matrix is not unitary")
    return m


def von_neumann_measure(state: StateVector, u, rng: RandomSource) -> tuple[int, StateVector]:
    """Measure in the orthonormal basis ``U|x>``.

    Runs U-dagger, a computational-basis measurement of every qubit, then U.
    Returns the basis index ``x`` and the post-measurement state ``U|x>``.
    """
    n = state.n_qubits
    m = _full_unitary(u, n)
    targets = tuple(range(n))
    state = gates.apply(gates.custom(m.conj().T, targets), state)
    records, state = measure_all(state, rng)
    state = gates.apply(gates.custom(m, targets), state)
    x = bits_to_index([r.outcome for r in sorted(records, key=lambda r: r.qubit)])
    return x, state


def initialize_to_zero(state: StateVector, q: int, rng: RandomSource) -> StateVector:
    """Measure ``q`` and flip it back if the reading was 1."""
    rec, state = measure_qubit(state, q, rng)
    if rec.outcome == 1:
        state = gates.apply(gates.x(q), state)
    return state

