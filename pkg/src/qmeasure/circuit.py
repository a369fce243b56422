"""Circuit IR with classical feed-forward, plus three ways to execute it.

* :func:`run` samples one path with a :class:`RandomSource`.
* :func:`enumerate_branches` forks at every measurement and returns the
  exact outcome distribution together with each branch's final state.
* :func:`sample_distribution` repeats :func:`run` many times; it memoizes
  the state reached after each outcome prefix, so a shot only pays for its
  random draws.

Outcome keys are bit strings over the circuit's measurement labels, in the
order the labels first appear.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

import numpy as np

from . import gates
from .errors import CircuitError, ComparisonError, InputError, ResourceLimitError
from .gates import UnitaryGate
from .measurement import MeasurementRecord, RandomSource, choose_outcome
from .statevec import (EPS_ZERO, MAX_QUBITS, StateVector, basis_state, factor_out,
                       fidelity, normalize, project)

MAX_MEASUREMENTS = 24
EPS_PROB = 1e-9

Condition = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class GateOp:
    """A unitary gate, applied only if every ``(label, bit)`` in ``cond``
    matches the recorded outcome.  An empty condition always fires."""

    gate: UnitaryGate
    cond: Condition = ()

    def __post_init__(self):
        cond = tuple((str(lab), int(bit)) for lab, bit in self.cond)
        if any(bit not in (0, 1) for _, bit in cond):
            raise CircuitError(f"condition bits must be 0 or 1: {cond}")
        if len({lab for lab, _ in cond}) != len(cond):
            raise CircuitError(f"condition repeats a label: {cond}")
        object.__setattr__(self, "cond", cond)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.gate.qubits

    def fires(self, outcomes: Mapping[str, int]) -> bool:
        return all(outcomes[lab] == bit for lab, bit in self.cond)


@dataclass(frozen=True)
class Measure:
    qubit: int
    label: str

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


Op = Union[GateOp, Measure]


def when(gate: UnitaryGate, **bits: int) -> GateOp:
    """Shorthand: ``when(x(0), x=1, y=0)``."""
    return GateOp(gate, tuple(bits.items()))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[Op, ...] = field(default=())

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CircuitError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        ops = tuple(GateOp(op) if isinstance(op, UnitaryGate) else op for op in self.ops)
        seen: set[str] = set()
        for i, op in enumerate(ops):
            if not isinstance(op, (GateOp, Measure)):
                raise CircuitError(f"op {i} has unsupported type {type(op).__name__}")
            if any(not 0 <= q < self.n_qubits for q in op.qubits):
                raise CircuitError(f"op {i} addresses {op.qubits}, outside {self.n_qubits} qubits")
            if isinstance(op, Measure):
                if op.label in seen:
                    raise CircuitError(f"measurement label {op.label!r} used twice")
                seen.add(op.label)
            else:
                missing = [lab for lab, _ in op.cond if lab not in seen]
                if missing:
                    raise CircuitError(f"op {i} conditions on undefined label(s) {missing}")
        object.__setattr__(self, "ops", ops)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(op.label for op in self.ops if isinstance(op, Measure))

    def measurement(self, label: str) -> tuple[int, Measure]:
        for i, op in enumerate(self.ops):
            if isinstance(op, Measure) and op.label == label:
                return i, op
        raise KeyError(label)

    def is_unitary(self) -> bool:
        return all(isinstance(op, GateOp) and not op.cond for op in self.ops)

    def __add__(self, other: "Circuit | Iterable[Op]") -> "Circuit":
        extra = other.ops if isinstance(other, Circuit) else tuple(other)
        return Circuit(self.n_qubits, self.ops + extra)

    def __len__(self) -> int:
        return len(self.ops)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full matrix of a measurement-free, unconditioned circuit."""
    if not circuit.is_unitary():
        raise CircuitError("circuit contains measurements or classical conditions")
    return gates.sequence_unitary([op.gate for op in circuit.ops], circuit.n_qubits)


def _initial(circuit: Circuit, initial: StateVector | None) -> StateVector:
    if initial is None:
        return basis_state(circuit.n_qubits)
    if initial.n_qubits != circuit.n_qubits:
        raise InputError(
            f"initial state has {initial.n_qubits} qubits, circuit has {circuit.n_qubits}")
    return initial


def run(circuit: Circuit, initial: StateVector | None,
        rng: RandomSource) -> tuple[list[MeasurementRecord], StateVector]:
    state = _initial(circuit, initial)
    outcomes: dict[str, int] = {}
    records: list[MeasurementRecord] = []
    for op in circuit.ops:
        if isinstance(op, Measure):
            b0, p0 = project(state, op.qubit, 0)
            b1, p1 = project(state, op.qubit, 1)
            x = choose_outcome(p0, p1, rng)
            state = normalize(b0 if x == 0 else b1)
            outcomes[op.label] = x
            records.append(MeasurementRecord(op.label, op.qubit, x, p0 if x == 0 else p1))
        elif op.fires(outcomes):
            state = gates.apply(op.gate, state)
    return records, state


class Branch(NamedTuple):
    probability: float
    state: StateVector


@dataclass
class BranchDistribution:
    """Exact map from outcome strings to ``Branch(probability, state)``."""

    labels: tuple[str, ...]
    branches: dict[str, Branch]

    def __getitem__(self, key: str) -> Branch:
        return self.branches[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def __contains__(self, key: object) -> bool:
        return key in self.branches

    def items(self):
        return self.branches.items()

    def probabilities(self) -> dict[str, float]:
        return {k: b.probability for k, b in self.branches.items()}

    def total(self) -> float:
        return float(sum(b.probability for b in self.branches.values()))

    def assignment(self, key: str) -> dict[str, int]:
        return {lab: int(c) for lab, c in zip(self.labels, key)}

    def marginal(self, labels: Sequence[str]) -> dict[str, float]:
        idx = [self.labels.index(lab) for lab in labels]
        out: dict[str, float] = {}
        for key, b in self.branches.items():
            sub = "".join(key[i] for i in idx)
            out[sub] = out.get(sub, 0.0) + b.probability
        return dict(sorted(out.items()))

    @classmethod
    def from_projectors(cls, state: StateVector, label: str,
                        projectors: Sequence[np.ndarray]) -> "BranchDistribution":
        """Outcome ``x`` of a degenerate measurement whose ``x``-th
        projector is ``projectors[x]`` (a 0/1 labelled observable)."""
        if len(projectors) != 2:
            raise InputError("expected two projectors (outcomes 0 and 1)")
        branches = {}
        for x, p in enumerate(projectors):
            v = np.asarray(p, dtype=np.complex128) @ state.amps
            prob = float(np.vdot(v, v).real)
            if prob >= EPS_ZERO:
                branches[str(x)] = Branch(prob, normalize(StateVector.unnormalized(v)))
        return cls((label,), branches)


def enumerate_branches(circuit: Circuit, initial: StateVector | None = None) -> BranchDistribution:
    labels = circuit.labels
    if len(labels) > MAX_MEASUREMENTS:
        raise ResourceLimitError(
            f"{len(labels)} measurements exceeds the enumeration limit of {MAX_MEASUREMENTS}")
    state0 = _initial(circuit, initial)
    results: dict[str, Branch] = {}
    # depth-first: (next op index, state, path probability, outcomes so far)
    stack: list[tuple[int, StateVector, float, dict[str, int]]] = [(0, state0, 1.0, {})]
    while stack:
        pos, state, prob, outcomes = stack.pop()
        ops = circuit.ops
        while pos < len(ops) and not isinstance(ops[pos], Measure):
            op = ops[pos]
            if op.fires(outcomes):
                state = gates.apply(op.gate, state)
            pos += 1
        if pos == len(ops):
            key = "".join(str(outcomes[lab]) for lab in labels)
            results[key] = Branch(prob, state)
            continue
        m = ops[pos]
        for x in (1, 0):
            branch, p = project(state, m.qubit, x)
            if p * prob < EPS_ZERO or p < EPS_ZERO:
                continue
            stack.append((pos + 1, normalize(branch), prob * p, {**outcomes, m.label: x}))
    return BranchDistribution(labels, dict(sorted(results.items())))


class _Node:
    """State reached after a fixed outcome prefix, up to the next measurement."""

    __slots__ = ("circuit", "pos", "state", "outcomes", "measure", "p", "branches", "children")

    def __init__(self, circuit: Circuit, pos: int, state: StateVector, outcomes: dict[str, int]):
        ops = circuit.ops
        while pos < len(ops) and not isinstance(ops[pos], Measure):
            if ops[pos].fires(outcomes):
                state = gates.apply(ops[pos].gate, state)
            pos += 1
        self.circuit, self.pos, self.state, self.outcomes = circuit, pos, state, outcomes
        self.children: dict[int, _Node] = {}
        self.measure = ops[pos] if pos < len(ops) else None
        if self.measure is not None:
            b0, p0 = project(state, self.measure.qubit, 0)
            b1, p1 = project(state, self.measure.qubit, 1)
            self.p = (p0, p1)
            self.branches = (b0, b1)

    def child(self, x: int) -> "_Node":
        node = self.children.get(x)
        if node is None:
            node = _Node(self.circuit, self.pos + 1, normalize(self.branches[x]),
                         {**self.outcomes, self.measure.label: x})
            self.children[x] = node
        return node


def sample_distribution(circuit: Circuit, initial: StateVector | None, shots: int,
                        rng: RandomSource) -> dict[str, int]:
    """Outcome-string counts over ``shots`` runs.

    Consumes the random stream exactly as ``shots`` consecutive calls to
    :func:`run` would, and so returns the same counts.
    """
    if shots < 1:
        raise InputError("shots must be >= 1")
    labels = circuit.labels
    root = _Node(circuit, 0, _initial(circuit, initial), {})
    leaves: Counter[_Node] = Counter()
    for _ in range(shots):
        node = root
        while node.measure is not None:
            x = choose_outcome(node.p[0], node.p[1], rng)
            node = node.children.get(x) or node.child(x)
        leaves[node] += 1
    counts = {"".join(str(leaf.outcomes[lab]) for lab in labels): c for leaf, c in leaves.items()}
    return dict(sorted(counts.items()))


@dataclass
class Comparison:
    equivalent: bool
    max_prob_deviation: float
    min_fidelity: float
    counterexample: str | None = None


def _group(dist: BranchDistribution, labels: Sequence[str]) -> dict[str, list[Branch]]:
    idx = [dist.labels.index(lab) for lab in labels]
    groups: dict[str, list[Branch]] = {}
    for key, b in dist.items():
        groups.setdefault("".join(key[i] for i in idx), []).append(b)
    return groups


def _group_state(branches: list[Branch], subset: Sequence[int] | None,
                 tol: float) -> StateVector:
    if subset is None:
        if len(branches) > 1:
            raise ComparisonError(
                "labels were marginalized; pass a qubit subset to compare states")
        return branches[0].state
    try:
        states = [factor_out(b.state, subset) for b in branches]
    except InputError as exc:
        raise ComparisonError(str(exc)) from exc
    for s in states[1:]:
        if fidelity(s, states[0]) < 1 - tol:
            raise ComparisonError(
                "marginalized branches leave the qubit subset in different states")
    return states[0]


def compare_distributions(a: BranchDistribution, b: BranchDistribution,
                          match: Mapping[str, str] | None = None, tol: float = 1e-10,
                          subset_a: Sequence[int] | None = None,
                          subset_b: Sequence[int] | None = None) -> Comparison:
    """Compare two branch distributions outcome by outcome.

    ``match`` maps labels of ``a`` to labels of ``b`` (default: the labels
    they share); all other labels are marginalized.  Probabilities of
    matched outcomes must agree within ``tol``.  Final states are compared
    by fidelity, on the given qubit subsets when supplied, which requires
    every branch to be a product across the subset boundary.
    """
    if match is None:
        match = {lab: lab for lab in a.labels if lab in b.labels}
    la = list(match)
    lb = [match[lab] for lab in la]
    for lab in la:
        if lab not in a.labels:
            raise ComparisonError(f"label {lab!r} not in first distribution")
    for lab in lb:
        if lab not in b.labels:
            raise ComparisonError(f"label {lab!r} not in second distribution")
    if subset_b is None:
        subset_b = subset_a
    if subset_a is None:
        subset_a = subset_b
    ga, gb = _group(a, la), _group(b, lb)

    max_dev, min_fid, bad = 0.0, 1.0, None
    for key in sorted(set(ga) | set(gb)):
        pa = sum(br.probability for br in ga.get(key, []))
        pb = sum(br.probability for br in gb.get(key, []))
        dev = abs(pa - pb)
        max_dev = max(max_dev, dev)
        fid = 1.0
        if key in ga and key in gb:
            sa = _group_state(ga[key], subset_a, tol)
            sb = _group_state(gb[key], subset_b, tol)
            if sa.n_qubits != sb.n_qubits:
                raise ComparisonError(
                    f"compared states differ in size ({sa.n_qubits} vs {sb.n_qubits} qubits)")
            fid = fidelity(sa, sb)
            min_fid = min(min_fid, fid)
        if bad is None and (dev > tol or fid < 1 - tol):
            bad = key
    return Comparison(bad is None, max_dev, min_fid, bad)


def distributions_equivalent(a: BranchDistribution, b: BranchDistribution,
                             match: Mapping[str, str] | None = None, tol: float = 1e-10,
                             subset_a: Sequence[int] | None = None,
                             subset_b: Sequence[int] | None = None) -> bool:
    return compare_distributions(a, b, match, tol, subset_a, subset_b).equivalent
