"""Circuit-to-circuit passes, each checked against the branch oracle.

Four passes:

``defer``          classically conditioned gates become quantum-controlled
                   ones and every measurement moves to the end.
``drop-terminal``  delete measurements nothing depends on.
``hxch``           trade an H-sandwiched control of a controlled NOT for
                   its target.
``cancel``         remove adjacent pairs of identical self-inverse gates.

With ``certify=True`` (the default) a pass runs both circuits through
:func:`enumerate_branches` on a fixed set of random inputs and raises
:class:`CertificationError` if they disagree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gates
from .circuit import (Circuit, GateOp, Measure, circuit_unitary, compare_distributions,
                      enumerate_branches)
from .errors import CertificationError, RewriteUnsupportedError
from .gates import GateKind, UnitaryGate
from .statevec import basis_state, fidelity, normalize, project, random_state

CERT_TOL = 1e-10
CERT_STATES = 20
CERT_SEED = 20240601
MATRIX_CHECK_QUBITS = 6

PASSES = ("defer", "drop-terminal", "hxch", "cancel")


@dataclass
class Certificate:
    pass_name: str
    passed: bool
    inputs: int
    max_prob_deviation: float
    min_fidelity: float
    max_matrix_deviation: float | None = None

    def as_dict(self) -> dict:
        return {
            "pass": self.pass_name,
            "passed": self.passed,
            "inputs": self.inputs,
            "max_prob_deviation": self.max_prob_deviation,
            "min_fidelity": self.min_fidelity,
            "max_matrix_deviation": self.max_matrix_deviation,
        }


def certification_inputs(n_qubits: int, count: int = CERT_STATES, seed: int = CERT_SEED):
    rng = np.random.default_rng(seed)
    yield basis_state(n_qubits)
    for _ in range(count - 1):
        yield random_state(n_qubits, rng)


def _check_drop(original: Circuit, rewritten: Circuit, state, tol: float) -> tuple[float, float]:
    """The rewritten circuit, followed by the dropped measurements, must
    reproduce every branch of the original."""
    full = enumerate_branches(original, state)
    short = enumerate_branches(rewritten, state)
    kept = [full.labels.index(lab) for lab in short.labels]
    dropped = [(i, original.measurement(lab)[1].qubit)
               for i, lab in enumerate(full.labels) if lab not in short.labels]
    max_dev, min_fid = 0.0, 1.0
    covered = {k: 0.0 for k in short}
    for key, br in full.items():
        rkey = "".join(key[i] for i in kept)
        if rkey not in short:
            max_dev = max(max_dev, br.probability)
            continue
        vec, p_rest = short[rkey].state, short[rkey].probability
        for i, q in dropped:
            vec, _ = project(vec, q, int(key[i]))
        cond = vec.norm2()
        max_dev = max(max_dev, abs(p_rest * cond - br.probability))
        covered[rkey] += br.probability
        if cond > 0:
            min_fid = min(min_fid, fidelity(normalize(vec), br.state))
    for rkey, p in covered.items():
        max_dev = max(max_dev, abs(p - short[rkey].probability))
    return max_dev, min_fid


def certify(original: Circuit, rewritten: Circuit, pass_name: str = "rewrite",
            tol: float = CERT_TOL, inputs: int = CERT_STATES) -> Certificate:
    """Oracle comparison of two circuits over ``inputs`` initial states.

    Circuits with the same labels are compared branch by branch on full
    final states.  If the rewritten circuit lost some labels, its branches
    must refine into the original's once the dropped qubits are measured.
    """
    if original.n_qubits != rewritten.n_qubits:
        raise CertificationError("rewrite changed the qubit count")
    drop = set(rewritten.labels) < set(original.labels)
    if not drop and set(rewritten.labels) != set(original.labels):
        raise CertificationError("rewrite introduced measurement labels")
    max_dev, min_fid, count = 0.0, 1.0, 0
    for state in certification_inputs(original.n_qubits, inputs):
        if drop:
            dev, fid = _check_drop(original, rewritten, state, tol)
        else:
            cmp = compare_distributions(enumerate_branches(original, state),
                                        enumerate_branches(rewritten, state), tol=tol)
            dev, fid = cmp.max_prob_deviation, cmp.min_fidelity
        max_dev, min_fid, count = max(max_dev, dev), min(min_fid, fid), count + 1
    mat_dev = None
    if (original.is_unitary() and rewritten.is_unitary()
            and original.n_qubits <= MATRIX_CHECK_QUBITS):
        mat_dev = float(np.max(np.abs(circuit_unitary(original) - circuit_unitary(rewritten))))
    passed = max_dev <= tol and min_fid >= 1 - tol and (mat_dev is None or mat_dev <= tol)
    return Certificate(pass_name, passed, count, max_dev, min_fid, mat_dev)


def _certified(original: Circuit, rewritten: Circuit, name: str, certify_: bool) -> Circuit:
    if certify_:
        cert = certify(original, rewritten, name)
        if not cert.passed:
            raise CertificationError(f"{name} rewrite failed certification: {cert}")
    return rewritten


def _is_x_type(gate: UnitaryGate) -> bool:
    return np.array_equal(gate.base_matrix, gates.X_MATRIX) and len(gate.acted_qubits) == 1


def _anf_terms(cond_qubits: Sequence[tuple[int, int]]) -> Counter:
    """Algebraic normal form of a conjunction of qubit literals: the set of
    monomials (frozensets of qubits) whose XOR equals the conjunction."""
    terms: Counter = Counter({frozenset(): 1})
    for q, bit in cond_qubits:
        nxt: Counter = Counter()
        for mono, c in terms.items():
            nxt[mono | {q}] += c
            if bit == 0:
                nxt[mono] += c
        terms = nxt
    return Counter({m: 1 for m, c in terms.items() if c % 2})


def _emit_parities(parity: Counter) -> list[GateOp]:
    out = []
    for (ctrls, target), c in sorted(
            parity.items(), key=lambda kv: (len(kv[0][0]), kv[0][1], sorted(kv[0][0]))):
        if c % 2 == 0:
            continue
        ctrls = sorted(ctrls)
        g = gates.x(target) if not ctrls else gates.multi_controlled(gates.X_MATRIX, ctrls, target)
        out.append(GateOp(g))
    return out


def defer_measurements(circuit: Circuit, certify: bool = True) -> Circuit:
    """Replace feed-forward by controlled gates and move measurements last.

    A conditioned NOT-type gate is expanded into XOR-monomials of its
    condition, so ``x=1 and y=0`` becomes a cNOT from ``x`` plus a Toffoli
    from ``x, y``; consecutive conditioned NOTs share one parity table so
    duplicate monomials cancel.  Other gates become ``CU`` gates, with
    X-conjugation for conditions that require 0.
    """
    ops = circuit.ops
    label_qubit: dict[str, int] = {}
    for i, op in enumerate(ops):
        if isinstance(op, Measure):
            label_qubit[op.label] = op.qubit
            for j in range(i + 1, len(ops)):
                later = ops[j]
                if isinstance(later, Measure) or op.qubit not in later.qubits:
                    continue
                g = later.gate
                if op.qubit in g.control_qubits:
                    continue
                if g.kind is GateKind.Z:
                    continue
                raise RewriteUnsupportedError(
                    f"qubit {op.qubit} measured as {op.label!r} is modified by op {j}")
        elif op.cond:
            if len(op.cond) > 2:
                raise RewriteUnsupportedError(
                    f"op {i}: conditions on more than two labels are not supported")
            cq = [label_qubit[lab] for lab, _ in op.cond]
            if set(cq) & set(op.qubits):
                raise RewriteUnsupportedError(
                    f"op {i} acts on a qubit its own condition was measured on")

    body: list[GateOp] = []
    tail: list[Measure] = []
    parity: Counter = Counter()
    run_controls: set[int] = set()
    run_targets: set[int] = set()

    def flush():
        body.extend(_emit_parities(parity))
        parity.clear()
        run_controls.clear()
        run_targets.clear()

    for op in ops:
        if isinstance(op, Measure):
            tail.append(op)
            continue
        if not op.cond:
            flush()
            body.append(op)
            continue
        lits = [(label_qubit[lab], bit) for lab, bit in op.cond]
        g = op.gate
        if _is_x_type(g):
            target = g.acted_qubits[0]
            ctrls = set(q for q, _ in lits) | set(g.control_qubits)
            if target in run_controls or ctrls & run_targets:
                flush()
            for mono in _anf_terms(lits):
                parity[(frozenset(mono | set(g.control_qubits)), target)] += 1
            run_controls.update(ctrls)
            run_targets.add(target)
            continue
        flush()
        flips = [GateOp(gates.x(q)) for q, bit in lits if bit == 0]
        ctrls = tuple(q for q, _ in lits) + g.control_qubits
        body.extend(flips)
        body.append(GateOp(gates.controlled(g.base_matrix, ctrls, g.acted_qubits)))
        body.extend(flips)
    flush()
    return _certified(circuit, Circuit(circuit.n_qubits, tuple(body) + tuple(tail)),
                      "defer", certify)


def _is_terminal(circuit: Circuit, label: str) -> bool:
    i, m = circuit.measurement(label)
    for op in circuit.ops[i + 1:]:
        if m.qubit in op.qubits:
            return False
        if isinstance(op, GateOp) and any(lab == label for lab, _ in op.cond):
            return False
    return True


def drop_terminal_measurements(circuit: Circuit, labels: Sequence[str] | None = None,
                               certify: bool = True) -> Circuit:
    """Remove the named measurements (default: every terminal one).

    Refuses with :class:`RewriteUnsupportedError` if a named measurement is
    followed by an op on its qubit or an op conditioned on its outcome.
    """
    if labels is None:
        labels = [lab for lab in circuit.labels if _is_terminal(circuit, lab)]
    labels = list(labels)
    for lab in labels:
        if lab not in circuit.labels:
            raise RewriteUnsupportedError(f"no measurement labelled {lab!r}")
        if not _is_terminal(circuit, lab):
            raise RewriteUnsupportedError(f"measurement {lab!r} is not terminal")
    ops = tuple(op for op in circuit.ops
                if not (isinstance(op, Measure) and op.label in labels))
    return _certified(circuit, Circuit(circuit.n_qubits, ops), "drop-terminal", certify)


def _neighbour(ops, site: int, qubit: int, step: int) -> int | None:
    j = site + step
    while 0 <= j < len(ops):
        if qubit in ops[j].qubits:
            return j
        j += step
    return None


def _is_bare_h(op, qubit: int) -> bool:
    return (isinstance(op, GateOp) and not op.cond and op.gate.kind is GateKind.H
            and op.gate.targets == (qubit,))


def exchange_control_target(circuit: Circuit, site: int, control: int | None = None,
                            certify: bool = True) -> Circuit:
    """Swap roles of an H-sandwiched control and the target of a
    (multiply-)controlled NOT at ``site``.

    The sandwiching Hadamards are the nearest ops on the control's wire
    before and after ``site``.  They are removed, the control becomes the
    target, and the old target becomes a control with Hadamards placed
    directly around the gate.
    """
    ops = circuit.ops
    if not 0 <= site < len(ops):
        raise RewriteUnsupportedError(f"site {site} out of range")
    op = ops[site]
    if not isinstance(op, GateOp) or op.cond or not _is_x_type(op.gate) \
            or not op.gate.control_qubits:
        raise RewriteUnsupportedError(f"op {site} is not an unconditioned controlled NOT")
    g = op.gate
    ctrls = list(g.control_qubits)
    candidates = ctrls if control is None else [control]
    if control is not None and control not in ctrls:
        raise RewriteUnsupportedError(f"qubit {control} is not a control of op {site}")
    for c in candidates:
        before = _neighbour(ops, site, c, -1)
        after = _neighbour(ops, site, c, +1)
        if before is None or after is None:
            continue
        if not (_is_bare_h(ops[before], c) and _is_bare_h(ops[after], c)):
            continue
        target = g.acted_qubits[0]
        new_ctrls = [target if q == c else q for q in ctrls]
        new_gate = gates.multi_controlled(gates.X_MATRIX, new_ctrls, c)
        out = []
        for j, o in enumerate(ops):
            if j in (before, after):
                continue
            if j == site:
                out += [GateOp(gates.h(target)), GateOp(new_gate), GateOp(gates.h(target))]
            else:
                out.append(o)
        return _certified(circuit, Circuit(circuit.n_qubits, tuple(out)), "hxch", certify)
    raise RewriteUnsupportedError(f"no H-sandwiched control at op {site}")


def cancel_inverse_pairs(circuit: Circuit, certify: bool = True) -> Circuit:
    """Delete pairs of identical self-inverse gates that meet on their wires
    (no op touching any of their qubits in between), until none remain."""
    ops = list(circuit.ops)
    changed = True
    while changed:
        changed = False
        for i, op in enumerate(ops):
            if not isinstance(op, GateOp) or not op.gate.is_self_inverse():
                continue
            qs = set(op.qubits)
            j = next((k for k in range(i + 1, len(ops)) if qs & set(ops[k].qubits)), None)
            if j is not None and ops[j] == op:
                del ops[j]
                del ops[i]
                changed = True
                break
    return _certified(circuit, Circuit(circuit.n_qubits, tuple(ops)), "cancel", certify)


def apply_pass(circuit: Circuit, name: str, certify: bool = True, **kwargs) -> Circuit:
    """Dispatch by CLI pass name."""
    if name == "defer":
        return defer_measurements(circuit, certify=certify)
    if name == "drop-terminal":
        return drop_terminal_measurements(circuit, kwargs.get("labels"), certify=certify)
    if name == "hxch":
        if kwargs.get("site") is None:
            raise RewriteUnsupportedError("hxch needs a site")
        return exchange_control_target(circuit, kwargs["site"], kwargs.get("control"),
                                       certify=certify)
    if name == "cancel":
        return cancel_inverse_pairs(circuit, certify=certify)
    raise RewriteUnsupportedError(f"unknown pass {name!r}; choose from {', '.join(PASSES)}")
