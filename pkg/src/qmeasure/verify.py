"""Named circuit equivalences, checked over a seeded suite of random inputs.

Each named pair runs :func:`compare_distributions` (or a direct state
check) on ``n_inputs`` random data states, with ancillas in ``|0>``, and
reports the worst probability deviation and fidelity seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from . import figlib as F
from .circuit import Circuit, Comparison, compare_distributions, enumerate_branches
from .errors import InputError
from .rewrite import cancel_inverse_pairs, defer_measurements, drop_terminal_measurements
from .statevec import (StateVector, basis_state, embed, factor_out, fidelity, kron,
                       permute_qubits, random_state)

DEFAULT_TOL = 1e-10
DEFAULT_INPUTS = 20
DEFAULT_SEED = 7


@dataclass
class VerifyResult:
    name: str
    tol: float
    equivalent: bool = True
    checks: int = 0
    max_prob_deviation: float = 0.0
    min_fidelity: float = 1.0
    counterexample: dict | None = None

    def add(self, cmp: Comparison, context: str) -> None:
        self.checks += 1
        self.max_prob_deviation = max(self.max_prob_deviation, cmp.max_prob_deviation)
        self.min_fidelity = min(self.min_fidelity, cmp.min_fidelity)
        if not cmp.equivalent and self.counterexample is None:
            self.equivalent = False
            self.counterexample = {"check": context, "branch": cmp.counterexample,
                                   "prob_deviation": cmp.max_prob_deviation,
                                   "fidelity": cmp.min_fidelity}

    def add_fidelity(self, fid: float, context: str) -> None:
        self.add(Comparison(fid >= 1 - self.tol, 0.0, fid, None if fid >= 1 - self.tol else "-"),
                 context)

    def as_dict(self) -> dict:
        return {
            "pair": self.name,
            "equivalent": self.equivalent,
            "tol": self.tol,
            "checks": self.checks,
            "max_prob_deviation": self.max_prob_deviation,
            "max_fidelity_deviation": 1.0 - self.min_fidelity,
            "counterexample": self.counterexample,
        }


def random_inputs(n_qubits: int, count: int, seed: int) -> Iterator[StateVector]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_state(n_qubits, rng)


def _chain_vs_direct(res: VerifyResult, n: int, seed: int) -> None:
    direct = F.direct_measurement()
    for depth in range(1, 6):
        chain = F.apparatus_chain(depth)
        for i, data in enumerate(random_inputs(1, n, seed + depth)):
            cmp = compare_distributions(enumerate_branches(chain, F.chain_input(data, depth)),
                                        enumerate_branches(direct, data),
                                        tol=res.tol, subset_a=[0], subset_b=[0])
            res.add(cmp, f"depth={depth} input={i}")


def _mirror_restores(res: VerifyResult, n: int, seed: int) -> None:
    for depth in range(1, 6):
        mirror = F.apparatus_mirror(depth)
        for i, data in enumerate(random_inputs(1, n, seed + depth)):
            start = F.chain_input(data, depth)
            final = enumerate_branches(mirror, start)[""].state
            res.add_fidelity(fidelity(final, start), f"depth={depth} input={i}")
        res.add_fidelity(1.0 if len(cancel_inverse_pairs(mirror, certify=False)) == 0 else 0.0,
                         f"depth={depth} cancel")


def _ancilla_reset(res: VerifyResult, n: int, seed: int) -> None:
    feed_forward = F.ancilla_initialization("classical")
    middle = defer_measurements(feed_forward, certify=False)
    bottom = drop_terminal_measurements(middle, certify=False)
    if middle != F.deferred_initialization() or bottom != F.swap_initialization():
        res.equivalent = False
        res.counterexample = {"check": "rewrite chain", "branch": None}
    for i, ent in enumerate(random_inputs(3, n, seed)):
        start = F.initialization_input(ent)
        a = enumerate_branches(feed_forward, start)
        res.add(compare_distributions(a, enumerate_branches(middle, start), tol=res.tol),
                f"feed-forward vs deferred input={i}")
        b = enumerate_branches(bottom, start)
        res.add(compare_distributions(a, b, match={}, tol=res.tol, subset_a=[1]),
                f"qubit state feed-forward vs cNOT pair input={i}")
        # the ancilla now carries the qubit's entanglement with the external pair
        expected = permute_qubits(kron(ent, basis_state(1)), [0, 3, 1, 2])
        res.add_fidelity(fidelity(b[""].state, expected), f"ancilla inherits input={i}")


def _parity_vs_projector(res: VerifyResult, n: int, seed: int) -> None:
    circ = F.parity_measurement()
    for i, data in enumerate(random_inputs(2, n, seed)):
        real = enumerate_branches(circ, kron(data, basis_state(1)))
        res.add(compare_distributions(F.parity_oracle(data), real, tol=res.tol,
                                      subset_a=[0, 1], subset_b=[0, 1]), f"input={i}")
        for key, br in real.items():
            res.add_fidelity(fidelity(factor_out(br.state, [2]), basis_state(1)),
                             f"ancilla |0> input={i} p={key}")


def _spin_forms(res: VerifyResult, n: int, seed: int) -> None:
    a_c = F.spin_measurement(F.SpinVariant.HADAMARD_TEST)
    b_c = F.spin_measurement(F.SpinVariant.BELL_BASIS)
    for i, data in enumerate(random_inputs(2, n, seed)):
        start = kron(data, basis_state(1))
        a, b = enumerate_branches(a_c, start), enumerate_branches(b_c, start)
        res.add(compare_distributions(a, b, tol=res.tol), f"hadamard-test vs bell-basis input={i}")
        res.add(compare_distributions(F.spin_oracle(data), a, tol=res.tol,
                                      subset_a=[0, 1], subset_b=[0, 1]),
                f"hadamard-test vs projector input={i}")


def _bitflip_variants(res: VerifyResult, n: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    for err in F.ErrorLocation:
        measured = F.bitflip_code(err, F.CodeVariant.MEASURED)
        free = F.bitflip_code(err, F.CodeVariant.MEASUREMENT_FREE)
        for i in range(n):
            ab = random_state(1, rng).amps
            start = F.bitflip_input(*ab)
            a, b = enumerate_branches(measured, start), enumerate_branches(free, start)
            res.add(compare_distributions(a, b, match={}, tol=res.tol, subset_a=list(F.CODE_QUBITS)),
                    f"error={err.value} input={i}")
            target = F.code_state(*ab)
            for key, br in a.items():
                res.add_fidelity(fidelity(factor_out(br.state, F.CODE_QUBITS), target),
                                 f"error={err.value} input={i} syndrome={key}")


PAIRS: dict[str, Callable[[VerifyResult, int, int], None]] = {
    "fig6-direct": _chain_vs_direct,
    "fig8-fig9": _mirror_restores,
    "fig12-fig13": _ancilla_reset,
    "fig14-fig15": _parity_vs_projector,
    "fig17-fig18": _spin_forms,
    "fig19-fig21": _bitflip_variants,
}


def verify_pair(name: str, tol: float = DEFAULT_TOL, n_inputs: int = DEFAULT_INPUTS,
                seed: int = DEFAULT_SEED) -> VerifyResult:
    if name not in PAIRS:
        raise InputError(f"unknown pair {name!r}; choose from {', '.join(PAIRS)}")
    res = VerifyResult(name, tol)
    PAIRS[name](res, n_inputs, seed)
    return res


def verify_circuits(a: Circuit, b: Circuit, match: Mapping[str, str] | None = None,
                    subset_a: Sequence[int] | None = None,
                    subset_b: Sequence[int] | None = None,
                    tol: float = DEFAULT_TOL, n_inputs: int = DEFAULT_INPUTS,
                    seed: int = DEFAULT_SEED, name: str = "files") -> VerifyResult:
    """Compare two arbitrary circuits on random inputs.

    With equal qubit counts and no subsets, inputs are random states over
    all qubits.  Otherwise a random state is placed on the subset qubits of
    each circuit and the remaining qubits start in ``|0>``.
    """
    res = VerifyResult(name, tol)
    if subset_a is None and subset_b is None:
        if a.n_qubits != b.n_qubits:
            raise InputError("circuits differ in size; give qubit subsets to compare")
        for i, s in enumerate(random_inputs(a.n_qubits, n_inputs, seed)):
            res.add(compare_distributions(enumerate_branches(a, s), enumerate_branches(b, s),
                                          match, tol), f"input={i}")
        return res
    subset_a = list(subset_a if subset_a is not None else subset_b)
    subset_b = list(subset_b if subset_b is not None else subset_a)
    if len(subset_a) != len(subset_b):
        raise InputError("qubit subsets must have the same size")
    for i, s in enumerate(random_inputs(len(subset_a), n_inputs, seed)):
        da = enumerate_branches(a, embed(s, a.n_qubits, subset_a))
        db = enumerate_branches(b, embed(s, b.n_qubits, subset_b))
        res.add(compare_distributions(da, db, match, tol, subset_a, subset_b), f"input={i}")
    return res

