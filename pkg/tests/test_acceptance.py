"""The ten acceptance criteria, each at its stated tolerance.

Every test records a one-line verdict in ``conftest.ACCEPTANCE``; the
terminal summary prints them after the run.
"""

import itertools
import json
import subprocess
import sys

import numpy as np
import pytest

from qmeasure import figlib as F
from qmeasure import gates as G
from qmeasure.circuit import compare_distributions, enumerate_branches, sample_distribution
from qmeasure.cli import main
from qmeasure.errors import InputError
from qmeasure.measurement import RandomSource, measure_qubit, von_neumann_measure
from qmeasure.rewrite import certify, defer_measurements, drop_terminal_measurements
from qmeasure.statevec import (StateVector, basis_state, factor_out, fidelity, project,
                               random_state)

from conftest import ACCEPTANCE, projector, random_unitary


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    assert ok, f"{key}: {detail}"


def test_ac1_born_rule():
    rng = np.random.default_rng(101)
    shots = 100_000
    worst_p, worst_z = 0.0, 0.0
    for i in range(100):
        n = int(rng.integers(1, 5))
        s = random_state(n, rng)
        for q in range(n):
            for x in (0, 1):
                v = projector(n, q, x) @ s.amps
                worst_p = max(worst_p, abs(project(s, q, x)[1] - float(np.vdot(v, v).real)))
            rec, post = measure_qubit(s, q, RandomSource(10 * i + q))
            v = projector(n, q, rec.outcome) @ s.amps
            p_ref = float(np.vdot(v, v).real)
            worst_p = max(worst_p, abs(rec.probability - p_ref))
            assert fidelity(post, StateVector(v / np.sqrt(p_ref))) > 1 - 1e-10
        q = int(rng.integers(n))
        v1 = projector(n, q, 1) @ s.amps
        p1 = float(np.vdot(v1, v1).real)
        counts = sample_distribution(F.direct_measurement(n, q), s, shots, RandomSource(i))
        freq = counts.get("1", 0) / shots
        sigma = np.sqrt(p1 * (1 - p1) / shots)
        z = abs(freq - p1) / sigma if sigma > 0 else (0.0 if freq == p1 else np.inf)
        worst_z = max(worst_z, z)
    record("AC1 Born rule", worst_p < 1e-10 and worst_z <= 4,
           f"max |p - |P psi|^2| = {worst_p:.1e} (< 1e-10), max deviation {worst_z:.2f} sigma (<= 4)")


def test_ac2_order_independence():
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(50):
        s = random_state(3, rng)
        dists = [enumerate_branches(F.measure_each(3, order), s)
                 for order in itertools.permutations(range(3))]
        ref = dists[0]
        for d in dists[1:]:
            cmp = compare_distributions(ref, d)
            worst = max(worst, cmp.max_prob_deviation, 1 - cmp.min_fidelity)
            assert set(d) == set(ref)
    record("AC2 order independence", worst < 1e-10,
           f"6 orders x 50 states, max deviation {worst:.1e} (< 1e-10)")


def test_ac3_von_neumann_construction():
    rng = np.random.default_rng(303)
    worst_p, worst_f = 0.0, 0.0
    for k in range(20):
        u = random_unitary(4, rng)
        s = random_state(2, rng)
        # direct definition: outcome x w.p. |<u_x|psi>|^2, leaving u_x
        direct_p = np.abs(u.conj().T @ s.amps) ** 2
        built = enumerate_branches(F.von_neumann_circuit(u), s)
        for x in range(4):
            key = format(x, "02b")
            p = built[key].probability if key in built else 0.0
            worst_p = max(worst_p, abs(p - direct_p[x]))
            if key in built:
                worst_f = max(worst_f, 1 - fidelity(built[key].state, StateVector(u[:, x])))
        idx, post = von_neumann_measure(s, u, RandomSource(k))
        worst_f = max(worst_f, 1 - fidelity(post, StateVector(u[:, idx])))
    record("AC3 von Neumann construction", worst_p < 1e-10 and worst_f <= 1e-10,
           f"20 unitaries, max prob deviation {worst_p:.1e}, max 1-fidelity {worst_f:.1e}")


def test_ac4_apparatus_chains():
    rng = np.random.default_rng(404)
    worst, worst_mirror = 0.0, 0.0
    for depth in range(1, 6):
        chain, mirror = F.apparatus_chain(depth), F.apparatus_mirror(depth)
        direct = F.direct_measurement()
        for _ in range(20):
            data = random_state(1, rng)
            start = F.chain_input(data, depth)
            got = enumerate_branches(chain, start)
            ref = enumerate_branches(direct, data)
            for x in (0, 1):
                key = str(x)
                p_ref = abs(data.amps[x]) ** 2
                worst = max(worst, abs(got[key].probability - p_ref),
                            abs(ref[key].probability - p_ref))
                # the data qubit ends where direct measurement leaves it
                worst = max(worst, 1 - fidelity(factor_out(got[key].state, [0]), ref[key].state))
                worst = max(worst, 1 - fidelity(got[key].state,
                                                basis_state(depth + 1, key * (depth + 1))))
            final = enumerate_branches(mirror, start)[""].state
            worst_mirror = max(worst_mirror, 1 - fidelity(final, start))
    record("AC4 apparatus chains", worst < 1e-10 and worst_mirror <= 1e-12,
           f"depth 1-5, chain vs direct {worst:.1e} (< 1e-10), mirror 1-fidelity "
           f"{worst_mirror:.1e} (<= 1e-12)")


def test_ac5_deferred_initialization():
    rng = np.random.default_rng(505)
    original = F.ancilla_initialization("classical")
    bottom = drop_terminal_measurements(defer_measurements(original))
    shape_ok = bottom == F.swap_initialization()
    cert = certify(original, drop_terminal_measurements(defer_measurements(original)),
                   "defer+drop")
    worst = 0.0
    for _ in range(20):
        ent = random_state(3, rng)  # qubit 1 + two external qubits
        with pytest.raises(InputError):
            factor_out(ent, [0])  # make sure the qubit really is entangled
        final = enumerate_branches(bottom, F.initialization_input(ent))[""].state
        qubit = factor_out(final, [1])
        worst = max(worst, 1 - fidelity(qubit, basis_state(1)))
        # ancilla takes the qubit's place: final[a, q, e1, e2] = ent[a, e1, e2] iff q == 0
        expected = np.zeros((2, 2, 2, 2), dtype=complex)
        expected[:, 0] = ent.amps.reshape(2, 2, 2)
        worst = max(worst, 1 - fidelity(final, StateVector(expected.reshape(-1))))
    record("AC5 deferred measurement", shape_ok and cert.passed and worst <= 1e-10,
           f"rewrite gives the two-cNOT circuit: {shape_ok}, certificate passed: {cert.passed}, "
           f"20 entangled inputs max 1-fidelity {worst:.1e}")


def test_ac6_parity():
    rng = np.random.default_rng(606)
    even = np.diag([1, 0, 0, 1]).astype(complex)
    odd = np.eye(4) - even
    circ = F.parity_measurement()
    worst, ancilla_leak = 0.0, 0.0
    for _ in range(50):
        data = random_state(2, rng)
        dist = enumerate_branches(circ, StateVector(np.kron(data.amps, [1, 0])))
        for key, proj in (("0", even), ("1", odd)):
            v = proj @ data.amps
            p = float(np.vdot(v, v).real)
            got = dist[key].probability if key in dist else 0.0
            worst = max(worst, abs(got - p))
            if key in dist:
                t = dist[key].state.amps.reshape(4, 2)
                ancilla_leak = max(ancilla_leak, float(np.linalg.norm(t[:, 1])))
                worst = max(worst, 1 - fidelity(StateVector(t[:, 0] / np.linalg.norm(t[:, 0])),
                                                StateVector(v / np.sqrt(p))))
    record("AC6 parity", worst < 1e-10 and ancilla_leak < 1e-10,
           f"50 states, max deviation from projector {worst:.1e}, ancilla |1> weight "
           f"{ancilla_leak:.1e}")


def test_ac7_spin():
    rng = np.random.default_rng(707)
    swap = np.eye(4)[[0, 2, 1, 3]]
    p_singlet, p_triplet = (np.eye(4) - swap) / 2, (np.eye(4) + swap) / 2
    sq = 1 / np.sqrt(2)
    singlet = StateVector([0, sq, -sq, 0])
    triplets = [[1, 0, 0, 0], [0, 0, 0, 1], [sq, 0, 0, sq], [sq, 0, 0, -sq], [0, sq, sq, 0]]
    worst = 0.0
    special_ok = True
    for variant in F.SpinVariant:
        circ = F.spin_measurement(variant)

        def run(data):
            return enumerate_branches(circ, StateVector(np.kron(data.amps, [1, 0])))

        for _ in range(30):
            data = random_state(2, rng)
            dist = run(data)
            for key, proj in (("0", p_singlet), ("1", p_triplet)):
                v = proj @ data.amps
                p = float(np.vdot(v, v).real)
                got = dist[key].probability if key in dist else 0.0
                worst = max(worst, abs(got - p))
                if key in dist:
                    worst = max(worst, 1 - fidelity(factor_out(dist[key].state, [0, 1]),
                                                    StateVector(v / np.sqrt(p))))
        special_ok &= list(run(singlet)) == ["0"]
        for t in triplets:
            special_ok &= list(run(StateVector(t))) == ["1"]
        d01 = run(basis_state(2, "01"))
        special_ok &= abs(d01["0"].probability - 0.5) < 1e-10
        special_ok &= abs(d01["1"].probability - 0.5) < 1e-10
        special_ok &= fidelity(factor_out(d01["0"].state, [0, 1]), singlet) > 1 - 1e-10
        special_ok &= fidelity(factor_out(d01["1"].state, [0, 1]),
                               StateVector(triplets[4])) > 1 - 1e-10
    record("AC7 spin measurement", worst < 1e-10 and special_ok,
           f"both variants vs (1 -/+ SWAP)/2, max deviation {worst:.1e}; singlet/triplet/|01> "
           f"cases ok: {special_ok}")


def test_ac8_bitflip_code():
    rng = np.random.default_rng(808)
    table = {"none": "00", "top": "10", "bottom": "01", "middle": "11"}
    worst = 0.0
    syndromes_ok = True
    for error in F.ErrorLocation:
        for variant in (F.CodeVariant.MEASURED, F.CodeVariant.MEASUREMENT_FREE):
            circ = F.bitflip_code(error, variant)
            for _ in range(20):
                a, b = random_state(1, rng).amps
                target = np.zeros(8, dtype=complex)
                target[0], target[7] = a, b
                start = np.zeros(32, dtype=complex)
                start[0], start[16] = a, b
                dist = enumerate_branches(circ, StateVector(start))
                for key, br in dist.items():
                    worst = max(worst, 1 - fidelity(factor_out(br.state, [0, 1, 2]),
                                                    StateVector(target)))
                    anc = factor_out(br.state, [3, 4])
                    syndromes_ok &= fidelity(anc, basis_state(2, table[error.value])) > 1 - 1e-10
                if variant is F.CodeVariant.MEASURED:
                    syndromes_ok &= list(dist) == [table[error.value]]
    record("AC8 error correction", worst <= 1e-10 and syndromes_ok,
           f"4 errors x 2 variants x 20 inputs, max 1-fidelity {worst:.1e}; syndromes "
           f"match table: {syndromes_ok}")


def test_ac9_gate_identities():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    xm, zm = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    devs = [np.max(np.abs(h @ zm @ h - xm))]
    cn01 = G.gate_unitary(G.cnot(0, 1), 2)
    cn10 = G.gate_unitary(G.cnot(1, 0), 2)
    devs.append(np.max(np.abs(cn01 @ cn10 @ cn01 - np.eye(4)[[0, 2, 1, 3]])))
    for k in (1, 2, 3):
        n = k + 1
        mcz = np.diag([1.0] * ((1 << n) - 1) + [-1.0])
        for perm in itertools.permutations(range(n)):
            g = G.multi_controlled(G.Z_MATRIX, perm[:k], perm[k])
            devs.append(np.max(np.abs(G.gate_unitary(g, n) - mcz)))
        for c in range(k):
            ctrls = tuple(range(k))
            hc, ht = G.gate_unitary(G.h(c), n), G.gate_unitary(G.h(k), n)
            lhs = hc @ G.gate_unitary(G.multi_controlled(G.X_MATRIX, ctrls, k), n) @ hc
            swapped = ctrls[:c] + (k,) + ctrls[c + 1:]
            rhs = ht @ G.gate_unitary(G.multi_controlled(G.X_MATRIX, swapped, c), n) @ ht
            devs.append(np.max(np.abs(lhs - rhs)))
    flags = (G.verify_identity_hzh() and G.verify_identity_swap_from_cnots()
             and all(G.verify_mcz_symmetry(k) and G.verify_control_target_exchange(k)
                     for k in (1, 2, 3)))
    worst = float(max(devs))
    record("AC9 gate identities", worst < 1e-12 and flags,
           f"HZH, 3-cNOT SWAP, MCZ symmetry and H-exchange for k<=3: max deviation {worst:.1e}")


CLI_CASES = [
    ["run", "{fig19}", "--seed", "1"],
    ["run", "{fig17}", "--seed", "42", "--initial", "010"],
    ["dist", "{fig15}", "--initial", "100"],
    ["dist", "{fig19}", "--shots", "5000", "--seed", "9"],
    ["dist", "{fig17}", "--initial", "010", "--shots", "777", "--seed", "3"],
    ["verify", "fig17-fig18"],
    ["verify", "fig6-direct", "--inputs", "5", "--seed", "11"],
    ["verify", "--files", "{fig17}", "{fig18}"],
    ["demo", "bitflip", "--error", "middle", "--variant", "free"],
    ["demo", "spin", "--initial", "010"],
    ["rewrite", "{fig12}", "--pass", "defer", "--out", "{out}"],
    ["rewrite", "{fig9}", "--pass", "cancel", "--out", "{out}"],
]


def test_ac10_cli_determinism(tmp_path, capsys):
    files = {}
    for fig in ("fig9", "fig12", "fig15", "fig17", "fig18", "fig19"):
        files[fig] = str(tmp_path / f"{fig}.json")
        assert main(["emit", fig, "--out", files[fig]]) == 0
    files["out"] = str(tmp_path / "out.json")
    mismatches = []
    for case in CLI_CASES:
        argv = [a.format(**files) for a in case]
        outputs = []
        for _ in range(2):
            code = main(argv)
            out = capsys.readouterr().out
            extra = (tmp_path / "out.json").read_bytes() if argv[0] == "rewrite" else b""
            outputs.append((code, out.encode(), extra))
        if outputs[0] != outputs[1] or outputs[0][0] != 0:
            mismatches.append(" ".join(case))
        if argv[0] not in ("run",):
            json.loads(outputs[0][1])
    # separate processes, so no state can leak between the two runs
    for case in (CLI_CASES[0], CLI_CASES[3]):
        argv = [a.format(**files) for a in case]
        res = [subprocess.run([sys.executable, "-m", "qmeasure.cli", *argv],
                              capture_output=True, check=False).stdout for _ in range(2)]
        if res[0] != res[1] or not res[0]:
            mismatches.append("subprocess " + " ".join(case))
    record("AC10 CLI determinism", not mismatches,
           f"{len(CLI_CASES)} invocations in-process + 2 in subprocesses byte-identical"
           if not mismatches else f"differing output: {mismatches}")
