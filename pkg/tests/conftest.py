import numpy as np
import pytest

from qmeasure.statevec import StateVector

# acceptance criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def projector(n_qubits: int, q: int, x: int) -> np.ndarray:
    """|x><x| on qubit q as an explicit 2**n matrix (test oracle)."""
    ket = np.zeros((2, 2))
    ket[x, x] = 1.0
    out = np.eye(1)
    for k in range(n_qubits):
        out = np.kron(out, ket if k == q else np.eye(2))
    return out


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def vec(*amps) -> StateVector:
    a = np.asarray(amps, dtype=complex)
    return StateVector(a / np.linalg.norm(a))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
