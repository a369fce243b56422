"""Builders for the measurement circuits studied in this package.

Every builder fixes its wire layout; it is listed in the docstring and the
tests refer to qubits by those positions.  Ancillas are expected to start
in ``|0>``; the ``*_input`` helpers build such initial states.

:data:`NAMED_CIRCUITS` maps the fixed CLI circuit names to builders.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import gates
from .circuit import BranchDistribution, Circuit, GateOp, Measure, when
from .errors import InputError
from .gates import cnot, h, toffoli, x
from .statevec import StateVector, basis_state, embed, from_amplitudes, kron


class ErrorLocation(str, Enum):
    NONE = "none"
    TOP = "top"
    MIDDLE = "middle"
    BOTTOM = "bottom"


class SpinVariant(str, Enum):
    HADAMARD_TEST = "hadamard-test"
    BELL_BASIS = "bell-basis"


class CodeVariant(str, Enum):
    MEASURED = "measured"            # classically conditioned corrections
    CONTROLLED = "controlled"        # measure, then ancilla-controlled corrections
    DEFERRED = "deferred"            # controlled corrections, measurements last
    MEASUREMENT_FREE = "free"        # no measurements at all


# -- single-qubit measurement and apparatus chains ---------------------------

def direct_measurement(n_qubits: int = 1, qubit: int = 0, label: str = "x") -> Circuit:
    return Circuit(n_qubits, (Measure(qubit, label),))


def measure_each(n_qubits: int, order: Sequence[int] | None = None) -> Circuit:
    """One 1-qubit measurement per qubit, labelled ``q0, q1, ...``."""
    order = range(n_qubits) if order is None else order
    return Circuit(n_qubits, tuple(Measure(q, f"q{q}") for q in order))


def von_neumann_circuit(u: np.ndarray) -> Circuit:
    """Measurement in the basis ``U|x>``: U-dagger, measure all, U."""
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0].bit_length() - 1
    everyone = tuple(range(n))
    return Circuit(n, (gates.custom(u.conj().T, everyone),)
                   + measure_each(n).ops + (gates.custom(u, everyone),))


def apparatus_chain(depth: int, measure: bool = True, label: str = "x") -> Circuit:
    """Qubit 0 copied down a chain of ``depth`` ancillas (qubits 1..depth)
    by cNOTs; only the last ancilla is measured."""
    if not 1 <= depth <= 10:
        raise InputError(f"depth must be between 1 and 10, got {depth}")
    ops: list = [cnot(k, k + 1) for k in range(depth)]
    if measure:
        ops.append(Measure(depth, label))
    return Circuit(depth + 1, tuple(ops))


def apparatus_mirror(depth: int) -> Circuit:
    """The unmeasured chain followed by its mirror image."""
    chain = apparatus_chain(depth, measure=False)
    return chain + reversed(chain.ops)


def chain_input(data: StateVector, depth: int) -> StateVector:
    return kron(data, basis_state(depth))


# -- state preparation -------------------------------------------------------

def shelf_initialization(n_qubits: int = 1, qubit: int = 0, label: str = "x") -> Circuit:
    """Measure ``qubit`` and flip it if the display read 1."""
    return Circuit(n_qubits, (Measure(qubit, label), when(x(qubit), **{label: 1})))


def ancilla_initialization(feed_forward: str = "classical", n_external: int = 2) -> Circuit:
    """Put the qubit in ``|0>`` via an ancilla that is measured instead.

    Layout: 0 = ancilla, 1 = the qubit, 2.. = external qubits it may be
    entangled with.  ``feed_forward="classical"`` flips the qubit when the
    ancilla reads 1; ``"quantum"`` uses a cNOT from the measured ancilla.
    """
    n = 2 + n_external
    ops: list = [cnot(1, 0), Measure(0, "x")]
    if feed_forward == "classical":
        ops.append(when(x(1), x=1))
    elif feed_forward == "quantum":
        ops.append(cnot(0, 1))
    else:
        raise InputError(f"feed_forward must be 'classical' or 'quantum', not {feed_forward!r}")
    return Circuit(n, tuple(ops))


def deferred_initialization(n_external: int = 2, reset_ancilla: bool = False) -> Circuit:
    """Both cNOTs first, ancilla measured afterwards; optionally flip the
    ancilla back to ``|0>`` on reading 1.  Layout as in
    :func:`ancilla_initialization`."""
    ops: list = [cnot(1, 0), cnot(0, 1), Measure(0, "x")]
    if reset_ancilla:
        ops.append(when(x(0), x=1))
    return Circuit(2 + n_external, tuple(ops))


def swap_initialization(n_external: int = 2) -> Circuit:
    """Two cNOTs that hand the qubit's entanglement to a fresh ancilla.

    Layout as in :func:`ancilla_initialization`.  With the ancilla in
    ``|0>`` the qubit ends in ``|0>`` and the ancilla takes over its role
    in the joint state with the external qubits.
    """
    return Circuit(2 + n_external, (cnot(1, 0), cnot(0, 1)))


def initialization_input(entangled: StateVector) -> StateVector:
    """``|0>`` ancilla in front of a (qubit, external...) state."""
    return kron(basis_state(1), entangled)


# -- degenerate observables --------------------------------------------------

def parity_measurement(restore: bool = True) -> Circuit:
    """Two-qubit parity via one ancilla.  Layout: 0, 1 = data, 2 = ancilla.

    Outcome ``p`` is 0 for the even subspace span{|00>, |11>} and 1 for the
    odd one.  The trailing cNOTs return the ancilla to ``|0>``.
    """
    ops: list = [cnot(0, 2), cnot(1, 2), Measure(2, "p")]
    if restore:
        ops += [cnot(0, 2), cnot(1, 2)]
    return Circuit(3, tuple(ops))


def parity_projectors() -> tuple[np.ndarray, np.ndarray]:
    even = np.diag([1, 0, 0, 1]).astype(np.complex128)
    return even, np.eye(4, dtype=np.complex128) - even


def parity_oracle(state: StateVector) -> BranchDistribution:
    """The abstract parity gate applied to a 2-qubit state."""
    return BranchDistribution.from_projectors(state, "p", parity_projectors())


def spin_measurement(variant: SpinVariant | str = SpinVariant.HADAMARD_TEST) -> Circuit:
    """Total-spin measurement of qubits 0, 1 with ancilla 2, reading ``s``.

    ``s = 0`` leaves the data in the singlet, ``s = 1`` in the projection
    onto the symmetric subspace.

    The Hadamard-test form prepares the ancilla in ``H|1>`` and controls a
    SWAP written as cNOT(0->1), Toffoli(2,1 -> 0), cNOT(0->1): only the middle
    gate needs the ancilla as a control because the outer two cancel when
    it does not fire.  The Bell-basis form is the same circuit after
    exchanging the ancilla control with the Toffoli target.
    """
    variant = SpinVariant(variant)
    if variant is SpinVariant.HADAMARD_TEST:
        ops = (x(2), h(2), cnot(0, 1), toffoli(2, 1, 0), cnot(0, 1), h(2), Measure(2, "s"))
    else:
        ops = (x(2), cnot(0, 1), h(0), toffoli(0, 1, 2), h(0), cnot(0, 1), Measure(2, "s"))
    return Circuit(3, ops)


def bell_front_end() -> Circuit:
    """The first two gates of the Bell-basis spin measurement."""
    return Circuit(2, (cnot(0, 1), h(0)))


def spin_projectors() -> tuple[np.ndarray, np.ndarray]:
    """``(1 - SWAP)/2`` (singlet, s=0) and ``(1 + SWAP)/2`` (triplet, s=1)."""
    one = np.eye(4, dtype=np.complex128)
    return (one - gates.SWAP_MATRIX) / 2, (one + gates.SWAP_MATRIX) / 2


def spin_oracle(state: StateVector) -> BranchDistribution:
    return BranchDistribution.from_projectors(state, "s", spin_projectors())


def singlet() -> StateVector:
    return from_amplitudes([0, 1, -1, 0])


def triplet_states() -> dict[str, StateVector]:
    return {
        "00": basis_state(2, "00"),
        "11": basis_state(2, "11"),
        "phi+": from_amplitudes([1, 0, 0, 1]),
        "phi-": from_amplitudes([1, 0, 0, -1]),
        "psi+": from_amplitudes([0, 1, 1, 0]),
    }


# -- 3-qubit bit-flip code ---------------------------------------------------

CODE_QUBITS = (0, 1, 2)
UPPER_ANCILLA = 3
LOWER_ANCILLA = 4

_ERROR_QUBIT = {ErrorLocation.TOP: 0, ErrorLocation.MIDDLE: 1, ErrorLocation.BOTTOM: 2}

SYNDROME = {
    ErrorLocation.NONE: "00",
    ErrorLocation.TOP: "10",
    ErrorLocation.BOTTOM: "01",
    ErrorLocation.MIDDLE: "11",
}


def bitflip_code(error: ErrorLocation | str = ErrorLocation.NONE,
                 variant: CodeVariant | str = CodeVariant.MEASURED) -> Circuit:
    """Encode, corrupt, diagnose and repair a 3-qubit bit-flip code.

    Layout: 0, 1, 2 = top, middle, bottom code qubits (the logical input
    starts on qubit 0); 3 = upper ancilla (parity of 0, 1, reading ``x``);
    4 = lower ancilla (parity of 1, 2, reading ``y``).  At most one X error
    is inserted between encoding and diagnosis.
    """
    error, variant = ErrorLocation(error), CodeVariant(variant)
    ops: list = [cnot(0, 1), cnot(0, 2)]
    if error is not ErrorLocation.NONE:
        ops.append(x(_ERROR_QUBIT[error]))
    ops += [cnot(0, 3), cnot(1, 3), cnot(1, 4), cnot(2, 4)]
    measure = [Measure(UPPER_ANCILLA, "x"), Measure(LOWER_ANCILLA, "y")]
    # two cNOTs plus a doubly-controlled triple NOT as three Toffolis
    controlled_fix = [cnot(3, 0), cnot(4, 2), toffoli(3, 4, 0), toffoli(3, 4, 1), toffoli(3, 4, 2)]
    if variant is CodeVariant.MEASURED:
        ops += measure
        ops += [when(x(0), x=1, y=0), when(x(1), x=1, y=1), when(x(2), x=0, y=1)]
    elif variant is CodeVariant.CONTROLLED:
        ops += measure + controlled_fix
    elif variant is CodeVariant.DEFERRED:
        ops += controlled_fix + measure
    else:
        ops += controlled_fix
    return Circuit(5, tuple(ops))


def code_state(alpha: complex, beta: complex) -> StateVector:
    """``alpha|000> + beta|111>`` on three qubits."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0], amps[7] = alpha, beta
    return StateVector(amps)


def bitflip_input(alpha: complex, beta: complex) -> StateVector:
    """Logical ``alpha|0> + beta|1>`` on qubit 0, everything else ``|0>``."""
    return embed(StateVector([alpha, beta]), 5, [0])


# -- registry used by the CLI ------------------------------------------------

NAMED_CIRCUITS: dict[str, Callable[[], Circuit]] = {
    "fig6": lambda: apparatus_chain(1),
    "fig7": lambda: apparatus_chain(2),
    "fig8": lambda: apparatus_chain(4),
    "fig9": lambda: apparatus_mirror(4),
    "fig10": shelf_initialization,
    "fig12": lambda: ancilla_initialization("classical"),
    "fig12-lower": lambda: ancilla_initialization("quantum"),
    "fig13-middle": deferred_initialization,
    "fig13": swap_initialization,
    "fig15": parity_measurement,
    "fig17": lambda: spin_measurement(SpinVariant.HADAMARD_TEST),
    "fig18": lambda: spin_measurement(SpinVariant.BELL_BASIS),
    "fig19": lambda: bitflip_code(ErrorLocation.NONE, CodeVariant.MEASURED),
    "fig20-middle": lambda: bitflip_code(ErrorLocation.NONE, CodeVariant.CONTROLLED),
    "fig20": lambda: bitflip_code(ErrorLocation.NONE, CodeVariant.DEFERRED),
    "fig21": lambda: bitflip_code(ErrorLocation.NONE, CodeVariant.MEASUREMENT_FREE),
}


def demo_circuit(name: str, error: ErrorLocation | str = ErrorLocation.NONE,
                 variant: CodeVariant | str = CodeVariant.MEASURED,
                 depth: int = 1) -> Circuit:
    """Circuits behind the CLI ``demo`` subcommand."""
    if name == "apparatus":
        return apparatus_chain(depth)
    if name == "parity":
        return parity_measurement()
    if name == "spin":
        return spin_measurement(SpinVariant.HADAMARD_TEST)
    if name == "spin-bell":
        return spin_measurement(SpinVariant.BELL_BASIS)
    if name == "bitflip":
        return bitflip_code(error, variant)
    if name == "swap-init":
        return swap_initialization()
    raise InputError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")


DEMOS = ("apparatus", "parity", "spin", "spin-bell", "bitflip", "swap-init")
