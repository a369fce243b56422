"""Measurement-centric state-vector simulator with an exact branch oracle.

Unitary gates and the 1-qubit measurement gate act on dense state vectors;
circuits with classical feed-forward can be sampled or enumerated exactly,
and rewrite passes (deferred measurement, dropping terminal measurements,
control/target exchange, inverse-pair cancellation) are certified against
the exact oracle.
"""

from .circuit import (Branch, BranchDistribution, Circuit, GateOp, Measure, compare_distributions,
                      distributions_equivalent, enumerate_branches, run, sample_distribution,
                      when)
from .errors import (CertificationError, CircuitError, CircuitFormatError, ComparisonError,
                     DegenerateBranchError, InputError, QMeasureError, ResourceLimitError,
                     RewriteUnsupportedError)
from .gates import GateKind, UnitaryGate, apply, gate_unitary
from .measurement import (MeasurementRecord, RandomSource, initialize_to_zero, measure_all,
                          measure_qubit, von_neumann_measure)
from .rewrite import (cancel_inverse_pairs, certify, defer_measurements,
                      drop_terminal_measurements, exchange_control_target)
from .statevec import (StateVector, basis_state, fidelity, from_amplitudes, kron, normalize,
                       project, random_state)

__version__ = "0.1.0"
