# Three-qubit bit-flip code, with and without measurement
#
# Wires 0-2 carry the code, 3 and 4 are the syndrome ancillas.  The
# measured variant reads the syndrome and flips the bad qubit; the free
# variant does the same with Toffolis and never measures.

# %%
import numpy as np

from qmeasure import figlib as F
from qmeasure.circuit import enumerate_branches
from qmeasure.statevec import factor_out, fidelity

alpha, beta = 0.6, 0.8j
start = F.bitflip_input(alpha, beta)
target = F.code_state(alpha, beta)

for error in F.ErrorLocation:
    measured = enumerate_branches(F.bitflip_code(error, "measured"), start)
    free = enumerate_branches(F.bitflip_code(error, "free"), start)
    (syn, br), = measured.items()
    ancillas = factor_out(free[""].state, [3, 4])
    print(f"{error.value:7s} syndrome {syn}  "
          f"code fidelity {fidelity(factor_out(br.state, F.CODE_QUBITS), target):.12f}  "
          f"free-variant ancillas {np.flatnonzero(np.abs(ancillas.amps) > 0.5)[0]:02b}")
