# Resetting a qubit without measuring it
#
# A qubit entangled with two others is reset to |0> by copying it onto an
# ancilla, measuring the ancilla and flipping the qubit if the reading was 1.
# Deferring the measurement and then dropping it leaves two cNOTs: the
# ancilla simply takes over the qubit's entanglement.
#
# Wires: 0 = ancilla, 1 = the qubit, 2 and 3 = its partners.

# %%
import numpy as np

from qmeasure import figlib as F
from qmeasure import formats
from qmeasure.circuit import enumerate_branches
from qmeasure.rewrite import defer_measurements, drop_terminal_measurements
from qmeasure.statevec import StateVector, fidelity, random_state

classical = F.ancilla_initialization("classical")
deferred = defer_measurements(classical)       # certified on 20 inputs
bare = drop_terminal_measurements(deferred)    # certified again

for name, c in [("feed-forward", classical), ("deferred", deferred), ("no measurement", bare)]:
    print(f"{name:15s}", formats.circuit_to_json(c)["ops"])

# %%
ent = random_state(3, np.random.default_rng(8))
start = F.initialization_input(ent)
final = enumerate_branches(bare, start)[""].state

t = final.amps.reshape(2, 2, 2, 2)
print("weight with qubit 1 in |1>:", np.linalg.norm(t[:, 1]))
print("ancilla now holds the old state:", fidelity(StateVector(t[:, 0].reshape(-1)), ent))
