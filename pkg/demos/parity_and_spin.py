# Degenerate measurements: parity and total spin
#
# Both circuits use one ancilla (wire 2) and read a single bit that says
# which subspace the two data qubits are in, without collapsing them
# further.

# %%
import numpy as np

from qmeasure import figlib as F
from qmeasure.circuit import compare_distributions, enumerate_branches
from qmeasure.statevec import StateVector, factor_out, kron, basis_state

data = StateVector(np.array([1, 1, 0, 0]) / np.sqrt(2))   # (|00> + |01>)/sqrt2
dist = enumerate_branches(F.parity_measurement(), kron(data, basis_state(1)))
for key, br in dist.items():
    print("parity", key, round(br.probability, 12), factor_out(br.state, [0, 1]))

# %% [markdown]
# The circuit agrees with the abstract parity projection.

# %%
print(compare_distributions(F.parity_oracle(data), dist, subset_a=[0, 1], subset_b=[0, 1]))

# %% [markdown]
# Spin: s = 0 projects onto the singlet, s = 1 onto the triplet.  |01> is
# half of each.

# %%
for variant in F.SpinVariant:
    d = enumerate_branches(F.spin_measurement(variant), basis_state(3, "010"))
    print(variant.value, {k: round(b.probability, 12) for k, b in d.items()})
    print("   s=0 leaves", factor_out(d["0"].state, [0, 1]))

d = enumerate_branches(F.spin_measurement(), kron(F.singlet(), basis_state(1)))
print("singlet ->", d.probabilities())
