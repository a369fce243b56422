# Measuring one qubit of a larger state
#
# Run with:  python3 demos/born_rule.py

# %%
import numpy as np

from qmeasure import RandomSource, measure_qubit, random_state
from qmeasure.circuit import compare_distributions, enumerate_branches, sample_distribution
from qmeasure.figlib import apparatus_chain, chain_input, direct_measurement, measure_each
from qmeasure.statevec import project

rng = np.random.default_rng(3)
psi = random_state(3, rng)
print(psi)

# %% [markdown]
# Measuring qubit 1 gives 0 or 1 with probability equal to the squared norm
# of the state projected onto that value.  The post-measurement state is
# that projection, renormalized.

# %%
for x in (0, 1):
    _, p = project(psi, 1, x)
    print(f"P(q1 = {x}) = {p:.6f}")

record, post = measure_qubit(psi, 1, RandomSource(0))
print(record)
print(post)

# %% [markdown]
# Sampling many shots should land within a few standard deviations.

# %%
shots = 100_000
counts = sample_distribution(direct_measurement(3, 1), psi, shots, RandomSource(1))
p1 = project(psi, 1, 1)[1]
sigma = np.sqrt(p1 * (1 - p1) / shots)
print(counts, f"deviation = {(counts['1'] / shots - p1) / sigma:+.2f} sigma")

# %% [markdown]
# Order does not matter: measuring all three qubits in any order gives the
# same joint distribution.

# %%
# outcome strings follow measuring order, so compare label by label
ref = enumerate_branches(measure_each(3), psi)
for order in [(2, 1, 0), (1, 0, 2)]:
    other = enumerate_branches(measure_each(3, order), psi)
    print(order, compare_distributions(ref, other).max_prob_deviation)

# %% [markdown]
# Copying the qubit down a chain of ancillas and reading only the last one
# gives exactly the statistics of reading the qubit itself.

# %%
data = random_state(1, rng)
for depth in (1, 3, 5):
    dist = enumerate_branches(apparatus_chain(depth), chain_input(data, depth))
    print(depth, dist.probabilities(), np.abs(data.amps) ** 2)
