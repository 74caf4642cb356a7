"""
Product stabilizer states: how many copies does each learner need?

Each qubit is one of the six states |0>, |1>, |+>, |->, |+i>, |-i>. The
restricted learner measures one weight-one Pauli per copy, the classical
learner measures every qubit of a copy in a common basis, and the quantum
learner Bell-samples two copies at a time.

Run with ``python3 demos/product_state_costs.py``.
"""
import numpy as np

from pauli_lab.classical_ml import cml_product_strategy, restricted_product_strategy
from pauli_lab.quantum_ml import product_state_strategy
from pauli_lab.state_sim import PRODUCT_LABELS, StabilizerProductState

rng = np.random.default_rng(7)


def random_product(n):
    return StabilizerProductState(tuple(PRODUCT_LABELS[i] for i in rng.integers(0, 6, size=n)))


def expected_max_rounds(n, letters_per_qubit):
    """E[max over n qubits of 1 + Geometric(1/2) waiting times], per letter coin."""
    total, r = 1.0, 1
    while True:
        term = 1 - (1 - 2.0 ** (1 - r)) ** (n * letters_per_qubit)
        total += term
        if term < 1e-15:
            return total
        r += 1


# %% One qubit, step by step
state = StabilizerProductState(("Y-",))
out = restricted_product_strategy(state, rng)
print(f"restricted learner on |-i>: {out.copies} copies, recovered {out.recovered}")

# %% Scaling table
trials = 500
print("\n   n   restricted/n   classical rounds (exact)   quantum copies (exact)")
for n in (1, 2, 4, 8, 16, 32, 64):
    rc = np.mean([restricted_product_strategy(random_product(n), rng).copies for _ in range(trials)])
    cm = np.mean([cml_product_strategy(random_product(n), rng).copies / 3 for _ in range(trials)])
    qm = np.mean([product_state_strategy(random_product(n), rng)[1] for _ in range(trials)])
    print(f"{n:4d} {rc / n:14.2f} {cm:12.2f} ({expected_max_rounds(n, 2):5.2f}) "
          f"{qm:14.2f} ({2 * expected_max_rounds(n, 1) + 1:5.2f})")

# %% The restricted learner needs about 9.2 copies per qubit, not 6: it has
# to see both outcomes on two letters, and a fair coin needs 3 flips on
# average to show both faces. The classical and quantum costs grow like
# log n because every qubit is learned in parallel.
