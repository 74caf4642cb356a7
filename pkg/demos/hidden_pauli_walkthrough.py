"""
Walkthrough: finding the hidden Pauli in (I + P)/2^n.

Three learners look at the same hidden state. The quantum learner measures
two copies at a time in the Bell basis and keeps the outcomes in a small
classical memory; the other two only ever touch one copy at a time.

Run with ``python3 demos/hidden_pauli_walkthrough.py``.
"""
import numpy as np

from pauli_lab.classical_ml import restricted_exhaustive_mixed, shadow_copies_to_identify
from pauli_lab.pauli_core import PauliString, bell_product_sign
from pauli_lab.quantum_ml import identify_by_bell_sampling
from pauli_lab.state_sim import PauliMixedState, StateOracle

rng = np.random.default_rng(2024)

# %% A hidden state on four qubits
n = 4
hidden = PauliMixedState(PauliString.from_index(n, int(rng.integers(1, 4**n))))
print(f"hidden Pauli: {hidden.pauli}  ({4**n - 1} candidates)")

# %% Every Bell outcome W satisfies one linear-plus-parity condition on P.
# The sign of P (x) P on the Bell vector labelled W is always +1, so each
# outcome halves the surviving candidates.
oracle = StateOracle(hidden, rng)
outcomes = [oracle.bell_pair() for _ in range(6)]
for w in outcomes:
    assert bell_product_sign(hidden.pauli, w) == 1
print("first Bell outcomes:", " ".join(str(w) for w in outcomes))

# %% Running the constraint solver to the end identifies P exactly.
oracle = StateOracle(hidden, rng)
found, rounds = identify_by_bell_sampling(oracle)
print(f"Bell sampling: {found} after {rounds} rounds = {oracle.copies} copies")

# %% Classical shadows: random Clifford snapshots, one copy each, until all
# 4^n Pauli expectations are known to within 1/2.
copies, err = shadow_copies_to_identify(hidden, rng)
print(f"classical shadows: {copies} copies, worst-case error {err:.3f}")

# %% The restricted learner may only measure candidate Paulis directly.
out = restricted_exhaustive_mixed(hidden, 0.05, rng)
print(f"restricted search: {out.copies} copies, recovered {out.recovered}")

# %% How the three costs grow with n (a handful of trials per point).
print("\n n   quantum   shadows   restricted")
for n in range(2, 7):
    q, s, r = [], [], []
    for _ in range(5):
        st = PauliMixedState(PauliString.from_index(n, int(rng.integers(1, 4**n))))
        o = StateOracle(st, rng)
        identify_by_bell_sampling(o)
        q.append(o.copies)
        s.append(shadow_copies_to_identify(st, rng)[0])
        r.append(restricted_exhaustive_mixed(st, 0.05, rng).copies)
    print(f"{n:2d} {np.mean(q):9.1f} {np.mean(s):9.1f} {np.mean(r):12.1f}")
