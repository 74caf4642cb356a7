"""
A tour of the exact lower-bound checks.

Everything here is computed from dense matrices or closed forms at small
sizes: Holevo information of the Pauli codebook, total variation between
the two hypotheses seen by an adaptive single-copy learner, the
point-function query game, and the noisy-parity class where one quantum
query beats many classical ones.

Run with ``python3 demos/information_bounds_tour.py``.
"""
import math

import numpy as np

from pauli_lab import bounds_lab as bl

rng = np.random.default_rng(11)

# %% Holevo information of ((I + s P)/2^n)^{(x) N}: never more than N ln 2
for n, copies in [(1, 1), (1, 3), (2, 2), (2, 4)]:
    chi = bl.holevo_chi(bl.pauli_codebook_ensemble(n, copies))
    print(f"n={n} N={copies}: chi = {chi:.4f} nats, N ln 2 = {copies * math.log(2):.4f}")

# %% Total variation for adaptive single-copy strategies at n = 2
tv = bl.tv_distance_adaptive(bl.computational_basis_strategy(2, 1), 2, 1)
print(f"\ncomputational basis, one copy: TV = {tv:.4f} (bound {bl.tv_bound(2, 1):.4f})")
for copies in (1, 2, 3):
    tvs = [bl.tv_distance_adaptive(bl.random_adaptive_strategy(2, copies, rng), 2, copies)
           for _ in range(10)]
    print(f"random adaptive, N={copies}: max TV {max(tvs):.4f} (bound {bl.tv_bound(2, copies):.4f})")

# %% Point functions: k zero answers leave 2^m - k candidates
m = 8
for k in (0, 64, 128, 255):
    rate = bl.point_function_experiment(m, k, 2000, rng)
    print(f"m={m} k={k:3d}: success {rate:.3f} (exact {bl.point_function_success(m, k):.3f})")

# %% Noisy parities: a single quantum query on |0...0> reads the label
cls = bl.AppendixDClass(16, 0.03, a=int(rng.integers(0, 1 << 16)))
label, queries = bl.appendix_d_quantum_trial(cls, rng)
print(f"\nquantum: recovered a={label:#06x} (truth {cls.a:#06x}) with {queries} query")
for n in (4, 8, 12):
    budget = bl.appendix_d_classical_budget(n, 0.03, rng, trials=200)
    print(f"classical ML decoder, n={n:2d}: about {budget} queries for 2/3 success")
print(f"mutual information per classical query at eps=0.03: {bl.per_query_mutual_info(0.03):.4f} bits")
