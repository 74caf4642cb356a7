"""
Small exact checks of the information-theoretic side of the separation.

Contents:

* packing nets and empirical-risk minimisation over them,
* a noisy-parity channel family where one quantum query reveals the label
  while classical queries leak at most 3 eps bits each,
* moments of ``<psi|rho|psi>`` over the ``(I ± P)/2**n`` codebook, exact
  total-variation distances for adaptive single-copy strategies, and the
  Holevo quantity of the codebook,
* the point-function guessing game and the quantum union bound.

Entropies are in nats unless a function says otherwise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.stats import entropy, unitary_group

from .pauli_core import PauliString, enumerate_paulis
from .state_sim import DENSE_MAX_DIM, pauli_matrix

__all__ = [
    "PackingNet",
    "AppendixDClass",
    "DiscreteEnsemble",
    "greedy_packing_net",
    "erm_learner",
    "erm_trial",
    "appendix_d_outcomes",
    "appendix_d_ml_decode",
    "appendix_d_classical_trial",
    "appendix_d_classical_budget",
    "appendix_d_quantum_trial",
    "appendix_d_kraus",
    "per_query_mutual_info",
    "von_neumann_entropy",
    "holevo_chi",
    "pauli_codebook_ensemble",
    "tv_distance_adaptive",
    "tv_bound",
    "random_adaptive_strategy",
    "computational_basis_strategy",
    "pauli_moment_check",
    "point_function_success",
    "point_function_experiment",
    "quantum_union_bound_check",
    "random_union_bound_instance",
    "majority_projector",
    "sequential_sign_success",
    "ML_DECODE_MAX_BITS",
]

ML_DECODE_MAX_BITS = 22
TV_MAX_LEAVES = 1_000_000


# packing nets and ERM ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PackingNet:
    """
    Function tables with pairwise D-weighted mean square distance > 4 eps.

    ``members[j]`` is the table of the j-th member over all inputs and
    ``indices[j]`` its position in the candidate list.
    """

    members: np.ndarray
    weights: np.ndarray
    epsilon: float
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return self.members.shape[0]

    def distances(self) -> np.ndarray:
        diff = self.members[:, None, :] - self.members[None, :, :]
        return (diff**2 * self.weights).sum(axis=-1)

    def is_valid(self) -> bool:
        d = self.distances()
        off = ~np.eye(len(self), dtype=bool)
        return bool(np.all(d[off] > 4 * self.epsilon))


def _input_weights(dist, size: int) -> np.ndarray:
    if dist is None or (isinstance(dist, str) and dist == "uniform"):
        return np.full(size, 1.0 / size)
    w = np.asarray(dist, dtype=float)
    if w.shape != (size,) or np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise ValueError("input distribution must be a probability vector over the inputs")
    return w


def greedy_packing_net(candidates, dist, epsilon: float) -> PackingNet:
    """
    Keep each candidate whose distance to every kept one exceeds 4 eps.

    The result is maximal for the candidate list: every rejected candidate
    lies within 4 eps of a member, so the net is also a 4 eps cover.
    """
    cand = np.asarray(candidates, dtype=float)
    if cand.ndim != 2 or cand.shape[0] == 0:
        raise ValueError("need a non-empty 2-d array of function tables")
    w = _input_weights(dist, cand.shape[1])
    kept: list[int] = []
    for j in range(cand.shape[0]):
        if kept:
            d = ((cand[kept] - cand[j]) ** 2 * w).sum(axis=1)
            if np.any(d <= 4 * epsilon):
                continue
        kept.append(j)
    return PackingNet(cand[kept], w, epsilon, tuple(kept))


def erm_learner(net: PackingNet, xs, outcomes) -> int:
    """Member index minimising the mean squared training error (lowest on ties)."""
    if len(net) == 0:
        raise ValueError("empty packing net")
    xs = np.asarray(xs, dtype=np.int64)
    outcomes = np.asarray(outcomes, dtype=float)
    if xs.size == 0:
        raise ValueError("no training data")
    size = net.members.shape[1]
    counts = np.bincount(xs, minlength=size).astype(float)
    sums = np.bincount(xs, weights=outcomes, minlength=size)
    # sum_i (f(x_i) - o_i)^2 = sum_x cnt_x f(x)^2 - 2 f(x) S_x + sum_i o_i^2
    err = (net.members**2 @ counts - 2 * net.members @ sums + (outcomes**2).sum()) / xs.size
    return int(np.argmin(err))


# noisy-parity channel family ----------------------------------------------

@dataclass(frozen=True)
class AppendixDClass:
    """
    Channels E_a on n-bit inputs with f_a(x) = sqrt(3 eps) (1 - 2 a.x).

    Measuring Z on the flag qubit of E_a(|x><x|) returns +1 with probability
    (1 + f_a(x)) / 2; the remaining register always holds |a>.
    """

    n: int
    epsilon: float
    a: int = 0

    def __post_init__(self):
        if not 0 <= 3 * self.epsilon < 1 + 1e-15:
            raise ValueError("need 0 <= 3 eps <= 1")
        if not 0 <= self.a < (1 << self.n):
            raise ValueError("label does not fit in n bits")

    @property
    def amplitude(self) -> float:
        return math.sqrt(3 * self.epsilon)

    def table(self) -> np.ndarray:
        """f_b(x) for every label b (rows) and input x (columns)."""
        size = 1 << self.n
        b = np.arange(size)[:, None]
        x = np.arange(size)[None, :]
        parity = np.bitwise_count(b & x) & 1
        return self.amplitude * (1 - 2 * parity.astype(float))

    def f(self, x) -> np.ndarray:
        parity = np.bitwise_count(np.asarray(x, dtype=np.int64) & self.a) & 1
        return self.amplitude * (1 - 2 * parity.astype(float))


def appendix_d_kraus(cls: AppendixDClass) -> list[np.ndarray]:
    """
    Dense Kraus operators of E_a (2 * 2**n of them), flag qubit leftmost.

    K^{z,1} = sqrt((1+r)/2) |a.z, a><z| and K^{z,2} = sqrt((1-r)/2) (X ⊗ I)|a.z, a><z|.
    """
    n = cls.n
    if n + 1 > 9:
        raise ValueError("dense Kraus operators are capped at 9 output qubits")
    r = cls.amplitude
    dim_in, dim_out = 1 << n, 1 << (n + 1)
    ops = []
    for z in range(dim_in):
        flag = bin(cls.a & z).count("1") & 1
        for which, amp in ((0, math.sqrt((1 + r) / 2)), (1, math.sqrt((1 - r) / 2))):
            k = np.zeros((dim_out, dim_in))
            k[((flag ^ which) << n) | cls.a, z] = amp
            ops.append(k)
    return ops


def appendix_d_outcomes(cls: AppendixDClass, xs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Single-shot ±1 outcomes with Pr[+1] = (1 + f_a(x)) / 2."""
    p_plus = (1 + cls.f(xs)) / 2
    return np.where(rng.random(xs.shape) < p_plus, 1, -1)


def _fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform, out[b] = sum_x v[x] (-1)^(b.x)."""
    out = v.astype(np.float64, copy=True)
    h = 1
    size = out.size
    while h < size:
        out = out.reshape(-1, 2, h)
        a = out[:, 0, :].copy()
        out[:, 0, :] += out[:, 1, :]
        out[:, 1, :] = a - out[:, 1, :]
        out = out.reshape(size)
        h *= 2
    return out


def appendix_d_ml_decode(n: int, epsilon: float, xs, outcomes) -> int:
    """
    Maximum-likelihood label, smallest label on ties.

    The log-likelihood of label b is N c0 + c1 sum_i o_i (-1)^(b.x_i) with
    c1 = atanh(sqrt(3 eps)) >= 0, so ML maximises the correlation, which is
    the Walsh-Hadamard transform of the per-input outcome sums.
    """
    if n > ML_DECODE_MAX_BITS:
        raise ValueError(f"exact ML decoding enumerates 2^{n} labels; the limit is 2^{ML_DECODE_MAX_BITS}")
    size = 1 << n
    g = np.bincount(np.asarray(xs, dtype=np.int64), weights=np.asarray(outcomes, dtype=float),
                    minlength=size)
    scores = _fwht(g)
    if epsilon <= 0:
        return 0
    return int(np.argmax(scores))


def appendix_d_classical_trial(n: int, epsilon: float, queries: int,
                               rng: np.random.Generator) -> bool:
    """One restricted-classical run: uniform queries, ML decoding; True if the label is recovered."""
    cls = AppendixDClass(n, epsilon, int(rng.integers(0, 1 << n)))
    xs = rng.integers(0, 1 << n, size=queries)
    o = appendix_d_outcomes(cls, xs, rng)
    return appendix_d_ml_decode(n, epsilon, xs, o) == cls.a


def appendix_d_success_rate(n: int, epsilon: float, queries: int, trials: int,
                            rng: np.random.Generator) -> float:
    hits = sum(appendix_d_classical_trial(n, epsilon, queries, rng) for _ in range(trials))
    return hits / trials


def appendix_d_classical_budget(n: int, epsilon: float, rng: np.random.Generator,
                                trials: int = 300, target: float = 2 / 3,
                                hi: int | None = None) -> int:
    """
    Smallest query budget whose estimated success rate reaches ``target``.

    Bisection over budgets, each budget estimated from ``trials`` fresh runs.
    """
    lo = max(1, n // 2)
    if hi is None:
        hi = max(2 * lo, 4 * n)
        while appendix_d_success_rate(n, epsilon, hi, trials, rng) < target:
            lo = hi
            hi *= 2
    while hi - lo > max(1, lo // 64):
        mid = (lo + hi) // 2
        if appendix_d_success_rate(n, epsilon, mid, trials, rng) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def appendix_d_quantum_trial(cls: AppendixDClass, rng: np.random.Generator | None = None,
                             dense: bool | None = None):
    """
    Query E_a once on |0...0>, discard the flag qubit, read the register.

    On input |0...0> only the z = 0 Kraus pair acts and both branches leave
    the register in |a>, so the readout is a with certainty. For small n
    (``dense`` defaults to n <= 5) the output state is built from the dense
    Kraus operators and the register is sampled from its Born distribution;
    otherwise the closed form is used. Returns ``(label, queries)``.
    """
    rng = rng or np.random.default_rng(0)
    if dense is None:
        dense = cls.n <= 5
    if not dense:
        return cls.a, 1
    size = 1 << cls.n
    rho_in = np.zeros((size, size))
    rho_in[0, 0] = 1.0
    out = sum(k @ rho_in @ k.T for k in appendix_d_kraus(cls))
    # trace out the flag (leftmost) qubit and sample the register
    reg = out.reshape(2, size, 2, size).trace(axis1=0, axis2=2)
    probs = np.clip(np.real(np.diag(reg)), 0, None)
    label = int(rng.choice(size, p=probs / probs.sum()))
    return label, 1


def per_query_mutual_info(epsilon: float) -> float:
    """1 - H2((1 + sqrt(3 eps)) / 2) in bits; at most 3 eps."""
    if not 0 <= 3 * epsilon < 1:
        raise ValueError("need 0 <= 3 eps < 1")
    p = (1 + math.sqrt(3 * epsilon)) / 2
    info = 1.0 - entropy([p, 1 - p], base=2)
    if info > 3 * epsilon + 1e-12:
        raise AssertionError(f"per-query information {info} exceeds 3 eps = {3 * epsilon}")
    return float(info)


# entropies and the Holevo quantity ------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteEnsemble:
    """Dense states with prior probabilities."""

    states: tuple[np.ndarray, ...]
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", tuple(np.asarray(s, dtype=complex) for s in self.states))
        if len(self.states) != probs.size or probs.size == 0:
            raise ValueError("need one probability per state")
        if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
            raise ValueError("probabilities must be non-negative and sum to 1")
        dim = self.states[0].shape[0]
        if dim > DENSE_MAX_DIM:
            raise ValueError(f"dimension {dim} exceeds the dense cap of {DENSE_MAX_DIM}")
        if any(s.shape != (dim, dim) for s in self.states):
            raise ValueError("states have inconsistent dimensions")

    @classmethod
    def uniform(cls, states: Sequence[np.ndarray]) -> "DiscreteEnsemble":
        return cls(tuple(states), np.full(len(states), 1.0 / len(states)))

    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs, self.states))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) in nats."""
    evals = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    return float(entropy(evals))


def holevo_chi(ens: DiscreteEnsemble) -> float:
    """chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i), in nats."""
    avg = von_neumann_entropy(ens.average())
    parts = sum(p * von_neumann_entropy(s) for p, s in zip(ens.probs, ens.states))
    chi = avg - parts
    if chi < -1e-9:
        raise AssertionError(f"negative Holevo quantity {chi}")
    return max(chi, 0.0)


def _kron_power(m: np.ndarray, copies: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(copies):
        out = np.kron(out, m)
    return out


def pauli_codebook_ensemble(n: int, copies: int) -> DiscreteEnsemble:
    """Uniform ensemble of ((I + s P)/2**n)^{⊗copies} over all 2 (4**n - 1) members."""
    dim = 1 << (n * copies)
    if dim > DENSE_MAX_DIM:
        raise ValueError(f"dimension {dim} exceeds the dense cap of {DENSE_MAX_DIM}")
    eye = np.eye(1 << n)
    states = []
    for p in enumerate_paulis(n, include_identity=False):
        pm = pauli_matrix(p)
        for s in (1, -1):
            states.append(_kron_power((eye + s * pm) / (1 << n), copies))
    return DiscreteEnsemble.uniform(states)


# total variation for adaptive single-copy strategies -------------------------

Strategy = Mapping[tuple, tuple[np.ndarray, np.ndarray]]


def _validate_povm(weights: np.ndarray, vectors: np.ndarray, dim: int) -> None:
    if np.any(weights < 0):
        raise ValueError("POVM weights must be non-negative")
    norms = np.linalg.norm(vectors, axis=1)
    if not np.allclose(norms, 1, atol=1e-10):
        raise ValueError("POVM vectors must be unit vectors")
    total = dim * np.einsum("j,ja,jb->ab", weights, vectors, vectors.conj())
    if np.abs(total - np.eye(dim)).max() > 1e-8:
        raise ValueError("POVM elements do not sum to the identity")


def tv_bound(n: int, copies: int) -> float:
    return 2 * copies / ((1 << n) + 1) ** (1 / 3)


def tv_distance_adaptive(strategy: Strategy | Callable, n: int, copies: int) -> float:
    """
    Exact TV distance between outcome sequences under I/2**n and under a
    uniformly random (I + P)/2**n.

    ``strategy(history)`` (or ``strategy[history]``) returns ``(weights,
    vectors)`` of a rank-one POVM {w_j 2**n |psi_j><psi_j|} for the next
    copy, where ``history`` is the tuple of previous outcome indices.
    Under I/2**n outcome j has probability w_j; under (I + P)/2**n it has
    probability w_j (1 + <psi_j|P|psi_j>).
    """
    if copies == 0:
        return 0.0
    get = strategy if callable(strategy) else strategy.__getitem__
    dim = 1 << n
    paulis = [pauli_matrix(p) for p in enumerate_paulis(n, include_identity=False)]
    stack = np.stack(paulis)

    leaves = 0
    diff_total = 0.0
    sum_p1 = 0.0
    sum_p2 = 0.0

    def walk(history, p1, p2_vec):
        nonlocal leaves, diff_total, sum_p1, sum_p2
        if len(history) == copies:
            leaves += 1
            if leaves > TV_MAX_LEAVES:
                raise ValueError(f"outcome tree exceeds {TV_MAX_LEAVES} leaves")
            p2 = float(p2_vec.mean())
            diff_total += abs(p1 - p2)
            sum_p1 += p1
            sum_p2 += p2
            return
        weights, vectors = get(tuple(history))
        weights = np.asarray(weights, dtype=float)
        vectors = np.asarray(vectors, dtype=complex)
        _validate_povm(weights, vectors, dim)
        # <psi_j|P|psi_j> for every Pauli
        expv = np.real(np.einsum("ja,pab,jb->jp", vectors.conj(), stack, vectors))
        for j in range(weights.size):
            if weights[j] == 0:
                continue
            walk(history + (j,), p1 * weights[j], p2_vec * weights[j] * (1 + expv[j]))

    walk((), 1.0, np.ones(len(paulis)))
    if abs(sum_p1 - 1) > 1e-10 or abs(sum_p2 - 1) > 1e-10:
        raise AssertionError("outcome probabilities do not sum to 1")
    tv = 0.5 * diff_total
    if tv > tv_bound(n, copies) + 1e-12:
        raise AssertionError(f"TV {tv} exceeds 2N/(2^n+1)^(1/3)")
    return tv


def computational_basis_strategy(n: int, copies: int) -> dict:
    """Non-adaptive strategy measuring every copy in the computational basis."""
    dim = 1 << n
    povm = (np.full(dim, 1.0 / dim), np.eye(dim, dtype=complex))
    return {h: povm for length in range(copies) for h in itertools.product(range(dim), repeat=length)}


def random_adaptive_strategy(n: int, copies: int, rng: np.random.Generator,
                             bases_per_step: int = 1) -> dict:
    """
    Random adaptive strategy: after every history, a fresh mixture of
    ``bases_per_step`` Haar-random orthonormal bases.
    """
    dim = 1 << n
    out_count = dim * bases_per_step
    strat = {}
    for length in range(copies):
        for h in itertools.product(range(out_count), repeat=length):
            vecs = [unitary_group.rvs(dim, random_state=rng).T for _ in range(bases_per_step)]
            vectors = np.concatenate(vecs, axis=0)
            weights = np.full(out_count, 1.0 / out_count)
            strat[h] = (weights, vectors)
    return strat


# moments over the codebook --------------------------------------------------

def pauli_moment_check(n: int, psi) -> tuple[float, float]:
    """
    First and second moments of <psi|(I + s P)/2**n|psi> over all
    2 (4**n - 1) codebook members; asserts the closed forms 1/2**n and
    (1 + 1/(2**n + 1)) / 4**n.
    """
    if n > 6:
        raise ValueError("pauli_moment_check enumerates 4^n dense Paulis; n <= 6")
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (1 << n,) or abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("psi must be a normalised vector of length 2^n")
    dim = 1 << n
    vals = []
    for p in enumerate_paulis(n, include_identity=False):
        e = float(np.real(np.vdot(psi, pauli_matrix(p) @ psi)))
        vals.extend([(1 + e) / dim, (1 - e) / dim])
    vals = np.array(vals)
    first, second = float(vals.mean()), float((vals**2).mean())
    want1, want2 = 1 / dim, (1 + 1 / (dim + 1)) / dim**2
    if abs(first - want1) > 1e-10 or abs(second - want2) > 1e-10:
        raise AssertionError(f"moments ({first}, {second}) differ from ({want1}, {want2})")
    return first, second


# point functions --------------------------------------------------------

def point_function_success(m_bits: int, k: int) -> float:
    """Optimal success after k distinct queries: k/2^m + (1 - k/2^m)/(2^m - k)."""
    size = 1 << m_bits
    if not 0 <= k < size:
        raise ValueError("need 0 <= k < 2^m")
    return k / size + (1 - k / size) / (size - k)


def point_function_experiment(m_bits: int, k: int, trials: int, rng: np.random.Generator) -> float:
    """
    Guess the marked input of a point function after k distinct random
    queries; the guess is the marked input if it was queried, otherwise
    uniform over the unqueried inputs.
    """
    size = 1 << m_bits
    if not 0 <= k < size:
        raise ValueError("need 0 <= k < 2^m")
    hits = 0
    for _ in range(trials):
        a = int(rng.integers(0, size))
        queried = rng.choice(size, size=k, replace=False) if k else np.zeros(0, dtype=np.int64)
        if np.any(queried == a):
            hits += 1
            continue
        mask = np.ones(size, dtype=bool)
        mask[queried] = False
        guess = int(rng.choice(np.flatnonzero(mask)))
        hits += guess == a
    return hits / trials


# quantum union bound ------------------------------------------------------

def quantum_union_bound_check(projectors: Sequence[np.ndarray], rho: np.ndarray):
    """
    Exact probability that sequential projective tests K_1, ..., K_M all
    pass, against the bound 1 - M sqrt(eps) with eps = max_i (1 - Tr(K_i rho)).

    Returns ``(success, bound, eps)``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] > DENSE_MAX_DIM:
        raise ValueError("dense cap exceeded")
    eps = max(0.0, max(1.0 - float(np.real(np.trace(k @ rho))) for k in projectors))
    state = rho
    for k in projectors:
        state = k @ state @ k.conj().T
    success = float(np.real(np.trace(state)))
    bound = 1.0 - len(projectors) * math.sqrt(eps)
    if success < bound - 1e-12:
        raise AssertionError(f"sequential success {success} below 1 - M sqrt(eps) = {bound}")
    return success, bound, eps


def random_union_bound_instance(rng: np.random.Generator, dim: int, m: int, epsilon: float):
    """
    A random state and m random projectors, each passing with probability
    at least 1 - epsilon.

    Each projector has random rank r < dim and contains a vector at
    overlap >= 1 - epsilon with the (pure) state.
    """
    psi = unitary_group.rvs(dim, random_state=rng)[:, 0]
    rho = np.outer(psi, psi.conj())
    projectors = []
    for _ in range(m):
        u = unitary_group.rvs(dim, random_state=rng)
        perp = u[:, 0] - np.vdot(psi, u[:, 0]) * psi
        perp /= np.linalg.norm(perp)
        tilt = rng.uniform(0, epsilon)
        v = math.sqrt(1 - tilt) * psi + math.sqrt(tilt) * perp
        rank = int(rng.integers(1, dim))
        basis = np.column_stack([v, u[:, 1:rank]])
        q, _ = np.linalg.qr(basis)
        projectors.append(q @ q.conj().T)
    return projectors, rho


def majority_projector(letter: str, copies: int, sign: int) -> np.ndarray:
    """
    Projector on copies qubits onto outcomes of the single-qubit Pauli
    ``letter`` whose majority equals ``sign`` (copies odd).
    """
    if copies % 2 == 0:
        raise ValueError("use an odd number of copies")
    if (1 << copies) > DENSE_MAX_DIM:
        raise ValueError("dense cap exceeded")
    p = pauli_matrix(PauliString.from_letters(letter))
    plus, minus = (np.eye(2) + p) / 2, (np.eye(2) - p) / 2
    # layers[c] = sum of tensor products with exactly c "plus" factors
    layers = [np.ones((1, 1), dtype=complex)]
    for _ in range(copies):
        nxt = [None] * (len(layers) + 1)
        for c, m in enumerate(layers):
            a = np.kron(m, minus)
            b = np.kron(m, plus)
            nxt[c] = a if nxt[c] is None else nxt[c] + a
            nxt[c + 1] = b if nxt[c + 1] is None else nxt[c + 1] + b
        layers = nxt
    want = range(copies // 2 + 1, copies + 1) if sign > 0 else range(0, copies // 2 + 1)
    return sum(layers[c] for c in want)


def sequential_sign_success(rho: np.ndarray, letters: Sequence[str], copies: int):
    """
    Exact success probability of reading the sign of Tr(P rho) for several
    single-qubit Paulis by successive majority measurements on one shared
    block of ``copies`` copies.

    Returns ``(success, bound, eps, independent)`` where ``independent`` is
    the probability that independent majority votes on fresh copies all
    succeed.
    """
    rho = np.asarray(rho, dtype=complex)
    block = _kron_power(rho, copies)
    projectors = []
    independent = 1.0
    for letter in letters:
        e = float(np.real(np.trace(pauli_matrix(PauliString.from_letters(letter)) @ rho)))
        sign = 1 if e >= 0 else -1
        k = majority_projector(letter, copies, sign)
        projectors.append(k)
        independent *= float(np.real(np.trace(k @ block)))
    success, bound, eps = quantum_union_bound_check(projectors, block)
    return success, bound, eps, independent


def erm_trial(net: PackingNet, cls_n: int, epsilon: float, samples: int,
              rng: np.random.Generator) -> float:
    """
    Draw a label, ``samples`` training points from the restricted model, run
    ERM; returns the prediction error E_x |f_chosen(x) - f_a(x)|**2.
    """
    a = int(rng.integers(0, len(net)))
    truth = net.members[a]
    size = truth.size
    xs = rng.integers(0, size, size=samples)
    o = np.where(rng.random(samples) < (1 + truth[xs]) / 2, 1.0, -1.0)
    chosen = erm_learner(net, xs, o)
    return float(((net.members[chosen] - truth) ** 2 * net.weights).sum())
