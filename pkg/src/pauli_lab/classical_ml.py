"""
Classical and restricted-classical learning strategies.

Restricted learners may only measure one target observable per copy and keep
the ±1 outcome. Classical learners measure single copies in any basis; for
``(I + P)/2**n`` states they use classical shadows built on uniformly random
Clifford measurements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import _kernels
from .pauli_core import PauliString
from .state_sim import (
    CliffordTableau,
    PauliMixedState,
    StabilizerProductState,
    StateOracle,
    conjugate_pauli,
    random_clifford,
)

__all__ = [
    "StrategyOutcome",
    "restricted_exhaustive_mixed",
    "exhaustive_cap",
    "mom_groups",
    "snapshot_estimate",
    "shadow_clifford_predict",
    "shadow_copies_to_identify",
    "restricted_product_strategy",
    "cml_product_strategy",
    "cml_mixed_copies_lower_check",
]

SHADOW_MAX_QUBITS = 10


@dataclass(frozen=True)
class StrategyOutcome:
    """Result of one learning run; ``copies`` counts the state preparations consumed."""

    recovered: Any
    copies: int
    success: bool


# restricted learner on (I + P)/2^n -----------------------------------------

def exhaustive_cap(n: int, delta: float) -> int:
    """K = ceil(log2((4**n - 1) / delta)) straight +1 outcomes accept a candidate."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(math.log2(((1 << (2 * n)) - 1) / delta))


def restricted_exhaustive_mixed(state: PauliMixedState, delta: float, rng: np.random.Generator,
                                stop_on_accept: bool = False,
                                oracle: StateOracle | None = None,
                                order: Sequence[PauliString] | None = None) -> StrategyOutcome:
    """
    Exhaustive search over non-identity Paulis with single-copy measurements.

    Each candidate is measured until it returns -1 (eliminated) or returns +1
    K times in a row (accepted). For a wrong candidate the outcomes are fair
    coins, so elimination costs two copies on average. The true Pauli never
    gives -1.

    Parameters
    ----------
    stop_on_accept : bool
        If False (default) every candidate is tested and the run succeeds
        when exactly the true Pauli is accepted. If True the search stops at
        the first accepted candidate.
    order : sequence of PauliString, optional
        Candidate order; defaults to index order.
    """
    n = state.n
    k_cap = exhaustive_cap(n, delta)
    if oracle is None:
        oracle = StateOracle(state, rng)
    if order is None:
        order = (PauliString.from_index(n, i) for i in range(1, 1 << (2 * n)))
    accepted = []
    for cand in order:
        run = 0
        while run < k_cap:
            if oracle.measure_pauli(cand) < 0:
                break
            run += 1
        if run == k_cap:
            accepted.append(cand)
            if stop_on_accept:
                break
    recovered = accepted[0] if len(accepted) == 1 else None
    success = recovered is not None and recovered == state.pauli and state.sign > 0
    return StrategyOutcome(recovered, oracle.copies, success)


# classical shadows ---------------------------------------------------------

def mom_groups(m_targets: int, delta: float) -> int:
    """ceil(2 ln(2M/delta)) median-of-means groups, made odd."""
    k = math.ceil(2 * math.log(2 * m_targets / delta))
    return k if k % 2 else k + 1


def snapshot_estimate(t: CliffordTableau, z: int, p: PauliString) -> float:
    """
    Single-snapshot estimate of Tr(P rho) from outcome z in basis C.

    (2**n + 1) <z| C P C^dagger |z> for non-identity P, and 1 for the
    identity.
    """
    if p.is_identity():
        return 1.0
    q, s = conjugate_pauli(t, p)
    if q.x:
        return 0.0
    sign = -1 if bin(q.z & z).count("1") & 1 else 1
    return float(((1 << p.n) + 1) * s * sign)


def _snapshot_group(t: CliffordTableau, z: int, idx_out: np.ndarray, val_out: np.ndarray) -> None:
    # the post-measurement state C^dagger|z> is stabilized by
    # (-1)**z_k C^dagger Z_k C, i.e. the inverse tableau's signed Z-images
    inv = t.inverse()
    n = t.n
    gens = np.array(inv.images[n:], dtype=np.int64)
    signs = np.array([(inv.phases >> (n + k)) & 1 for k in range(n)], dtype=np.int64)
    _kernels.enumerate_group(n, gens, signs, z, idx_out, val_out)


def _median_of_means(sums: np.ndarray, group_size: int, scale: float) -> np.ndarray:
    means = sums * (scale / group_size)
    return np.median(means, axis=0)


def shadow_clifford_predict(state, targets: Sequence[PauliString], n_samples: int,
                            rng: np.random.Generator, delta: float = 0.05,
                            oracle: StateOracle | None = None,
                            fast: bool = False) -> np.ndarray:
    """
    Classical-shadow estimates of Tr(P rho) from random Clifford snapshots.

    Every snapshot contributes (2**n + 1) <phi|P|phi> to each target, where
    phi = C^dagger|z> is a stabilizer state; the values are nonzero exactly on
    phi's stabilizer group, which is enumerated directly. Group means are
    combined by a median over ``mom_groups(M, delta)`` groups of
    ``n_samples // groups`` snapshots (fewer groups when n_samples is small).

    Parameters
    ----------
    fast : bool
        Draw snapshots of a ``PauliMixedState`` with the compiled sampler,
        which draws the same snapshot distribution without building tableau
        objects.
    """
    targets = tuple(targets)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if not targets:
        return np.zeros(0)
    n = targets[0].n
    if n > SHADOW_MAX_QUBITS:
        raise ValueError(f"shadow estimation is limited to n <= {SHADOW_MAX_QUBITS}")
    if oracle is None:
        oracle = StateOracle(state, rng)
    groups = min(mom_groups(len(targets), delta), n_samples)
    gsize = n_samples // groups
    used = groups * gsize
    glen = (1 << n) - 1
    idx = np.empty((used, glen), dtype=np.int64)
    val = np.empty((used, glen), dtype=np.int8)
    if fast:
        if not isinstance(state, PauliMixedState):
            raise TypeError("the compiled snapshot sampler handles (I + sP)/2^n states")
        oracle.charge(used)
        _kernels.shadow_batch(n, state.pauli.index, state.sign, used, oracle.rng, idx, val)
    else:
        for r in range(used):
            t = random_clifford(n, oracle.rng)
            z = oracle.clifford_snapshot(t)
            _snapshot_group(t, z, idx[r], val[r])
    sums = _group_sums(idx, val, groups, n)
    med = _median_of_means(sums, gsize, float((1 << n) + 1))
    return np.array([1.0 if p.is_identity() else med[p.index] for p in targets])


def _group_sums(idx: np.ndarray, val: np.ndarray, groups: int, n: int,
                start: int = 0) -> np.ndarray:
    """Per-group sums of snapshot values, shape (groups, 4**n); row r -> group (start + r) % groups."""
    size = 1 << (2 * n)
    rows = idx.shape[0]
    gid = (start + np.arange(rows)) % groups
    flat = (gid[:, None] * size + idx).ravel()
    sums = np.bincount(flat, weights=val.ravel().astype(np.float64), minlength=groups * size)
    return sums.reshape(groups, size)


def shadow_copies_to_identify(state: PauliMixedState, rng: np.random.Generator,
                              delta: float = 0.05, growth: float = 2 ** 0.25,
                              max_copies: int = 10_000_000,
                              oracle: StateOracle | None = None) -> tuple[int, float]:
    """
    Smallest checkpoint budget at which shadows predict all 4**n Paulis to
    within 1/2.

    Snapshots are dealt round-robin into ``mom_groups(4**n, delta)`` groups
    and the median-of-means estimate of every Pauli is checked when each
    group holds g snapshots, for g on a geometric grid with ratio
    ``growth``. Returns ``(copies, worst_case_error)`` at the first passing
    checkpoint; copies counts every snapshot drawn.
    """
    n = state.n
    if n > SHADOW_MAX_QUBITS:
        raise ValueError(f"shadow estimation is limited to n <= {SHADOW_MAX_QUBITS}")
    if oracle is None:
        oracle = StateOracle(state, rng)
    size = 1 << (2 * n)
    groups = mom_groups(size, delta)
    truth = np.zeros(size)
    truth[0] = 1.0
    truth[state.pauli.index] = state.sign
    sums = np.zeros((groups, size))
    glen = (1 << n) - 1
    scale = float((1 << n) + 1)
    drawn = 0
    g = 1
    while groups * g <= max_copies:
        target = groups * g
        new = target - drawn
        idx = np.empty((new, glen), dtype=np.int64)
        val = np.empty((new, glen), dtype=np.int8)
        oracle.charge(new)
        _kernels.shadow_batch(n, state.pauli.index, state.sign, new, oracle.rng, idx, val)
        sums += _group_sums(idx, val, groups, n, start=drawn)
        drawn = target
        med = _median_of_means(sums, g, scale)
        med[0] = 1.0
        err = float(np.max(np.abs(med - truth)))
        if err < 0.5:
            return oracle.copies, err
        g = max(g + 1, math.ceil(g * growth))
    raise RuntimeError(f"shadows did not reach error 1/2 within {max_copies} copies")


# product states -------------------------------------------------------------

_LETTERS = ("X", "Y", "Z")


def restricted_product_strategy(state: StabilizerProductState, rng: np.random.Generator,
                                oracle: StateOracle | None = None) -> StrategyOutcome:
    """
    Weight-one Pauli measurements, one qubit and one letter per copy.

    For each qubit the letters X, Y, Z are measured in rotation, skipping
    letters that have already shown both signs. When two letters have shown
    both signs the third is the stabilizer axis and its sign is the value it
    has returned every time.
    """
    if oracle is None:
        oracle = StateOracle(state, rng)
    labels = []
    for k in range(state.n):
        plus = [False] * 3
        minus = [False] * 3
        last = [0] * 3
        done = 0
        j = 0
        while done < 2:
            if plus[j] and minus[j]:
                j = (j + 1) % 3
                continue
            o = oracle.measure_letter(k, _LETTERS[j])
            last[j] = o
            if o > 0:
                plus[j] = True
            else:
                minus[j] = True
            if plus[j] and minus[j]:
                done += 1
            j = (j + 1) % 3
        axis = next(i for i in range(3) if not (plus[i] and minus[i]))
        if last[axis] == 0:
            # the axis letter has not been measured yet
            last[axis] = oracle.measure_letter(k, _LETTERS[axis])
        labels.append(_LETTERS[axis] + ("+" if last[axis] > 0 else "-"))
    labels = tuple(labels)
    return StrategyOutcome(labels, oracle.copies, labels == state.labels)


def cml_product_strategy(state: StabilizerProductState, rng: np.random.Generator,
                         oracle: StateOracle | None = None) -> StrategyOutcome:
    """
    Rounds of three copies measured in the all-X, all-Y and all-Z bases.

    A qubit is resolved once two letters have shown both signs; all three
    copies of a round are charged even if some are no longer informative.
    """
    if oracle is None:
        oracle = StateOracle(state, rng)
    n = state.n
    plus = np.zeros((3, n), dtype=bool)
    minus = np.zeros((3, n), dtype=bool)
    last = np.zeros((3, n), dtype=np.int8)
    while True:
        for j, letter in enumerate(_LETTERS):
            o = oracle.measure_basis(letter)
            last[j] = o
            plus[j] |= o > 0
            minus[j] |= o < 0
        both = plus & minus
        if np.all(both.sum(axis=0) >= 2):
            break
    axis = np.argmin(both, axis=0)
    labels = tuple(_LETTERS[a] + ("+" if last[a, k] > 0 else "-") for k, a in enumerate(axis))
    return StrategyOutcome(labels, oracle.copies, labels == state.labels)


def cml_mixed_copies_lower_check(n: int, trials: int, rng: np.random.Generator):
    """
    Point-function guessing game on 2n-bit inputs with k = 4**n / 4 queries.

    A single-copy learner facing (I + P)/2**n learns nothing about P from
    queries that miss it, so its success is at most that of guessing a point
    function after k queries. Returns ``(empirical rate, closed form)``.
    """
    from .bounds_lab import point_function_experiment, point_function_success

    if n > 10:
        raise ValueError("n too large for the point-function enumeration (n <= 10)")
    m = 2 * n
    k = (1 << m) // 4
    rate = point_function_experiment(m, k, trials, rng)
    exact = point_function_success(m, k)
    if rate > 0.5 + 0.05:
        raise AssertionError(f"point-function success {rate:.4f} exceeds 1/2 + 0.05")
    return rate, exact
