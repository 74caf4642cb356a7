"""
Quantum learning strategies built on two-copy Bell measurements.

The main entry point is :func:`predict_paulis`, a two-stage predictor of many
Pauli expectation values:

1. Bell rounds on pairs of copies estimate ``|Tr(P rho)|**2`` for every target
   at once (:func:`estimate_a`, :func:`estimate_abs`).
2. Targets whose magnitude clears ``2 eps / 3`` get a sign from a majority
   vote over a shared budget of single copies (:func:`sign_vote`).

Also here are the identification strategies for the scaling experiments:
:func:`identify_hidden_pauli` for ``(I + P)/2**n`` states and
:func:`product_state_strategy` for stabilizer product states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli_core import (
    Gf2Matrix,
    PauliString,
    enumerate_paulis,
    gf2_solve,
)
from .state_sim import (
    BellOutcome,
    PauliMixedState,
    StabilizerProductState,
    StateOracle,
    expectation,
)

__all__ = [
    "BellMemory",
    "PredictionReport",
    "sample_budgets",
    "build_bell_memory",
    "estimate_a",
    "estimate_a_many",
    "estimate_abs",
    "sign_vote",
    "predict_paulis",
    "identify_hidden_pauli",
    "bell_constraint_system",
    "identify_by_bell_sampling",
    "product_state_strategy",
]


@dataclass(frozen=True)
class BellMemory:
    """
    Classical record of Bell rounds: 2n bits per round.

    ``wx[t]`` and ``wz[t]`` are the packed X and Z masks of the outcome label
    of round t.
    """

    n: int
    wx: np.ndarray
    wz: np.ndarray

    def __post_init__(self):
        if self.n > 64:
            raise ValueError("Bell memory packs each half into one 64-bit word")
        if self.wx.shape != self.wz.shape:
            raise ValueError("mismatched halves")

    @classmethod
    def from_outcomes(cls, n: int, samples: Sequence[BellOutcome]) -> "BellMemory":
        for w in samples:
            if w.n != n:
                raise ValueError(f"sample of length {w.n} in an {n}-qubit memory")
        wx = np.array([w.x for w in samples], dtype=np.uint64)
        wz = np.array([w.z for w in samples], dtype=np.uint64)
        return cls(n, wx, wz)

    def __len__(self) -> int:
        return int(self.wx.size)

    @property
    def samples(self) -> list[BellOutcome]:
        return [PauliString(self.n, int(x), int(z)) for x, z in zip(self.wx, self.wz)]

    @property
    def bits(self) -> int:
        return 2 * self.n * len(self)


@dataclass(frozen=True)
class PredictionReport:
    """Output of :func:`predict_paulis`; ``copies_used = (2 N1, N2)``."""

    targets: tuple[PauliString, ...]
    estimates: np.ndarray
    abs_estimates: np.ndarray
    signs: np.ndarray
    copies_used: tuple[int, int]
    epsilon: float
    delta: float

    @property
    def total_copies(self) -> int:
        return sum(self.copies_used)

    def worst_case_error(self, state) -> float:
        truth = np.array([expectation(state, p) for p in self.targets])
        return float(np.max(np.abs(self.estimates - truth)))

    def to_csv(self) -> str:
        lines = ["pauli,abs_estimate,sign,estimate"]
        for p, b, s, e in zip(self.targets, self.abs_estimates, self.signs, self.estimates):
            lines.append(f"{p},{b:.6f},{int(s)},{e:.6f}")
        return "\n".join(lines) + "\n"


def sample_budgets(m_targets: int, epsilon: float, delta: float) -> tuple[int, int]:
    """
    Bell rounds N1 and sign-stage copies N2.

    N1 = ceil(2 ln(4M/delta) / (eps/3)**4) makes every |a_hat - |Tr|**2| below
    (eps/3)**2 except with probability delta/2 (Hoeffding plus a union bound
    over M targets). N2 = ceil(4 ln(4M/delta) / (eps/3)**2), rounded up to an
    odd number so that majority votes cannot tie.
    """
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if m_targets < 1:
        raise ValueError("need at least one target")
    log_term = math.log(4 * m_targets / delta)
    e3 = epsilon / 3
    n1 = max(1, math.ceil(2 * log_term / e3**4))
    n2 = max(1, math.ceil(4 * log_term / e3**2))
    if n2 % 2 == 0:
        n2 += 1
    return n1, n2


def build_bell_memory(oracle: StateOracle, n1: int) -> BellMemory:
    """Run n1 Bell rounds; charges 2 * n1 copies to the oracle."""
    if n1 < 0:
        raise ValueError("n1 must be non-negative")
    n = oracle.n
    if n1 == 0:
        empty = np.zeros(0, dtype=np.uint64)
        return BellMemory(n, empty, empty.copy())
    if isinstance(oracle.state, PauliMixedState):
        wx, wz = oracle.bell_batch(n1)
        return BellMemory(n, wx, wz)
    return BellMemory.from_outcomes(n, [oracle.bell_pair() for _ in range(n1)])


def _signs_for(mem: BellMemory, p: PauliString) -> np.ndarray:
    if p.n != mem.n:
        raise ValueError(f"dimension mismatch: memory {mem.n}, Pauli {p.n}")
    px, pz = np.uint64(p.x), np.uint64(p.z)
    parity = (np.bitwise_count((px & mem.wz) ^ (pz & mem.wx)) + (p.y_weight() & 1)) & 1
    return 1 - 2 * parity.astype(np.int64)


def estimate_a(mem: BellMemory, p: PauliString) -> float:
    """Mean over rounds of ``bell_product_sign(p, W_t)``; estimates |Tr(P rho)|**2."""
    if len(mem) == 0:
        raise ValueError("empty Bell memory")
    return float(_signs_for(mem, p).mean())


def estimate_a_many(mem: BellMemory, targets: Sequence[PauliString]) -> np.ndarray:
    return np.array([estimate_a(mem, p) for p in targets])


def estimate_abs(mem: BellMemory, p: PauliString) -> float:
    return math.sqrt(max(0.0, estimate_a(mem, p)))


def _majority(mean: float, n2: int, rng: np.random.Generator) -> int:
    if mean >= 1.0:
        return 1
    if mean <= -1.0:
        return -1
    plus = rng.binomial(n2, (1.0 + mean) / 2.0)
    return 1 if 2 * plus > n2 else -1


def sign_vote(state, p: PauliString, n2: int, rng: np.random.Generator) -> int:
    """
    Majority of n2 single-copy outcomes of P.

    The number of +1 outcomes is binomial with success probability
    (1 + Tr(P rho)) / 2, so this is an exact simulation of the vote; its
    failure probability is at most exp(-Tr(P rho)**2 n2 / 2).
    """
    if n2 < 1 or n2 % 2 == 0:
        raise ValueError(f"n2 must be a positive odd count, got {n2}")
    return _majority(expectation(state, p), n2, rng)


def predict_paulis(state, targets: Sequence[PauliString], epsilon: float, delta: float,
                   rng: np.random.Generator, oracle: StateOracle | None = None) -> PredictionReport:
    """
    Predict Tr(P_i rho) for all targets to within epsilon, w.p. >= 1 - delta.

    The sign stage stands for one sequence of gentle two-outcome measurements
    on a shared block of N2 copies. It is charged once, and each surviving
    target gets an independent majority vote (see :func:`sign_vote`).
    """
    targets = tuple(targets)
    n1, n2 = sample_budgets(len(targets), epsilon, delta)
    if oracle is None:
        oracle = StateOracle(state, rng)
    mem = build_bell_memory(oracle, n1)
    a_hat = estimate_a_many(mem, targets)
    b_hat = np.sqrt(np.clip(a_hat, 0.0, None))
    signs = np.zeros(len(targets), dtype=np.int64)
    oracle.charge(n2)
    for i, p in enumerate(targets):
        if b_hat[i] > 2 * epsilon / 3:
            signs[i] = _majority(expectation(state, p), n2, oracle.rng)
    estimates = b_hat * signs
    return PredictionReport(targets, estimates, b_hat, signs, (2 * n1, n2), epsilon, delta)


# identification of a hidden Pauli from Bell samples -----------------------

def bell_constraint_system(n: int, samples: Sequence[BellOutcome]) -> Gf2Matrix:
    """
    Homogeneous GF(2) system satisfied by every consistent hidden Pauli.

    Two copies of ``(I + sP)/2**n`` always return W with
    ``wt_Y(x) + <x, W> = 0`` (mod 2), whatever the sign s, since P ⊗ P has
    expectation s**2 = 1. The Y-weight term is quadratic in x, so the
    unknown vector is extended by one bit ``b = wt_Y(x)``; each sample then
    gives the linear row ``<x, W> + b = 0``. Columns 0..2n-1 hold x in index
    layout, column 2n holds b.
    """
    rows = []
    for w in samples:
        # <x, W> = x_x . W_z + x_z . W_x
        rows.append(w.z | (w.x << n) | (1 << (2 * n)))
    return Gf2Matrix(len(rows), 2 * n + 1, tuple(rows))


def _candidates_from_solution(n: int, sol, limit: int | None):
    found = set()
    dim = len(sol.nullspace)
    if limit is not None and dim > limit:
        return None
    xmask = (1 << (2 * n)) - 1
    for v in sol.enumerate():
        idx = v & xmask
        if idx == 0:
            continue
        p = PauliString.from_index(n, idx)
        if ((v >> (2 * n)) & 1) != p.y_weight() & 1:
            continue
        found.add(p)
    return found


def identify_hidden_pauli(mem: BellMemory,
                          max_nullity: int | None = None) -> set[PauliString] | None:
    """
    Non-identity Paulis consistent with every Bell sample in ``mem``.

    Bell samples carry no information about the sign of the hidden state.

    Parameters
    ----------
    mem : BellMemory
    max_nullity : int, optional
        Refuse to enumerate (return None) when the solution space has more
        than ``2**max_nullity`` elements.
    """
    n = mem.n
    if len(mem) == 0 and max_nullity is None:
        # every string is consistent
        return set(enumerate_paulis(n, include_identity=False))
    system = bell_constraint_system(n, mem.samples)
    sol = gf2_solve(system, 0)
    return _candidates_from_solution(n, sol, max_nullity)


def identify_by_bell_sampling(oracle: StateOracle, max_rounds: int = 100_000,
                              max_nullity: int = 4):
    """
    Bell rounds until the candidate set is a single Pauli.

    Returns ``(pauli, rounds)``; each round costs two copies. The solution
    space has 2n + 1 unknowns and shrinks by one dimension per independent
    sample. Consistent vectors are the zeros of a degree-2 polynomial q with
    q(0) = 0 on the solution space, i.e. the support of q + 1, which has at
    least 2**(d-2) points in dimension d (the minimum distance of the
    second-order Reed-Muller code). A single candidate plus the zero vector
    therefore needs d <= 3, so the default ``max_nullity = 4`` never skips a
    singleton.
    """
    n = oracle.n
    rows: list[int] = []
    for r in range(1, max_rounds + 1):
        w = oracle.bell_pair()
        rows.append(w.z | (w.x << n) | (1 << (2 * n)))
        sol = gf2_solve(Gf2Matrix(len(rows), 2 * n + 1, tuple(rows)), 0)
        cands = _candidates_from_solution(n, sol, max_nullity)
        if cands is not None and len(cands) == 1:
            return next(iter(cands)), r
    raise RuntimeError(f"no unique candidate after {max_rounds} Bell rounds")


# stabilizer product states ------------------------------------------------

# bell_sign(sigma, W) for sigma = X, Z, Y (rows) and W codes I, X, Z, Y (cols)
_PRODUCT_SIGNS = np.array([
    [+1, +1, -1, -1],  # X
    [+1, -1, +1, -1],  # Z
    [-1, +1, +1, -1],  # Y
], dtype=np.int8)
_AXIS_FROM_ROW = np.array([1, 2, 3], dtype=np.int8)  # letter codes of X, Z, Y
_LETTER_OF_CODE = {1: "X", 2: "Z", 3: "Y"}


def product_state_strategy(state: StabilizerProductState, rng: np.random.Generator,
                           oracle: StateOracle | None = None):
    """
    Learn a stabilizer product state from Bell rounds plus one copy.

    Each round reveals, per qubit, the signs of X⊗X, Y⊗Y and Z⊗Z. The
    stabilizer axis always gives +1, the other two flip at random; once both
    of them have shown both signs the axis is known. A final copy measured in
    the recovered axis bases fixes the signs.

    Returns
    -------
    (labels, copies) : tuple of str, int
    """
    if oracle is None:
        oracle = StateOracle(state, rng)
    n = state.n
    seen_plus = np.zeros((3, n), dtype=bool)
    seen_minus = np.zeros((3, n), dtype=bool)
    while True:
        codes = oracle.bell_batch(1)[0]
        s = _PRODUCT_SIGNS[:, codes]
        seen_plus |= s > 0
        seen_minus |= s < 0
        both = seen_plus & seen_minus
        if np.all(both.sum(axis=0) >= 2):
            break
    axes = _AXIS_FROM_ROW[np.argmin(both, axis=0)]
    outcomes = oracle.measure_axes(axes)
    labels = tuple(_LETTER_OF_CODE[int(a)] + ("+" if o > 0 else "-") for a, o in zip(axes, outcomes))
    return labels, oracle.copies
