"""
Brute-force reference implementations used by the tests.

Nothing here imports the package: Pauli strings are handled as letter
strings and every quantity is computed from explicit matrices.
"""
from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.diag([1, 1j])


def pauli(letters: str) -> np.ndarray:
    """Dense matrix; the leftmost letter is the leftmost Kronecker factor."""
    return reduce(np.kron, (PAULI[c] for c in letters))


def all_letters(n: int, include_identity: bool = True):
    for t in itertools.product("IXYZ", repeat=n):
        s = "".join(t)
        if include_identity or s != "I" * n:
            yield s


def omega() -> np.ndarray:
    return np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def bell_vector(w: str) -> np.ndarray:
    """(I ⊗ W)|Ω> for a single letter."""
    return np.kron(np.eye(2), PAULI[w]) @ omega()


def bell_sign(sigma: str, w: str) -> int:
    """Eigenvalue of sigma ⊗ sigma on the Bell vector labelled w."""
    v = bell_vector(w)
    m = np.kron(PAULI[sigma], PAULI[sigma])
    val = np.vdot(v, m @ v)
    assert np.allclose(m @ v, val * v)
    return int(round(val.real))


def product_phase(a: str, b: str) -> tuple[str, int]:
    """(c, k) with P(a) P(b) = i**k P(c)."""
    m = pauli(a) @ pauli(b)
    for c in all_letters(len(a)):
        pc = pauli(c)
        coeff = np.trace(pc.conj().T @ m) / m.shape[0]
        if abs(abs(coeff) - 1) < 1e-9:
            for k in range(4):
                if abs(coeff - 1j**k) < 1e-9:
                    return c, k
    raise AssertionError("not a Pauli product")


def bell_distribution(rho: np.ndarray) -> dict[str, float]:
    """
    Pr(W) for measuring every pair (qubit k of copy 1, qubit k of copy 2) of
    rho ⊗ rho in the Bell basis.
    """
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    two = np.kron(rho, rho)
    # reorder qubits from (a_0..a_{n-1}, b_0..b_{n-1}) to (a_0 b_0 a_1 b_1 ...)
    t = two.reshape([2] * (4 * n))
    order = [q for k in range(n) for q in (k, n + k)]
    perm = order + [4 * n // 2 + q for q in order]
    t = t.transpose(perm).reshape(dim * dim, dim * dim)
    out = {}
    for w in all_letters(n):
        v = reduce(np.kron, (bell_vector(c) for c in w))
        out[w] = float(np.real(np.vdot(v, t @ v)))
    return out


def mixed_state(letters: str, sign: int = 1) -> np.ndarray:
    n = len(letters)
    return (np.eye(1 << n) + sign * pauli(letters)) / (1 << n)


def product_state(labels) -> np.ndarray:
    mats = [(np.eye(2) + (1 if lab[1] == "+" else -1) * PAULI[lab[0]]) / 2 for lab in labels]
    return reduce(np.kron, mats)


def single_qubit_cliffords() -> list[np.ndarray]:
    """The 24 single-qubit Cliffords modulo phase, by closure under H and S."""
    def canon(u):
        k = np.flatnonzero(np.abs(u.ravel()) > 1e-9)[0]
        ph = u.ravel()[k] / abs(u.ravel()[k])
        v = (u / ph).ravel()
        return np.rint(np.concatenate([v.real, v.imag]) * 1e6).astype(np.int64)

    seen = {canon(np.eye(2)).tobytes(): np.eye(2, dtype=complex)}
    frontier = [np.eye(2, dtype=complex)]
    while frontier:
        nxt = []
        for u in frontier:
            for g in (H, S):
                v = g @ u
                key = canon(v).tobytes()
                if key not in seen:
                    seen[key] = v
                    nxt.append(v)
        frontier = nxt
    return list(seen.values())


def markov_expected_steps(start, step):
    """
    Expected number of steps to absorption of a finite Markov chain.

    ``step(state)`` returns a list of (probability, next_state) pairs, or
    an empty list for absorbing states. Solves (I - Q) t = 1 exactly.
    """
    states, index = [], {}
    stack = [start]
    while stack:
        s = stack.pop()
        if s in index:
            continue
        index[s] = len(states)
        states.append(s)
        for _, t in step(s):
            stack.append(t)
    size = len(states)
    a = np.eye(size)
    b = np.zeros(size)
    for s in states:
        i = index[s]
        moves = step(s)
        if not moves:
            continue
        b[i] = 1.0
        for p, t in moves:
            a[i, index[t]] -= p
    return float(np.linalg.solve(a, b)[index[start]])


def binary_entropy_bits(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)
