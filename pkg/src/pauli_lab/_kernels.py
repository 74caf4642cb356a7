"""
Compiled inner loops for Clifford sampling and classical-shadow snapshots.

Pauli strings are packed into one int64 as ``x | (z << n)``, so these kernels
require ``n <= 31``. Randomness comes from a ``numpy.random.Generator``
passed in by the caller, which keeps every stream explicit and seedable.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_KERNEL_QUBITS = 31


@njit(cache=True)
def popcount(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c


@njit(cache=True)
def symp(a, b, n):
    """Symplectic form of two packed Pauli strings."""
    mask = (np.int64(1) << n) - 1
    t = ((a & mask) & (b >> n)) ^ ((a >> n) & (b & mask))
    return popcount(t) & 1


@njit(cache=True)
def product_phase(a, b, n):
    """Exponent k (mod 4) with P(a) P(b) = i**k P(a ^ b)."""
    mask = (np.int64(1) << n) - 1
    x1 = a & mask
    z1 = a >> n
    x2 = b & mask
    z2 = b >> n
    y1 = x1 & z1
    xo = x1 & ~z1
    zo = z1 & ~x1
    plus = popcount(y1 & z2 & ~x2) + popcount(xo & z2 & x2) + popcount(zo & x2 & ~z2)
    minus = popcount(y1 & x2 & ~z2) + popcount(xo & z2 & ~x2) + popcount(zo & x2 & z2)
    return (plus - minus) % 4


@njit(cache=True)
def _combine(basis, coeffs, size):
    v = np.int64(0)
    for j in range(size):
        if (coeffs >> j) & 1:
            v ^= basis[j]
    return v


@njit(cache=True)
def random_symplectic(n, gen, out):
    """
    Fill ``out`` with the images of X_0..X_{n-1}, Z_0..Z_{n-1} under a
    uniformly random symplectic map.

    Qubit by qubit: the image v of X_i is uniform over the nonzero vectors of
    the current symplectic complement, the image w of Z_i is uniform over the
    vectors of that complement with <v, w> = 1, and the complement shrinks to
    {v, w}^perp. Each symplectic map arises from exactly one sequence of
    choices, and every choice count depends only on the remaining dimension,
    so the output is exactly uniform.
    """
    basis = np.empty(2 * n, dtype=np.int64)
    for j in range(n):
        basis[2 * j] = np.int64(1) << j
        basis[2 * j + 1] = np.int64(1) << (n + j)
    work = np.empty(2 * n, dtype=np.int64)
    m = n
    for i in range(n):
        size = 2 * m
        top = np.int64(1) << size
        c = np.int64(0)
        while c == 0:
            c = gen.integers(0, top)
        v = _combine(basis, c, size)
        d = gen.integers(0, top)
        w = _combine(basis, d, size)
        if symp(v, w, n) == 0:
            # toggle one basis partner of a vector present in v: a bijection
            # between {<v,w> = 0} and {<v,w> = 1}
            for j in range(m):
                if (c >> (2 * j)) & 1:
                    w ^= basis[2 * j + 1]
                    break
                if (c >> (2 * j + 1)) & 1:
                    w ^= basis[2 * j]
                    break
        out[i] = v
        out[n + i] = w
        # project the old basis onto {v, w}^perp
        cnt = 0
        for j in range(size):
            u = basis[j]
            if symp(u, w, n):
                u ^= v
            if symp(basis[j], v, n):
                u ^= w
            if u != 0:
                work[cnt] = u
                cnt += 1
        # symplectic Gram-Schmidt back into hyperbolic pairs
        nb = 0
        while nb < 2 * (m - 1):
            a = work[0]
            partner = -1
            for j in range(1, cnt):
                if symp(a, work[j], n):
                    partner = j
                    break
            b = work[partner]
            basis[nb] = a
            basis[nb + 1] = b
            nb += 2
            k = 0
            for j in range(1, cnt):
                if j == partner:
                    continue
                u = work[j]
                if symp(u, b, n):
                    u ^= a
                if symp(work[j], a, n):
                    u ^= b
                if u != 0:
                    work[k] = u
                    k += 1
            cnt = k
        m -= 1


@njit(cache=True)
def enumerate_group(n, gens, signs, z, out_idx, out_val):
    """
    List the stabilizer group of a state by Gray code.

    The state is stabilized by ``(-1)**(signs_k + z_k) P(gens_k)``. Writes the
    2**n - 1 non-identity elements P(index) and their expectation values
    (+1 or -1) into ``out_idx`` / ``out_val``.
    """
    cur = np.int64(0)
    ph = 0
    par = 0
    total = np.int64(1) << n
    for g in range(1, total):
        j = 0
        while not (g >> j) & 1:
            j += 1
        # cur_op = i**ph P(cur) is the product of the selected generators
        ph = (ph + 2 * signs[j] + product_phase(cur, gens[j], n)) % 4
        cur ^= gens[j]
        par ^= (z >> j) & 1
        val = 1 if ph == 0 else -1
        if par:
            val = -val
        out_idx[g - 1] = cur
        out_val[g - 1] = val


@njit(cache=True)
def shadow_snapshot(n, p, s, gen, out_idx, out_val):
    """
    One random-Clifford snapshot of rho = (I + s P(p)) / 2**n.

    A uniformly random Clifford D is drawn and the measurement basis is taken
    as C = D^-1, which is again uniform. The post-measurement state
    C^dagger|z> = D|z> is stabilized by (-1)**z_k D Z_k D^dagger, so the group
    is read directly off D's Z-images. z is drawn from the Born rule
    Pr(z) = (1 + s <D z|P|D z>) / 2**n.
    """
    img = np.empty(2 * n, dtype=np.int64)
    random_symplectic(n, gen, img)
    signs = np.empty(n, dtype=np.int64)
    for k in range(n):
        signs[k] = gen.integers(0, 2)
    gens = img[n:]
    z = gen.integers(0, np.int64(1) << n)
    inside = True
    for k in range(n):
        if symp(p, gens[k], n):
            inside = False
            break
    if inside:
        t = np.int64(0)
        cur = np.int64(0)
        ph = 0
        for k in range(n):
            if symp(p, img[k], n):
                t |= np.int64(1) << k
                ph = (ph + 2 * signs[k] + product_phase(cur, gens[k], n)) % 4
                cur ^= gens[k]
        sigma = 1 if ph == 0 else -1
        want = s * sigma
        got = -1 if popcount(t & z) & 1 else 1
        if got != want:
            z ^= t & (-t)
    enumerate_group(n, gens, signs, z, out_idx, out_val)
    return z


@njit(cache=True)
def shadow_batch(n, p, s, count, gen, out_idx, out_val):
    """``count`` snapshots into rows of ``out_idx`` / ``out_val``."""
    for r in range(count):
        shadow_snapshot(n, p, s, gen, out_idx[r], out_val[r])
