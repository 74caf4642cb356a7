"""
Exact samplers and expectation oracles for the learnable state families.

Three families are supported:

* :class:`PauliMixedState` -- ``(I + s P) / 2**n`` for a non-identity P.
* :class:`StabilizerProductState` -- tensor products of the six single-qubit
  stabilizer states.
* :class:`DenseState` -- an explicit density matrix for small-n checks.

Dense matrices use the Kronecker order in which qubit 0 is the leftmost
factor, so qubit ``k`` is bit ``n - 1 - k`` of a computational basis index.
Measurement outcomes ``z`` are returned as integers with bit ``k`` = qubit
``k``, matching :mod:`pauli_lab.pauli_core`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _kernels
from .pauli_core import PauliString, bell_sign, encode_index, pauli_product

__all__ = [
    "PauliMixedState",
    "StabilizerProductState",
    "DenseState",
    "BellOutcome",
    "CliffordTableau",
    "StateOracle",
    "PRODUCT_LABELS",
    "DENSE_MAX_QUBITS",
    "DENSE_MAX_DIM",
    "expectation",
    "measure_pauli",
    "sample_bell_pairs",
    "sample_bell_batch",
    "random_clifford",
    "conjugate_pauli",
    "measure_in_clifford_basis",
    "pauli_matrix",
    "tableau_unitary",
    "dense_bell_distribution",
    "parse_state",
    "format_state",
]

DENSE_MAX_QUBITS = 6
DENSE_MAX_DIM = 4096

# a Bell outcome is the per-qubit label W of (I ⊗ W)|Ω>
BellOutcome = PauliString

PRODUCT_LABELS = ("Z+", "Z-", "X+", "X-", "Y+", "Y-")

_PAULI_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliMixedState:
    """rho = (I + sign * pauli) / 2**n."""

    pauli: PauliString
    sign: int = 1

    def __post_init__(self):
        if self.pauli.is_identity():
            raise ValueError("hidden Pauli must not be the identity")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def n(self) -> int:
        return self.pauli.n


@dataclass(frozen=True)
class StabilizerProductState:
    """Product of single-qubit stabilizer states, labels like ``"Z+"``."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("product state needs at least one qubit")
        bad = [lab for lab in labels if lab not in PRODUCT_LABELS]
        if bad:
            raise ValueError(f"invalid stabilizer labels {bad}")

    @property
    def n(self) -> int:
        return len(self.labels)

    def axis(self, k: int) -> str:
        return self.labels[k][0]

    def sign(self, k: int) -> int:
        return 1 if self.labels[k][1] == "+" else -1

    def axes_codes(self) -> np.ndarray:
        """Per-qubit axis as 1 (X), 2 (Z) or 3 (Y), the x + 2z letter code."""
        code = {"X": 1, "Z": 2, "Y": 3}
        return np.array([code[lab[0]] for lab in self.labels], dtype=np.int8)

    def signs_array(self) -> np.ndarray:
        return np.array([1 if lab[1] == "+" else -1 for lab in self.labels], dtype=np.int8)


@dataclass(frozen=True, eq=False)
class DenseState:
    """Explicit density matrix; validated on construction."""

    matrix: np.ndarray
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        dim = m.shape[0]
        if m.ndim != 2 or m.shape[1] != dim or dim < 2 or dim & (dim - 1):
            raise ValueError(f"density matrix must be square with power-of-two size, got {m.shape}")
        if dim > 1 << DENSE_MAX_QUBITS:
            raise ValueError(f"dense states are capped at {DENSE_MAX_QUBITS} qubits")
        if abs(np.trace(m) - 1) > self.tol:
            raise ValueError("trace is not 1")
        if np.abs(m - m.conj().T).max() > self.tol:
            raise ValueError("matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min() < -self.tol:
            raise ValueError("matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    @classmethod
    def from_vector(cls, psi) -> "DenseState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


LearnableState = Union[PauliMixedState, StabilizerProductState, DenseState]


# dense helpers ------------------------------------------------------------

def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense 2**n x 2**n matrix of a Pauli string (qubit 0 leftmost)."""
    if p.n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense Pauli matrices are capped at {DENSE_MAX_QUBITS} qubits")
    m = np.ones((1, 1), dtype=complex)
    for k in range(p.n):
        m = np.kron(m, _PAULI_2x2[p.letter(k)])
    return m


def _bits_to_basis(z: int, n: int) -> int:
    out = 0
    for k in range(n):
        if (z >> k) & 1:
            out |= 1 << (n - 1 - k)
    return out


def _basis_to_bits(b: int, n: int) -> int:
    return _bits_to_basis(b, n)  # bit reversal is an involution


def _product_state_matrix(state: StabilizerProductState) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for lab in state.labels:
        sgn = 1 if lab[1] == "+" else -1
        m = np.kron(m, (np.eye(2) + sgn * _PAULI_2x2[lab[0]]) / 2)
    return m


def to_dense(state: LearnableState) -> DenseState:
    if isinstance(state, DenseState):
        return state
    if isinstance(state, PauliMixedState):
        dim = 1 << state.n
        return DenseState((np.eye(dim) + state.sign * pauli_matrix(state.pauli)) / dim)
    return DenseState(_product_state_matrix(state))


def _check_n(state, p: PauliString) -> None:
    if state.n != p.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, Pauli has {p.n}")


# expectation values and single-copy measurements --------------------------

def expectation(state: LearnableState, p: PauliString) -> float:
    """Exact Tr(P rho)."""
    _check_n(state, p)
    if p.is_identity():
        return 1.0
    if isinstance(state, PauliMixedState):
        return float(state.sign) if p == state.pauli else 0.0
    if isinstance(state, StabilizerProductState):
        val = 1
        for k, lab in enumerate(state.labels):
            letter = p.letter(k)
            if letter == "I":
                continue
            if letter != lab[0]:
                return 0.0
            if lab[1] == "-":
                val = -val
        return float(val)
    return float(np.real(np.trace(pauli_matrix(p) @ state.matrix)))


def measure_pauli(state: LearnableState, p: PauliString, rng: np.random.Generator) -> int:
    """Single-copy ±1 outcome with Pr[+1] = (1 + Tr(P rho)) / 2."""
    e = expectation(state, p)
    if e == 1.0:
        return 1
    if e == -1.0:
        return -1
    return 1 if rng.random() < (1.0 + e) / 2.0 else -1


# Bell sampling ------------------------------------------------------------

def dense_bell_distribution(state: DenseState) -> np.ndarray:
    """
    Exact distribution of the Bell outcome W on two copies of a dense state.

    Uses Pr(W) = 2**-n Tr(rho^T W^dagger rho W), which follows from writing
    the outcome vector as (I ⊗ W) applied to the maximally entangled state
    between the copies. Indexed by the Pauli index of W.
    """
    n = state.n
    if (1 << (2 * n)) > DENSE_MAX_DIM:
        raise ValueError(f"two-copy dimension exceeds the dense cap of {DENSE_MAX_DIM}")
    rho = state.matrix
    out = np.empty(1 << (2 * n))
    for idx in range(out.size):
        w = pauli_matrix(PauliString.from_index(n, idx))
        out[idx] = np.real(np.trace(rho.T @ w.conj().T @ rho @ w)) / (1 << n)
    return out


def _flip_vector(p: PauliString) -> int:
    """Index of a weight-one Pauli u with <p, u> = 1."""
    low = (p.x | p.z) & -(p.x | p.z)
    k = low.bit_length() - 1
    if (p.x >> k) & 1:
        return 1 << (p.n + k)  # Z_k
    return 1 << k  # X_k


_BELL_ALLOWED = {}
for _axis in "XYZ":
    _BELL_ALLOWED[_axis] = tuple(w for w in "IXZY" if bell_sign(_axis, w) == 1)


def sample_bell_pairs(state: LearnableState, rng: np.random.Generator) -> BellOutcome:
    """
    Measure every qubit pair of two copies in the Bell basis.

    For ``(I + sP)/2**n`` the outcome is uniform over the half of all W with
    ``bell_product_sign(P, W) = +1`` for either sign, because P ⊗ P has
    expectation s**2 = 1 on two copies. W is drawn uniformly and, when on
    the wrong side, moved across by a fixed weight-one flip anticommuting
    with P.
    Product states factor per qubit into the two labels W with
    ``bell_sign(axis, W) = +1``.
    """
    n = state.n
    if isinstance(state, PauliMixedState):
        p = state.pauli
        idx = int(rng.integers(0, 1 << (2 * n))) if n < 31 else _random_bits(rng, 2 * n)
        w = PauliString.from_index(n, idx)
        parity = (bin(p.x & p.z).count("1") + bin((p.x & w.z) ^ (p.z & w.x)).count("1")) & 1
        if parity:
            w = PauliString.from_index(n, idx ^ _flip_vector(p))
        return w
    if isinstance(state, StabilizerProductState):
        picks = rng.integers(0, 2, size=n)
        return encode_index("".join(_BELL_ALLOWED[state.axis(k)][picks[k]] for k in range(n)))
    probs = dense_bell_distribution(state)
    idx = int(rng.choice(probs.size, p=probs / probs.sum()))
    return PauliString.from_index(n, idx)


def _random_bits(rng: np.random.Generator, nbits: int) -> int:
    words = rng.integers(0, 1 << 32, size=(nbits + 31) // 32, dtype=np.uint64)
    v = 0
    for i, wd in enumerate(words):
        v |= int(wd) << (32 * i)
    return v & ((1 << nbits) - 1)


_CODE_OF_LETTER = {"I": 0, "X": 1, "Z": 2, "Y": 3}


def sample_bell_batch(state: LearnableState, count: int, rng: np.random.Generator):
    """
    Vectorised Bell sampling.

    Returns
    -------
    For ``PauliMixedState`` (n <= 63): arrays ``(wx, wz)`` of packed uint64
    bit masks, one entry per round. For ``StabilizerProductState``: an int8
    array of shape ``(count, n)`` holding per-qubit letter codes ``x + 2z``.
    """
    n = state.n
    if isinstance(state, PauliMixedState):
        if n > 63:
            raise ValueError("batched Bell sampling packs each half into 64 bits")
        wx = _random_words(rng, n, count)
        wz = _random_words(rng, n, count)
        p = state.pauli
        px, pz = np.uint64(p.x), np.uint64(p.z)
        parity = (np.bitwise_count((px & wz) ^ (pz & wx)) + p.y_weight()) & 1
        wrong = parity.astype(bool)
        u = _flip_vector(p)
        ux, uz = np.uint64(u & ((1 << n) - 1)), np.uint64(u >> n)
        wx = np.where(wrong, wx ^ ux, wx)
        wz = np.where(wrong, wz ^ uz, wz)
        return wx, wz
    if isinstance(state, StabilizerProductState):
        table = np.zeros((4, 2), dtype=np.int8)
        for axis, code in (("X", 1), ("Z", 2), ("Y", 3)):
            table[code] = [_CODE_OF_LETTER[w] for w in _BELL_ALLOWED[axis]]
        picks = rng.integers(0, 2, size=(count, n))
        return table[state.axes_codes()[None, :], picks]
    raise TypeError("batched Bell sampling supports the mixed and product families")


def _random_words(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    if n == 64:
        return rng.integers(0, np.iinfo(np.uint64).max, size=count, dtype=np.uint64, endpoint=True)
    return rng.integers(0, 1 << n, size=count, dtype=np.uint64)


# Clifford tableaux --------------------------------------------------------

@dataclass(frozen=True)
class CliffordTableau:
    """
    A Clifford unitary C modulo global phase, stored by its action on the
    Pauli generators.

    ``images[i]`` is the Pauli index of C G_i C^dagger, where G_i = X_i for
    i < n and Z_{i-n} otherwise; bit i of ``phases`` is set when that image
    carries a minus sign.
    """

    n: int
    images: tuple[int, ...]
    phases: int = 0

    def __post_init__(self):
        if len(self.images) != 2 * self.n:
            raise ValueError("need 2n generator images")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(n, tuple(1 << i for i in range(2 * n)), 0)

    @classmethod
    def hadamard(cls, n: int, k: int) -> "CliffordTableau":
        imgs = list(cls.identity(n).images)
        imgs[k], imgs[n + k] = imgs[n + k], imgs[k]
        return cls(n, tuple(imgs), 0)

    @classmethod
    def phase_gate(cls, n: int, k: int) -> "CliffordTableau":
        """S = diag(1, i): X -> Y, Z -> Z."""
        imgs = list(cls.identity(n).images)
        imgs[k] = (1 << k) | (1 << (n + k))
        return cls(n, tuple(imgs), 0)

    def image(self, i: int) -> tuple[PauliString, int]:
        sign = -1 if (self.phases >> i) & 1 else 1
        return PauliString.from_index(self.n, self.images[i]), sign

    def symplectic_matrix(self) -> np.ndarray:
        """Row i holds the image of generator i as [x bits | z bits]."""
        n = self.n
        m = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        for i, v in enumerate(self.images):
            for j in range(2 * n):
                m[i, j] = (v >> j) & 1
        return m

    def is_symplectic(self) -> bool:
        n = self.n
        for i in range(2 * n):
            for j in range(2 * n):
                a = PauliString.from_index(n, self.images[i])
                b = PauliString.from_index(n, self.images[j])
                want = 1 if abs(i - j) == n else 0
                if bin((a.x & b.z) ^ (a.z & b.x)).count("1") & 1 != want:
                    return False
        return True

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of ``other ∘ self`` (apply self first, then other)."""
        n = self.n
        imgs, phases = [], 0
        for i in range(2 * n):
            p, s = self.image(i)
            q, s2 = conjugate_pauli(other, p)
            imgs.append(q.index)
            if s * s2 < 0:
                phases |= 1 << i
        return CliffordTableau(n, tuple(imgs), phases)

    def inverse(self) -> "CliffordTableau":
        n = self.n
        # invert the symplectic map over GF(2): augment rows with the identity
        rows = [(self.images[i], 1 << i) for i in range(2 * n)]
        width = 2 * n
        r = 0
        for c in range(width):
            sel = next(i for i in range(r, width) if (rows[i][0] >> c) & 1)
            rows[r], rows[sel] = rows[sel], rows[r]
            for i in range(width):
                if i != r and (rows[i][0] >> c) & 1:
                    rows[i] = (rows[i][0] ^ rows[r][0], rows[i][1] ^ rows[r][1])
            r += 1
        # rows[c] = (e_c, combination of generators whose images XOR to e_c);
        # M^-1 e_c is that combination read as a Pauli index
        imgs, phases = [], 0
        for c in range(width):
            pre = PauliString.from_index(n, rows[c][1])
            q, s = conjugate_pauli(self, pre)
            assert q.index == 1 << c
            imgs.append(pre.index)
            if s < 0:
                phases |= 1 << c
        return CliffordTableau(n, tuple(imgs), phases)


def random_clifford(n: int, rng: np.random.Generator) -> CliffordTableau:
    """
    Uniformly random n-qubit Clifford (modulo global phase).

    A uniformly random symplectic map is combined with independent uniform
    sign bits on the 2n generator images; Cliffords modulo phase are in
    bijection with these pairs.
    """
    if not 1 <= n <= _kernels.MAX_KERNEL_QUBITS:
        raise ValueError(f"random Cliffords are supported for 1 <= n <= {_kernels.MAX_KERNEL_QUBITS}")
    out = np.empty(2 * n, dtype=np.int64)
    _kernels.random_symplectic(n, rng, out)
    phases = int(rng.integers(0, 1 << (2 * n)))
    return CliffordTableau(n, tuple(int(v) for v in out), phases)


def conjugate_pauli(t: CliffordTableau, p: PauliString) -> tuple[PauliString, int]:
    """Return (Q, s) with C P C^dagger = s Q."""
    if t.n != p.n:
        raise ValueError(f"dimension mismatch: tableau {t.n}, Pauli {p.n}")
    n = p.n
    # P = i**wtY(P) * prod_k X_k**x_k * prod_k Z_k**z_k
    acc = PauliString.identity(n)
    ph = p.y_weight()
    for k in range(n):
        if (p.x >> k) & 1:
            img, s = t.image(k)
            acc, e = pauli_product(acc, img)
            ph += e + (2 if s < 0 else 0)
    for k in range(n):
        if (p.z >> k) & 1:
            img, s = t.image(n + k)
            acc, e = pauli_product(acc, img)
            ph += e + (2 if s < 0 else 0)
    ph %= 4
    if ph % 2:
        raise AssertionError("tableau is not a valid Clifford (imaginary conjugate)")
    return acc, (1 if ph == 0 else -1)


def tableau_unitary(t: CliffordTableau) -> np.ndarray:
    """
    Dense unitary (up to global phase) of a tableau, for small-n checks.

    C|0> is the joint +1 eigenvector of the signed Z-images, and
    C|b> = (prod over set bits of the X-images) C|0>.
    """
    n = t.n
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense unitaries are capped at {DENSE_MAX_QUBITS} qubits")
    dim = 1 << n
    proj = np.eye(dim, dtype=complex)
    for k in range(n):
        img, s = t.image(n + k)
        proj = proj @ (np.eye(dim) + s * pauli_matrix(img)) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    psi0 = proj[:, col] / np.linalg.norm(proj[:, col])
    xs = []
    for k in range(n):
        img, s = t.image(k)
        xs.append(s * pauli_matrix(img))
    u = np.empty((dim, dim), dtype=complex)
    for b in range(dim):
        z = _basis_to_bits(b, n)
        v = psi0
        for k in range(n):
            if (z >> k) & 1:
                v = xs[k] @ v
        u[:, b] = v
    return u


def measure_in_clifford_basis(state: LearnableState, t: CliffordTableau,
                              rng: np.random.Generator) -> int:
    """
    Apply C and measure every qubit; returns z with bit k = qubit k.

    Pr(z) = <z| C rho C^dagger |z>.
    """
    n = state.n
    if t.n != n:
        raise ValueError(f"dimension mismatch: tableau {t.n}, state {n}")
    if isinstance(state, PauliMixedState):
        q, s2 = conjugate_pauli(t, state.pauli)
        z = int(rng.integers(0, 1 << n)) if n < 62 else _random_bits(rng, n)
        if q.x:
            return z
        want = state.sign * s2
        if (1 - 2 * (bin(q.z & z).count("1") & 1)) != want:
            z ^= q.z & -q.z
        return z
    dense = to_dense(state)
    u = tableau_unitary(t)
    probs = np.real(np.einsum("ij,jk,ik->i", u, dense.matrix, u.conj()))
    probs = np.clip(probs, 0, None)
    b = int(rng.choice(probs.size, p=probs / probs.sum()))
    return _basis_to_bits(b, n)


# copy ledger ---------------------------------------------------------------

class StateOracle:
    """
    Access point through which strategies consume copies of a state.

    Every sampler call is charged to ``copies`` (a Bell round costs two), so
    strategies cannot under-report their sample usage.
    """

    def __init__(self, state: LearnableState, rng: np.random.Generator):
        self.state = state
        self.rng = rng
        self.copies = 0
        self.calls = 0

    @property
    def n(self) -> int:
        return self.state.n

    def measure_pauli(self, p: PauliString) -> int:
        self.copies += 1
        self.calls += 1
        return measure_pauli(self.state, p, self.rng)

    def measure_letter(self, k: int, letter: str) -> int:
        """Single-qubit Pauli measurement on qubit k of a product state."""
        self.copies += 1
        self.calls += 1
        st = self.state
        if isinstance(st, StabilizerProductState):
            if st.axis(k) == letter:
                return st.sign(k)
            return 1 if self.rng.random() < 0.5 else -1
        return measure_pauli(st, _weight_one(st.n, k, letter), self.rng)

    def measure_basis(self, letter: str) -> np.ndarray:
        """Measure every qubit of one copy of a product state in the same basis."""
        code = {"X": 1, "Z": 2, "Y": 3}[letter]
        return self.measure_axes(np.full(self.n, code, dtype=np.int8))

    def measure_axes(self, codes: np.ndarray) -> np.ndarray:
        """
        One copy of a product state, qubit k measured along letter code
        ``codes[k]`` (1 = X, 2 = Z, 3 = Y).
        """
        self.copies += 1
        self.calls += 1
        st = self.state
        if not isinstance(st, StabilizerProductState):
            raise TypeError("per-qubit basis measurements are implemented for product states")
        coin = 1 - 2 * self.rng.integers(0, 2, size=st.n).astype(np.int8)
        return np.where(st.axes_codes() == codes, st.signs_array(), coin)

    def bell_pair(self) -> BellOutcome:
        self.copies += 2
        self.calls += 1
        return sample_bell_pairs(self.state, self.rng)

    def bell_batch(self, count: int):
        self.copies += 2 * count
        self.calls += count
        return sample_bell_batch(self.state, count, self.rng)

    def clifford_snapshot(self, t: CliffordTableau) -> int:
        self.copies += 1
        self.calls += 1
        return measure_in_clifford_basis(self.state, t, self.rng)

    def charge(self, copies: int) -> None:
        """Charge copies consumed by a modelled multi-copy measurement."""
        self.copies += copies
        self.calls += 1


def _weight_one(n: int, k: int, letter: str) -> PauliString:
    bx, bz = {"X": (1, 0), "Z": (0, 1), "Y": (1, 1)}[letter]
    return PauliString(n, bx << k, bz << k)


# text descriptors --------------------------------------------------------

def parse_state(text: str) -> LearnableState:
    """Parse ``mixed:+XZ`` or ``product:Z+,X-``."""
    kind, _, body = text.partition(":")
    if kind == "mixed":
        if len(body) < 2 or body[0] not in "+-":
            raise ValueError(f"mixed state descriptor needs a sign and letters: {text!r}")
        return PauliMixedState(encode_index(body[1:]), 1 if body[0] == "+" else -1)
    if kind == "product":
        return StabilizerProductState(tuple(s.strip() for s in body.split(",")))
    raise ValueError(f"unknown state descriptor {text!r}")


def format_state(state: LearnableState) -> str:
    if isinstance(state, PauliMixedState):
        return f"mixed:{'+' if state.sign > 0 else '-'}{state.pauli}"
    if isinstance(state, StabilizerProductState):
        return "product:" + ",".join(state.labels)
    raise TypeError("dense states have no text descriptor")
