"""
Pauli strings in symplectic GF(2) form, Bell-basis sign algebra and a GF(2)
linear solver.

An n-qubit Pauli string is stored as two n-bit integers ``x`` and ``z``. Bit
``k`` of each integer belongs to qubit ``k``, which is also the ``k``-th
letter of the text form (leftmost letter = qubit 0). Per qubit:

    (x, z) = (0, 0) -> I
             (1, 0) -> X
             (0, 1) -> Z
             (1, 1) -> Y

Strings are indexed by the 2n-bit integer ``x | (z << n)``. Enumerating
indices ``0 .. 4**n - 1`` therefore gives ``[I, X, Z, Y]`` at n = 1, and this
is the canonical enumeration order used everywhere in the package.

Bell outcomes are labelled by a Pauli string ``W``: the outcome on qubit pair
``k`` is the Bell state ``(I ⊗ W_k)|Ω⟩`` with ``|Ω⟩ = (|00⟩ + |11⟩)/√2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "LETTERS",
    "PauliString",
    "Gf2Matrix",
    "Gf2Solution",
    "BELL_SIGN_TABLE",
    "commutes",
    "symplectic_product",
    "bell_sign",
    "bell_product_sign",
    "pauli_product",
    "encode_index",
    "decode_index",
    "enumerate_paulis",
    "gf2_solve",
    "gf2_rank",
]

# letter <-> (x, z)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
LETTERS = ("I", "X", "Z", "Y")  # enumeration order of a single qubit


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """
    Hermitian n-qubit Pauli operator without phase.

    Parameters
    ----------
    n : int
        Number of qubits.
    x, z : int
        Bit masks of the X and Z components; bit ``k`` is qubit ``k``.
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        bound = 1 << self.n
        if not (0 <= self.x < bound and 0 <= self.z < bound):
            raise ValueError(f"bit masks do not fit in {self.n} qubits")

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        return encode_index(letters)

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        mask = (1 << n) - 1
        if not 0 <= index < (1 << (2 * n)):
            raise ValueError(f"index {index} out of range for n={n}")
        return cls(n, index & mask, index >> n)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @property
    def index(self) -> int:
        return self.x | (self.z << self.n)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> k) & 1 for k in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> k) & 1 for k in range(self.n))

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def y_weight(self) -> int:
        return _popcount(self.x & self.z)

    def letter(self, k: int) -> str:
        return _BITS_LETTER[((self.x >> k) & 1, (self.z >> k) & 1)]

    def letters(self) -> str:
        return decode_index(self)

    def __str__(self) -> str:
        return decode_index(self)

    def __mul__(self, other: "PauliString") -> "PauliString":
        # product up to phase
        _check_same_n(self, other)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def encode_index(letters: str) -> PauliString:
    """Parse a word over ``{I, X, Y, Z}`` into a :class:`PauliString`."""
    if not letters:
        raise ValueError("empty Pauli string")
    x = z = 0
    for k, ch in enumerate(letters):
        try:
            bx, bz = _LETTER_BITS[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli letter {ch!r} in {letters!r}") from None
        x |= bx << k
        z |= bz << k
    return PauliString(len(letters), x, z)


def decode_index(p: PauliString) -> str:
    return "".join(p.letter(k) for k in range(p.n))


def enumerate_paulis(n: int, include_identity: bool = True) -> Iterator[PauliString]:
    """Yield all n-qubit strings in index order."""
    start = 0 if include_identity else 1
    for idx in range(start, 1 << (2 * n)):
        yield PauliString.from_index(n, idx)


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """Symplectic form ``Σ_k p.x_k q.z_k + p.z_k q.x_k`` mod 2."""
    _check_same_n(p, q)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def pauli_product(p: PauliString, q: PauliString) -> tuple[PauliString, int]:
    """
    Product of two Hermitian Pauli strings with its phase.

    Returns
    -------
    (r, k) with ``p @ q == i**k * r`` and ``k`` in ``{0, 1, 2, 3}``.
    """
    _check_same_n(p, q)
    x1, z1, x2, z2 = p.x, p.z, q.x, q.z
    y1 = x1 & z1
    xo = x1 & ~z1
    zo = z1 & ~x1
    # per-qubit exponents: X*Y = iZ, Y*Z = iX, Z*X = iY and the reverse
    plus = _popcount(y1 & z2 & ~x2) + _popcount(xo & z2 & x2) + _popcount(zo & x2 & ~z2)
    minus = _popcount(y1 & x2 & ~z2) + _popcount(xo & z2 & ~x2) + _popcount(zo & x2 & z2)
    return PauliString(p.n, x1 ^ x2, z1 ^ z2), (plus - minus) % 4


# Eigenvalue of σ⊗σ on (I⊗W)|Ω⟩, indexed [σ][W] in enumeration order I, X, Z, Y.
# σ⊗σ (I⊗W)|Ω⟩ = (I ⊗ σ W σ^T)|Ω⟩ and σ W σ^T = ±W; the transpose flips the
# sign for σ = Y. The table is checked against dense matrices in the tests.
BELL_SIGN_TABLE = (
    (+1, +1, +1, +1),  # I
    (+1, +1, -1, -1),  # X
    (+1, -1, +1, -1),  # Z
    (-1, +1, +1, -1),  # Y
)
_LETTER_POS = {ch: i for i, ch in enumerate(LETTERS)}


def bell_sign(sigma: str, w: str) -> int:
    """Eigenvalue of ``sigma ⊗ sigma`` on the Bell state labelled ``w``."""
    try:
        return BELL_SIGN_TABLE[_LETTER_POS[sigma]][_LETTER_POS[w]]
    except KeyError:
        raise ValueError(f"invalid Pauli letters {sigma!r}, {w!r}") from None


def bell_product_sign(p: PauliString, w: PauliString) -> int:
    """
    Product over qubits of ``bell_sign(p_k, w_k)``.

    Equals ``(-1) ** (wt_Y(p) + <p, w>)`` where ``<., .>`` is the symplectic
    form; the tests compare this closed form with the letter table.
    """
    _check_same_n(p, w)
    parity = _popcount(p.x & p.z) + _popcount((p.x & w.z) ^ (p.z & w.x))
    return -1 if parity & 1 else 1


@dataclass(frozen=True)
class Gf2Matrix:
    """
    Dense bit matrix over GF(2), rows stored as integers.

    Bit ``j`` of ``data[i]`` is entry ``(i, j)``.
    """

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match storage")
        limit = 1 << self.cols
        if any(not 0 <= r < limit for r in self.data):
            raise ValueError("row wider than column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Gf2Matrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            data.append(sum((int(b) & 1) << j for j, b in enumerate(r)))
        return cls(len(rows), cols, tuple(data))

    @classmethod
    def identity(cls, size: int) -> "Gf2Matrix":
        return cls(size, size, tuple(1 << i for i in range(size)))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def matvec(self, v: int) -> int:
        """Product with a column vector, result packed with bit i = row i."""
        out = 0
        for i, r in enumerate(self.data):
            out |= (_popcount(r & v) & 1) << i
        return out


@dataclass(frozen=True)
class Gf2Solution:
    """
    Solution set ``{particular ^ span(nullspace)}`` of ``m v = rhs``.

    ``consistent`` is False (and ``particular`` None) when no solution exists.
    """

    consistent: bool
    particular: int | None
    nullspace: tuple[int, ...]

    def enumerate(self) -> Iterator[int]:
        if not self.consistent:
            return
        basis = self.nullspace
        for mask in range(1 << len(basis)):
            v = self.particular
            for j, b in enumerate(basis):
                if (mask >> j) & 1:
                    v ^= b
            yield v


def _rref(rows: list[int], rhs: list[int], cols: int):
    """In-place reduced row echelon form; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        sel = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        rhs[r], rhs[sel] = rhs[sel], rhs[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
                rhs[i] ^= rhs[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def gf2_solve(m: Gf2Matrix, rhs: int | Sequence[int]) -> Gf2Solution:
    """
    Solve ``m v = rhs`` over GF(2) by Gauss-Jordan elimination.

    Parameters
    ----------
    m : Gf2Matrix
    rhs : int or sequence of bits
        Right-hand side; as an int, bit ``i`` belongs to row ``i``.

    Returns
    -------
    Gf2Solution
        One solution plus a nullspace basis, or an inconsistent marker.
    """
    if not isinstance(rhs, int):
        rhs = list(rhs)
        if len(rhs) != m.rows:
            raise ValueError(f"rhs has {len(rhs)} entries, matrix has {m.rows} rows")
        rhs = sum((int(b) & 1) << i for i, b in enumerate(rhs))
    elif rhs >> m.rows:
        raise ValueError("rhs wider than row count")
    rows = list(m.data)
    b = [(rhs >> i) & 1 for i in range(m.rows)]
    pivots = _rref(rows, b, m.cols)
    rank = len(pivots)
    if any(b[i] for i in range(rank, m.rows)):
        return Gf2Solution(False, None, ())
    particular = 0
    for i, c in enumerate(pivots):
        if b[i]:
            particular |= 1 << c
    pivot_set = set(pivots)
    nullspace = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, c in enumerate(pivots):
            if (rows[i] >> f) & 1:
                v |= 1 << c
        nullspace.append(v)
    return Gf2Solution(True, particular, tuple(nullspace))


def gf2_rank(m: Gf2Matrix) -> int:
    return len(_rref(list(m.data), [0] * m.rows, m.cols))
