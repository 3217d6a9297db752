"""Dense GF(2) linear algebra on int bitsets, plus classical code primitives.

Words are plain Python ints with an explicit bit length; bit ``j`` (LSB first)
is column ``j``. Matrices are immutable lists of row bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

COSET_TABLE_MAX_CHECKS = 24


class DimensionError(ValueError):
    """Raised when word lengths or matrix shapes do not match."""


class TableSizeError(ValueError):
    """Raised when a lookup table would exceed the configured cap."""


def weight(word: int) -> int:
    """Hamming weight of a word."""
    return word.bit_count()


def parity(word: int) -> int:
    """Parity (mod-2 sum) of the bits of a word."""
    return word.bit_count() & 1


def dot(u: int, v: int) -> int:
    """Inner product of two words over GF(2)."""
    return (u & v).bit_count() & 1


def word_from_bits(bits: Sequence[int]) -> int:
    """Pack a bit sequence into an int (first entry = column 0 = LSB)."""
    w = 0
    for j, b in enumerate(bits):
        if b:
            w |= 1 << j
    return w


def word_from_string(s: str) -> int:
    """Parse a '0'/'1' string, leftmost character = column 0."""
    w = 0
    for j, c in enumerate(s.strip()):
        if c == "1":
            w |= 1 << j
        elif c != "0":
            raise ValueError(f"invalid bit character {c!r} at column {j + 1}")
    return w


def word_to_string(word: int, length: int) -> str:
    """Render a word as a '0'/'1' string, column 0 first."""
    return "".join("1" if (word >> j) & 1 else "0" for j in range(length))


def support(word: int) -> List[int]:
    """Sorted list of set bit positions."""
    out = []
    j = 0
    while word:
        if word & 1:
            out.append(j)
        word >>= 1
        j += 1
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Immutable binary matrix stored as row bitsets."""

    rows: Tuple[int, ...]
    ncols: int

    def __post_init__(self):
        for i, r in enumerate(self.rows):
            if r >> self.ncols:
                raise DimensionError(f"row {i + 1} does not fit in {self.ncols} columns")
        object.__setattr__(self, "rows", tuple(self.rows))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_bits(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("rows have unequal lengths")
        return cls(tuple(word_from_bits(r) for r in rows), ncols)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        stripped = [r.strip() for r in rows]
        ncols = len(stripped[0])
        for i, r in enumerate(stripped):
            if len(r) != ncols:
                raise DimensionError(f"row {i + 1} has length {len(r)}, expected {ncols}")
        return cls(tuple(word_from_string(r) for r in stripped), ncols)

    def column(self, j: int) -> int:
        """Column j as a bitset over row indices."""
        col = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                col |= 1 << i
        return col

    def transpose(self) -> "BitMatrix":
        return BitMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def mul_vec(self, coeffs: int) -> int:
        """Linear combination of rows selected by the coefficient bitset."""
        acc = 0
        for i, r in enumerate(self.rows):
            if (coeffs >> i) & 1:
                acc ^= r
        return acc

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Matrix product self @ other over GF(2)."""
        if self.ncols != other.nrows:
            raise DimensionError("inner dimensions do not match")
        out = []
        for r in self.rows:
            out.append(other.mul_vec(r))
        return BitMatrix(tuple(out), other.ncols)

    def to_strings(self) -> List[str]:
        return [word_to_string(r, self.ncols) for r in self.rows]


def rank(rows: Sequence[int], ncols: int) -> int:
    """Rank over GF(2) via Gaussian elimination."""
    work = list(rows)
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(work)):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and ((work[i] >> col) & 1):
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return r


def in_row_space(vec: int, rows: Sequence[int], ncols: int) -> bool:
    """Check membership of vec in the GF(2) row space of rows."""
    base = rank(rows, ncols)
    return rank(list(rows) + [vec], ncols) == base


def kernel_basis(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of the right kernel {x : for all rows r, <r, x> = 0}."""
    work = list(rows)
    pivots = []  # (row index in reduced form, pivot column)
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(work)):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and ((work[i] >> col) & 1):
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = 1 << fc
        for i, pc in enumerate(pivots):
            if (work[i] >> fc) & 1:
                vec |= 1 << pc
        basis.append(vec)
    return basis


def syndrome(H: BitMatrix, v: int) -> int:
    """Syndrome v H^T as a word of length H.nrows."""
    if v >> H.ncols:
        raise DimensionError(f"vector does not fit in {H.ncols} columns")
    s = 0
    for i, h in enumerate(H.rows):
        if dot(h, v):
            s |= 1 << i
    return s


@dataclass(frozen=True)
class LinearCode:
    """Binary [n, k, d] linear code given by generator and parity-check matrices."""

    G: BitMatrix
    H: BitMatrix
    d: Optional[int] = None

    def __post_init__(self):
        if self.G.ncols != self.H.ncols:
            raise DimensionError("G and H lengths differ")
        for g in self.G.rows:
            if syndrome(self.H, g) != 0:
                raise ValueError("G H^T != 0")
        if rank(self.G.rows, self.n) != self.k:
            raise ValueError("generator matrix is rank deficient")
        if rank(self.H.rows, self.n) != self.n - self.k:
            raise ValueError("parity-check matrix rank != n - k")
        if self.d is not None and min_distance(self) != self.d:
            raise ValueError(f"declared distance {self.d} does not match the code")

    @property
    def n(self) -> int:
        return self.G.ncols

    @property
    def k(self) -> int:
        return self.G.nrows

    @property
    def r(self) -> int:
        return self.H.nrows

    @classmethod
    def from_parity_checks(cls, H: BitMatrix, d: Optional[int] = None) -> "LinearCode":
        G = BitMatrix(tuple(kernel_basis(H.rows, H.ncols)), H.ncols)
        return cls(G, H, d)

    @classmethod
    def from_generator(cls, G: BitMatrix, d: Optional[int] = None) -> "LinearCode":
        H = BitMatrix(tuple(kernel_basis(G.rows, G.ncols)), G.ncols)
        return cls(G, H, d)

    def codewords(self) -> Iterator[int]:
        """All 2^k codewords (Gray-free plain enumeration; desk-scale k)."""
        for mask in range(1 << self.k):
            yield self.G.mul_vec(mask)

    def encode(self, message: int) -> int:
        return self.G.mul_vec(message)


def min_distance(code: LinearCode) -> int:
    """Exact minimum distance by enumeration of all nonzero codewords."""
    if code.k == 0:
        raise ValueError("minimum distance undefined for a dimension-0 code")
    # Gray-code walk: one row XOR per codeword.
    best = code.n + 1
    word = 0
    prev_mask = 0
    for i in range(1, 1 << code.k):
        gray = i ^ (i >> 1)
        word ^= code.G.rows[(gray ^ prev_mask).bit_length() - 1]
        prev_mask = gray
        w = word.bit_count()
        if w < best:
            best = w
    return best


@dataclass(frozen=True)
class CosetTable:
    """Per-syndrome minimum-weight coset leaders with uniqueness flags."""

    H: BitMatrix
    leaders: Tuple[int, ...]
    ties: Tuple[bool, ...]
    reachable: Tuple[bool, ...]

    def leader(self, s: int) -> int:
        if not self.reachable[s]:
            raise ValueError(f"syndrome {s:b} is not reachable (rank-deficient H)")
        return self.leaders[s]

    def tie(self, s: int) -> bool:
        if not self.reachable[s]:
            raise ValueError(f"syndrome {s:b} is not reachable (rank-deficient H)")
        return self.ties[s]


def build_coset_table(H: BitMatrix, max_checks: int = COSET_TABLE_MAX_CHECKS) -> CosetTable:
    """Build the full coset-leader table for H.

    Errors are enumerated by weight, columns in lexicographic support order, so
    the leader for each syndrome is the lexicographically-first minimum-weight
    error. A tie flag marks syndromes whose minimum-weight coset element is not
    unique.
    """
    r, n = H.nrows, H.ncols
    if r > max_checks:
        raise TableSizeError(f"{r} checks exceed the coset-table cap of {max_checks}")
    size = 1 << r
    leaders = [0] * size
    lead_weight = [-1] * size
    ties = [False] * size
    found = 1  # syndrome 0 -> leader 0
    lead_weight[0] = 0
    cols = [syndrome(H, 1 << j) for j in range(n)]
    for w in range(1, n + 1):
        for supp in combinations(range(n), w):
            s = 0
            for j in supp:
                s ^= cols[j]
            if lead_weight[s] < 0:
                err = 0
                for j in supp:
                    err |= 1 << j
                leaders[s] = err
                lead_weight[s] = w
                found += 1
            elif lead_weight[s] == w:
                # Another error at the leader's weight: non-unique minimum.
                ties[s] = True
        if found == size:
            break
    reachable = tuple(lw >= 0 for lw in lead_weight)
    return CosetTable(H, tuple(leaders), tuple(ties), reachable)


def sample_row_space(H: BitMatrix, rng: np.random.Generator) -> int:
    """Uniform random element of the row space of H."""
    bits = rng.integers(0, 2, size=H.nrows)
    coeffs = word_from_bits([int(b) for b in bits])
    return H.mul_vec(coeffs)


def parse_matrix_text(text: str, source: str = "<string>") -> BitMatrix:
    """Parse the matrix text format: '0'/'1' rows, '#' comments, equal lengths."""
    rows: List[int] = []
    ncols = None
    row_lines: List[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for col, c in enumerate(stripped, start=1):
            if c not in "01":
                raise ValueError(
                    f"{source}:{lineno}:{col}: invalid character {c!r} (expected '0' or '1')"
                )
        if ncols is None:
            ncols = len(stripped)
        elif len(stripped) != ncols:
            raise ValueError(
                f"{source}:{lineno}: row length {len(stripped)} differs from {ncols}"
            )
        rows.append(word_from_string(stripped))
        row_lines.append(lineno)
    if ncols is None:
        raise ValueError(f"{source}: no matrix rows found")
    return BitMatrix(tuple(rows), ncols)


def format_matrix_text(M: BitMatrix, header_lines: Sequence[str] = ()) -> str:
    """Render a matrix in the text format, optionally with '#' header lines."""
    lines = [f"# {h}" if not h.startswith("#") else h for h in header_lines]
    lines.extend(M.to_strings())
    return "\n".join(lines) + "\n"
