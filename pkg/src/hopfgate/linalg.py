"""Exact rational dense linear algebra.

Everything here works over :class:`fractions.Fraction`.  Floating point is
kept out of this module on purpose: P0 verdicts and determinant signs must be
exact, and minors of products of small integer matrices quickly leave the
range where floats can be trusted.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Rational",
    "as_rational",
    "RationalMatrix",
    "SignPattern",
    "SignClass",
    "Verdict",
    "C8Status",
    "LinalgError",
    "DimensionError",
    "SizeLimitError",
    "index_set",
    "minor",
    "det",
    "det_terms",
    "permutation_sign",
    "cauchy_binet",
    "principal_minors",
    "is_p0",
    "is_p",
    "qclass_membership",
    "sign_class",
    "check_c7_c8",
    "MAX_P0_SIZE",
    "MAX_TERM_SIZE",
]

Rational = Fraction

MAX_P0_SIZE = 14
MAX_TERM_SIZE = 8


class LinalgError(ValueError):
    """Base class for input errors raised by the exact linear algebra layer."""


class DimensionError(LinalgError):
    pass


class SizeLimitError(LinalgError):
    """Raised instead of running an exponential enumeration past its guard."""


def as_rational(x) -> Fraction:
    """Convert ints, Fractions, decimal strings, ``"p/q"`` strings or floats.

    Floats are converted exactly (their binary expansion), never rounded.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        s = x.strip().replace("−", "-")
        return Fraction(s)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise LinalgError(f"non-finite entry {x!r}")
        return Fraction(float(x))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class RationalMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, data: Iterable[Iterable] = (), *, shape: tuple[int, int] | None = None):
        rows = [tuple(as_rational(x) for x in row) for row in data]
        if shape is None:
            n = len(rows)
            m = len(rows[0]) if rows else 0
        else:
            n, m = shape
            if len(rows) != n:
                raise DimensionError(f"expected {n} rows, got {len(rows)}")
        if any(len(r) != m for r in rows):
            raise DimensionError("ragged matrix rows")
        self.rows = n
        self.cols = m
        self.entries = tuple(x for r in rows for x in r)
        self._hash = None

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> "RationalMatrix":
        if len(entries) != rows * cols:
            raise DimensionError(
                f"{len(entries)} entries do not fill a {rows}x{cols} matrix"
            )
        out = cls.__new__(cls)
        out.rows = rows
        out.cols = cols
        out.entries = tuple(as_rational(x) for x in entries)
        out._hash = None
        return out

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls.from_flat(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        flat = [0] * (n * n)
        for i, v in enumerate(values):
            flat[i * n + i] = v
        return cls.from_flat(n, n, flat)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {ij} out of range for shape {self.shape}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.shape)

    @property
    def T(self) -> "RationalMatrix":
        n, m = self.shape
        return RationalMatrix.from_flat(
            m, n, [self.entries[i * m + j] for j in range(m) for i in range(n)]
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        m = self.cols
        return RationalMatrix.from_flat(
            len(rows), len(cols), [self.entries[i * m + j] for i in rows for j in cols]
        )

    def delete_col(self, j: int) -> "RationalMatrix":
        keep = [c for c in range(self.cols) if c != j]
        return self.submatrix(range(self.rows), keep)

    def nonzero_count(self) -> int:
        return sum(1 for x in self.entries if x)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        b = other.entries
        out = [Fraction(0)] * (n * m)
        for i in range(n):
            base = i * m
            for t, a in enumerate(self.entries[i * k:(i + 1) * k]):
                if not a:
                    continue
                brow = t * m
                for j in range(m):
                    bv = b[brow + j]
                    if bv:
                        out[base + j] += a * bv
        return RationalMatrix.from_flat(n, m, out)

    def _elementwise(self, other: "RationalMatrix", op) -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix.from_flat(
            self.rows, self.cols, [op(a, b) for a, b in zip(self.entries, other.entries)]
        )

    def __add__(self, other):
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix.from_flat(self.rows, self.cols, [-x for x in self.entries])

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix.from_flat(self.rows, self.cols, [c * x for x in self.entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self.entries))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            "[" + ", ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows)
        )
        return f"RationalMatrix([{body}])"


class SignPattern:
    """Matrix over {-1, 0, +1}; the sign pattern defining Q(M) and Q0(M)."""

    __slots__ = ("rows", "cols", "signs")

    def __init__(self, data: Iterable[Iterable]):
        rows = [tuple(_parse_sign(x) for x in row) for row in data]
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionError("ragged sign pattern rows")
        self.rows = len(rows)
        self.cols = m
        self.signs = tuple(s for r in rows for s in r)

    @classmethod
    def from_flat(cls, rows: int, cols: int, signs: Sequence[int]) -> "SignPattern":
        if len(signs) != rows * cols:
            raise DimensionError("sign count does not match dimensions")
        out = cls.__new__(cls)
        out.rows, out.cols = rows, cols
        out.signs = tuple(_parse_sign(s) for s in signs)
        return out

    @classmethod
    def of(cls, M: RationalMatrix) -> "SignPattern":
        return cls.from_flat(M.rows, M.cols, [_sign(x) for x in M.entries])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.signs[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.signs[i * self.cols:(i + 1) * self.cols]

    @property
    def T(self) -> "SignPattern":
        n, m = self.shape
        return SignPattern.from_flat(m, n, [self.signs[i * m + j] for j in range(m) for i in range(n)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SignPattern":
        return SignPattern.from_flat(
            len(rows), len(cols), [self.signs[i * self.cols + j] for i in rows for j in cols]
        )

    def as_matrix(self) -> RationalMatrix:
        """The canonical member with entries in {-1, 0, 1}."""
        return RationalMatrix.from_flat(self.rows, self.cols, self.signs)

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignPattern):
            return NotImplemented
        return self.shape == other.shape and self.signs == other.signs

    def __hash__(self) -> int:
        return hash((self.shape, self.signs))

    def __repr__(self) -> str:
        sym = {1: "+", -1: "-", 0: "0"}
        body = " ".join("".join(sym[s] for s in self.row(i)) for i in range(self.rows))
        return f"SignPattern({body!r})"


def _parse_sign(x) -> int:
    if isinstance(x, str):
        s = x.strip()
        if s in ("+", "+1", "1"):
            return 1
        if s in ("-", "−", "-1"):
            return -1
        if s == "0":
            return 0
        raise LinalgError(f"bad sign symbol {x!r}")
    v = int(x)
    if v not in (-1, 0, 1):
        raise LinalgError(f"sign pattern entries must be -1, 0 or 1, got {x!r}")
    return v


def index_set(indices: Iterable[int], bound: int) -> tuple[int, ...]:
    """Validate a strictly increasing index tuple within ``range(bound)``."""
    idx = tuple(int(i) for i in indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise LinalgError(f"index set {idx} is not strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= bound):
        raise LinalgError(f"index set {idx} out of bounds for size {bound}")
    return idx


# --- determinants ---------------------------------------------------------

def _det_small(a: list[list]) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def _bareiss_int(a: list[list[int]]) -> int:
    """Fraction-free elimination on an integer matrix (modified in place)."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale each row to integers; returns (matrix, product of row scales)."""
    out = []
    scale = 1
    for r in rows:
        d = 1
        for x in r:
            d = math.lcm(d, x.denominator)
        out.append([int(x * d) for x in r])
        scale *= d
    return out, scale


def _det_rows(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n <= 3:
        return _det_small(rows)
    ints, scale = _integer_rows(rows)
    return Fraction(_bareiss_int(ints), scale)


def minor(M: RationalMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Exact minor ``M[rows|cols]``."""
    rows = index_set(rows, M.rows)
    cols = index_set(cols, M.cols)
    if len(rows) != len(cols):
        raise DimensionError(f"minor needs |rows| == |cols|, got {len(rows)} and {len(cols)}")
    if not rows:
        raise DimensionError("minor of an empty index set")
    m = M.cols
    e = M.entries
    return _det_rows([[e[i * m + j] for j in cols] for i in rows])


def det(M: RationalMatrix) -> Fraction:
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.shape} matrix")
    if M.rows == 0:
        return Fraction(1)
    return _det_rows(M.tolist())


def permutation_sign(perm: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inv % 2 else 1


def det_terms(M: RationalMatrix) -> list[tuple[tuple[int, ...], Fraction]]:
    """All n! terms ``P(sigma) * prod M[i, sigma(i)]`` of the determinant."""
    if not M.is_square:
        raise DimensionError("det_terms needs a square matrix")
    n = M.rows
    if n > MAX_TERM_SIZE:
        raise SizeLimitError(f"term enumeration limited to n <= {MAX_TERM_SIZE}, got {n}")
    out = []
    for perm in itertools.permutations(range(n)):
        val = Fraction(permutation_sign(perm))
        for i, j in enumerate(perm):
            val *= M[i, j]
        out.append((perm, val))
    return out


def cauchy_binet(
    A: RationalMatrix, B: RationalMatrix, rows: Sequence[int], cols: Sequence[int]
) -> Fraction:
    """Minor of ``A @ B`` expanded as a sum of products of minors of A and B."""
    if A.cols != B.rows:
        raise DimensionError(f"inner dimensions differ: {A.shape} and {B.shape}")
    rows = index_set(rows, A.rows)
    cols = index_set(cols, B.cols)
    if len(rows) != len(cols) or not rows:
        raise DimensionError("need nonempty index sets of equal size")
    k = len(rows)
    total = Fraction(0)
    for gamma in itertools.combinations(range(A.cols), k):
        a = minor(A, rows, gamma)
        if a:
            total += a * minor(B, gamma, cols)
    return total


# --- P and P0 matrices ----------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a principal-minor test; falsy when the property fails."""

    holds: bool
    witness: tuple[int, ...] | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.holds


def _principal_subsets(n: int) -> Iterator[tuple[int, ...]]:
    for size in range(1, n + 1):
        yield from itertools.combinations(range(n), size)


def principal_minors(M: RationalMatrix) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield ``(alpha, M[alpha])`` by size, then lexicographically.

    Values are exact.  Rows are cleared to integers once so each minor is a
    single integer Bareiss pass.
    """
    if not M.is_square:
        raise DimensionError("principal minors need a square matrix")
    n = M.rows
    ints, _ = _integer_rows(M.tolist())
    scales = []
    for i in range(n):
        d = 1
        for x in M.row(i):
            d = math.lcm(d, x.denominator)
        scales.append(d)
    for alpha in _principal_subsets(n):
        sub = [[ints[i][j] for j in alpha] for i in alpha]
        val = _bareiss_int(sub) if len(alpha) > 1 else sub[0][0]
        denom = 1
        for i in alpha:
            denom *= scales[i]
        yield alpha, Fraction(val, denom)


def _principal_test(M: RationalMatrix, strict: bool) -> Verdict:
    if not M.is_square:
        raise DimensionError("P/P0 tests need a square matrix")
    if M.rows > MAX_P0_SIZE:
        raise SizeLimitError(f"principal-minor enumeration limited to n <= {MAX_P0_SIZE}")
    for alpha, val in principal_minors(M):
        if val < 0 or (strict and val == 0):
            return Verdict(False, alpha, val)
    return Verdict(True)


def is_p0(M: RationalMatrix) -> Verdict:
    """True iff every principal minor is nonnegative.

    On failure the witness is the first violating index set in
    size-then-lexicographic order.
    """
    return _principal_test(M, strict=False)


def is_p(M: RationalMatrix) -> Verdict:
    return _principal_test(M, strict=True)


# --- qualitative classes --------------------------------------------------

def qclass_membership(X: RationalMatrix, P: SignPattern, closed: bool = False) -> bool:
    """Membership of X in Q(P), or in its closure Q0(P) when ``closed``."""
    if X.shape != P.shape:
        raise DimensionError(f"shape mismatch {X.shape} vs {P.shape}")
    for x, s in zip(X.entries, P.signs):
        sx = _sign(x)
        if sx == s:
            continue
        if closed and sx == 0:
            continue
        return False
    return True


class SignClass(str, enum.Enum):
    SIGN_NONSINGULAR = "sign-nonsingular"
    SIGN_SINGULAR = "sign-singular"
    NEITHER = "neither"


def _term_signs(P: SignPattern) -> set[int]:
    """Signs of the nonzero determinant terms of a square pattern.

    Depth-first over rows, only through nonzero entries; stops as soon as
    both signs have been seen.
    """
    n = P.rows
    seen: set[int] = set()
    perm: list[int] = []
    used = [False] * n

    def walk(i: int, s: int) -> bool:
        if i == n:
            seen.add(s * permutation_sign(perm))
            return len(seen) == 2
        for j in range(n):
            if used[j]:
                continue
            pij = P.signs[i * n + j]
            if not pij:
                continue
            used[j] = True
            perm.append(j)
            done = walk(i + 1, s * pij)
            perm.pop()
            used[j] = False
            if done:
                return True
        return False

    walk(0, 1)
    return seen


def sign_class(P: SignPattern) -> SignClass:
    if P.rows != P.cols:
        raise DimensionError("sign_class needs a square pattern")
    if P.rows > MAX_TERM_SIZE:
        raise SizeLimitError(f"term enumeration limited to n <= {MAX_TERM_SIZE}")
    signs = _term_signs(P)
    if not signs:
        return SignClass.SIGN_SINGULAR
    if len(signs) == 1:
        return SignClass.SIGN_NONSINGULAR
    return SignClass.NEITHER


class C8Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class C7C8Result:
    c7: bool
    c8: C8Status
    # (rows, cols) of square submatrices whose pattern is neither sign
    # nonsingular nor sign singular
    neither: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    c8_witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def check_c7_c8(A: SignPattern | RationalMatrix) -> C7C8Result:
    """Scan every square submatrix of A.

    C7 holds when each is sign nonsingular or sign singular.  For a concrete
    matrix C8 is decided exactly: a submatrix whose pattern is neither must
    have determinant zero.  For a bare pattern such submatrices leave C8
    undetermined.
    """
    concrete = isinstance(A, RationalMatrix)
    P = SignPattern.of(A) if concrete else A
    n, m = P.shape
    if n > MAX_TERM_SIZE or m > MAX_TERM_SIZE:
        raise SizeLimitError(f"submatrix scan limited to {MAX_TERM_SIZE}x{MAX_TERM_SIZE}")
    neither = []
    witness = None
    for k in range(1, min(n, m) + 1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                if sign_class(P.submatrix(rows, cols)) is SignClass.NEITHER:
                    neither.append((rows, cols))
                    if concrete and witness is None and minor(A, rows, cols) != 0:
                        witness = (rows, cols)
    c7 = not neither
    if c7:
        c8 = C8Status.HOLDS
    elif concrete:
        c8 = C8Status.FAILS if witness is not None else C8Status.HOLDS
    else:
        c8 = C8Status.UNDETERMINED
    return C7C8Result(c7, c8, tuple(neither), witness)
