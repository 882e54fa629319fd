"""Compound matrices and the factorization of the second additive compound.

Basis vectors e_i ^ e_j of the second exterior power are ordered
lexicographically on (i, j) with i < j.  The factor pair of a product AB
has ``lbar`` of shape C(n,2) x (m*n); its column ``k*n + l`` corresponds to
the R-vertex named ``k^l`` in the DSR² graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .linalg import (
    DimensionError,
    RationalMatrix,
    SizeLimitError,
    det,
    minor,
)

__all__ = [
    "pairs",
    "pair_rank",
    "pair_name",
    "additive_compound_2",
    "multiplicative_compound",
    "CompoundFactorPair",
    "build_factors",
    "lbar",
    "lunder",
    "det_compound_via_cb",
    "MAX_CB_PAIRS",
]

MAX_CB_PAIRS = 12


def pairs(n: int) -> list[tuple[int, int]]:
    """All (i, j) with 0 <= i < j < n in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


def pair_rank(i: int, j: int, n: int) -> int:
    """Position of the pair {i, j} in the lexicographic order of 2-subsets."""
    if i > j:
        i, j = j, i
    if not 0 <= i < j < n:
        raise ValueError(f"invalid pair ({i}, {j}) for n={n}")
    # pairs starting below i, then offset within row i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def pair_name(i: int, j: int) -> str:
    """1-based display name, e.g. (0, 2) -> "13"."""
    if max(i, j) >= 9:
        return f"{i + 1},{j + 1}"
    return f"{i + 1}{j + 1}"


def additive_compound_2(M: RationalMatrix) -> RationalMatrix:
    """Second additive compound in the lexicographic pair basis."""
    if not M.is_square:
        raise DimensionError("additive compound needs a square matrix")
    n = M.rows
    if n < 2:
        raise DimensionError("second additive compound needs n >= 2")
    P = pairs(n)
    N = len(P)
    out = [Fraction(0)] * (N * N)
    for r, (i, j) in enumerate(P):
        for c, (k, l) in enumerate(P):
            v = Fraction(0)
            if l == j:
                v += M[i, k]
            if l == i:
                v -= M[j, k]
            if k == i:
                v += M[j, l]
            if k == j:
                v -= M[i, l]
            out[r * N + c] = v
    return RationalMatrix.from_flat(N, N, out)


def multiplicative_compound(M: RationalMatrix, k: int) -> RationalMatrix:
    """k-th exterior power: entry (alpha, beta) is the minor M[alpha|beta]."""
    if not 1 <= k <= min(M.rows, M.cols):
        raise DimensionError(f"k={k} out of range for shape {M.shape}")
    rs = list(itertools.combinations(range(M.rows), k))
    cs = list(itertools.combinations(range(M.cols), k))
    return RationalMatrix.from_flat(
        len(rs), len(cs), [minor(M, a, b) for a in rs for b in cs]
    )


@dataclass(frozen=True)
class CompoundFactorPair:
    lbar: RationalMatrix
    lunder: RationalMatrix
    n: int
    m: int

    def product(self) -> RationalMatrix:
        return self.lbar @ self.lunder


def lbar(A: RationalMatrix) -> RationalMatrix:
    """Left factor for an n x m matrix A.

    Row (i, j), column k*n + l holds A[j,k] when l == i and -A[i,k] when
    l == j.
    """
    n, m = A.shape
    if n < 2:
        raise DimensionError("factor needs n >= 2")
    P = pairs(n)
    cols = m * n
    out = [Fraction(0)] * (len(P) * cols)
    for r, (i, j) in enumerate(P):
        base = r * cols
        for k in range(m):
            out[base + k * n + i] = A[j, k]
            out[base + k * n + j] = -A[i, k]
    return RationalMatrix.from_flat(len(P), cols, out)


def lunder(B: RationalMatrix) -> RationalMatrix:
    """Right factor for an m x n matrix B; the transpose of ``lbar(B.T)``."""
    return lbar(B.T).T


def build_factors(A: RationalMatrix, B: RationalMatrix) -> CompoundFactorPair:
    n, m = A.shape
    if B.shape != (m, n):
        raise DimensionError(f"B must be {m}x{n} for A of shape {A.shape}, got {B.shape}")
    return CompoundFactorPair(lbar(A), lunder(B), n, m)


def det_compound_via_cb(A: RationalMatrix, B: RationalMatrix) -> Fraction:
    """det((AB)^[2]) as a Cauchy-Binet sum over the factor pair.

    Only columns where both factors have some nonzero entry can contribute,
    so the sum runs over subsets of those.
    """
    f = build_factors(A, B)
    N = comb(f.n, 2)
    if N > MAX_CB_PAIRS:
        raise SizeLimitError(f"Cauchy-Binet expansion limited to C(n,2) <= {MAX_CB_PAIRS}")
    L, U = f.lbar, f.lunder
    live = [
        c for c in range(L.cols)
        if any(L[r, c] for r in range(N)) and any(U[c, r] for r in range(N))
    ]
    if len(live) < N:
        return Fraction(0)
    rows = tuple(range(N))
    total = Fraction(0)
    for beta in itertools.combinations(live, N):
        a = det(L.submatrix(rows, beta))
        if a:
            total += a * det(U.submatrix(beta, rows))
    return total
