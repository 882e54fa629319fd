from __future__ import annotations

import contextlib
import random
from fractions import Fraction

import pytest

from hopfgate.linalg import RationalMatrix, SignPattern

# worked-example matrices, with every free symbol set to 1
A_THREE_ROW = RationalMatrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
A_CHAIN = RationalMatrix([[1, 1, 0], [-1, 1, 0], [0, 1, 1], [0, 0, 1]])
A_SQUARE_CYCLE = RationalMatrix([[1, 1, 0, 0], [-1, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
A_FIVE_BY_FOUR = RationalMatrix(
    [[1, 0, 0, 0], [-1, 1, 0, 0], [0, -1, 1, 0], [-1, 0, -1, 1], [0, 0, 0, -1]]
)
A_MIXED = RationalMatrix([[-1, 3], [0, 2], [-6, 1]])
BT_MIXED = RationalMatrix([[-6, 2], [0, 2], [8, 0]])
B_MATCHINGS_PATTERN = SignPattern([["0", "-", "0"], ["-", "0", "+"], ["+", "0", "+"]])


def three_row_product(a, b, c, d, e, f, g) -> RationalMatrix:
    """J = A B for the three-row example with B^t = [[a,b,0],[c,d,e],[0,f,g]]."""
    Bt = RationalMatrix([[a, b, 0], [c, d, e], [0, f, g]])
    return A_THREE_ROW @ Bt.T


def rand_fraction(rng: random.Random, lo: int = -9, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 5))


def rand_matrix(rng: random.Random, n: int, m: int, density: float = 1.0) -> RationalMatrix:
    return RationalMatrix(
        [[rand_fraction(rng) if rng.random() < density else 0 for _ in range(m)] for _ in range(n)]
    )


def rand_sign_matrix(rng: random.Random, n: int, m: int, p_zero: float = 1 / 3) -> RationalMatrix:
    return RationalMatrix(
        [[0 if rng.random() < p_zero else rng.choice((-1, 1)) for _ in range(m)] for _ in range(n)]
    )


def spectral_mismatch(x, y) -> float:
    """Largest relative gap after greedily pairing each value with its nearest partner."""
    import numpy as np

    x, y = list(np.asarray(x, dtype=complex)), list(np.asarray(y, dtype=complex))
    if len(x) != len(y):
        return float("inf")
    scale = max([1.0] + [abs(v) for v in x + y])
    worst = 0.0
    for v in sorted(x, key=abs, reverse=True):
        k = min(range(len(y)), key=lambda t: abs(y[t] - v))
        worst = max(worst, abs(y.pop(k) - v) / scale)
    return worst


def projection_failures(A, B) -> list[str]:
    """Run every projection and lifting relation on G2(A, B); return violations."""
    from collections import Counter

    from hopfgate.dsr import enumerate_cycles
    from hopfgate.dsr2 import (
        Kind,
        build_dsr2,
        count_inversions,
        external_liftings,
        parity_relation_check,
        project_cycle,
        s_cycle_projection_check,
    )

    G2 = build_dsr2(A, B)
    G, base = G2.graph, G2.base
    bad = []
    for e in G.edges:
        i, j = G2.s_pair(e.s)
        if G2.r_pair(G.r_vertex(e.r))[1] not in (i, j):
            bad.append(f"edge index constraint {G.name(G.s_vertex(e.s))}")
    for C in enumerate_cycles(G):
        proj = project_cycle(G2, C)
        tag = "-".join(C.names(G))
        if (proj.kind is Kind.TWISTED) != (count_inversions(G2, C) % 2 == 1):
            bad.append(f"inversion parity {tag}")
        if not parity_relation_check(G2, C, proj):
            bad.append(f"parity relation {tag}")
        if not s_cycle_projection_check(G2, C, proj):
            bad.append(f"s-cycle relation {tag}")
        if proj.kind is Kind.TWISTED:
            if proj.walk.length != C.length or not proj.walk.is_closed:
                bad.append(f"twisted length {tag}")
        elif proj.w1.length + proj.w2.length != C.length:
            bad.append(f"direct length {tag}")
    for W in enumerate_cycles(base):
        for L in external_liftings(W, G2):
            proj = project_cycle(G2, L)
            walk = proj.walk
            if (
                proj.kind is not Kind.DIRECT
                or walk is None
                or Counter(walk.edges) != Counter(W.edges)
                or Counter(G.edges[e].label for e in L.edges)
                != Counter(base.edges[e].label for e in W.edges)
                or L.parity != W.parity
            ):
                bad.append(f"lifting round trip {'-'.join(L.names(G))}")
    return bad


@pytest.fixture
def rng():
    return random.Random(20240611)


# --- acceptance reporting -----------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def acceptance():
    """Context manager recording one pass/fail line per criterion."""

    @contextlib.contextmanager
    def record(number: int, title: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            _ACCEPTANCE[number] = (title, ok)
            print(f"AC{number:02d} {'PASS' if ok else 'FAIL'} {title}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"AC{number:02d} {'PASS' if ok else 'FAIL'} {title}")
