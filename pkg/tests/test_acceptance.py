"""Acceptance criteria; each test prints one ACnn PASS/FAIL line."""

import random
import time

import numpy as np

from conftest import (
    A_CHAIN,
    A_FIVE_BY_FOUR,
    A_SQUARE_CYCLE,
    A_THREE_ROW,
    B_MATCHINGS_PATTERN,
    projection_failures,
    rand_matrix,
    rand_sign_matrix,
    spectral_mismatch,
    three_row_product,
)
from hopfgate.compounds import additive_compound_2, build_factors
from hopfgate.dsr import (
    build_dsr,
    build_sr,
    classify_graph,
    enumerate_cycles,
    enumerate_cycles_bruteforce,
)
from hopfgate.dsr2 import build_dsr2, pendant_columns, remove_pendant_r
from hopfgate.linalg import RationalMatrix, SignPattern, is_p0
from hopfgate.oracle import Claim, SampleSpec, numeric_spectrum, sample_member, verify_claim
from hopfgate.theorems import Level, check_3species, spectral_conclusions


def rotations_equal(a, b) -> bool:
    """Closed walks (closing vertex repeated) equal up to rotation and reversal."""
    a, b = list(a[:-1]), list(b[:-1])
    if len(a) != len(b):
        return False
    return any(c[k:] + c[:k] == a for c in (b, b[::-1]) for k in range(len(c)))


def test_ac01_factorization_identity(acceptance):
    with acceptance(1, "factorization identity on 200 random rational pairs"):
        rng = random.Random(101)
        t0 = time.perf_counter()
        bad = 0
        for _ in range(200):
            n, m = rng.randint(2, 6), rng.randint(2, 6)
            A, B = rand_matrix(rng, n, m, 0.8), rand_matrix(rng, m, n, 0.8)
            bad += build_factors(A, B).product() != additive_compound_2(A @ B)
        elapsed = time.perf_counter() - t0
        assert bad == 0
        assert elapsed < 10, elapsed


def test_ac02_compound_spectrum(acceptance):
    with acceptance(2, "compound spectrum equals pairwise eigenvalue sums"):
        gen = np.random.default_rng(202)
        t0 = time.perf_counter()
        worst = 0.0
        for t in range(50):
            n = 5 if t % 2 == 0 else 6
            X = gen.normal(size=(n, n))
            lam = np.linalg.eigvals(X)
            sums = [lam[i] + lam[j] for i in range(n) for j in range(i + 1, n)]
            mu = np.linalg.eigvals(additive_compound_2(RationalMatrix(X.tolist())).to_numpy())
            worst = max(worst, spectral_mismatch(sums, mu))
        assert worst <= 1e-8, worst
        assert time.perf_counter() - t0 < 10


def test_ac03_three_row_regression(acceptance):
    with acceptance(3, "three-row example: exact compound and 1000 sampled P0 checks"):
        t0 = time.perf_counter()
        J2 = additive_compound_2(three_row_product(1, 1, 1, 1, 1, 1, 1))
        assert J2.tolist() == [[5, 2, -1], [2, 4, 2], [-1, 2, 5]]
        assert is_p0(J2)
        spec = SampleSpec.q(SignPattern.of(A_THREE_ROW).T)
        for t in range(1000):
            B = sample_member(spec, t, seed=3)
            assert is_p0(additive_compound_2(A_THREE_ROW @ B)), t
        assert time.perf_counter() - t0 < 60


def test_ac04_three_row_graph_verdicts(acceptance):
    with acceptance(4, "three-row example: graph verdicts and oracle outcomes"):
        G = build_sr(A_THREE_ROW)
        cls = classify_graph(G)
        assert not cls.odd_star
        kind, (c1, c2) = cls.odd_star_witness
        assert kind == "odd-intersection"
        assert {c1.names(G), c2.names(G)} == {
            ("S1", "R1", "S2", "R2", "S1"),
            ("S2", "R2", "S3", "R3", "S2"),
        }
        cls2 = classify_graph(build_dsr2(A_THREE_ROW, A_THREE_ROW.T).graph)
        assert cls2.odd_star and cls2.degree_shortcut

        q = SampleSpec.q(SignPattern.of(A_THREE_ROW).T)
        v = verify_claim(Claim.PRODUCT_P0, A_THREE_ROW, q, trials=200, seed=0)
        assert v.status == "counterexample"
        assert not is_p0(v.counterexample.A @ v.counterexample.B)
        w = verify_claim(Claim.COMPOUND_P0, A_THREE_ROW, q, trials=500, seed=0)
        assert w.passed and w.trials == 500


def test_ac05_chain_regression(acceptance):
    with acceptance(5, "chain example: odd graphs, semistability, 500 Q0 samples"):
        assert classify_graph(build_sr(A_CHAIN)).odd
        assert classify_graph(build_dsr2(A_CHAIN, A_CHAIN.T).graph).odd_star
        sc = spectral_conclusions(A_CHAIN, "q0t")
        assert sc.positive_semistable.level is Level.STRUCTURAL
        spec = SampleSpec.q0(SignPattern.of(A_CHAIN).T)
        for t in range(500):
            lam = numeric_spectrum(A_CHAIN @ sample_member(spec, t, seed=5)).eigenvalues
            assert lam.real.min() >= -1e-9, t


def test_ac06_square_cycle_regression(acceptance):
    with acceptance(6, "square-cycle example: two cycles, odd DSR2, no left nonreal pairs"):
        I4 = RationalMatrix.identity(4)
        cycles = enumerate_cycles(build_dsr(A_SQUARE_CYCLE, I4))
        assert sorted((c.length, c.parity) for c in cycles) == [(4, -1), (8, 1)]
        assert classify_graph(build_dsr2(A_SQUARE_CYCLE, I4).graph).odd
        a_spec = SampleSpec.q(SignPattern.of(A_SQUARE_CYCLE))
        b_spec = SampleSpec.q(SignPattern.of(I4))
        v = verify_claim(Claim.NONREAL_AVOIDS_LEFT, a_spec, b_spec, trials=500, seed=6)
        assert v.passed, v.counterexample


def test_ac07_three_row_sweep(acceptance):
    with acceptance(7, "3 x m sweep: exact compound P0 and theorem agrees with DSR2"):
        rng = random.Random(707)
        for k in range(100):
            A = rand_sign_matrix(rng, 3, rng.randint(1, 6))
            verdict = check_3species(A, "qt")
            full = classify_graph(build_dsr2(A, A.T).graph).odd_star
            assert verdict.applicable and verdict.holds == full, (k, A)
            spec = SampleSpec.q(SignPattern.of(A).T)
            for t in range(10):
                B = sample_member(spec, t, seed=k)
                assert is_p0(additive_compound_2(A @ B)), (k, t)


def test_ac08_projection_suite(acceptance):
    with acceptance(8, "projection and lifting relations on 100 random DSR2 graphs"):
        rng = random.Random(808)
        t0 = time.perf_counter()
        for k in range(100):
            n, m = rng.randint(2, 5), rng.randint(1, 4)
            A, B = rand_sign_matrix(rng, n, m, 0.5), rand_sign_matrix(rng, m, n, 0.5)
            assert projection_failures(A, B) == [], (k, A, B)
        assert time.perf_counter() - t0 < 120


def test_ac09_limitation_examples(acceptance):
    with acceptance(9, "limitation examples: determinant sign, sampled-only compound P0"):
        a_spec = SampleSpec.q(SignPattern.of(RationalMatrix.identity(3)))
        b_spec = SampleSpec.q(B_MATCHINGS_PATTERN)
        assert verify_claim(Claim.DET_COMPOUND_POSITIVE, a_spec, b_spec, trials=500).passed
        v = verify_claim(Claim.COMPOUND_P0, a_spec, b_spec, trials=2000)
        assert v.status == "counterexample"

        A = A_FIVE_BY_FOUR
        q0 = SampleSpec.q0(SignPattern.of(A).T)
        assert verify_claim(Claim.COMPOUND_P0, A, q0, trials=500).passed
        assert not classify_graph(build_dsr2(A, A.T).graph).odd_star
        At = A.submatrix(range(1, 4), range(4))
        G2 = build_dsr2(At.T, At).graph
        cls = classify_graph(G2, all_witnesses=True)
        assert not cls.odd_star
        want = (("13", "2^1", "12", "3^2", "23", "1^3", "13"),
                ("13", "3^1", "14", "1^4", "24", "3^2", "23", "1^3", "13"))
        found = any(
            (rotations_equal(c1.names(G2), want[0]) and rotations_equal(c2.names(G2), want[1]))
            or (rotations_equal(c1.names(G2), want[1]) and rotations_equal(c2.names(G2), want[0]))
            for c1, c2 in cls.odd_pairs
        )
        assert found


def test_ac10_pendant_removal(acceptance):
    with acceptance(10, "DSR2 flags invariant under pendant column removal"):
        rng = random.Random(1010)
        for k in range(50):
            n, m = rng.randint(2, 4), rng.randint(1, 3)
            core = (rand_sign_matrix(rng, n, m, 0.4) if k % 2 else rand_matrix(rng, n, m, 0.6))
            rows = [list(r) for r in core.tolist()]
            i = rng.randrange(n)
            for r in range(n):
                rows[r].append(rng.choice((-2, -1, 1, 3)) if r == i else 0)
            A = RationalMatrix(rows)
            col = rng.choice(pendant_columns(A))
            R = remove_pendant_r(A, col)
            before = classify_graph(build_dsr2(A, A.T).graph)
            after = classify_graph(build_dsr2(R, R.T).graph)
            assert (before.odd, before.odd_star, before.steady) == (
                after.odd, after.odd_star, after.steady), (k, A)


def test_ac11_cycle_enumeration_oracle(acceptance):
    with acceptance(11, "Johnson enumeration equals exhaustive DFS on 200 graphs"):
        rng = random.Random(1111)
        for k in range(200):
            n_s = rng.randint(1, 8)
            n_r = rng.randint(1, 12 - n_s) if n_s < 12 else 0
            n_r = min(n_r, 6)
            A = rand_sign_matrix(rng, n_s, n_r, rng.choice((0.4, 0.55, 0.7)))
            B = rand_sign_matrix(rng, n_r, n_s, rng.choice((0.4, 0.55, 0.7)))
            G = build_dsr(A, B)
            assert G.n_vertices <= 12
            fast = {(c.vertices, c.edges) for c in enumerate_cycles(G)}
            slow = {(c.vertices, c.edges) for c in enumerate_cycles_bruteforce(G)}
            assert fast == slow, k
