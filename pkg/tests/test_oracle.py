import itertools

import numpy as np
import pytest

from conftest import A_CHAIN, A_THREE_ROW, B_MATCHINGS_PATTERN, three_row_product
from hopfgate.linalg import (
    DimensionError,
    RationalMatrix,
    SignPattern,
    SizeLimitError,
    is_p0,
    qclass_membership,
)
from hopfgate.oracle import (
    Claim,
    Mode,
    SampleSpec,
    evaluate_claim,
    exhaustive_small,
    numeric_spectrum,
    sample_member,
    verify_claim,
)
from hopfgate.theorems import p0_spectrum_wedge

P3 = SignPattern.of(A_THREE_ROW)


class TestSampling:
    def test_positive_scalar(self):
        x = sample_member(SampleSpec.q(SignPattern([["+"]])), 0)
        assert x[0, 0] > 0

    def test_q0_zeros(self):
        spec = SampleSpec.q0(SignPattern([["+", "-"]]))
        seen_zero = False
        for t in range(100):
            M = sample_member(spec, t)
            assert qclass_membership(M, spec.base, closed=True)
            seen_zero |= M[0, 0] == 0 or M[0, 1] == 0
        assert seen_zero

    def test_fixed(self):
        assert sample_member(SampleSpec.fixed(A_CHAIN), 3) == A_CHAIN

    def test_open_class_membership(self):
        spec = SampleSpec.q(P3)
        for t in range(50):
            M = sample_member(spec, t, seed=9)
            assert qclass_membership(M, P3)
            assert all(x.denominator <= 2**20 for x in M.entries)
            nz = [abs(x) for x in M.entries if x]
            assert min(nz) >= 5e-4 and max(nz) <= 1e3 + 1

    def test_replay(self):
        spec = SampleSpec.q0(P3)
        assert sample_member(spec, 17, seed=4) == sample_member(spec, 17, seed=4)
        assert sample_member(spec, 17, seed=4) != sample_member(spec, 18, seed=4)
        assert sample_member(spec, 17, seed=4, stream=0) != sample_member(spec, 17, seed=4, stream=1)

    def test_transpose(self):
        spec = SampleSpec.q0(P3).transpose()
        assert spec.base == P3.T and spec.mode is Mode.Q0


class TestSpectrum:
    def test_diag(self):
        w = sorted(numeric_spectrum(RationalMatrix.diag([1, 2, 3])).eigenvalues.real)
        assert np.allclose(w, [1, 2, 3])

    def test_rotation(self):
        w = numeric_spectrum(RationalMatrix([[0, 1], [-1, 0]])).eigenvalues
        assert np.allclose(sorted(w.imag), [-1, 1]) and np.allclose(w.real, 0)

    def test_residual_small(self):
        s = numeric_spectrum(three_row_product(1, 2, 3, 4, 5, 6, 7))
        assert s.residual < 1e-9

    def test_wedge(self):
        assert p0_spectrum_wedge(RationalMatrix.identity(3))
        assert not p0_spectrum_wedge(RationalMatrix([[-1]]))
        assert p0_spectrum_wedge(RationalMatrix([[0, 1], [-1, 0]]))


class TestEvaluateClaim:
    def test_product_p0(self):
        assert evaluate_claim(Claim.PRODUCT_P0, A_THREE_ROW, A_THREE_ROW.T) is None
        bad = evaluate_claim(Claim.PRODUCT_P0, RationalMatrix([[1]]), RationalMatrix([[-1]]))
        assert bad and "minor" in bad

    def test_semistable(self):
        I = RationalMatrix.identity(2)
        assert evaluate_claim(Claim.SEMISTABLE, I, I) is None
        assert evaluate_claim(Claim.SEMISTABLE, I, RationalMatrix([[-1, 0], [0, 1]]))

    def test_nonreal(self):
        rot = RationalMatrix([[-1, 1], [-1, -1]])  # eigenvalues -1 +- i
        assert evaluate_claim(Claim.NONREAL_AVOIDS_LEFT, RationalMatrix.identity(2), rot)
        assert evaluate_claim(Claim.NONREAL_AVOIDS_LEFT, RationalMatrix.identity(2),
                              RationalMatrix([[-1, 0], [0, -2]])) is None

    def test_compound_claims(self):
        I = RationalMatrix.identity(3)
        assert evaluate_claim(Claim.COMPOUND_NONSINGULAR, I, I) is None
        assert evaluate_claim(Claim.DET_COMPOUND_POSITIVE, I, I) is None
        Z = RationalMatrix.zeros(3, 3)
        assert evaluate_claim(Claim.COMPOUND_NONSINGULAR, I, Z)


class TestVerify:
    def test_product_counterexample(self):
        v = verify_claim(Claim.PRODUCT_P0, A_THREE_ROW, SampleSpec.q(P3.T), trials=200)
        assert v.status == "counterexample"
        c = v.counterexample
        # replayable from (seed, index)
        assert c.B == sample_member(SampleSpec.q(P3.T), c.index, seed=0, stream=1)
        assert not is_p0(c.A @ c.B)

    def test_compound_passes(self):
        v = verify_claim(Claim.COMPOUND_P0, A_THREE_ROW, SampleSpec.q0(P3.T), trials=100)
        assert v.passed and v.trials == 100

    def test_matchings_example(self):
        a_spec = SampleSpec.q(SignPattern.of(RationalMatrix.identity(3)))
        b_spec = SampleSpec.q(B_MATCHINGS_PATTERN)
        assert verify_claim(Claim.DET_COMPOUND_POSITIVE, a_spec, b_spec, trials=100).passed
        assert verify_claim(Claim.COMPOUND_P0, a_spec, b_spec, trials=2000).status == "counterexample"

    def test_deterministic(self):
        args = (Claim.PRODUCT_P0, A_THREE_ROW, SampleSpec.q(P3.T), 50, 3)
        assert verify_claim(*args) == verify_claim(*args)

    def test_threads_agree(self, monkeypatch):
        args = (Claim.PRODUCT_P0, A_THREE_ROW, SampleSpec.q(P3.T), 60, 11)
        serial = verify_claim(*args, threads=1)
        parallel = verify_claim(*args, threads=2)
        assert serial == parallel

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            verify_claim(Claim.PRODUCT_P0, A_THREE_ROW, SampleSpec.q(SignPattern([["+"]])))


class TestExhaustive:
    def test_identity_pattern(self):
        I = SignPattern.of(RationalMatrix.identity(2))
        v = exhaustive_small(Claim.PRODUCT_P0, SampleSpec.q(I), SampleSpec.q(I), grid="dyadic")
        assert v.passed and v.trials == 16

    def test_locates_violation(self):
        v = exhaustive_small(Claim.PRODUCT_P0, A_THREE_ROW, SampleSpec.q(P3.T), grid="dyadic")
        assert v.status == "counterexample"
        assert not is_p0(v.counterexample.A @ v.counterexample.B)

    def test_grid_agrees_with_exact(self):
        # every member of the sign grid checked independently
        A = RationalMatrix([[1, -1], [1, 1]])
        spec = SampleSpec.q0(SignPattern.of(A).T)
        v = exhaustive_small(Claim.PRODUCT_P0, A, spec, grid="sign")
        brute = all(
            is_p0(A @ RationalMatrix([list(vals[:2]), list(vals[2:])]))
            for vals in itertools.product(*[(0, s) for s in SignPattern.of(A).T.signs])
        )
        assert v.passed == brute

    def test_guards(self):
        big = SignPattern([["+"] * 5] * 5)
        with pytest.raises(SizeLimitError):
            exhaustive_small(Claim.PRODUCT_P0, SampleSpec.q(big), SampleSpec.q(big))
