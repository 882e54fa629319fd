from fractions import Fraction
from itertools import combinations, permutations

import pytest

from conftest import A_THREE_ROW, rand_matrix
from hopfgate.compounds import additive_compound_2
from hopfgate.linalg import (
    C8Status,
    DimensionError,
    RationalMatrix,
    SignClass,
    SignPattern,
    SizeLimitError,
    as_rational,
    cauchy_binet,
    check_c7_c8,
    det,
    det_terms,
    index_set,
    is_p,
    is_p0,
    minor,
    permutation_sign,
    principal_minors,
    qclass_membership,
    sign_class,
)


def leibniz(M: RationalMatrix) -> Fraction:
    """Independent determinant oracle."""
    n = M.rows
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(1 for a, b in combinations(range(n), 2) if p[a] > p[b])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= M[i, p[i]]
        total += term
    return total


class TestRational:
    def test_parse_forms(self):
        assert as_rational("3/6") == Fraction(1, 2)
        assert as_rational("−2") == -2
        assert as_rational("0.25") == Fraction(1, 4)
        assert as_rational(0.5) == Fraction(1, 2)
        z = as_rational("0/7")
        assert (z.numerator, z.denominator) == (0, 1)

    def test_denominator_positive(self):
        x = as_rational(Fraction(3, -6))
        assert x.denominator > 0 and x == Fraction(-1, 2)

    def test_bad_inputs(self):
        with pytest.raises(Exception):
            as_rational(float("nan"))
        with pytest.raises(TypeError):
            as_rational(object())


class TestMatrix:
    def test_shape_and_access(self):
        M = RationalMatrix([[1, 2, 3], [4, 5, 6]])
        assert M.shape == (2, 3)
        assert M[1, 2] == 6
        assert M.T.shape == (3, 2)
        assert M.T[2, 1] == 6

    def test_ragged_rejected(self):
        with pytest.raises(DimensionError):
            RationalMatrix([[1, 2], [3]])

    def test_product(self):
        A = RationalMatrix([[1, 2]])
        B = RationalMatrix([[3], [4]])
        assert (A @ B).tolist() == [[11]]
        with pytest.raises(DimensionError):
            A @ A

    def test_index_set(self):
        assert index_set([0, 2], 3) == (0, 2)
        with pytest.raises(Exception):
            index_set([2, 0], 3)
        with pytest.raises(Exception):
            index_set([0, 0], 3)
        with pytest.raises(Exception):
            index_set([3], 3)


class TestMinor:
    def test_identity_principal(self):
        assert minor(RationalMatrix.identity(3), (0, 1), (0, 1)) == 1

    def test_rank_one(self):
        assert minor(RationalMatrix([[1, 1], [1, 1]]), (0, 1), (0, 1)) == 0

    def test_three_row_full(self):
        # cofactor expansion along the first row: 1*(1-1) - 1*(1-0) + 0 = -1
        assert minor(A_THREE_ROW, (0, 1, 2), (0, 1, 2)) == -1

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            minor(RationalMatrix.identity(3), (0, 1), (0,))
        with pytest.raises(DimensionError):
            minor(RationalMatrix.identity(3), (), ())

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_det_matches_leibniz(self, rng, n):
        for _ in range(5):
            M = rand_matrix(rng, n, n)
            assert det(M) == leibniz(M)


class TestDetTerms:
    def test_one_by_one(self):
        assert det_terms(RationalMatrix([[5]])) == [((0,), 5)]

    def test_two_by_two(self):
        terms = dict(det_terms(RationalMatrix([[1, 1], [1, 1]])))
        assert terms == {(0, 1): 1, (1, 0): -1}

    def test_identity_single_nonzero(self):
        nz = [t for t in det_terms(RationalMatrix.identity(3)) if t[1]]
        assert nz == [((0, 1, 2), 1)]

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            det_terms(RationalMatrix.identity(9))

    def test_permutation_sign(self):
        assert permutation_sign((0, 1, 2)) == 1
        assert permutation_sign((1, 0, 2)) == -1
        assert permutation_sign((1, 2, 0)) == 1


class TestCauchyBinet:
    def test_scalar(self):
        A = RationalMatrix([[1, 2]])
        B = RationalMatrix([[3], [4]])
        assert cauchy_binet(A, B, (0,), (0,)) == 11

    def test_three_row_example(self):
        J = A_THREE_ROW @ A_THREE_ROW.T
        assert J.tolist() == [[2, 2, 1], [2, 3, 2], [1, 2, 2]]
        assert cauchy_binet(A_THREE_ROW, A_THREE_ROW.T, (0, 1, 2), (0, 1, 2)) == 1

    def test_zero_column(self):
        A = RationalMatrix([[1, 0, 2], [3, 0, 4]])
        B = RationalMatrix([[1, 2], [5, 6], [3, 4]])
        assert cauchy_binet(A, B, (0, 1), (0, 1)) == minor(A @ B, (0, 1), (0, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            cauchy_binet(RationalMatrix.identity(2), RationalMatrix.identity(3), (0,), (0,))


class TestP0:
    def test_identity(self):
        assert is_p0(RationalMatrix.identity(4))
        assert is_p(RationalMatrix.identity(4))

    def test_antisymmetric(self):
        M = RationalMatrix([[0, 1], [-1, 0]])
        assert is_p0(M)
        assert not is_p(M)

    def test_compound_of_three_row_example(self):
        C = RationalMatrix([[5, 2, -1], [2, 4, 2], [-1, 2, 5]])
        assert is_p0(C)
        # independent enumeration: every principal minor is positive
        assert all(v > 0 for _, v in principal_minors(C))
        assert is_p(C)

    def test_negative_witness(self):
        v = is_p0(RationalMatrix([[-1]]))
        assert not v and v.witness == (0,)

    def test_witness_is_least(self):
        M = RationalMatrix([[1, 0, 0], [0, 1, 2], [0, 2, 1]])
        v = is_p0(M)
        assert not v and v.witness == (1, 2)

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            is_p0(RationalMatrix.identity(15))


class TestQClass:
    P = SignPattern([["+", "-"]])

    def test_open(self):
        assert qclass_membership(RationalMatrix([["2", "-1/2"]]), self.P)
        assert not qclass_membership(RationalMatrix([[0, -1]]), self.P)

    def test_closed(self):
        assert qclass_membership(RationalMatrix([[0, -1]]), self.P, closed=True)
        assert not qclass_membership(RationalMatrix([[-1, -1]]), self.P, closed=True)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            qclass_membership(RationalMatrix([[1]]), self.P)


class TestSignClass:
    def test_diagonal(self):
        assert sign_class(SignPattern([["+", "0"], ["0", "+"]])) is SignClass.SIGN_NONSINGULAR

    def test_all_positive(self):
        assert sign_class(SignPattern([["+", "+"], ["+", "+"]])) is SignClass.NEITHER

    def test_zero_row(self):
        assert sign_class(SignPattern([["+", "+"], ["0", "0"]])) is SignClass.SIGN_SINGULAR


class TestC7C8:
    def test_single_column(self):
        r = check_c7_c8(SignPattern([["+"], ["+"], ["+"], ["+"]]))
        assert r.c7 and r.c8 is C8Status.HOLDS

    def test_three_row_pattern(self):
        r = check_c7_c8(SignPattern.of(A_THREE_ROW))
        assert not r.c7
        assert ((0, 1), (0, 1)) in r.neither
        assert r.c8 is C8Status.UNDETERMINED

    def test_single_row(self):
        assert check_c7_c8(SignPattern([["+", "-", "0", "+"]])).c7

    def test_concrete_c8_decided(self):
        # a singular member of an ambiguous pattern satisfies C8
        assert check_c7_c8(RationalMatrix([[1, 1], [1, 1]])).c8 is C8Status.HOLDS
        r = check_c7_c8(RationalMatrix([[1, 1], [1, 2]]))
        assert r.c8 is C8Status.FAILS and r.c8_witness == ((0, 1), (0, 1))

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            check_c7_c8(SignPattern([["+"] * 9]))


def test_compound_p0_matches_independent_minors():
    C = additive_compound_2(A_THREE_ROW @ A_THREE_ROW.T)
    subsets = [s for k in range(1, 4) for s in combinations(range(3), k)]
    assert all(leibniz(C.submatrix(s, s)) >= 0 for s in subsets)
