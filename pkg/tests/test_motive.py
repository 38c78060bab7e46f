import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import convolve, poincare_by_words
from sbcdim.errors import InvariantViolation
from sbcdim.flag_varieties import FlagSpec, flag_dimension
from sbcdim.motive import (
    IntegerPolynomial,
    MotiveDecomposition,
    decompose_square,
    middle_chow_decomposition,
    poincare_polynomial,
    verify_rank_identity,
)
from sbcdim.weyl import square_cosets

# frozen from oracles.poincare_by_words / oracles.convolve
GR24 = (1, 1, 2, 1, 1)
FL1234 = (1, 3, 5, 6, 5, 3, 1)
GR24_SQUARED = (1, 2, 5, 6, 8, 6, 5, 2, 1)


def test_oracle_fixtures():
    assert poincare_by_words(4, [2]) == GR24
    assert poincare_by_words(4, [1, 2, 3]) == FL1234
    assert convolve(GR24, GR24) == GR24_SQUARED


def test_polynomial_arithmetic():
    a, b = IntegerPolynomial([1, 1]), IntegerPolynomial([1, 0, 1])
    assert (a * b).coefficients == (1, 1, 1, 1)
    assert (a + b).coefficients == (2, 1, 1)
    assert a.shift(2).coefficients == (0, 0, 1, 1)
    q, r = (a * b + IntegerPolynomial([3])).divmod(b)
    assert q == a and r.coefficients == (3,)
    with pytest.raises(InvariantViolation):
        IntegerPolynomial([1, 0, 1]).exact_div(IntegerPolynomial([1, 1]))
    assert IntegerPolynomial([0, 0]).coefficients == ()


@pytest.mark.parametrize("n, dims, expected", [(2, [1], (1, 1)), (4, [2], GR24),
                                               (4, [1, 2, 3], FL1234)])
def test_poincare_examples(n, dims, expected):
    assert poincare_polynomial(FlagSpec(n, dims)).coefficients == expected


def test_poincare_matches_word_oracle_all_flags():
    for n in range(1, 9):
        for k in range(1, n + 1):
            for dims in itertools.combinations(range(1, n + 1), k):
                p = poincare_polynomial(FlagSpec(n, dims))
                assert p.coefficients == poincare_by_words(n, dims)
                assert p.is_palindromic()
                assert p.degree == flag_dimension(FlagSpec(n, dims))


@given(st.integers(min_value=1, max_value=14), st.data())
def test_poincare_palindromic_and_degree(n, data):
    dims = data.draw(st.sets(st.integers(1, n), min_size=1, max_size=4))
    p = poincare_polynomial(FlagSpec(n, dims))
    assert p.is_palindromic()
    assert p.degree == flag_dimension(FlagSpec(n, dims))


def test_decompose_square_examples():
    assert str(decompose_square(1)) == "M(X_1 x X_1) = M(X_{1}) + M(X_{1})(1)"
    assert str(decompose_square(2)) == "M(X_2 x X_2) = M(X_{2}) + M(X_{1,2,3})(1) + M(X_{2})(4)"
    assert [s.shift for s in decompose_square(4).summands] == [0, 1, 4, 9, 16]


def test_decomposition_invariants_enforced():
    dec = decompose_square(2)
    with pytest.raises(InvariantViolation):
        MotiveDecomposition(2, dec.summands[:2])
    assert MotiveDecomposition.from_dict(dec.to_dict()) == dec


def test_shift_and_flag_agree_with_weyl():
    for e in range(1, 9):
        dec = decompose_square(e)
        cosets = square_cosets(e)
        assert [s.shift for s in dec.summands] == [c.length for c in cosets]
        assert [s.flag_type for s in dec.summands] == [c.flag_type for c in cosets]
        for l, s in enumerate(dec.summands[1:-1], start=1):
            assert s.flag_type.dims == (e - l, e, e + l) and s.shift == l * l


def test_middle_chow_examples():
    chow = middle_chow_decomposition(2)
    assert [c.homological_degree for c in chow] == [4, 3, 0]
    assert [c.split_rank for c in chow] == [1, 6, 1]
    chow = middle_chow_decomposition(1)
    assert [(c.homological_degree, c.split_rank) for c in chow] == [(1, 1), (0, 1)]


def test_middle_ranks_sum_to_square_coefficient():
    for e in range(1, 7):
        g = poincare_by_words(2 * e, [e])
        ranks = [c.split_rank for c in middle_chow_decomposition(e)]
        assert sum(ranks) == convolve(g, g)[e * e]
        assert [c.homological_degree for c in middle_chow_decomposition(e)] == \
            [e * e] + [(e - l) * (e + l) for l in range(1, e)] + [0]


def test_rank_identity_examples():
    r1 = verify_rank_identity(1)
    assert r1.lhs.coefficients == (1, 2, 1) == r1.rhs.coefficients
    r2 = verify_rank_identity(2)
    assert r2.lhs.coefficients == GR24_SQUARED == r2.rhs.coefficients
    assert r2.lhs.total() == 36 and r2.middle_ranks == (1, 6, 1)
    r3 = verify_rank_identity(3)
    assert r3.lhs.total() == r3.rhs.total() == 400


def test_rank_identity_against_oracle_to_6():
    for e in range(1, 7):
        g = poincare_by_words(2 * e, [e])
        rhs = convolve(g, (1,) + (0,) * (e * e - 1) + (1,))
        for l in range(1, e):
            term = (0,) * (l * l) + poincare_by_words(2 * e, [e - l, e, e + l])
            rhs = tuple(a + b for a, b in itertools.zip_longest(rhs, term, fillvalue=0))
        assert convolve(g, g) == rhs
        assert verify_rank_identity(e).rhs.coefficients == rhs
