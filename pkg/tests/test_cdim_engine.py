import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sbcdim.cdim_engine import CdimQuery, CdimResult, cdim, explain, reduced_dimension
from sbcdim.errors import InvalidInput, OutsideHypotheses
from sbcdim.flag_varieties import FlagSpec
from sbcdim.index_arithmetic import AlgebraClass, is_prime
from sbcdim.parity import certify_incompressible


def q(n, dims, p, char_zero=False):
    return cdim(CdimQuery(AlgebraClass.of_index(n), FlagSpec(n, dims), p, char_zero))


@pytest.mark.parametrize("n, dims, p, char0, expected", [
    (4, [2], 2, False, 4),
    (16, [8], 2, False, 64),
    (6, [1], 3, False, 2),
    (6, [1], 5, False, 0),
    (6, [1], 0, True, 3),
    (8, [4], 0, False, 16),
])
def test_exact_examples(n, dims, p, char0, expected):
    res = q(n, dims, p, char0)
    assert res.exact and res.value == expected


def test_interval_example():
    res = q(8, [2], 2)
    assert not res.exact
    assert (res.lower, res.upper) == (0, 12)
    assert res.rule_ids[-1] == "R4"


def test_rule_order_prefers_severi_brauer_over_theorem():
    # q=2, e=1 satisfies both R2 and the shape q = 2e; R2 wins
    res = q(2, [1], 2)
    assert res.rule_ids[-1] == "R2" and res.value == 1


def test_invalid_p():
    for p in (1, 4, 9):
        with pytest.raises(InvalidInput):
            q(6, [1], p)


def test_char_zero_gate_recorded():
    res = q(6, [1], 0)
    assert (res.lower, res.upper, res.exact) == (2, 3, False)
    assert any("R6 skipped" in n for n in res.notes)


def test_explain_strings():
    assert "Theorem: X_e 2-incompressible" in explain(q(4, [2], 2))
    assert "p-coprime splitting" in explain(q(6, [1], 5))
    assert "split: cdim = 0" in explain(q(6, [6], 2))
    assert "split: cdim = 0" in explain(q(12, [12], 0))
    assert "split: cdim = 0" in explain(q(12, [4], 2))


def test_conjecture_is_note_not_rule():
    res = q(10, [1], 0)
    assert not res.exact and (res.lower, res.upper) == (4, 5)
    assert any("conjectured" in n for n in res.notes)


def test_round_trip():
    res = q(12, [2, 8], 0)
    assert CdimResult.from_dict(res.to_dict()) == res


def _all_queries(max_n):
    for n in range(1, max_n + 1):
        for d in range(1, n + 1):
            for p in [0] + [r for r in range(2, 14) if is_prime(r)]:
                yield n, d, p


def test_sandwich_and_prime_irrelevance():
    for n, d, p in _all_queries(64):
        res = q(n, [d], p)
        assert 0 <= res.lower <= res.upper <= reduced_dimension(res)
        if p and n % p:
            assert res.exact and res.value == 0


@settings(max_examples=200)
@given(st.integers(min_value=2, max_value=256), st.data())
def test_flag_invariance(n, data):
    dims = data.draw(st.sets(st.integers(1, n), min_size=1, max_size=5))
    p = data.draw(st.sampled_from([0, 2, 3, 5]))
    import math
    g = math.gcd(n, *dims)
    a, b = q(n, sorted(dims), p), q(n, [g], p)
    assert (a.lower, a.upper, a.exact, a.rule_ids) == (b.lower, b.upper, b.exact, b.rule_ids)


def test_char_zero_only_adds_information():
    for n, d, p in _all_queries(40):
        if p:
            continue
        plain, more = q(n, [d], 0), q(n, [d], 0, True)
        if plain.exact:
            assert more.exact and more.value == plain.value
        assert plain.lower <= more.lower <= more.upper <= plain.upper


def test_theorem_rule_agrees_with_certificates():
    # R3 fires on the 2-primary factor X_{e2}(A_2), e2 = gcd(d, q2)
    import math
    for n in range(2, 128):
        q2 = n & -n
        for d in range(1, n):
            res = q(n, [d], 2)
            fired = res.rule_ids[-1] == "R3"
            e2 = math.gcd(d, q2)
            if q2 == 1 or e2 in (1, q2):
                assert not fired, (n, d)
                continue
            try:
                certify_incompressible(AlgebraClass.of_index(q2), e2, backend="matrix")
                certified = True
            except OutsideHypotheses:
                certified = False
            assert fired == certified, (n, d)
            if fired:
                assert res.value == e2 * e2
