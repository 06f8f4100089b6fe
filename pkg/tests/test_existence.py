from __future__ import annotations

import random

import pytest

from btbranch.existence import (DegenerateForm, algebra_spec,
                                cyclic_presentation, decide, pair_form,
                                search_pair, search_zero_divisor, splits,
                                verify_witness, _alg_mul, _mul_table)
from btbranch.gf2 import field
from btbranch.mat2 import make_pair
from btbranch.series import s_parse, s_random, s_render

F1 = field(1)


def _p(text):
    return s_parse(F1, text)


def _spec(lam, a1, b1, a2, b2):
    return algebra_spec(_p(lam), _p(a1), _p(b1), _p(a2), _p(b2), 64)


# the residue symbol


@pytest.mark.parametrize("a, b, expected", [
    ("1", "t", False),     # the classical nonsplit symbol
    ("0", "t", True),
    ("1", "1 + t", True),
    ("1", "1", True),
    ("t^-1", "t", True),
    ("1", "t^-1", False),
])
def test_symbol_splitting_fixed_values(a, b, expected):
    assert splits(_p(a), _p(b), 64) is expected


def test_symbol_needs_a_nonzero_second_argument():
    with pytest.raises(ValueError):
        splits(_p("1"), _p("0"), 64)


# reduction to a cyclic presentation


def test_presentation_of_the_division_datum():
    spec = _spec("0", "1", "1", "0", "t")
    a_sym, b_sym = cyclic_presentation(spec)
    assert (s_render(a_sym), s_render(b_sym)) == ("1", "t")


def test_presentation_refuses_a_vanishing_discriminant():
    with pytest.raises(DegenerateForm):
        cyclic_presentation(_spec("0", "0", "t", "0", "t^3"))


# the five realisability conditions


def test_division_datum_is_not_realisable():
    verdict = decide(_spec("0", "1", "1", "0", "t"), 64)
    assert verdict.exists is False
    assert verdict.matched_condition == "none"
    assert verdict.witness is None


def _check_witness(spec, verdict):
    assert verdict.witness is not None
    q1, q2 = verdict.witness
    assert verify_witness(spec, q1, q2)
    make_pair(q1, q2, 64)  # must not raise


def test_reducible_factor_realises_the_datum():
    spec = _spec("0", "1", "0", "0", "t")
    verdict = decide(spec, 64)
    assert verdict.exists and verdict.matched_condition == "i"
    assert not verdict.commutative_note
    _check_witness(spec, verdict)


def test_split_symbol_realises_without_an_explicit_witness():
    verdict = decide(_spec("t", "0", "t", "0", "t^3"), 64)
    assert verdict.exists and verdict.matched_condition == "ii"
    assert verdict.witness is None


def test_degenerate_datum_with_a_separable_reducible_factor():
    spec = _spec("t", "1", "0", "1", "t + t^2")
    verdict = decide(spec, 64)
    assert verdict.exists and verdict.matched_condition == "iii"
    _check_witness(spec, verdict)


def test_degenerate_datum_reducible_on_the_second_slot():
    spec = _spec("t", "0", "t^2", "1", "0")
    verdict = decide(spec, 64)
    assert verdict.exists and verdict.matched_condition == "iv"
    _check_witness(spec, verdict)


def test_doubly_traceless_datum_is_commutative():
    spec = _spec("0", "0", "t", "0", "t^2 + t^3")
    verdict = decide(spec, 64)
    assert verdict.exists and verdict.matched_condition == "v"
    assert verdict.commutative_note
    _check_witness(spec, verdict)


def test_doubly_traceless_square_pair_also_has_a_witness():
    spec = _spec("0", "0", "t^2", "0", "t^4")
    verdict = decide(spec, 64)
    assert verdict.exists and verdict.matched_condition == "v"
    _check_witness(spec, verdict)


def test_commutative_case_documents_a_missing_witness():
    # X^2 + t twice: the second generator would be a scalar multiple
    verdict = decide(_spec("0", "0", "t", "0", "t^3"), 64)
    assert verdict.exists and verdict.matched_condition == "v"
    assert verdict.commutative_note
    assert verdict.witness is None


def test_unramified_irreducible_pair_is_rejected():
    verdict = decide(_spec("1", "1", "1", "1", "1"), 64)
    assert verdict.exists is False


# the structure constants behave like an algebra


def test_multiplication_table_is_associative():
    rng = random.Random(3)
    for spec in (_spec("t", "0", "t", "0", "t^3"),
                 _spec("1", "1", "1", "0", "t")):
        tab = _mul_table(spec)
        for _ in range(8):
            u, v, w = (tuple(s_random(F1, rng, 0, 3) for _ in range(4))
                       for _ in range(3))
            left = _alg_mul(tab, _alg_mul(tab, u, v), w)
            right = _alg_mul(tab, u, _alg_mul(tab, v, w))
            assert left == right


# brute force searches


def test_zero_divisor_search_hits_a_reducible_instance():
    spec = _spec("0", "1", "0", "0", "t")
    found = search_zero_divisor(spec, -2, 2, 1)
    assert found is not None
    assert any(not c.is_zero for c in found)


def test_pair_search_recovers_the_pairing_value():
    spec = _spec("t", "0", "t", "0", "t^3")
    coords = search_pair(spec, -1, 1, 1)
    assert coords is not None
    assert pair_form(spec, *coords) == spec.lam


def test_searches_come_up_empty_on_the_division_instance():
    spec = _spec("0", "1", "1", "0", "t")
    assert search_zero_divisor(spec, -2, 2, 1) is None
    assert search_pair(spec, -1, 1, 1) is None


def test_search_box_is_respected():
    # the pairing hit above needs a pole, so a nonnegative box misses it
    spec = _spec("t", "0", "t", "0", "t^3")
    hit = search_pair(spec, 0, 1, 1)
    if hit is not None:
        assert all(c.is_zero or c.lead >= 0 for c in hit)
