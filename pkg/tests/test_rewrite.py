from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rglab.twobody import rewrite as rw

words = st.lists(st.sampled_from("HW"), max_size=8).map(tuple).filter(lambda w: w.count("H") <= 4)


@given(words)
def test_normal_form_counts_letters(w):
    assert rw.normal_form(w) == (w.count("W"), w.count("H"))


def test_normal_form_limits():
    with pytest.raises(ValueError):
        rw.normal_form(tuple("HHHHH"))
    with pytest.raises(ValueError):
        rw.normal_form(tuple("HX"))


@pytest.mark.parametrize("k", range(5))
def test_binomial_expansion(k):
    assert rw.binomial_matches(k)
    assert sum(rw.binomial_normal_form(k).values()) == 2**k


def test_cancellation_is_exact_zero():
    rep = rw.w_cancellation_reduce()
    assert rep.displayed.is_zero and rep.definition.is_zero
    assert rep.per_power == (0, 0, 0, 0)
    assert rep.displayed.raw_by_power[4] == (1, -4, 3)


def test_two_expansion_paths_agree_before_reduction():
    shown = rw.difference_as_displayed().normal_pairs()
    defined = rw.difference_from_definition().normal_pairs()
    assert shown == defined and shown


def test_real_part_is_needed():
    rep = rw.w_cancellation_reduce()
    assert not rep.without_real_part.is_zero


def test_nonzero_residue_detected():
    form = rw.difference_from_definition()
    form.add_pairing(1, rw.combo([(1, "WH")]), {(): Fraction(1)})
    assert not form.reduce().is_zero


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_symmetric_pairs_merge_under_real_part(b, n, d):
    f = rw.BilinearForm()
    f.add_pairing(1, {tuple("W" * n + "H" * b): Fraction(1)}, {tuple("H" * d): Fraction(1)})
    f.add_pairing(-1, {tuple("H" * d): Fraction(1)}, {tuple("W" * n + "H" * b): Fraction(1)})
    assert f.reduce().is_zero

