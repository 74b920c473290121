"""The retrodiction arithmetic on bare rationals."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threebox.errors import InvalidArgumentsError, LengthMismatchError, ZeroDenominatorError
from threebox.formulas import RetrodictionInputs, retrodict_complete, retrodict_partial

F = Fraction


class TestRetrodictPartial:
    def test_vanishing_negated_branch_gives_certainty(self):
        inputs = RetrodictionInputs(F(1, 2), F(1, 4), F(0), F(3, 4))
        assert retrodict_partial(inputs) == 1

    def test_zero_likelihood_gives_zero(self):
        inputs = RetrodictionInputs(F(0), F(1, 3), F(5, 7), F(2, 3))
        assert retrodict_partial(inputs) == 0

    def test_mixture_likelihood_drops_certainty_to_half(self):
        # Replacing the genuine negated branch with its mixture (likelihood 1/6)
        # makes both products 1/8, so the retrodiction falls to 1/2.
        inputs = RetrodictionInputs(F(1, 2), F(1, 4), F(1, 6), F(3, 4))
        assert retrodict_partial(inputs) == F(1, 2)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominatorError):
            retrodict_partial(RetrodictionInputs(F(0), F(1, 2), F(0), F(1, 2)))

    def test_inputs_validated(self):
        with pytest.raises(InvalidArgumentsError):
            RetrodictionInputs(F(3, 2), F(1, 2), F(0), F(1, 2))
        with pytest.raises(InvalidArgumentsError):
            RetrodictionInputs(F(1, 2), F(1, 2), F(0), F(1, 3))


class TestRetrodictComplete:
    def test_three_box_complete_observation(self):
        likelihoods = [F(1, 2), F(0), F(1, 2)]
        priors = [F(1, 4), F(1, 2), F(1, 4)]
        assert retrodict_complete(likelihoods, priors, 0) == F(1, 2)
        assert retrodict_complete(likelihoods, priors, 1) == 0
        assert retrodict_complete(likelihoods, priors, 2) == F(1, 2)

    def test_uniform_likelihoods_return_the_prior(self):
        priors = [F(1, 6), F(1, 3), F(1, 2)]
        for j, prior in enumerate(priors):
            assert retrodict_complete([F(2, 5)] * 3, priors, j) == prior

    def test_single_surviving_term(self):
        assert retrodict_complete([F(1), F(0), F(0)], [F(1, 3)] * 3, 0) == 1

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            retrodict_complete([F(1, 2)], [F(1, 2), F(1, 2)], 0)

    def test_priors_must_sum_to_one(self):
        with pytest.raises(InvalidArgumentsError):
            retrodict_complete([F(1, 2), F(1, 2)], [F(1, 2), F(1, 3)], 0)

    def test_index_out_of_range(self):
        with pytest.raises(InvalidArgumentsError):
            retrodict_complete([F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)], 2)

    def test_negative_likelihood_rejected(self):
        with pytest.raises(InvalidArgumentsError):
            retrodict_complete([F(-1, 2), F(1, 2)], [F(1, 2), F(1, 2)], 0)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominatorError):
            retrodict_complete([F(0), F(0)], [F(1, 2), F(1, 2)], 0)


# --- properties ---------------------------------------------------------------

unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)
positive_weights = st.fractions(min_value=F(1, 12), max_value=1, max_denominator=12)


@st.composite
def complete_inputs(draw):
    size = draw(st.integers(2, 4))
    likelihoods = [draw(unit_fractions) for _ in range(size)]
    weights = [draw(positive_weights) for _ in range(size)]
    total = sum(weights)
    priors = [w / total for w in weights]
    return likelihoods, priors


@given(complete_inputs())
@settings(max_examples=200, deadline=None)
def test_complete_retrodictions_sum_to_one(data):
    likelihoods, priors = data
    if sum(l * p for l, p in zip(likelihoods, priors)) == 0:
        return
    values = [retrodict_complete(likelihoods, priors, j) for j in range(len(priors))]
    assert sum(values) == 1


@given(complete_inputs())
@settings(max_examples=200, deadline=None)
def test_at_most_one_value_is_certain(data):
    # With every prior strictly positive, two certain values would need two
    # denominators each missing the other's positive term.
    likelihoods, priors = data
    if sum(l * p for l, p in zip(likelihoods, priors)) == 0:
        return
    certain = sum(
        1 for j in range(len(priors)) if retrodict_complete(likelihoods, priors, j) == 1
    )
    assert certain <= 1


@given(complete_inputs(), st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8))
@settings(max_examples=150, deadline=None)
def test_complete_is_scale_invariant_in_the_likelihoods(data, scale):
    likelihoods, priors = data
    if sum(l * p for l, p in zip(likelihoods, priors)) == 0:
        return
    scaled = [scale * l for l in likelihoods]
    for j in range(len(priors)):
        assert retrodict_complete(scaled, priors, j) == retrodict_complete(likelihoods, priors, j)


@given(
    st.fractions(min_value=0, max_value=1, max_denominator=12),
    st.fractions(min_value=F(1, 12), max_value=F(11, 12), max_denominator=12),
    st.fractions(min_value=0, max_value=1, max_denominator=12),
    st.fractions(min_value=F(1, 4), max_value=1, max_denominator=8),
)
@settings(max_examples=200, deadline=None)
def test_partial_is_scale_invariant_in_the_likelihoods(likelihood, prior, likelihood_negation, scale):
    if likelihood * prior + likelihood_negation * (1 - prior) == 0:
        return
    base = retrodict_partial(RetrodictionInputs(likelihood, prior, likelihood_negation, 1 - prior))
    scaled = retrodict_partial(
        RetrodictionInputs(scale * likelihood, prior, scale * likelihood_negation, 1 - prior)
    )
    assert scaled == base
