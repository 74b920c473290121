"""Scenario reports: every claim checked, traces populated, diagnoses raised."""

import math

import pytest

from threebox.decks import three_box_deck
from threebox.errors import ZeroAcceptanceError
from threebox.scenarios import (
    SCENARIOS,
    aad_curious,
    counterfactual_trace,
    interference_demo,
    run_scenario,
    three_box_card,
    three_box_quantum,
)

TRIALS = 4000  # plenty for 5-sigma checks at these probabilities


def claims_by_description(report):
    return {claim.description: claim for claim in report.claims}


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_every_scenario_passes(name):
    report = run_scenario(name, trials=TRIALS, seed=11)
    failures = [claim.description for claim in report.claims if not claim.passed]
    assert report.passed, failures


def test_unknown_scenario_name():
    with pytest.raises(KeyError):
        run_scenario("three-box")


class TestThreeBoxCard:
    def test_both_partial_checks_certain(self):
        report = three_box_card(trials=0)
        claims = claims_by_description(report)
        for label in ("S", "D"):
            claim = claims[f"given the final K, the {label}-check is certain to have reported {label}"]
            assert claim.expected == "1/1"
            assert claim.computed == {"enumeration": "1/1", "retrodiction formula": "1/1"}
            assert claim.mode == "exact"

    def test_monte_carlo_claims_present_only_with_trials(self):
        without = three_box_card(trials=0)
        with_mc = three_box_card(trials=TRIALS, seed=9)
        assert not any("Monte Carlo" in c.description for c in without.claims)
        assert any("Monte Carlo" in c.description for c in with_mc.claims)
        assert with_mc.passed

    def test_every_claim_carries_provenance_and_mode(self):
        report = three_box_card(trials=TRIALS, seed=3)
        for claim in report.claims:
            assert claim.source
            assert claim.mode in ("exact", "abs 1e-9", "5 standard errors")


class TestInterference:
    def test_mixture_partition_claim(self):
        report = interference_demo(trials=0)
        claim = next(c for c in report.claims if "mixture combines" in c.description)
        assert claim.passed
        assert "(4)KH" in claim.computed["mixture combination"]

    def test_futures_differ_claim(self):
        report = interference_demo(trials=0)
        claim = next(c for c in report.claims if "different futures" in c.description)
        assert claim.computed == {"~S then K": "0/1", "H∨D then K": "1/6"}
        assert claim.passed

    def test_no_suit_certain_after_complete_observation(self):
        report = interference_demo(trials=0)
        claim = next(c for c in report.claims if "destroys the certainty" in c.description)
        assert claim.passed
        assert claim.computed["retrodictions"] == "1/2, 0/1, 1/2"


class TestThreeBoxQuantum:
    def test_partial_and_complete_values(self):
        report = three_box_quantum()
        claims = claims_by_description(report)
        assert claims["opening box 1 alone finds the particle with certainty"].passed
        assert claims["opening box 3 alone scores 1/5"].expected == "0.2"
        for box in (1, 2, 3):
            assert claims[f"a complete observation retrodicts box {box} to 1/3"].passed


class TestRotatedBasisScenario:
    def test_default_amplitudes(self):
        report = aad_curious()
        claims = claims_by_description(report)
        complete = claims["complete observation in the rotated basis gives 1/(1+2|αβ|²)"]
        assert complete.expected == "0.666666666667"
        assert any("strictly below 1" in c.description for c in report.claims)
        assert report.passed

    def test_degenerate_amplitudes_skip_the_inequality(self):
        report = aad_curious(1.0, 0.0)
        assert report.passed
        assert not any("strictly below 1" in c.description for c in report.claims)


class TestCounterfactual:
    def test_trace_structure(self):
        report = counterfactual_trace(trials=0)
        assert report.passed
        assert len(report.trace) == 3
        prepared, after_face, after_suit = report.trace
        assert prepared["memory"] == "Face"
        assert prepared["values"] == {"Face": "K", "Suit": None}
        assert after_face["values"] == {"Face": "K", "Suit": None}
        assert after_face["outcome"] == "K"
        assert after_suit["memory"] == "Suit"
        assert after_suit["values"] == {"Face": None, "Suit": "H"}

    def test_acceptance_and_retrodiction_claims(self):
        report = counterfactual_trace(trials=TRIALS, seed=29)
        claims = claims_by_description(report)
        assert claims["the Suit=H filter accepts with chance 2/3"].computed["enumeration"] == "2/3"
        certain = claims["an intermediate complete Face observation retrodicts K with certainty"]
        assert certain.expected == "1/1" and certain.passed

    def test_three_box_deck_is_diagnosed(self):
        with pytest.raises(ZeroAcceptanceError) as excinfo:
            counterfactual_trace(deck=three_box_deck(), trials=0)
        message = str(excinfo.value)
        assert "no hearts" in message and "(2)KH" in message


def test_report_serialization_shape():
    report = counterfactual_trace(trials=0)
    payload = report.to_dict()
    assert payload["scenario"] == "counterfactual"
    assert payload["passed"] is True
    assert {"description", "expected", "source", "mode", "computed", "passed"} <= set(
        payload["claims"][0]
    )
    assert isinstance(payload["trace"], list)


def test_monte_carlo_tolerances_are_five_sigma():
    report = three_box_card(trials=TRIALS, seed=5)
    claim = next(c for c in report.claims if c.mode == "5 standard errors")
    expected, tolerance = claim.expected.split(" ± ")
    p = float(expected)
    assert math.isclose(float(tolerance), 5 * math.sqrt(p * (1 - p) / TRIALS), rel_tol=1e-6)
