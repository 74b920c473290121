"""Exact probability semantics over the card machine.

An :class:`Experiment` is a preparation (event ordinal 0), an ordered list of
manifestations (ordinals 1, 2, ...), and optionally a postselection: an
outcome at one ordinal that accepted runs must show.  ``enumerate_tree``
expands every possible outcome sequence into a branch tree with exact
rational probabilities; conditional and retrodictive queries are ratios of
leaf sums, so every probabilistic claim is an exact `Fraction`.

The module also carries the deck's closed-form single-step probabilities
(checkable against enumeration), and mixture states: weighted combinations
of system states merged into one enlarged [These | Others] partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .deck import (
    Card,
    CardValue,
    Deck,
    Manifestation,
    Outcome,
    PreparationTarget,
    SystemState,
    prepare,
    step_distribution,
)
from .errors import (
    InvalidArgumentsError,
    SequenceTooLongError,
    UndefinedConditionalError,
    WeightsNotNormalizedError,
)

# Branch counts grow as (values per variable + 1)^depth; decks are tiny but
# trees are materialized fully, so cap the event sequence length.
MAX_EVENTS = 8


def format_fraction(value: Fraction) -> str:
    """Serialize a rational as the explicit ``num/den`` string (``1`` -> ``1/1``)."""
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    """Preparation, ordered manifestations, and an optional postselection.

    Ordinals are 1-based: ordinal ``k`` is the ``k``-th manifestation; the
    preparation sits at ordinal 0.  The postselection names an ordinal and
    the outcome accepted runs must show there.
    """

    deck: Deck
    preparation: PreparationTarget
    manifestations: tuple[Manifestation, ...] = ()
    postselection: tuple[int, Outcome] | None = None

    def __post_init__(self) -> None:
        if len(self.manifestations) > MAX_EVENTS:
            raise SequenceTooLongError(
                f"{len(self.manifestations)} events requested; the enumerator expands at most {MAX_EVENTS}"
            )
        self.deck.value(self.preparation.variable, self.preparation.value.label)
        for m in self.manifestations:
            self.deck.variable(m.variable)
            if m.partial_on is not None:
                self.deck.value(m.variable, m.partial_on)
        if self.postselection is not None:
            ordinal, outcome = self.postselection
            self.check_outcome_at(ordinal, outcome, "postselection")

    def check_outcome_at(self, ordinal: int, outcome: Outcome, role: str = "outcome") -> Manifestation:
        """Validate that ``outcome`` is one the manifestation at ``ordinal`` can report."""
        if not 1 <= ordinal <= len(self.manifestations):
            raise InvalidArgumentsError(
                f"{role} ordinal {ordinal} does not name a manifestation (1..{len(self.manifestations)})"
            )
        m = self.manifestations[ordinal - 1]
        if m.variable != outcome.variable:
            raise InvalidArgumentsError(
                f"{role} {outcome} does not match the variable observed at ordinal {ordinal} ({m})"
            )
        if m.partial_on is None:
            if outcome.negated:
                raise InvalidArgumentsError(f"complete observation at ordinal {ordinal} never reports {outcome}")
            self.deck.value(outcome.variable, outcome.value.label)
        elif outcome.value.label != m.partial_on:
            raise InvalidArgumentsError(
                f"partial observation {m} at ordinal {ordinal} reports only {m.partial_on} or ~{m.partial_on}"
            )
        return m


# ---------------------------------------------------------------------------
# Branch trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """One node of the enumeration tree.

    ``outcomes`` is the outcome sequence down to this node and
    ``probability`` the exact chance of that sequence; children cover every
    outcome of the next manifestation, zero-probability ones included.
    """

    state: SystemState
    outcomes: tuple[Outcome, ...]
    probability: Fraction
    children: tuple["Branch", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator["Branch"]:
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()


def enumerate_tree(experiment: Experiment) -> Branch:
    """Expand every outcome sequence of the experiment with exact probabilities."""

    def expand(state: SystemState, depth: int, outcomes: tuple[Outcome, ...], probability: Fraction) -> Branch:
        if depth == len(experiment.manifestations):
            return Branch(state, outcomes, probability)
        m = experiment.manifestations[depth]
        same_variable = state.memory == experiment.deck.variable(m.variable).name
        children = []
        for outcome, p in step_distribution(state, m).items():
            child_state = state if same_variable else prepare(experiment.deck, outcome)
            children.append(expand(child_state, depth + 1, outcomes + (outcome,), probability * p))
        return Branch(state, outcomes, probability, tuple(children))

    return expand(prepare(experiment.deck, experiment.preparation), 0, (), Fraction(1))


def leaf_distribution(experiment: Experiment) -> dict[tuple[Outcome, ...], Fraction]:
    """Probability of every complete outcome sequence."""
    return {leaf.outcomes: leaf.probability for leaf in enumerate_tree(experiment).leaves()}


def tree_report(experiment: Experiment) -> dict:
    """JSON-ready report: every leaf sequence with its exact probability."""
    report: dict = {
        "events": [str(m) for m in experiment.manifestations],
        "preparation": str(experiment.preparation),
        "leaves": [
            {
                "outcomes": [str(o) for o in leaf.outcomes],
                "probability": format_fraction(leaf.probability),
            }
            for leaf in enumerate_tree(experiment).leaves()
        ],
    }
    if experiment.postselection is not None:
        ordinal, outcome = experiment.postselection
        report["postselection"] = {"ordinal": ordinal, "outcome": str(outcome)}
    return report


# ---------------------------------------------------------------------------
# Outcome patterns (conjunction / disjunction / negation over ordinals)
# ---------------------------------------------------------------------------


class Pattern:
    """A predicate over outcome sequences, built from (ordinal, outcome) atoms."""

    def matches(self, outcomes: Sequence[Outcome]) -> bool:
        raise NotImplementedError

    def ordinals(self) -> set[int]:
        raise NotImplementedError

    def __and__(self, other: "Pattern") -> "Pattern":
        return AllOf((self, other))

    def __or__(self, other: "Pattern") -> "Pattern":
        return AnyOf((self, other))

    def __invert__(self) -> "Pattern":
        return Negation(self)


@dataclass(frozen=True)
class OutcomeAt(Pattern):
    """The event at ``ordinal`` reported exactly this outcome."""

    ordinal: int
    outcome: Outcome

    def matches(self, outcomes: Sequence[Outcome]) -> bool:
        return outcomes[self.ordinal - 1] == self.outcome

    def ordinals(self) -> set[int]:
        return {self.ordinal}


@dataclass(frozen=True)
class AllOf(Pattern):
    patterns: tuple[Pattern, ...]

    def matches(self, outcomes: Sequence[Outcome]) -> bool:
        return all(p.matches(outcomes) for p in self.patterns)

    def ordinals(self) -> set[int]:
        return set().union(*(p.ordinals() for p in self.patterns))


@dataclass(frozen=True)
class AnyOf(Pattern):
    patterns: tuple[Pattern, ...]

    def matches(self, outcomes: Sequence[Outcome]) -> bool:
        return any(p.matches(outcomes) for p in self.patterns)

    def ordinals(self) -> set[int]:
        return set().union(*(p.ordinals() for p in self.patterns))


@dataclass(frozen=True)
class Negation(Pattern):
    pattern: Pattern

    def matches(self, outcomes: Sequence[Outcome]) -> bool:
        return not self.pattern.matches(outcomes)

    def ordinals(self) -> set[int]:
        return self.pattern.ordinals()


def _check_pattern(experiment: Experiment, pattern: Pattern) -> None:
    for ordinal in pattern.ordinals():
        if not 1 <= ordinal <= len(experiment.manifestations):
            raise InvalidArgumentsError(
                f"pattern refers to ordinal {ordinal}, but the experiment has {len(experiment.manifestations)} event(s)"
            )


def probability(experiment: Experiment, pattern: Pattern) -> Fraction:
    """Exact probability that a run's outcome sequence matches the pattern."""
    _check_pattern(experiment, pattern)
    return sum(
        (leaf.probability for leaf in enumerate_tree(experiment).leaves() if pattern.matches(leaf.outcomes)),
        Fraction(0),
    )


def conditional_probability(experiment: Experiment, target: Pattern, condition: Pattern) -> Fraction:
    """Pr(target and condition) / Pr(condition), both exact.

    Raises UndefinedConditionalError when the condition has probability zero.
    """
    _check_pattern(experiment, target)
    _check_pattern(experiment, condition)
    joint = Fraction(0)
    conditioning = Fraction(0)
    for leaf in enumerate_tree(experiment).leaves():
        if condition.matches(leaf.outcomes):
            conditioning += leaf.probability
            if target.matches(leaf.outcomes):
                joint += leaf.probability
    if conditioning == 0:
        raise UndefinedConditionalError("conditioning event has probability zero")
    return joint / conditioning


def retrodict_exact(experiment: Experiment, ordinal: int, outcome: Outcome) -> Fraction:
    """Chance an intermediate event reported ``outcome``, given the postselection.

    The experiment must carry a postselection, and the queried ordinal must
    precede it.
    """
    if experiment.postselection is None:
        raise InvalidArgumentsError("retrodiction needs an experiment with a postselection")
    ps_ordinal, ps_outcome = experiment.postselection
    experiment.check_outcome_at(ordinal, outcome, "query")
    if ordinal >= ps_ordinal:
        raise InvalidArgumentsError(
            f"queried ordinal {ordinal} must precede the postselection ordinal {ps_ordinal}"
        )
    return conditional_probability(experiment, OutcomeAt(ordinal, outcome), OutcomeAt(ps_ordinal, ps_outcome))


def acceptance_probability(experiment: Experiment) -> Fraction:
    """Exact probability that a run survives the postselection filter."""
    if experiment.postselection is None:
        raise InvalidArgumentsError("experiment has no postselection")
    ordinal, outcome = experiment.postselection
    return probability(experiment, OutcomeAt(ordinal, outcome))


# ---------------------------------------------------------------------------
# Closed-form single-step probabilities
# ---------------------------------------------------------------------------

SAME_VAR = "same-var"
CROSS_VAR = "cross-var"
NEGATED_SAME_VAR = "negated-same-var"
NEGATED_CROSS_VAR = "negated-cross-var"
NEGATION_COMPLEMENT = "negation-complement"

FORMULAS = (SAME_VAR, CROSS_VAR, NEGATED_SAME_VAR, NEGATED_CROSS_VAR, NEGATION_COMPLEMENT)


def closed_form(deck: Deck, formula: str, preparation: PreparationTarget, value: CardValue) -> Fraction:
    """Evaluate one of the deck's closed-form single-step probabilities.

    With N copies per value, V values per variable, and joint counts
    N(f·s), a freshly prepared state obeys:

    * ``same-var``:           Pr[v=value | prepared value'] = 1 if equal else 0
    * ``cross-var``:          Pr[other-variable value] = (N - joint) / (N (V - 1))
    * ``negated-same-var``:   Pr[v | prepared ~v'] = 0 if v = v' else 1 / (V - 1)
    * ``negated-cross-var``:  Pr[other-variable value | prepared ~v] = joint / N
    * ``negation-complement``: Pr[~v] = 1 - Pr[v] for any preparation

    Raises InvalidArgumentsError when the formula does not apply to the
    given (preparation, value) combination.
    """
    if formula not in FORMULAS:
        raise InvalidArgumentsError(f"unknown formula {formula!r}; expected one of {', '.join(FORMULAS)}")
    deck.value(preparation.variable, preparation.value.label)
    deck.value(value.variable, value.label)
    same_variable = preparation.variable == value.variable

    if formula == NEGATION_COMPLEMENT:
        return 1 - _value_probability(deck, preparation, value)

    expected = {
        SAME_VAR: (False, True),
        CROSS_VAR: (False, False),
        NEGATED_SAME_VAR: (True, True),
        NEGATED_CROSS_VAR: (True, False),
    }[formula]
    if (preparation.negated, same_variable) != expected:
        raise InvalidArgumentsError(
            f"formula {formula!r} does not apply to preparation {preparation} and value {value.variable}={value.label}"
        )
    return _value_probability(deck, preparation, value)


def _value_probability(deck: Deck, preparation: PreparationTarget, value: CardValue) -> Fraction:
    """Dispatch to the closed form matching the preparation/value relation."""
    n = deck.copies_per_value
    v = deck.values_per_variable
    same_variable = preparation.variable == value.variable
    same_label = same_variable and preparation.value.label == value.label
    if not preparation.negated and same_variable:
        return Fraction(1 if same_label else 0)
    if not preparation.negated:
        return Fraction(n - deck.joint_count_for(preparation.value, value), n * (v - 1))
    if same_variable:
        return Fraction(0) if same_label else Fraction(1, v - 1)
    return Fraction(deck.joint_count_for(preparation.value, value), n)


def single_step_probability(deck: Deck, preparation: PreparationTarget, outcome: Outcome) -> Fraction:
    """Closed-form chance that the first observation after preparing reports ``outcome``."""
    p = _value_probability(deck, preparation, outcome.value)
    return 1 - p if outcome.negated else p


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixtureState:
    """System states combined with positive rational weights summing to one."""

    components: tuple[tuple[SystemState, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise WeightsNotNormalizedError("a mixture needs at least one component")
        if any(weight <= 0 for _, weight in self.components):
            raise WeightsNotNormalizedError("mixture weights must be positive")
        total = sum(weight for _, weight in self.components)
        if total != 1:
            raise WeightsNotNormalizedError(f"mixture weights sum to {total}, not 1")


def mixture_combine(mixture: MixtureState) -> SystemState:
    """Merge a mixture into one enlarged [These | Others] partition.

    Components are scaled by weight times the least common multiple of the
    weight denominators (keeping multiplicities integral) and their piles
    merged; the result lives on the correspondingly scaled deck.  For
    components with equal-size These piles (e.g. value preparations of one
    variable) the merged state's step distributions equal the weighted
    average of the component step distributions.
    """
    states = [state for state, _ in mixture.components]
    deck = states[0].deck
    if any(state.deck != deck for state in states):
        raise InvalidArgumentsError("mixture components must share one deck")
    if any(state.memory != states[0].memory for state in states):
        raise InvalidArgumentsError("mixture components must share the memory variable")

    scale = math.lcm(*(weight.denominator for _, weight in mixture.components))
    if scale == 1 and len(states) == 1:
        return states[0]
    these: list[Card] = []
    others: list[Card] = []
    for state, weight in mixture.components:
        factor = int(weight * scale)
        these.extend(state.these * factor)
        others.extend(state.others * factor)
    return SystemState(
        deck=deck.scaled(scale),
        these=tuple(sorted(these)),
        others=tuple(sorted(others)),
        memory=states[0].memory,
    )


# ---------------------------------------------------------------------------
# Text syntax shared with the CLI
# ---------------------------------------------------------------------------
#
#   preparation / outcome:  Var=Value   or  Var=~Value
#   manifestation:          Var         (complete)  or  Var?Value  (partial)
#   outcome reference:      [ordinal:]Var=Value — without the ordinal it
#                           resolves to the unique observation of Var.


def parse_target(deck: Deck, text: str) -> Outcome:
    """Parse ``Var=Value`` / ``Var=~Value`` into an outcome or preparation target."""
    variable, sep, label = text.partition("=")
    if not sep or not variable or not label:
        raise InvalidArgumentsError(f"expected Var=Value or Var=~Value, got {text!r}")
    negated = label.startswith("~")
    if negated:
        label = label[1:]
    return Outcome(deck.value(variable.strip(), label.strip()), negated=negated)


def parse_manifestation(deck: Deck, text: str) -> Manifestation:
    """Parse ``Var`` (complete) or ``Var?Value`` (partial) into a manifestation."""
    variable, sep, label = text.partition("?")
    variable = variable.strip()
    deck.variable(variable)
    if not sep:
        return Manifestation(variable)
    value = deck.value(variable, label.strip())
    return Manifestation(variable, partial_on=value.label)


def parse_outcome_reference(
    deck: Deck, manifestations: Sequence[Manifestation], text: str
) -> tuple[int, Outcome]:
    """Parse ``[ordinal:]Var=Value`` against the experiment's event list."""
    ordinal_text, sep, rest = text.partition(":")
    if sep:
        try:
            ordinal = int(ordinal_text)
        except ValueError:
            raise InvalidArgumentsError(f"ordinal {ordinal_text!r} is not an integer") from None
        outcome = parse_target(deck, rest)
    else:
        outcome = parse_target(deck, text)
        matches = [
            i for i, m in enumerate(manifestations, start=1) if m.variable == outcome.variable
        ]
        if not matches:
            raise InvalidArgumentsError(f"no observation of {outcome.variable!r} to resolve {text!r} against")
        if len(matches) > 1:
            raise InvalidArgumentsError(
                f"{outcome.variable!r} is observed at ordinals {matches}; prefix one, e.g. '{matches[0]}:{text}'"
            )
        ordinal = matches[0]
    return ordinal, outcome


def experiment_from_options(
    deck: Deck,
    prepare_text: str,
    observe_texts: Sequence[str],
    postselect_text: str | None = None,
) -> Experiment:
    """Assemble an experiment from the CLI's textual pieces."""
    preparation = parse_target(deck, prepare_text)
    manifestations = tuple(parse_manifestation(deck, text) for text in observe_texts)
    postselection = None
    if postselect_text is not None:
        postselection = parse_outcome_reference(deck, manifestations, postselect_text)
    return Experiment(deck, preparation, manifestations, postselection)
