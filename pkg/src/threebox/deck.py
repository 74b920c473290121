"""Card-deck stochastic machine with two variables and an observation memory.

The system is a deck of cards, each carrying a value for each of two
variables (conventionally *Face* and *Suit*).  Its complete internal state is
a partition of the deck into two piles, ``These`` and ``Others``, plus a
memory holding the *name* (never the value) of the last-observed variable:

* preparing the state ``P = v`` puts every card matching ``v`` in ``These``,
  the rest in ``Others``, and sets the memory to ``P``;
* observing ``P`` draws a card uniformly from ``These`` when the memory
  already reads ``P`` (a repeated observation), otherwise from ``Others``;
  the drawn card's ``P``-value is reported and, when the memory differed,
  the system is re-prepared for the reported outcome.

Observations come in two flavours: *complete* (report whichever value the
drawn card carries) and *partial on v* (report ``v`` or its negation ``~v``).
A negated report re-prepares the system in the genuine state ``~v`` (These =
every card not carrying ``v``), which is what gives the machine its
interference-like behaviour.  For the memory test a variable counts as the
same variable whether observed completely or partially.

All types here are immutable values; the operations are pure functions, so a
single transition rule can serve both the exact enumerator and the Monte
Carlo sampler.  Randomness is injected as a draw source: a callable mapping a
pool size ``n`` to an index in ``[0, n)`` into the pool's canonical card
sequence (cards sorted by face label, then suit label).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    DrawOutOfRangeError,
    EmptyDeckError,
    InvalidArgumentsError,
    UnequalValueCountsError,
    UnknownLabelError,
)

DrawSource = Callable[[int], int]


@dataclass(frozen=True, order=True)
class Card:
    """One card: a face label paired with a suit label."""

    face: str
    suit: str

    def __str__(self) -> str:
        sep = "" if len(self.face) == 1 and len(self.suit) == 1 else "·"
        return f"{self.face}{sep}{self.suit}"


@dataclass(frozen=True)
class Variable:
    """A named system variable with its ordered value labels."""

    name: str
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise InvalidArgumentsError(f"duplicate value labels for variable {self.name!r}")


@dataclass(frozen=True)
class CardValue:
    """A single value of a single variable, e.g. Face=Q."""

    variable: str
    label: str

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Outcome:
    """A value or its negation: the report of an observation, and equally a
    preparation target (``prepare`` consumes reported outcomes directly).

    ``Outcome(v)`` asserts the variable carries value ``v``;
    ``Outcome(v, negated=True)`` asserts it carries any value but ``v``.
    """

    value: CardValue
    negated: bool = False

    @property
    def variable(self) -> str:
        return self.value.variable

    def matches(self, label: str) -> bool:
        """Whether a card whose value has this ``label`` satisfies the assertion."""
        return (label == self.value.label) != self.negated

    def __str__(self) -> str:
        return f"~{self.value.label}" if self.negated else self.value.label


# A preparation target is the same kind of assertion as an observation report:
# a value, or the genuine negated state of a value.
PreparationTarget = Outcome


@dataclass(frozen=True)
class Manifestation:
    """How a variable is forced to take a value at an event.

    ``partial_on=None`` is the complete observation (any value may be
    reported); ``partial_on=label`` is the partial observation reporting
    either ``label`` or its negation.
    """

    variable: str
    partial_on: str | None = None

    @property
    def complete(self) -> bool:
        return self.partial_on is None

    def outcome_for(self, label: str) -> Outcome:
        """Map a drawn card's value label to the reported outcome."""
        if self.partial_on is None:
            return Outcome(CardValue(self.variable, label))
        return Outcome(CardValue(self.variable, self.partial_on), negated=label != self.partial_on)

    def outcomes(self, deck: Deck) -> tuple[Outcome, ...]:
        """All outcomes this manifestation can report, in schema order."""
        if self.partial_on is None:
            return tuple(
                Outcome(CardValue(self.variable, label))
                for label in deck.variable(self.variable).labels
            )
        value = CardValue(self.variable, self.partial_on)
        return (Outcome(value), Outcome(value, negated=True))

    def __str__(self) -> str:
        return self.variable if self.partial_on is None else f"{self.variable}?{self.partial_on}"


@dataclass(frozen=True)
class Deck:
    """A validated deck: two variables and a canonical card multiset.

    ``cards`` lists every card with repetition, sorted by (face, suit); a
    uniform draw is an index into such a sequence.  Every value of every
    variable appears exactly ``copies_per_value`` times, both variables have
    ``values_per_variable`` values, so the deck holds their product.
    """

    face: Variable
    suit: Variable
    cards: tuple[Card, ...]
    values_per_variable: int
    copies_per_value: int

    @property
    def size(self) -> int:
        return len(self.cards)

    def variable(self, name: str) -> Variable:
        if name == self.face.name:
            return self.face
        if name == self.suit.name:
            return self.suit
        raise UnknownLabelError(f"unknown variable {name!r}; deck has {self.face.name!r} and {self.suit.name!r}")

    def other_variable(self, name: str) -> Variable:
        return self.suit if self.variable(name) is self.face else self.face

    def value(self, variable: str, label: str) -> CardValue:
        var = self.variable(variable)
        if label not in var.labels:
            raise UnknownLabelError(f"variable {var.name!r} has no value {label!r} (values: {', '.join(var.labels)})")
        return CardValue(var.name, label)

    def label_of(self, card: Card, variable: str) -> str:
        return card.face if self.variable(variable) is self.face else card.suit

    def joint_count(self, face_label: str, suit_label: str) -> int:
        self.value(self.face.name, face_label)
        self.value(self.suit.name, suit_label)
        return self.cards.count(Card(face_label, suit_label))

    def joint_count_for(self, a: CardValue, b: CardValue) -> int:
        """Joint count for one value of each variable, in either order."""
        if a.variable == b.variable:
            raise InvalidArgumentsError("joint counts pair one value of each variable")
        face_label = a.label if self.variable(a.variable) is self.face else b.label
        suit_label = b.label if self.variable(a.variable) is self.face else a.label
        return self.joint_count(face_label, suit_label)

    def matching(self, target: Outcome) -> tuple[Card, ...]:
        """Cards satisfying the assertion, in canonical order."""
        self.value(target.variable, target.value.label)
        return tuple(c for c in self.cards if target.matches(self.label_of(c, target.variable)))

    def scaled(self, factor: int) -> Deck:
        """The same schema with every multiplicity multiplied by ``factor``."""
        if factor < 1:
            raise InvalidArgumentsError("scale factor must be a positive integer")
        if factor == 1:
            return self
        return Deck(
            face=self.face,
            suit=self.suit,
            cards=tuple(sorted(self.cards * factor)),
            values_per_variable=self.values_per_variable,
            copies_per_value=self.copies_per_value * factor,
        )

    def __str__(self) -> str:
        return "{" + format_cards(self.cards) + "}"


@dataclass(frozen=True)
class SystemState:
    """Complete internal state: the [These | Others] partition plus memory.

    ``these`` and ``others`` are canonical card sequences whose multiset
    union is the whole deck; ``memory`` names the last-observed (or
    last-prepared) variable and selects the draw pool for the next event.
    """

    deck: Deck
    these: tuple[Card, ...]
    others: tuple[Card, ...]
    memory: str

    def __post_init__(self) -> None:
        self.deck.variable(self.memory)

    def pool_for(self, variable: str) -> tuple[Card, ...]:
        """The pool the next observation of ``variable`` would draw from."""
        return self.these if self.memory == self.deck.variable(variable).name else self.others

    def sharp_value(self, variable: str) -> Outcome | None:
        """The assertion this state is prepared for, if the variable has one.

        Only the memory variable can have a value; the other variable's value
        does not exist until an observation brings it about.  Returns ``None``
        for the non-memory variable and for partitions (such as combined
        mixtures) that match no single preparation.
        """
        if self.deck.variable(variable).name != self.memory:
            return None
        for negated in (False, True):
            for label in self.deck.variable(variable).labels:
                target = Outcome(CardValue(self.memory, label), negated=negated)
                if self.these == self.deck.matching(target):
                    return target
        return None

    def __str__(self) -> str:
        return f"[{format_cards(self.these)} | {format_cards(self.others)}]"


@dataclass(frozen=True)
class EventRecord:
    """Trace entry for one observation: what was drawn and how the state moved."""

    manifestation: Manifestation
    card: Card
    outcome: Outcome
    before: SystemState
    after: SystemState


def format_cards(cards: Sequence[Card]) -> str:
    """Render a card multiset in the compact ``(2)KH, QS, ...`` notation."""
    counts = Counter(cards)
    parts = []
    for card in sorted(counts):
        n = counts[card]
        parts.append(str(card) if n == 1 else f"({n}){card}")
    return ", ".join(parts)


def validate_deck(
    raw: Iterable[tuple[str, str, int]],
    *,
    face_name: str = "Face",
    suit_name: str = "Suit",
    face_labels: Sequence[str] | None = None,
    suit_labels: Sequence[str] | None = None,
) -> Deck:
    """Build a deck from ``(face label, suit label, multiplicity)`` entries.

    Enforces the deck discipline: at least one card, positive multiplicities,
    and every value of every variable appearing equally often (so all values
    are a priori equally likely).  Value label order may be declared
    explicitly; otherwise it is the order of first appearance.

    Raises:
        EmptyDeckError: no cards at all.
        UnequalValueCountsError: some value appears more often than another.
        UnknownLabelError: a card uses a label outside the declared schema.
        InvalidArgumentsError: nonpositive multiplicity or clashing names.
    """
    if face_name == suit_name:
        raise InvalidArgumentsError("the two variables must have distinct names")
    entries = list(raw)
    if not entries or all(n == 0 for _, _, n in entries):
        raise EmptyDeckError("a deck needs at least one card")

    cards: list[Card] = []
    face_seen: list[str] = list(face_labels) if face_labels is not None else []
    suit_seen: list[str] = list(suit_labels) if suit_labels is not None else []
    for face_label, suit_label, multiplicity in entries:
        if multiplicity <= 0:
            raise InvalidArgumentsError(
                f"card ({face_label}, {suit_label}) has nonpositive multiplicity {multiplicity}"
            )
        if face_labels is not None and face_label not in face_seen:
            raise UnknownLabelError(f"face label {face_label!r} not among declared values {face_seen}")
        if suit_labels is not None and suit_label not in suit_seen:
            raise UnknownLabelError(f"suit label {suit_label!r} not among declared values {suit_seen}")
        if face_label not in face_seen:
            face_seen.append(face_label)
        if suit_label not in suit_seen:
            suit_seen.append(suit_label)
        cards.extend([Card(face_label, suit_label)] * multiplicity)

    counts: list[tuple[str, int]] = []
    for label in face_seen:
        counts.append((label, sum(1 for c in cards if c.face == label)))
    for label in suit_seen:
        counts.append((label, sum(1 for c in cards if c.suit == label)))
    reference_label, reference_count = counts[0]
    for label, count in counts[1:]:
        if count != reference_count:
            raise UnequalValueCountsError(label, count, reference_label, reference_count)

    return Deck(
        face=Variable(face_name, tuple(face_seen)),
        suit=Variable(suit_name, tuple(suit_seen)),
        cards=tuple(sorted(cards)),
        values_per_variable=len(face_seen),
        copies_per_value=reference_count,
    )


def prepare(deck: Deck, target: PreparationTarget) -> SystemState:
    """Prepare the system in a value state or a genuine negated-value state.

    Every card satisfying the target goes to ``These``, the remainder to
    ``Others``, and the memory records the target's variable.
    """
    variable = deck.variable(target.variable).name
    these = deck.matching(target)
    if not these:
        raise InvalidArgumentsError(f"preparation {target} matches no card in the deck")
    others = tuple(c for c in deck.cards if not target.matches(deck.label_of(c, variable)))
    return SystemState(deck=deck, these=these, others=others, memory=variable)


def observe(
    state: SystemState,
    manifestation: Manifestation,
    draw: DrawSource,
) -> tuple[Outcome, SystemState, EventRecord]:
    """Perform one observation event, driven by an external draw source.

    A repeated observation (memory equals the observed variable, in either
    complete or partial mode) draws from ``These`` and leaves the state
    untouched.  Otherwise the draw comes from ``Others`` and the system is
    re-prepared for whatever outcome was reported, negations included.

    ``draw`` is called once with the pool size and must return an index into
    the pool's canonical card sequence.
    """
    deck = state.deck
    variable = deck.variable(manifestation.variable).name
    if manifestation.partial_on is not None:
        deck.value(variable, manifestation.partial_on)
    pool = state.these if state.memory == variable else state.others
    if not pool:
        raise DrawOutOfRangeError(f"draw pool for {manifestation} is empty")
    index = draw(len(pool))
    if not 0 <= index < len(pool):
        raise DrawOutOfRangeError(f"draw index {index} outside pool of size {len(pool)}")
    card = pool[index]
    outcome = manifestation.outcome_for(deck.label_of(card, variable))
    after = state if state.memory == variable else prepare(deck, outcome)
    return outcome, after, EventRecord(manifestation, card, outcome, state, after)


def step_distribution(state: SystemState, manifestation: Manifestation) -> dict[Outcome, Fraction]:
    """Exact one-step law of an observation from this state.

    Each possible outcome is listed (zero-probability ones included) with
    probability (matching cards in the selected pool) / (pool size); the
    values always sum to exactly one.
    """
    deck = state.deck
    variable = deck.variable(manifestation.variable).name
    if manifestation.partial_on is not None:
        deck.value(variable, manifestation.partial_on)
    pool = state.these if state.memory == variable else state.others
    if not pool:
        raise DrawOutOfRangeError(f"draw pool for {manifestation} is empty")
    labels = [deck.label_of(card, variable) for card in pool]
    distribution: dict[Outcome, Fraction] = {}
    for outcome in manifestation.outcomes(deck):
        matching = sum(1 for label in labels if outcome.matches(label))
        distribution[outcome] = Fraction(matching, len(pool))
    return distribution
