"""The two standard decks used throughout the scenarios and tests."""

from __future__ import annotations

from .deck import Deck, validate_deck


def three_box_deck() -> Deck:
    """The deck {(2)KH, QS, QD, JS, JD}: three values per variable, two copies each.

    Preparing Face=Q and postselecting Face=K makes the partial checks
    "spade or not" and "diamond or not" each certain to report their value:
    the classical Three-Box behaviour.
    """
    return validate_deck(
        [("K", "H", 2), ("Q", "S", 1), ("Q", "D", 1), ("J", "S", 1), ("J", "D", 1)],
        face_labels=("K", "Q", "J"),
        suit_labels=("S", "D", "H"),
    )


def two_value_deck() -> Deck:
    """The deck {(2)KS, KH, QS, (2)QH}: two values per variable, three copies each.

    The smallest balanced deck on which preparing Face=K and postselecting
    Suit=H is non-degenerate, used by the counterfactual-sharpness trace.
    """
    return validate_deck(
        [("K", "S", 2), ("K", "H", 1), ("Q", "S", 1), ("Q", "H", 2)],
        face_labels=("K", "Q"),
        suit_labels=("S", "H"),
    )
