import pytest

from threebox.decks import three_box_deck, two_value_deck


@pytest.fixture(scope="session")
def threebox():
    return three_box_deck()


@pytest.fixture(scope="session")
def twovalue():
    return two_value_deck()
