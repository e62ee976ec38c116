import pytest

from regcc.automata import accepts, builtin_language


@pytest.fixture(scope="session", autouse=True)
def validate_l5_reconstruction():
    """The five-state transition table is pinned by the reference word
    actions plus the appended-b behavior; refuse to run anything if the
    reconstruction drifts."""
    d = builtin_language("L5")
    actions = {
        "abab": (0, 4, 2, 4, 4),
        "abaaab": (0, 4, 4, 4, 4),
        "abbb": (4, 4, 2, 4, 4),
        "ababab": (2, 4, 0, 4, 4),
    }
    for word, expected in actions.items():
        assert d.word_action(word) == expected, word
    assert accepts(d, "ababaa") and not accepts(d, "bbaaaa")
    assert d.step(0, "b") == 1
