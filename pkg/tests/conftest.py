import pytest

from magic.builtin_graphs import builtin
from magic.constants import MagicPair
from magic.search import enumerate_configurations


@pytest.fixture(scope="session")
def c20():
    return builtin("c20")


@pytest.fixture(scope="session")
def c24():
    return builtin("c24")


@pytest.fixture(scope="session")
def c26():
    return builtin("c26")


@pytest.fixture(scope="session")
def c24_low(c24):
    """Stored solutions of the tightest C24 pair (57,108), sorted."""
    return enumerate_configurations(c24, MagicPair(sp=57, sh=108), store=True, sorted_output=True)


@pytest.fixture(scope="session")
def c24_low_complement(c24):
    return enumerate_configurations(c24, MagicPair(sp=68, sh=42), store=True, sorted_output=True)


@pytest.fixture(scope="session")
def c26_next(c26):
    """Stored solutions of C26 (72,63), the first non-empty C26 row."""
    return enumerate_configurations(c26, MagicPair(sp=72, sh=63), store=True, sorted_output=True)


@pytest.fixture
def c20_faces(c20):
    return [list(face) for face in c20.faces]
