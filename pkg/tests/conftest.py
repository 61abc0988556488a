import pytest

from probvoter.logic import parse_expression, parse_table_file

TWO_ONES_FILE = b"a b c d\n0000000000001010\n"


@pytest.fixture
def two_ones():
    """4-input reference function with two 1-rows (heavily skewed toward 0)."""
    return parse_table_file(TWO_ONES_FILE)


@pytest.fixture
def four_ones():
    """4-input reference function with four 1-rows."""
    return parse_expression("!a&!b&c + a&b&!d", ("a", "b", "c", "d"))
