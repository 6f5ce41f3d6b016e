from fractions import Fraction

import pytest

from app.commands import CommandParser, Grid
from app.exceptions import CommandError
from app.schemas.symbolic import to_word


class TestRationals:
    """Test exact rational literals"""

    @pytest.mark.parametrize("text, expected", [("1/3", Fraction(1, 3)), ("-2", Fraction(-2)), (" 4/8 ", Fraction(1, 2))])
    def test_valid(self, text, expected):
        assert CommandParser.parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["0.5", "1/0", "a/b", "", "1//2"])
    def test_invalid(self, text):
        with pytest.raises(CommandError):
            CommandParser.parse_rational(text, "--x")

    def test_positive(self):
        with pytest.raises(CommandError, match="must be positive"):
            CommandParser.parse_positive_rational("0", "--delta")


class TestGrid:
    def test_default_fattening(self):
        assert CommandParser.parse_grid("1/128") == Grid(Fraction(1, 128), Fraction(1, 256))

    def test_explicit_fattening(self):
        grid = CommandParser.parse_grid("1/32:0")
        assert grid.fatten == 0
        assert grid.text == "1/32:0"

    def test_negative_fattening(self):
        with pytest.raises(CommandError):
            CommandParser.parse_grid("1/32:-1/64")


class TestChoices:
    """Test limit kinds, directions and window lists"""

    def test_kinds(self):
        assert CommandParser.parse_kinds("alpha, gamma") == ("alpha", "gamma")

    @pytest.mark.parametrize("text", ["", "beta", "omega,delta"])
    def test_bad_kinds(self, text):
        with pytest.raises(CommandError):
            CommandParser.parse_kinds(text)

    def test_direction_accepts_hyphen(self):
        assert CommandParser.parse_direction("two-sided") == "two_sided"

    def test_bad_direction(self):
        with pytest.raises(CommandError):
            CommandParser.parse_direction("sideways")

    def test_windows(self):
        assert CommandParser.parse_windows("00 01 10") == (to_word("00"), to_word("01"), to_word("10"))

    def test_windows_of_mixed_length(self):
        with pytest.raises(CommandError, match="one length"):
            CommandParser.parse_windows("00 1")

    def test_empty_word(self):
        with pytest.raises(CommandError):
            CommandParser.parse_word("")

    def test_points(self):
        assert CommandParser.parse_points("-1, 0,1/2") == (Fraction(-1), Fraction(0), Fraction(1, 2))

    def test_require(self):
        CommandParser.require(Fraction(0), "--x", "eval")
        with pytest.raises(CommandError, match="eval needs --x"):
            CommandParser.require(None, "--x", "eval")
