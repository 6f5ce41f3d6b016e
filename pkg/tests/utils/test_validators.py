from fractions import Fraction

import pytest

from app.utils.validators import FieldValidators


class TestFieldValidators:
    """Test reusable field validators"""

    @pytest.mark.parametrize("value, expected", [(1, True), (0, False), (True, False), ("3", False)])
    def test_positive_int(self, value, expected):
        assert FieldValidators.validate_positive_int(value) is expected

    def test_non_negative_int(self):
        assert FieldValidators.validate_non_negative_int(0)
        assert not FieldValidators.validate_non_negative_int(-1)

    @pytest.mark.parametrize("text, expected", [("3/4", True), ("-1", True), ("1/0", False), ("0.25", False), ("", False)])
    def test_rational_text(self, text, expected):
        assert FieldValidators.validate_rational_text(text) is expected

    def test_positive_rational(self):
        assert FieldValidators.validate_positive_rational(Fraction(1, 3))
        assert not FieldValidators.validate_positive_rational(0.5)

    def test_word_over(self):
        assert FieldValidators.validate_word_over("0110", "01")
        assert not FieldValidators.validate_word_over("012", "01")

    def test_grid(self):
        assert FieldValidators.validate_grid(Fraction(2), Fraction(1, 32))
        assert not FieldValidators.validate_grid(Fraction(3), Fraction(2, 7))
        assert not FieldValidators.validate_grid(Fraction(1), Fraction(0))

    def test_choice(self):
        assert FieldValidators.validate_choice("omega", ("alpha", "omega"))
        assert not FieldValidators.validate_choice("gamma", ("alpha", "omega"))
