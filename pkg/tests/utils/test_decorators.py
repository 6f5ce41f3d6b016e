import logging

import pytest

from app.exceptions import DeltaTooLargeError, PaperCheckFailure, ParseError, ValidationError
from app.utils.decorators import handle_errors, timed, validate_input
from app.utils.validators import FieldValidators


class TestHandleErrors:
    """Test conversion of application errors into exit codes"""

    def test_passes_result_through(self):
        assert handle_errors(lambda: 7)() == 7

    @pytest.mark.parametrize(
        "error, code",
        [(ParseError("bad line", source="f.sft", line=3), 2), (DeltaTooLargeError(2, 3), 3)],
    )
    def test_exit_code_and_message(self, capsys, error, code):
        def fail():
            raise error

        with pytest.raises(SystemExit) as exc_info:
            handle_errors(fail)()
        assert exc_info.value.code == code
        assert capsys.readouterr().err.startswith(f"{error.error_code}: ")

    def test_failed_checks_echo_rows_to_stdout(self, capsys):
        def fail():
            raise PaperCheckFailure(["3.2:A3"], lines=("[FAIL] 3.2 A3 (PAPER): [10, 32]",))

        with pytest.raises(SystemExit) as exc_info:
            handle_errors(fail)()
        assert exc_info.value.code == 4
        captured = capsys.readouterr()
        assert captured.out == "[FAIL] 3.2 A3 (PAPER): [10, 32]\n"
        assert captured.err.startswith("CHECK_FAILED: 1 check(s) failed: 3.2:A3")

    def test_other_errors_propagate(self):
        def fail():
            raise KeyError("x")

        with pytest.raises(KeyError):
            handle_errors(fail)()


class TestValidateInput:
    def test_rejects_keyword(self):
        @validate_input(length=FieldValidators.validate_positive_int)
        def build(*, length: int) -> int:
            return length

        assert build(length=4) == 4
        with pytest.raises(ValidationError, match="length"):
            build(length=0)


class TestTimed:
    def test_logs_duration(self, caplog):
        @timed
        def work() -> str:
            return "done"

        with caplog.at_level(logging.DEBUG, logger="app.utils.decorators"):
            assert work() == "done"
        assert "took" in caplog.text
