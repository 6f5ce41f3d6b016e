import json
import shutil
from fractions import Fraction
from pathlib import Path

import pytest

from app.commands import CommandHandler, Grid
from app.exceptions import (
    CommandError,
    DeltaTooLargeError,
    NotChainTransitiveError,
    PaperCheckFailure,
    ValidationError,
)

pytestmark = pytest.mark.integration


@pytest.fixture
def handler_factory(run_config_factory, test_settings, corpus_dir):
    """Factory for handlers on the bundled corpus"""
    def create(subcommand: str = "test", **kwargs) -> CommandHandler:
        return CommandHandler(run_config_factory(subcommand, **kwargs), settings=test_settings, corpus_dir=corpus_dir)
    return create


class TestEmission:
    """Test artifact formats"""

    def test_csv_header_carries_run_config(self, handler_factory):
        report = handler_factory("sft", resolution=2).sft("golden_mean")
        text = Path(report.artifacts[0]).read_text()
        assert text.startswith("# subcommand=sft\n# resolution=2\n")
        assert "L,size,words" in text

    def test_json_payload(self, handler_factory):
        report = handler_factory("sft", output_format="json", resolution=1).sft("golden_mean")
        document = json.loads(Path(report.artifacts[0]).read_text())
        assert document["run_config"]["subcommand"] == "sft"
        assert [row["size"] for row in document["language"]] == [2, 3]

    def test_dot_graph(self, handler_factory):
        report = handler_factory("sft", output_format="dot", resolution=1).sft("golden_mean")
        path = Path(report.artifacts[0])
        assert path.suffix == ".dot"
        assert "digraph block_L2" in path.read_text()

    def test_dot_falls_back_to_csv(self, handler_factory):
        report = handler_factory("interval", output_format="dot").interval("ex31", "eval", x=Fraction(1, 4), depth=2)
        assert report.artifacts[0].endswith(".csv")


class TestSymbolicCommands:
    def test_sft_sizes(self, handler_factory):
        assert handler_factory(resolution=3).sft("golden_mean").data["sizes"] == [2, 3, 5, 8]

    def test_limits(self, handler_factory):
        report = handler_factory(resolution=1).limits_cmd("ex52_x", ("alpha", "omega"))
        assert any(line.startswith("alpha") for line in report.lines)
        assert len(report.lines) == 5

    def test_shadow_random(self, handler_factory):
        report = handler_factory(resolution=2, seed=5).shadow("golden_mean", "forward", length=6, count=3)
        assert report.data["failures"] == 0

    def test_shadow_library_orbit(self, handler_factory):
        report = handler_factory(resolution=1).shadow("golden_mean", "forward", length=1, pseudo_orbit="golden_forward")
        assert report.data["failures"] == 0

    def test_library_orbit_too_coarse(self, handler_factory):
        with pytest.raises(DeltaTooLargeError):
            handler_factory(resolution=3).shadow("golden_mean", "forward", length=1, pseudo_orbit="zero_backward")

    def test_shadow_length_is_validated(self, handler_factory):
        with pytest.raises(ValidationError):
            handler_factory().shadow("golden_mean", "forward", length=0)

    def test_witness_on_two_sided_point(self, handler_factory):
        report = handler_factory(resolution=2, horizon=32).witness("ex52_x")
        assert report.data == {"cofinal": True, "limit": True}
        assert report.lines[0].startswith("backward asymptotic")

    def test_backward_witness_needs_two_sided_point(self, handler_factory):
        with pytest.raises(CommandError):
            handler_factory().witness("fixed_zero", "backward")


class TestSpecCommands:
    def test_ict_spikes(self, handler_factory):
        report = handler_factory(resolution=2).ict(spikes="0:12")
        assert report.data["first_failure"] is None

    def test_ict_windows_not_transitive(self, handler_factory):
        report = handler_factory(resolution=1).ict(windows="00 11")
        assert report.data["first_failure"] == 0

    def test_exactly_one_input(self, handler_factory):
        with pytest.raises(CommandError):
            handler_factory().ict(source="golden_mean", spikes="0:1")

    def test_bad_spike_syntax(self, handler_factory):
        with pytest.raises(CommandError):
            handler_factory().ict(spikes="01")

    def test_construct(self, handler_factory):
        report = handler_factory("construct", resolution=2).construct(length=512, spikes="0:1")
        assert report.data["valid"]
        stream, certificate = (Path(a) for a in report.artifacts)
        lines = stream.read_text().splitlines()
        assert lines[0] == "# subcommand=construct"
        assert len(lines[-1]) == 512
        assert json.loads(certificate.read_text())["certificate"]["resolution"] == 2

    def test_construct_full(self, handler_factory):
        report = handler_factory("construct", resolution=1).construct(length=64, full=True, source="golden_mean")
        assert report.data["valid"]
        assert "# window starts at index -64" in Path(report.artifacts[0]).read_text()

    def test_construct_not_transitive(self, handler_factory):
        with pytest.raises(NotChainTransitiveError):
            handler_factory(resolution=1).construct(length=64, windows="00 11")


class TestIntervalCommand:
    def test_eval(self, handler_factory):
        report = handler_factory().interval("ex31", "eval", x=Fraction(1, 4), depth=1)
        assert report.lines == ("f^0(1/4) = 1/4", "f^1(1/4) = 0")

    def test_preimages(self, handler_factory):
        report = handler_factory().interval("ex31", "preimages", x=Fraction(0))
        assert report.lines == ("f^-1(0): 1/2, [-1/2, 1/2)",)

    def test_a2(self, handler_factory):
        report = handler_factory().interval("ex31", "a2", x=Fraction(0))
        assert report.data["boxes"] == [0, 32, 63]

    def test_chain(self, handler_factory):
        report = handler_factory().interval("ex44", "chain", grid=Grid(Fraction(1, 128), Fraction(1, 256)))
        assert report.data["boxes"] == [0, 126, 127, 128, 254, 255]

    def test_ict_needs_points(self, handler_factory):
        with pytest.raises(CommandError):
            handler_factory().interval("ex44", "ict")

    def test_missing_x(self, handler_factory):
        with pytest.raises(CommandError, match="--x"):
            handler_factory().interval("ex31", "a1")

    def test_falsify(self, handler_factory):
        report = handler_factory().interval("ex44", "falsify")
        assert report.data["valid"]
        document = json.loads(Path(report.artifacts[0]).read_text())
        assert document["rechecked"] is True

    def test_unknown_operation(self, handler_factory):
        with pytest.raises(CommandError):
            handler_factory().interval("ex31", "spin")


class TestVerifyPaper:
    def test_single_example(self, handler_factory):
        report = handler_factory("verify-paper", only="5.2").verify_paper("5.2")
        assert report.lines[-1].endswith("check(s) passed")

    def test_failure_raises(self, run_config_factory, test_settings, corpus_dir, tmp_path):
        corpus = tmp_path / "corpus"
        shutil.copytree(corpus_dir, corpus)
        (corpus / "points.json").write_text("{")
        handler = CommandHandler(run_config_factory("verify-paper"), settings=test_settings, corpus_dir=corpus)
        with pytest.raises(PaperCheckFailure) as exc_info:
            handler.verify_paper("5.2")
        lines = exc_info.value.lines
        assert lines[0].startswith("[FAIL] 5.2 run ")
        assert "1 of 1 check(s) failed" in lines
        assert lines[-1].startswith("wrote ")
