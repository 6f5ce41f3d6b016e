import shutil

import pytest

from app.exceptions import ValidationError
from app.services.paper_service import EXAMPLE_IDS, PaperService, example_key


@pytest.fixture
def paper(corpus_dir, limits, construct, intervals) -> PaperService:
    return PaperService(corpus_dir, limits, construct, intervals)


class TestExampleIds:
    def test_numeric_ordering(self):
        assert sorted(["4.10", "4.4", "2.8", "4.7"], key=example_key) == ["2.8", "4.4", "4.7", "4.10"]

    def test_every_id_has_a_check(self, paper):
        assert set(paper.checks) == set(EXAMPLE_IDS)


class TestVerify:
    """Test running example checks into a report"""

    @pytest.mark.parametrize("example_id", ["2.8", "3.1", "3.2", "4.4", "5.2"])
    def test_single_example_passes(self, paper, example_id):
        report = paper.verify(only=example_id)
        assert report.results
        assert {r.example_id for r in report.results} == {example_id}
        assert report.passed, report.failed

    def test_class_claim_names_its_resolution(self, paper):
        rows = {r.name: r for r in paper.verify(only="5.2").results}
        assert "maximal_class_k2" not in rows
        assert rows["maximal_class_k1"].claim.startswith("checked at k=1 (window length 2)")
        assert rows["finite_resolution_class"].tag == "DERIVED"

    def test_a3_check_is_exact(self, paper):
        row = next(r for r in paper.verify(only="3.2").results if r.name == "A3")
        assert row.tag == "PAPER"
        assert row.computed == "[10, 32, 53, 95]"
        assert row.passed

    def test_unknown_id(self, paper):
        with pytest.raises(ValidationError, match="unknown example id"):
            paper.verify(only="9.9")

    def test_aborted_example_becomes_a_failed_check(self, paper, mocker):
        paper.checks["3.1"] = mocker.Mock(side_effect=RuntimeError("boom"))
        report = paper.verify(only="3.1")
        assert report.failed == ["3.1:run"]
        assert report.results[0].error == "RuntimeError: boom"

    def test_corrupted_corpus_fails_only_its_example(self, corpus_dir, tmp_path):
        corpus = tmp_path / "corpus"
        shutil.copytree(corpus_dir, corpus)
        (corpus / "ex31.map").write_text("name = ex31\nnot,a,piece\n")
        service = PaperService(corpus)
        assert service.verify(only="3.1").failed == ["3.1:run"]
        assert service.verify(only="3.2").passed

    @pytest.mark.slow
    def test_all_examples_in_parallel(self, corpus_dir):
        report = PaperService(corpus_dir, jobs=2).verify()
        ids = [r.example_id for r in report.results]
        assert ids == sorted(ids, key=example_key)
        assert set(ids) == set(EXAMPLE_IDS)
        assert report.passed, report.failed
