import pytest

from app.exceptions import EmptySubshiftError, InconsistencyError, ValidationError
from app.schemas.symbolic import Alphabet, to_word
from app.services.symbolic_service import admissible_words, cyclic_windows, text_windows


class TestSftConstruction:
    """Test SFT construction and pruning"""

    def test_golden_mean_memory(self, golden_mean):
        assert golden_mean.memory == 1
        assert golden_mean.order == 1
        assert golden_mean.edge_words == {to_word("00"), to_word("01"), to_word("10")}

    def test_full_shift_has_memory_zero(self, full2):
        assert full2.memory == 0
        assert full2.forbidden == frozenset()

    def test_dead_symbols_are_pruned(self, symbolic):
        """Symbol 2 can never be followed, so no bi-infinite point uses it"""
        sft = symbolic.sft_from_forbidden(Alphabet.of("012"), [to_word("20"), to_word("21"), to_word("22")])
        assert sft.pruned_symbols == ("2",)
        assert symbolic.language(sft, 2).texts() == ["00", "01", "10", "11"]

    def test_empty_subshift(self, symbolic):
        with pytest.raises(EmptySubshiftError):
            symbolic.sft_from_forbidden(Alphabet.of("01"), [to_word("0"), to_word("1")])

    def test_forbidden_word_outside_alphabet(self, symbolic):
        with pytest.raises(ValidationError):
            symbolic.sft_from_forbidden(Alphabet.of("01"), [to_word("2")])

    def test_sft_from_windows(self, symbolic, window_set_factory):
        sft = symbolic.sft_from_windows(window_set_factory("00 01 10"))
        assert symbolic.language(sft, 3).texts() == ["000", "001", "010", "100", "101"]


class TestLanguage:
    """Test languages of shifts of finite type"""

    def test_golden_mean_fibonacci_sizes(self, symbolic, golden_mean):
        assert [symbolic.language(golden_mean, L).size for L in range(1, 5)] == [2, 3, 5, 8]

    def test_full_shift_sizes(self, symbolic, full2):
        assert [symbolic.language(full2, L).size for L in range(1, 4)] == [2, 4, 8]

    def test_language_is_exact(self, symbolic, golden_mean):
        assert symbolic.language(golden_mean, 3).provenance.is_exact

    def test_invalid_length(self, symbolic, golden_mean):
        with pytest.raises(ValidationError):
            symbolic.language(golden_mean, 0)

    def test_brute_force_agreement(self, symbolic, golden_mean):
        """Language words match brute-force admissible words for this essential SFT"""
        for L in range(1, 7):
            brute = admissible_words("01", [to_word("11")], L)
            assert symbolic.language(golden_mean, L).words == frozenset(brute)


class TestBlockGraph:
    """Test overlap graphs of window sets"""

    def test_golden_mean_graph(self, symbolic, golden_mean):
        graph = symbolic.block_graph(symbolic.language(golden_mean, 2), symbolic.language(golden_mean, 3))
        assert (to_word("01"), to_word("10")) in graph.edges
        assert (to_word("10"), to_word("01")) in graph.edges
        assert not graph.has_self_loop(to_word("01"))
        assert graph.has_self_loop(to_word("00"))

    def test_unextendable_windows(self, symbolic, window_set_factory):
        with pytest.raises(InconsistencyError):
            symbolic.block_graph(window_set_factory("01"))

    def test_extension_must_fit(self, symbolic, window_set_factory):
        with pytest.raises(InconsistencyError):
            symbolic.block_graph(window_set_factory("00"), window_set_factory("011"))


class TestWindowHelpers:
    """Test text and cyclic window helpers"""

    def test_text_windows(self):
        assert text_windows(to_word("0102"), 2) == {to_word("01"), to_word("10"), to_word("02")}

    def test_cyclic_windows(self):
        assert cyclic_windows(to_word("01"), 3) == {to_word("010"), to_word("101")}

    def test_window_at_and_prepend(self, symbolic, periodic_factory):
        point = symbolic.prepend(to_word("11"), periodic_factory("0", transient="2"))
        assert symbolic.window_at(point, 0, 4) == to_word("1120")

    def test_prepend_needs_right_point(self, symbolic, periodic_factory):
        with pytest.raises(ValidationError):
            symbolic.prepend(to_word("1"), periodic_factory("0", side="left"))
