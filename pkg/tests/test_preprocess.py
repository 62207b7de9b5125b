import pytest
from hypothesis import given
from hypothesis import strategies as st

from scriptmine.errors import EmptyInput
from scriptmine.preprocess import (
    PreprocessConfig,
    TAGSET,
    frequency_report,
    load_stopwords,
    pipeline_text,
    pos_tag,
    remove_noise,
    tokenize_sentences,
    tokenize_words,
)

STOPWORDS = load_stopwords()


class TestTokenizeWords:
    def test_empty(self):
        assert tokenize_words("") == []

    def test_basic_rule(self):
        assert tokenize_words("The LORD said: go!") == ["the", "lord", "said", "go"]

    def test_internal_apostrophe_kept(self):
        assert tokenize_words("God's will") == ["god's", "will"]

    def test_digits_and_punct_skipped(self):
        assert tokenize_words("12 men, 3 ships -- all told") == ["men", "ships", "all", "told"]

    def test_order_preserved(self):
        assert tokenize_words("b a c a") == ["b", "a", "c", "a"]


class TestTokenizeSentences:
    def test_split_on_terminators(self):
        assert tokenize_sentences("A. B? C!") == ["A.", "B?", "C!"]

    def test_empty(self):
        assert tokenize_sentences("") == []

    def test_no_terminator_fallback(self):
        assert tokenize_sentences("no terminator") == ["no terminator"]

    def test_abbreviation_not_split(self):
        sents = tokenize_sentences("See Dr. Smith today. Then rest.")
        assert sents == ["See Dr. Smith today.", "Then rest."]


class TestRemoveNoise:
    def test_paper_stopword_examples(self):
        tokens = ["as", "it", "very", "own", "any", "only", "off", "god"]
        assert remove_noise(tokens, STOPWORDS) == ["god"]

    def test_integers_removed(self):
        assert remove_noise(["1", "2", "3"], STOPWORDS) == []

    def test_punctuation_removed(self):
        assert remove_noise(["-", ",", ":", "...", "word"], STOPWORDS) == ["word"]

    def test_empty(self):
        assert remove_noise([], STOPWORDS) == []

    @given(
        st.lists(st.sampled_from(["god", "the", "42", "-", "lord", "very", "ship"]), max_size=30)
    )
    def test_output_is_subsequence(self, tokens):
        result = remove_noise(tokens, STOPWORDS)
        it = iter(tokens)
        assert all(any(t == r for t in it) for r in result)


class TestPosTag:
    @pytest.mark.parametrize(
        "token,tag",
        [
            ("god", "NN"),
            ("lord", "NN"),
            ("said", "VBD"),
            ("believ", "NN"),
            ("allah", "NN"),
            ("may", "MD"),
            ("quickly", "RB"),
            ("walked", "VBD"),
            ("walking", "VBG"),
            ("ships", "NNS"),
            ("the", "DT"),
            ("42", "CD"),
        ],
    )
    def test_examples(self, token, tag):
        assert pos_tag([token]) == [(token, tag)]

    def test_tags_in_inventory(self):
        tokens = tokenize_words(
            "The lord said he may quickly go walking to the ships of 3 kings"
        )
        assert all(t.tag in TAGSET for t in pos_tag(tokens))


class TestFrequencyReport:
    def test_hand_count(self):
        report = frequency_report(["a", "b", "a"], 2)
        assert report.entries == [("a", 2, 2 / 3), ("b", 1, 1 / 3)]
        assert report.total == 3

    def test_single_token(self):
        assert frequency_report(["x"], 5).entries == [("x", 1, 1.0)]

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            frequency_report([], 3)

    def test_tie_broken_lexicographically(self):
        report = frequency_report(["b", "a", "c", "a", "b", "c"], 3)
        assert [t for t, _, _ in report.entries] == ["a", "b", "c"]

    def test_ratios_sum_to_one(self):
        tokens = ["x", "y", "z", "x", "x", "y"]
        report = frequency_report(tokens, 10)
        assert abs(sum(r for _, _, r in report.entries) - 1.0) < 1e-12


class TestPipeline:
    def test_stage_trace(self, pp_config):
        assert pipeline_text("The LORD believes.", pp_config) == ["lord", "believ"]

    def test_empty(self, pp_config):
        assert pipeline_text("", pp_config) == []

    def test_noise_only(self, pp_config):
        assert pipeline_text("1 2 3 as it", pp_config) == []

    def test_possessive_clitic(self, pp_config):
        assert pipeline_text("god's people", pp_config) == ["god", "peopl"]

    def test_stage_flags(self):
        cfg = PreprocessConfig(stopwords=STOPWORDS, remove_noise=False, stem=False)
        assert pipeline_text("The LORD believes.", cfg) == ["the", "lord", "believes"]
        cfg = PreprocessConfig(stopwords=STOPWORDS, remove_noise=True, stem=False)
        assert pipeline_text("The LORD believes.", cfg) == ["lord", "believes"]

    @given(
        st.text(
            alphabet=st.sampled_from(list("abcdefghijklmnopqr .,!127'")), max_size=120
        )
    )
    def test_idempotent(self, text):
        cfg = PreprocessConfig()
        once = pipeline_text(text, cfg)
        again = pipeline_text(" ".join(once), cfg)
        assert again == once

    def test_idempotent_on_stopword_producing_stem(self, pp_config):
        # "wills" stems to the stopword "will": the pipeline must not emit it
        out = pipeline_text("he wills it", pp_config)
        assert "will" not in out
        assert pipeline_text(" ".join(out), pp_config) == out


def test_stopword_file_roundtrip(tmp_path):
    path = tmp_path / "stops.txt"
    path.write_text("# comment\nfoo\nBAR  # trailing\n\nbaz\n")
    assert load_stopwords(path) == frozenset({"foo", "bar", "baz"})


def test_bundled_list_covers_paper_examples():
    assert {"as", "it", "very", "own", "any", "only", "off"} <= STOPWORDS
