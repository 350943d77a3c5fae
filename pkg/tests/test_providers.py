import pytest
from hypothesis import given, strategies as st

from emoaug.corpus import EMOTION_LABELS, Post, default_stopwords, tokenize
from emoaug.masking import MASK_TOKEN, MaskedSentence, MaskPlan, apply_mask
from emoaug.providers import (
    EchoFillMask,
    IdentityTranslator,
    KeywordClassifier,
    NearestNeighborFillMask,
    PermanentProviderError,
    PredictionScores,
    ProviderConfigError,
    ReverseWordsTranslator,
    SamplingSubstitutionTranslator,
    SubstitutionTranslator,
    back_translate,
    classify,
    fill,
    hard_sigmoid,
    read_scores_jsonl,
    write_scores_jsonl,
)

from oracles import brute_force_nearest


class TestHardSigmoid:
    @pytest.mark.parametrize("x,expected", [(-1.0, 0.0), (0.0, 0.5), (3.0, 1.0), (1.0, 1.0), (-5.0, 0.0)])
    def test_known_points(self, x, expected):
        assert hard_sigmoid(x) == expected

    @given(st.floats(min_value=-100, max_value=100))
    def test_piecewise_form(self, x):
        y = hard_sigmoid(x)
        assert 0.0 <= y <= 1.0
        if x <= -1:
            assert y == 0.0
        elif x >= 1:
            assert y == 1.0
        else:
            assert y == (x + 1.0) / 2.0

    @given(st.floats(min_value=-50, max_value=50), st.floats(min_value=0, max_value=10))
    def test_non_decreasing(self, x, delta):
        assert hard_sigmoid(x) <= hard_sigmoid(x + delta)


class TestFill:
    def test_echo_restores_original(self):
        tp = tokenize("i am sad today.", post_id="p")
        plan = MaskPlan(post_id="p", mask_indices=(2,), strategy="token", rng_seed=0)
        masked = apply_mask(tp, plan)
        assert fill(masked, EchoFillMask()) == tp.tokens

    def test_nearest_neighbor_matches_exhaustive_scan(self, embeddings):
        stop = default_stopwords()
        provider = NearestNeighborFillMask(embeddings, stopwords=stop)
        masked = MaskedSentence(tokens=("i", "am", MASK_TOKEN), removed={2: "sad"})
        completed = fill(masked, provider)
        expected = brute_force_nearest("sad", embeddings, stop)
        assert completed == ("i", "am", expected)
        assert expected != "sad"

    def test_nearest_neighbor_all_vocab_words_match_oracle(self, embeddings):
        stop = default_stopwords()
        provider = NearestNeighborFillMask(embeddings, stopwords=stop)
        for word in sorted(embeddings.words):
            if word in stop:
                continue
            masked = MaskedSentence(tokens=(MASK_TOKEN, "filler"), removed={0: word})
            got = fill(masked, provider)[0]
            assert got == brute_force_nearest(word, embeddings, stop)

    def test_oov_removed_token_is_echoed(self, embeddings):
        provider = NearestNeighborFillMask(embeddings, stopwords=default_stopwords())
        masked = MaskedSentence(tokens=(MASK_TOKEN,), removed={0: "zebra"})
        assert fill(masked, provider) == ("zebra",)

    def test_zero_sentinels_rejected(self):
        with pytest.raises(ValueError, match="no sentinels"):
            fill(MaskedSentence(tokens=("a", "b"), removed={}), EchoFillMask())

    def test_over_length_is_permanent(self):
        masked = MaskedSentence(tokens=tuple(["w"] * 9 + [MASK_TOKEN]), removed={9: "x"})
        with pytest.raises(PermanentProviderError, match="exceeds"):
            fill(masked, EchoFillMask(max_input_tokens=5))

    def test_positions_outside_plan_unchanged(self, embeddings):
        tp = tokenize("the angry dog chased the scared cat.", post_id="p")
        plan = MaskPlan(post_id="p", mask_indices=(1, 5), strategy="token", rng_seed=0)
        masked = apply_mask(tp, plan)
        completed = fill(masked, NearestNeighborFillMask(embeddings, stopwords=default_stopwords()))
        for i, tok in enumerate(tp.tokens):
            if i not in (1, 5):
                assert completed[i] == tok
        assert MASK_TOKEN not in completed


class TestBackTranslate:
    def test_identity_providers(self):
        fwd = IdentityTranslator("en", "fr")
        bwd = IdentityTranslator("fr", "en")
        result = back_translate("i am sad today.", fwd, bwd)
        assert result.text == "i am sad today."
        assert result.intermediate == "i am sad today."

    def test_reverse_words_involution(self):
        fwd = ReverseWordsTranslator("en", "fr")
        bwd = ReverseWordsTranslator("fr", "en")
        result = back_translate("one two three four", fwd, bwd)
        assert result.text == "one two three four"
        assert result.intermediate == "four three two one"

    def test_substitution_tables_hand_computed(self):
        # fwd: i->je, am->suis, very->tres, sad->triste, today->aujourdhui
        # bwd: je->i, suis->am, tres->really, triste->unhappy, aujourdhui->today
        fwd = SubstitutionTranslator(
            {"i": "je", "am": "suis", "very": "tres", "sad": "triste", "today": "aujourdhui"}, "en", "fr"
        )
        bwd = SubstitutionTranslator(
            {"je": "i", "suis": "am", "tres": "really", "triste": "unhappy", "aujourdhui": "today"}, "fr", "en"
        )
        result = back_translate("i am very sad today.", fwd, bwd)
        assert result.intermediate == "je suis tres triste aujourdhui."
        assert result.text == "i am really unhappy today."

    def test_language_mismatch_is_config_error(self):
        fwd = IdentityTranslator("en", "fr")
        bwd = IdentityTranslator("de", "en")
        with pytest.raises(ProviderConfigError, match="language mismatch"):
            back_translate("text", fwd, bwd)

    def test_empty_text_rejected(self):
        fwd = IdentityTranslator("en", "fr")
        bwd = IdentityTranslator("fr", "en")
        with pytest.raises(ValueError):
            back_translate("   ", fwd, bwd)

    def test_sampling_translator_varies_by_seed(self):
        fwd = SamplingSubstitutionTranslator(
            [{"sad": "triste"}, {"sad": "morose"}], "en", "fr"
        )
        assert fwd.translate("sad", seed=0) == "triste"
        assert fwd.translate("sad", seed=1) == "morose"
        assert fwd.translate("sad") == "triste"
        assert fwd.capability.supports_sampling


class TestClassify:
    def test_all_negative_raw_is_neutral(self):
        clf = KeywordClassifier(rules={})
        scores = classify(Post(id="p", text="plain text here"), clf)
        assert scores.activated == (0.0,) * 11
        assert scores.predicted == (0,) * 11
        assert scores.predicted_labels() == set()

    def test_keyword_mock_hand_trace(self):
        # One "sad" hit: raw +1 on sadness, -1 elsewhere; only sadness crosses 0.5.
        clf = KeywordClassifier(rules={"sadness": ("sad",)})
        scores = classify(Post(id="p", text="i am sad"), clf)
        sad_idx = EMOTION_LABELS.index("sadness")
        assert scores.raw[sad_idx] == 1.0
        assert all(r == -1.0 for i, r in enumerate(scores.raw) if i != sad_idx)
        assert scores.predicted_labels() == {"sadness"}

    def test_all_positive_raw_predicts_everything(self):
        class Loud:
            capability = KeywordClassifier().capability

            def raw_scores(self, text):
                return [5.0] * 11

        scores = classify(Post(id="p", text="x"), Loud())
        assert scores.predicted == (1,) * 11

    def test_graded_keyword_classifier(self):
        clf = KeywordClassifier(per_hit=0.7)
        # two sadness cues -> raw 0.4 -> activated 0.7
        scores = classify(Post(id="p", text="feeling sad and unhappy."), clf)
        sad_idx = EMOTION_LABELS.index("sadness")
        assert scores.raw[sad_idx] == pytest.approx(0.4)
        assert scores.activated[sad_idx] == pytest.approx(0.7)
        assert scores.predicted_labels() == {"sadness"}

    def test_wrong_score_count_is_permanent(self):
        class Short:
            capability = KeywordClassifier().capability

            def raw_scores(self, text):
                return [0.0]

        with pytest.raises(PermanentProviderError, match="11 labels"):
            classify(Post(id="p", text="x"), Short())

    def test_prediction_invariant_under_clamp_preserving_rescale(self):
        # Adding +0 then re-clamping reproduces identical predictions.
        clf = KeywordClassifier()
        posts = [Post(id=f"p{i}", text=t) for i, t in enumerate(["i am sad", "happy and glad", "nothing here"])]
        first = [classify(p, clf).predicted for p in posts]
        second = [
            tuple(int(hard_sigmoid(max(-1.0, min(1.0, r + 0.0))) >= 0.5) for r in classify(p, clf).raw)
            for p in posts
        ]
        assert first == second


class TestPredictionScores:
    def test_activation_consistency_enforced(self):
        with pytest.raises(ValueError, match="hard_sigmoid"):
            PredictionScores(post_id="p", raw=(0.0,) * 11, activated=(0.9,) * 11, predicted=(1,) * 11)

    def test_threshold_consistency_enforced(self):
        raw = (0.0,) * 11
        act = tuple(hard_sigmoid(r) for r in raw)
        with pytest.raises(ValueError, match="threshold"):
            PredictionScores(post_id="p", raw=raw, activated=act, predicted=(0,) * 11)

    def test_jsonl_roundtrip(self, tmp_path):
        clf = KeywordClassifier()
        scores = [classify(Post(id=f"p{i}", text=t), clf) for i, t in enumerate(["i am sad", "so happy now"])]
        path = tmp_path / "scores.jsonl"
        assert write_scores_jsonl(path, scores) == 2
        assert read_scores_jsonl(path) == scores
