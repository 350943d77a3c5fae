import pytest

from emoaug.augment import (
    AugmentationAborted,
    AugmentationConfig,
    ProviderBundle,
    SyntheticExample,
    augment_corpus,
    augment_one,
    read_synthetic_jsonl,
    write_synthetic_jsonl,
)
from emoaug.corpus import EmotionVector, LabeledPost, Post, default_stopwords, detokenize, tokenize
from emoaug.providers import (
    DEMO_EN_FR,
    DEMO_FR_EN,
    EchoFillMask,
    IdentityTranslator,
    NearestNeighborFillMask,
    ProviderConfigError,
    RetryableProviderError,
    SamplingSubstitutionTranslator,
    SubstitutionTranslator,
)
from emoaug.providers.base import PermanentProviderError

from oracles import brute_force_nearest


def make_corpus(n, label="sadness"):
    texts = [
        "i am sad and unhappy about work today.",
        "so happy and glad about the news.",
        "angry and furious about the exam results.",
        "scared and terrified of the dog.",
        "feeling miserable and full of sorrow.",
    ]
    return [
        LabeledPost(
            post=Post(id=f"p{i:03d}", text=texts[i % len(texts)]),
            labels=EmotionVector.from_labels([label]),
        )
        for i in range(n)
    ]


def bt_bundle():
    return ProviderBundle(
        translator_fwd=SubstitutionTranslator(DEMO_EN_FR, "en", "fr"),
        translator_bwd=SubstitutionTranslator(DEMO_FR_EN, "fr", "en"),
    )


def nn_bundle(embeddings, sne=None):
    return ProviderBundle(
        fill_mask=NearestNeighborFillMask(embeddings, stopwords=default_stopwords()),
        embeddings=embeddings,
        sne=sne,
    )


class TestCardinalityAndLabels:
    @pytest.mark.parametrize("folds", [1, 3, 5])
    def test_exact_output_count(self, folds, embeddings, sne):
        train = make_corpus(10)
        cfg = AugmentationConfig(method="mask_token", folds=folds, global_seed=9)
        result = augment_corpus(train, cfg, nn_bundle(embeddings, sne))
        assert len(result.examples) == folds * len(train)
        assert not result.shortfalls

    def test_labels_propagated_byte_equal(self, embeddings, sne):
        train = make_corpus(10)
        by_id = {lp.post.id: lp.labels for lp in train}
        cfg = AugmentationConfig(method="mask_token", folds=3, global_seed=2)
        result = augment_corpus(train, cfg, nn_bundle(embeddings, sne))
        for example in result.examples:
            assert example.labels == by_id[example.source_id]

    def test_bt_single_fold_count(self):
        train = make_corpus(10)
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0)
        result = augment_corpus(train, cfg, bt_bundle())
        assert len(result.examples) == 10

    def test_empty_train_rejected(self, embeddings):
        cfg = AugmentationConfig(method="mask_token")
        with pytest.raises(ValueError, match="non-empty"):
            augment_corpus([], cfg, nn_bundle(embeddings))


class TestDeterminism:
    def test_identical_across_runs_and_workers(self, embeddings, sne):
        train = make_corpus(12)
        cfg = AugmentationConfig(method="mask_token", folds=3, global_seed=77)
        runs = [
            augment_corpus(train, cfg, nn_bundle(embeddings, sne), workers=w).examples
            for w in (1, 4, 4)
        ]
        assert runs[0] == runs[1] == runs[2]

    def test_fold_seeds_nest_across_fold_counts(self, embeddings, sne):
        # The s=5 run extends the s=3 run: shared folds are identical.
        train = make_corpus(6)
        three = augment_corpus(
            train, AugmentationConfig(method="mask_token", folds=3, global_seed=5), nn_bundle(embeddings, sne)
        ).examples
        five = augment_corpus(
            train, AugmentationConfig(method="mask_token", folds=5, global_seed=5), nn_bundle(embeddings, sne)
        ).examples
        five_by_key = {(e.source_id, e.fold): e for e in five}
        for e in three:
            assert five_by_key[(e.source_id, e.fold)] == e

    def test_canonical_output_order(self, embeddings, sne):
        train = make_corpus(5)
        cfg = AugmentationConfig(method="mask_token", folds=2, global_seed=1)
        result = augment_corpus(train, cfg, nn_bundle(embeddings, sne), workers=3)
        keys = [(e.source_id, e.fold) for e in result.examples]
        assert keys == sorted(keys)


class TestDegenerate:
    def test_echo_filler_flags_degenerate(self, labeled_post):
        cfg = AugmentationConfig(method="mask_token", folds=1, global_seed=3, max_regen_attempts=2)
        bundle = ProviderBundle(fill_mask=EchoFillMask())
        example = augment_one(labeled_post, 1, cfg, bundle)
        assert example.degenerate
        assert example.text == detokenize(tokenize(labeled_post.post.text).tokens)

    def test_identity_bt_flags_every_example(self):
        train = make_corpus(4)
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0, max_regen_attempts=2)
        bundle = ProviderBundle(
            translator_fwd=IdentityTranslator("en", "fr"),
            translator_bwd=IdentityTranslator("fr", "en"),
        )
        result = augment_corpus(train, cfg, bundle)
        assert len(result.examples) == 4
        assert all(e.degenerate for e in result.examples)
        assert [e.text for e in result.examples] == [lp.post.text for lp in train]

    def test_drop_degenerate_filters_and_counts(self):
        train = make_corpus(4)
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0)
        bundle = ProviderBundle(
            translator_fwd=IdentityTranslator("en", "fr"),
            translator_bwd=IdentityTranslator("fr", "en"),
        )
        result = augment_corpus(train, cfg, bundle, keep_degenerate=False)
        assert result.examples == []
        assert result.dropped_degenerate == 4


class TestMaskSpanGeneration:
    def test_six_token_fixture_nearest_neighbor_span(self, embeddings):
        # Six content tokens, span of five: the window's tokens are replaced
        # by their exhaustive-scan nearest neighbors.
        text = "sad angry afraid happy unhappy scared"
        lp = LabeledPost(post=Post(id="six", text=text), labels=EmotionVector.from_labels(["sadness"]))
        cfg = AugmentationConfig(method="mask_span", folds=1, global_seed=11, span_len=5)
        example = augment_one(lp, 1, cfg, nn_bundle(embeddings))
        indices = example.provenance["mask_indices"]
        assert len(indices) == 5
        assert indices == list(range(indices[0], indices[0] + 5))
        source_tokens = tokenize(text).tokens
        stop = default_stopwords()
        out_tokens = example.text.split(" ")
        for i in indices:
            assert out_tokens[i] == brute_force_nearest(source_tokens[i], embeddings, stop)
        for i in range(6):
            if i not in indices:
                assert out_tokens[i] == source_tokens[i]


class TestProvenance:
    def test_mask_provenance_replays(self, embeddings, sne):
        train = make_corpus(6)
        cfg = AugmentationConfig(method="mask_token", folds=2, global_seed=21)
        result = augment_corpus(train, cfg, nn_bundle(embeddings, sne))
        by_id = {lp.post.id: lp for lp in train}
        for example in result.examples:
            source_tokens = list(tokenize(by_id[example.source_id].post.text).tokens)
            for idx_str, removed in example.provenance["removed"].items():
                assert source_tokens[int(idx_str)] == removed
            for idx_str, replacement in example.provenance["replacements"].items():
                source_tokens[int(idx_str)] = replacement
            assert detokenize(source_tokens) == example.text

    def test_bt_provenance_replays(self):
        train = make_corpus(4)
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0)
        bundle = bt_bundle()
        result = augment_corpus(train, cfg, bundle)
        by_id = {lp.post.id: lp for lp in train}
        for example in result.examples:
            intermediate = example.provenance["intermediate"]
            assert bundle.translator_fwd.translate(by_id[example.source_id].post.text) == intermediate
            assert bundle.translator_bwd.translate(intermediate) == example.text


class TestFailureHandling:
    class FlakyTranslator(SubstitutionTranslator):
        def __init__(self, fail_ids):
            super().__init__(DEMO_EN_FR, "en", "fr")
            self.fail_ids = fail_ids

        def translate(self, text, seed=None):
            if any(marker in text for marker in self.fail_ids):
                raise RetryableProviderError("transient backend error")
            return super().translate(text, seed)

    def test_transient_failures_become_shortfalls(self):
        train = make_corpus(5)
        # Make one source's text unique so the flaky provider targets it.
        target = train[2].post.text
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0, max_regen_attempts=1)
        bundle = ProviderBundle(
            translator_fwd=self.FlakyTranslator([target]),
            translator_bwd=SubstitutionTranslator(DEMO_FR_EN, "fr", "en"),
        )
        result = augment_corpus(train, cfg, bundle)
        assert len(result.examples) == 4
        assert len(result.shortfalls) == 1
        assert result.shortfalls[0]["source_id"] == train[2].post.id

    def test_permanent_failure_aborts_with_partial(self):
        class Broken(SubstitutionTranslator):
            def translate(self, text, seed=None):
                if "angry" in text:
                    raise PermanentProviderError("model gone")
                return super().translate(text, seed)

        train = make_corpus(5)
        cfg = AugmentationConfig(method="bt", folds=1, global_seed=0)
        bundle = ProviderBundle(
            translator_fwd=Broken(DEMO_EN_FR, "en", "fr"),
            translator_bwd=SubstitutionTranslator(DEMO_FR_EN, "fr", "en"),
        )
        with pytest.raises(AugmentationAborted) as err:
            augment_corpus(train, cfg, bundle)
        assert len(err.value.partial.examples) == 4

    def test_bt_multi_fold_needs_sampling(self):
        train = make_corpus(2)
        cfg = AugmentationConfig(method="bt", folds=3, global_seed=0)
        with pytest.raises(ProviderConfigError, match="sampling"):
            augment_corpus(train, cfg, bt_bundle())

    def test_bt_multi_fold_with_sampling_translator(self):
        tables = [DEMO_EN_FR, {**DEMO_EN_FR, "sad": "morose"}, {**DEMO_EN_FR, "sad": "morne"}]
        bundle = ProviderBundle(
            translator_fwd=SamplingSubstitutionTranslator(tables, "en", "fr"),
            translator_bwd=SubstitutionTranslator(
                {**DEMO_FR_EN, "morose": "downcast", "morne": "dismal"}, "fr", "en"
            ),
        )
        train = make_corpus(3)
        cfg = AugmentationConfig(method="bt", folds=3, global_seed=4)
        result = augment_corpus(train, cfg, bundle)
        assert len(result.examples) == 9

    def test_missing_provider_is_config_error(self):
        cfg = AugmentationConfig(method="mask_token")
        with pytest.raises(ProviderConfigError, match="fill-mask"):
            augment_corpus(make_corpus(1), cfg, ProviderBundle())


class TestSyntheticIo:
    def test_jsonl_roundtrip(self, tmp_path, embeddings, sne):
        train = make_corpus(4)
        cfg = AugmentationConfig(method="mask_token", folds=2, global_seed=8)
        result = augment_corpus(train, cfg, nn_bundle(embeddings, sne))
        path = tmp_path / "synthetic.jsonl"
        assert write_synthetic_jsonl(path, result.examples) == 8
        assert read_synthetic_jsonl(path) == result.examples

    def test_invalid_fold_rejected(self):
        with pytest.raises(ValueError, match="fold"):
            SyntheticExample(
                source_id="x", fold=0, text="t",
                labels=EmotionVector.zeros(), method="bt",
            )
