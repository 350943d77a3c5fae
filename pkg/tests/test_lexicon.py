import numpy as np
import pytest
from hypothesis import given, strategies as st

from emoaug.lexicon import (
    EmbeddingTable,
    LexiconError,
    VadEntry,
    build_sne_lexicon,
    cosine,
    load_embeddings,
    load_vad_lexicon,
    sne_affinity,
)

from oracles import brute_force_cosine


class TestLoadEmbeddings:
    def test_two_lines_dim_three(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("cat 1 2 3\ndog 4 5 6\n")
        table = load_embeddings(path)
        assert table.dim == 3 and len(table) == 2
        assert list(table.get("cat")) == [1.0, 2.0, 3.0]

    def test_inconsistent_length_names_line(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("cat 1 2\ndog 1 2 3\n")
        with pytest.raises(LexiconError, match="line 2"):
            load_embeddings(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("")
        with pytest.raises(LexiconError, match="no vectors"):
            load_embeddings(path)

    def test_duplicates_keep_first_with_count(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("cat 1 0\ncat 9 9\ndog 0 1\n")
        table = load_embeddings(path)
        assert list(table.get("cat")) == [1.0, 0.0]
        assert table.duplicates_skipped == 1

    def test_oov_lookup_is_none(self, embeddings):
        assert embeddings.get("zebra") is None
        assert "zebra" not in embeddings


class TestVadLexicon:
    def test_loads_tsv_fixture(self, vad_entries):
        by_word = {e.word: e for e in vad_entries}
        assert by_word["sad"].valence == 0.15
        assert by_word["sad"].arousal == 0.75

    def test_csv_and_scale_1_9(self, tmp_path):
        path = tmp_path / "vad.csv"
        path.write_text("word,valence,arousal,dominance\nrage,1,9,5\n")
        entries = load_vad_lexicon(path, scale="1-9")
        assert entries[0].valence == 0.0
        assert entries[0].arousal == 1.0
        assert entries[0].dominance == 0.5

    def test_scores_out_of_unit_range_rejected(self):
        with pytest.raises(LexiconError):
            VadEntry(word="x", valence=1.2, arousal=0.5, dominance=0.5)


class TestBuildSne:
    def test_direct_filter(self):
        entries = [
            VadEntry(word="rage", valence=0.10, arousal=0.90, dominance=0.5),
            VadEntry(word="calm", valence=0.80, arousal=0.10, dominance=0.5),
        ]
        sne = build_sne_lexicon(entries, valence_max=0.3, arousal_min=0.7)
        assert sne.words == {"rage"}

    def test_vacuous_thresholds_take_all(self, vad_entries):
        sne = build_sne_lexicon(vad_entries, valence_max=1.0, arousal_min=0.0)
        assert sne.words == {e.word for e in vad_entries}

    def test_impossible_thresholds_error(self, vad_entries):
        with pytest.raises(LexiconError, match="relax"):
            build_sne_lexicon(vad_entries, valence_max=0.0, arousal_min=1.0)

    def test_fixture_sne_members_satisfy_thresholds(self, vad_entries, sne):
        by_word = {e.word: e for e in vad_entries}
        assert sne.words
        for word in sne.words:
            assert by_word[word].valence <= sne.valence_max
            assert by_word[word].arousal >= sne.arousal_min
        assert "happy" not in sne.words


class TestCosine:
    def test_identity(self):
        assert cosine((1, 2, 2), (1, 2, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine((1, 0), (0, 1)) == 0.0

    def test_antiparallel(self):
        assert cosine((1, 0), (-1, 0)) == -1.0

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="zero vector"):
            cosine((0, 0), (1, 0))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            cosine((1, 0), (1, 0, 0))

    vectors = st.lists(st.floats(min_value=-10, max_value=10), min_size=3, max_size=3).filter(
        lambda v: sum(abs(x) for x in v) > 1e-3
    )

    @given(vectors, vectors, st.floats(min_value=0.01, max_value=100))
    def test_symmetry_and_scale_invariance(self, u, v, a):
        assert cosine(u, v) == pytest.approx(cosine(v, u), abs=1e-12)
        assert cosine([a * x for x in u], v) == pytest.approx(cosine(u, v), abs=1e-9)


class TestSneAffinity:
    def test_member_word_scores_one(self, embeddings, sne):
        assert "sad" in sne.words
        assert sne_affinity("sad", embeddings, sne) == pytest.approx(1.0, abs=1e-12)

    def test_oov_word_scores_zero(self, embeddings, sne):
        assert sne_affinity("zebra", embeddings, sne) == 0.0

    def test_two_word_sne_hand_value(self):
        # gloom=(3,4): cos to rage=(1,0) is 3/5, to dread=(0,1) is 4/5;
        # the max over the SNE set is 0.8.
        table = EmbeddingTable(
            dim=2,
            vectors={
                "gloom": np.array([3.0, 4.0]),
                "rage": np.array([1.0, 0.0]),
                "dread": np.array([0.0, 1.0]),
            },
        )
        sne = build_sne_lexicon(
            [
                VadEntry(word="rage", valence=0.1, arousal=0.9, dominance=0.5),
                VadEntry(word="dread", valence=0.1, arousal=0.9, dominance=0.5),
            ],
            valence_max=0.3,
            arousal_min=0.7,
        )
        assert sne_affinity("gloom", table, sne) == pytest.approx(0.8, abs=1e-12)

    def test_matches_brute_force_max_on_fixture(self, embeddings, sne):
        for word in embeddings.words:
            best = max(
                (
                    brute_force_cosine(list(embeddings.get(word)), list(embeddings.get(s)))
                    for s in sne.words
                    if s in embeddings
                ),
                default=0.0,
            )
            expected = max(0.0, best)
            assert sne_affinity(word, embeddings, sne) == pytest.approx(expected, abs=1e-9)

    def test_negative_similarity_clamps_to_zero(self):
        table = EmbeddingTable(dim=2, vectors={"up": np.array([1.0, 0.0]), "down": np.array([-1.0, 0.0])})
        sne = build_sne_lexicon([VadEntry(word="down", valence=0.1, arousal=0.9, dominance=0.5)])
        assert sne_affinity("up", table, sne) == 0.0
