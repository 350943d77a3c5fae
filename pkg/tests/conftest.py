from pathlib import Path

import pytest

from emoaug.corpus import EmotionVector, LabeledPost, Post
from emoaug.lexicon import build_sne_lexicon, load_embeddings, load_vad_lexicon

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def embeddings():
    return load_embeddings(DATA / "mini_embeddings.txt")


@pytest.fixture(scope="session")
def vad_entries():
    return load_vad_lexicon(DATA / "mini_vad.tsv")


@pytest.fixture(scope="session")
def sne(vad_entries):
    return build_sne_lexicon(vad_entries, valence_max=0.3, arousal_min=0.7)


@pytest.fixture()
def labeled_post():
    return LabeledPost(
        post=Post(id="p1", text="i am sad and unhappy today."),
        labels=EmotionVector.from_labels(["sadness"]),
    )
