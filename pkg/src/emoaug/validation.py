"""Input validation helpers shared by the estimator API."""

from __future__ import annotations

from .corpus import LabeledPost, Post
from .providers.base import PredictionScores

__all__ = ["check_labeled_posts", "check_prediction_scores", "check_texts"]


def check_labeled_posts(X) -> list[LabeledPost]:
    X = list(X)
    if not X:
        raise ValueError("X must contain at least one labeled post")
    for i, item in enumerate(X):
        if not isinstance(item, LabeledPost):
            raise TypeError(f"X[{i}] is {type(item).__name__}, expected LabeledPost")
    return X


def check_prediction_scores(X) -> list[PredictionScores]:
    X = list(X)
    for i, item in enumerate(X):
        if not isinstance(item, PredictionScores):
            raise TypeError(f"X[{i}] is {type(item).__name__}, expected PredictionScores")
    return X


def check_texts(X) -> list[str]:
    """Accept raw strings or Post objects; return the text list."""
    X = list(X)
    if not X:
        raise ValueError("X must contain at least one text")
    texts = []
    for i, item in enumerate(X):
        if isinstance(item, Post):
            texts.append(item.text)
        elif isinstance(item, str):
            if not item.strip():
                raise ValueError(f"X[{i}] is empty text")
            texts.append(item)
        else:
            raise TypeError(f"X[{i}] is {type(item).__name__}, expected str or Post")
    return texts
