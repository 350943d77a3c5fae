"""Independent brute-force oracles used to verify the package's fast paths."""

import math


def brute_force_cosine(u, v):
    """Scalar-arithmetic cosine, independent of the numpy implementation."""
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv)


def brute_force_nearest(word, embeddings, stopwords):
    """Exhaustive nearest-neighbor scan over content words in the vocabulary."""
    vec = embeddings.get(word)
    best_word, best_sim = None, None
    for cand in sorted(embeddings.words):
        if cand == word or cand in stopwords:
            continue
        sim = brute_force_cosine(list(vec), list(embeddings.get(cand)))
        if best_sim is None or sim > best_sim:
            best_word, best_sim = cand, sim
    return best_word
