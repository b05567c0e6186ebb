"""Retrieval and distribution metrics over embedding sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import (
    CovarianceSingularBeyondTolerance,
    InsufficientSamples,
    ZeroVector,
)

EIGENVALUE_TOLERANCE = 1e-8


def _unit_rows(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0):
        raise ZeroVector("zero vector in embedding set")
    return x / norms[:, None]


@dataclass
class RetrievalResult:
    rankings: np.ndarray      # (Q, G) gallery indices, best first
    recalls: dict             # k -> percentage of queries with a hit in top k

    @property
    def r_at_1(self) -> float:
        return self.recalls[1]


def retrieval(query_vectors, gallery_vectors, correctness, ks=(1, 3)) -> RetrievalResult:
    """Rank the gallery by cosine similarity per query and score R@k.

    ``correctness(query_index, gallery_index)`` decides hits; ranking ties
    break toward the lower gallery index (stable sort).
    """
    queries = _unit_rows(query_vectors)
    gallery = _unit_rows(gallery_vectors)
    sims = queries @ gallery.T
    rankings = np.argsort(-sims, axis=1, kind="stable")
    hits = {k: 0 for k in ks}
    for qi in range(queries.shape[0]):
        top = rankings[qi]
        for k in ks:
            if any(correctness(qi, int(gi)) for gi in top[:k]):
                hits[k] += 1
    recalls = {k: 100.0 * hits[k] / queries.shape[0] for k in ks}
    return RetrievalResult(rankings=rankings, recalls=recalls)


def text_similarity_correct(query_text_vec, gallery_text_vec,
                            threshold: float = 0.95) -> bool:
    """Correctness relaxation: cosine similarity strictly above threshold."""
    q = np.asarray(query_text_vec, dtype=float)
    g = np.asarray(gallery_text_vec, dtype=float)
    nq, ng = np.linalg.norm(q), np.linalg.norm(g)
    if nq == 0 or ng == 0:
        raise ZeroVector("zero text embedding")
    return float(q @ g / (nq * ng)) > threshold


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh((matrix + matrix.T) / 2.0)
    if values.min() < -EIGENVALUE_TOLERANCE:
        raise CovarianceSingularBeyondTolerance(
            f"eigenvalue {values.min():.3e} below -{EIGENVALUE_TOLERANCE}")
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.T


def fid(set_a, set_b) -> float:
    """Frechet distance between Gaussian fits of two embedding sets.

    ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}), with the matrix
    square root taken by eigendecomposition of sqrt(S_a) S_b sqrt(S_a);
    eigenvalues above -1e-8 are clamped to zero, lower ones raise.
    """
    a = np.asarray(set_a, dtype=float)
    b = np.asarray(set_b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError("embedding sets must share the feature dimension")
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise InsufficientSamples("need at least 2 samples per set")
    mu_a, mu_b = a.mean(axis=0), b.mean(axis=0)
    cov_a = np.cov(a, rowvar=False)
    cov_b = np.cov(b, rowvar=False)
    sqrt_a = _psd_sqrt(cov_a)
    inner = sqrt_a @ cov_b @ sqrt_a
    values = np.linalg.eigvalsh((inner + inner.T) / 2.0)
    if values.min() < -EIGENVALUE_TOLERANCE:
        raise CovarianceSingularBeyondTolerance(
            f"eigenvalue {values.min():.3e} below -{EIGENVALUE_TOLERANCE}")
    tr_sqrt = np.sqrt(np.clip(values, 0.0, None)).sum()
    return float(((mu_a - mu_b) ** 2).sum() + np.trace(cov_a) + np.trace(cov_b)
                 - 2.0 * tr_sqrt)


def diversity(embeddings, n_pairs: int, seed: int = 0) -> float:
    """Mean Euclidean distance over ``n_pairs`` random disjoint pairs."""
    x = np.asarray(embeddings, dtype=float)
    if x.shape[0] < 2 * n_pairs:
        raise InsufficientSamples(
            f"{x.shape[0]} samples cannot form {n_pairs} disjoint pairs")
    rng = np.random.default_rng(seed)
    order = rng.permutation(x.shape[0])
    first = x[order[:n_pairs]]
    second = x[order[n_pairs:2 * n_pairs]]
    return float(np.linalg.norm(first - second, axis=1).mean())


def multimodality(per_text_generation_embeddings: dict) -> float:
    """Mean pairwise distance among generations of one text, over texts.

    Texts with fewer than two generations contribute nothing; raises when
    no text has at least two.
    """
    per_text_means = []
    for vectors in per_text_generation_embeddings.values():
        x = np.asarray(vectors, dtype=float)
        n = x.shape[0]
        if n < 2:
            continue
        dists = [np.linalg.norm(x[i] - x[j]) for i in range(n) for j in range(i + 1, n)]
        per_text_means.append(float(np.mean(dists)))
    if not per_text_means:
        raise InsufficientSamples("no text has two or more generations")
    return float(np.mean(per_text_means))
