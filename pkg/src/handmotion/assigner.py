"""Sign segment extraction and dictionary-variant assignment.

Segments come from dense frame-level label streams: low-confidence frames
are dropped, same-label runs less than the merge gap apart are merged, and
runs shorter than the minimum length are discarded.

Variant assignment clusters sample embeddings together with the candidate
variant embeddings using k-medoids (k = number of variants, medoids
initialized at the variants) under cosine distance, then applies per
cluster: exactly one variant inside -> assign it to the cluster's samples;
none -> filter the samples out; several -> assign each sample the variant
with maximal cosine similarity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UnknownWord, ZeroVector

FILTERED = "FILTERED"


@dataclass
class Segment:
    label: int | str
    start: int  # inclusive
    end: int    # inclusive

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def extract_segments(labels, confidences, conf_threshold: float = 0.5,
                     m: int = 6, merge_gap: int | None = None) -> list:
    """Extract sign segments from a dense per-frame label stream.

    ``labels`` and ``confidences`` are frame-aligned; frames below
    ``conf_threshold`` are ignored.  Same-label runs separated by fewer
    than ``merge_gap`` frames (default: ``m``) are merged first; merged
    runs shorter than ``m`` frames are then discarded.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if merge_gap is None:
        merge_gap = m
    labels = list(labels)
    confidences = list(confidences)
    if len(labels) != len(confidences):
        raise ValueError("labels and confidences must be frame-aligned")

    runs_by_label: dict = {}
    current = None  # (label, start, end)
    for i, (label, conf) in enumerate(zip(labels, confidences)):
        if conf < conf_threshold:
            if current is not None:
                runs_by_label.setdefault(current[0], []).append(current)
                current = None
            continue
        if current is not None and current[0] == label and current[2] == i - 1:
            current = (label, current[1], i)
        else:
            if current is not None:
                runs_by_label.setdefault(current[0], []).append(current)
            current = (label, i, i)
    if current is not None:
        runs_by_label.setdefault(current[0], []).append(current)

    segments = []
    for label, runs in runs_by_label.items():
        runs.sort(key=lambda r: r[1])
        merged = [runs[0]]
        for run in runs[1:]:
            prev = merged[-1]
            gap = run[1] - prev[2] - 1
            if gap < merge_gap:
                merged[-1] = (label, prev[1], run[2])
            else:
                merged.append(run)
        for _, start, end in merged:
            if end - start + 1 >= m:
                segments.append(Segment(label, start, end))
    segments.sort(key=lambda s: (s.start, str(s.label)))
    return segments


def cosine_distance_matrix(points) -> np.ndarray:
    """Pairwise 1 - cosine similarity; raises ZeroVector on zero rows."""
    x = np.asarray(points, dtype=float)
    norms = np.linalg.norm(x, axis=1)
    if np.any(norms == 0):
        raise ZeroVector("cosine distance undefined for zero vectors")
    unit = x / norms[:, None]
    d = 1.0 - unit @ unit.T
    np.fill_diagonal(d, 0.0)
    return np.clip((d + d.T) / 2.0, 0.0, 2.0)


def k_medoids(points, k: int, init_medoids, max_iterations: int = 100):
    """PAM-style alternation on cosine distance.

    Returns (medoid indices, labels); labels[i] is the position (0..k-1)
    of point i's medoid.  Ties in the assignment step break toward the
    lowest medoid position, medoid updates toward the lowest point index,
    so the result is deterministic; total cost never increases.
    """
    d = cosine_distance_matrix(points)
    n = d.shape[0]
    medoids = list(init_medoids)
    if k > n:
        raise ValueError("k exceeds the number of points")
    if len(medoids) != k or len(set(medoids)) != k:
        raise ValueError("init_medoids must be k distinct indices")

    def assign(meds):
        return np.argmin(d[:, meds], axis=1)

    labels = assign(medoids)
    for _ in range(max_iterations):
        new_medoids = list(medoids)
        for c in range(k):
            members = np.where(labels == c)[0]
            if members.size == 0:
                continue
            costs = d[np.ix_(members, members)].sum(axis=0)
            new_medoids[c] = int(members[int(np.argmin(costs))])
        new_labels = assign(new_medoids)
        if new_medoids == medoids and np.array_equal(new_labels, labels):
            break
        medoids, labels = new_medoids, new_labels
    return medoids, labels


def kmedoids_cost(points, medoids, labels) -> float:
    d = cosine_distance_matrix(points)
    idx = np.asarray(medoids)[np.asarray(labels)]
    return float(d[np.arange(d.shape[0]), idx].sum())


def assign_variants(sample_embeddings: dict, variant_embeddings: dict) -> dict:
    """Assign each sample motion a dictionary variant or mark it filtered.

    ``sample_embeddings``: motion id -> vector; ``variant_embeddings``:
    variant id -> vector.  Returns motion id -> variant id or FILTERED.
    """
    if not variant_embeddings:
        raise ValueError("need at least one variant")
    variant_ids = sorted(variant_embeddings)
    sample_ids = sorted(sample_embeddings)
    if not sample_ids:
        return {}

    matrix = np.array([variant_embeddings[v] for v in variant_ids]
                      + [sample_embeddings[s] for s in sample_ids], dtype=float)
    k = len(variant_ids)
    medoids, labels = k_medoids(matrix, k, init_medoids=list(range(k)))

    unit = matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
    assignment: dict = {}
    for cluster in range(k):
        members = np.where(labels == cluster)[0]
        variants_in = [i for i in members if i < k]
        samples_in = [i for i in members if i >= k]
        for si in samples_in:
            sample_id = sample_ids[si - k]
            if len(variants_in) == 1:
                assignment[sample_id] = variant_ids[variants_in[0]]
            elif len(variants_in) == 0:
                assignment[sample_id] = FILTERED
            else:
                sims = unit[si] @ unit[variants_in].T
                best = variants_in[int(np.argmax(sims))]
                assignment[sample_id] = variant_ids[best]
    return assignment


class DictionaryIndex:
    """Gloss dictionary: gloss id -> keyword list (keywords include the
    plain words a gloss stands for)."""

    def __init__(self, keywords_by_gloss: dict):
        self.keywords_by_gloss = {
            gloss: [k.lower() for k in keywords]
            for gloss, keywords in keywords_by_gloss.items()
        }

    @classmethod
    def load(cls, path) -> "DictionaryIndex":
        obj = json.loads(Path(path).read_text())
        return cls(obj)

    def glosses_for_word(self, word: str) -> list:
        word = word.lower()
        return sorted(g for g, kws in self.keywords_by_gloss.items() if word in kws)


def build_candidate_variants(word: str, index: DictionaryIndex) -> list:
    """Candidate gloss variants for a word: the glosses carrying the word,
    plus (one hop) every gloss sharing a keyword with those glosses."""
    direct = index.glosses_for_word(word)
    if not direct:
        raise UnknownWord(f"word {word!r} not in dictionary index")
    keywords = set()
    for gloss in direct:
        keywords.update(index.keywords_by_gloss[gloss])
    candidates = set(direct)
    for gloss, kws in index.keywords_by_gloss.items():
        if keywords.intersection(kws):
            candidates.add(gloss)
    return sorted(candidates)
