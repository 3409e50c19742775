"""Similarity scoring between candidate resolutions and ground truth.

Three measures of different granularity:

  * edit similarity (ES): normalized character-level Levenshtein,
    ``1 - distance / max(len)``.
  * winnowing similarity (WS): Jaccard overlap of winnowing fingerprint
    sets. Texts are normalized (lowercased, all whitespace removed),
    every k-gram is hashed, and each sliding window of ``w`` consecutive
    hashes contributes its minimum, rightmost occurrence on ties. The
    selection guarantees any shared run of at least ``w + k - 1``
    normalized characters yields a shared fingerprint.
  * semantic similarity (SS): cosine of provider embeddings, clamped to
    [0, 1].

A candidate matches ground truth when any available score reaches the
threshold (default 0.8, inclusive: computed in double precision, the
boundary is pinned at >= so results are reproducible).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

DEFAULT_K = 13
DEFAULT_WINDOW = 17
MATCH_THRESHOLD = 0.8

# polynomial rolling hash over a Mersenne prime: deterministic across
# processes, unlike the salted builtin hash()
_HASH_BASE = 1000003
_HASH_MOD = (1 << 61) - 1


class ScoreUnavailableError(RuntimeError):
    """A metric could not be computed (e.g. the embedding provider failed)."""


class EmbeddingProvider(Protocol):
    """Maps text to a fixed-dimension, L2-normalized vector.

    Implementations must be deterministic: the same text yields the
    identical vector.
    """

    def embed(self, text: str) -> np.ndarray: ...


def levenshtein(x: str, y: str) -> int:
    """Character-level edit distance (insert/delete/substitute, unit costs)."""
    if x == y:
        return 0
    if not x:
        return len(y)
    if not y:
        return len(x)
    xa = np.frombuffer(x.encode("utf-32-le"), dtype=np.uint32)
    ya = np.frombuffer(y.encode("utf-32-le"), dtype=np.uint32)
    if len(xa) < len(ya):
        xa, ya = ya, xa
    m = len(ya)
    steps = np.arange(1, m + 1, dtype=np.int64)
    prev = np.arange(m + 1, dtype=np.int64)
    curr = np.empty(m + 1, dtype=np.int64)
    for i, cx in enumerate(xa, start=1):
        cost = np.where(ya == cx, 0, 1)
        best = np.minimum(prev[1:] + 1, prev[:-1] + cost)
        # fold in the sequential insertion chain:
        # curr[j] = min over kk <= j of best[kk] + (j - kk)
        curr[0] = i
        curr[1:] = np.minimum(
            np.minimum.accumulate(best - steps) + steps,
            np.minimum.accumulate(
                np.concatenate(([np.int64(i)], best[:-1])) - np.arange(m)
            )
            + np.arange(m)
            + 1,
        )
        prev, curr = curr, prev
    return int(prev[m])


def edit_similarity(x: str, y: str) -> float:
    """Normalized edit distance: 1 - lev/max(len); 1.0 for two empty texts."""
    longest = max(len(x), len(y))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(x, y) / longest


def normalize_for_fingerprinting(text: str) -> str:
    """Lowercase and drop all whitespace before k-gram hashing."""
    return "".join(text.lower().split())


def kgram_hashes(normalized: str, k: int) -> list[int]:
    """Rolling polynomial hashes of every k-gram of the normalized text."""
    n = len(normalized)
    if k <= 0 or n < k:
        return []
    codes = [ord(c) for c in normalized]
    power = pow(_HASH_BASE, k - 1, _HASH_MOD)
    h = 0
    for c in codes[:k]:
        h = (h * _HASH_BASE + c) % _HASH_MOD
    hashes = [h]
    for i in range(k, n):
        h = ((h - codes[i - k] * power) * _HASH_BASE + codes[i]) % _HASH_MOD
        hashes.append(h)
    return hashes


def winnow(hashes: list[int], w: int) -> frozenset[int]:
    """Select window minima (rightmost on ties) from a k-gram hash list."""
    if not hashes:
        return frozenset()
    if w <= 1 or len(hashes) <= w:
        if w > 1:
            return frozenset({min(hashes)})
        return frozenset(hashes)
    selected: set[int] = set()
    window: list[int] = []  # indices, values strictly increasing
    for i, h in enumerate(hashes):
        while window and hashes[window[-1]] >= h:
            window.pop()
        window.append(i)
        if window[0] <= i - w:
            window.pop(0)
        if i >= w - 1:
            selected.add(hashes[window[0]])
    return frozenset(selected)


def winnowing_fingerprints(
    text: str, k: int = DEFAULT_K, w: int = DEFAULT_WINDOW
) -> frozenset[int]:
    """Winnowing fingerprint set of a text."""
    return winnow(kgram_hashes(normalize_for_fingerprinting(text), k), w)


def winnowing_similarity(
    x: str, y: str, k: int = DEFAULT_K, w: int = DEFAULT_WINDOW
) -> float:
    """Jaccard similarity of fingerprint sets.

    When both texts are too short to fingerprint, falls back to equality
    of the normalized texts (1.0 or 0.0).
    """
    fx = winnowing_fingerprints(x, k, w)
    fy = winnowing_fingerprints(y, k, w)
    if not fx and not fy:
        same = normalize_for_fingerprinting(x) == normalize_for_fingerprinting(y)
        return 1.0 if same else 0.0
    union = fx | fy
    return len(fx & fy) / len(union)


def semantic_similarity(x: str, y: str, provider: EmbeddingProvider) -> float:
    """Cosine similarity of provider embeddings, clamped to [0, 1]."""
    try:
        vx = np.asarray(provider.embed(x), dtype=np.float64)
        vy = np.asarray(provider.embed(y), dtype=np.float64)
    except ScoreUnavailableError:
        raise
    except Exception as exc:
        raise ScoreUnavailableError(f"embedding provider failed: {exc}") from exc
    nx = np.linalg.norm(vx)
    ny = np.linalg.norm(vy)
    if nx == 0.0 or ny == 0.0:
        raise ScoreUnavailableError("embedding provider returned a zero vector")
    cosine = float(np.dot(vx, vy) / (nx * ny))
    return min(1.0, max(0.0, cosine))


@dataclass(frozen=True)
class SimilarityScores:
    """ES/WS/SS values; None marks a metric that was unavailable."""

    es: float | None
    ws: float | None
    ss: float | None

    def available(self) -> list[float]:
        return [v for v in (self.es, self.ws, self.ss) if v is not None]


def matches_ground_truth(
    scores: SimilarityScores, threshold: float = MATCH_THRESHOLD
) -> bool:
    """True when any available score reaches the threshold."""
    available = scores.available()
    if not available:
        raise ValueError("no similarity score is available")
    return any(v >= threshold for v in available)


def score_resolution(
    candidate: str,
    ground_truth: str,
    provider: EmbeddingProvider | None = None,
    k: int = DEFAULT_K,
    w: int = DEFAULT_WINDOW,
) -> SimilarityScores:
    """All three scores for one candidate; SS is None without a provider."""
    es = edit_similarity(candidate, ground_truth)
    ws = winnowing_similarity(candidate, ground_truth, k, w)
    ss: float | None
    if provider is None:
        ss = None
    else:
        try:
            ss = semantic_similarity(candidate, ground_truth, provider)
        except ScoreUnavailableError:
            ss = None
    return SimilarityScores(es=es, ws=ws, ss=ss)
