"""Per-cluster representative extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyReservoir, TooLarge

LEVENSHTEIN_CAP = 256


@dataclass(frozen=True)
class Representative:
    cluster_id: int
    record_id: str
    score: float
    vector: np.ndarray
    text: str = ""


def representative_by_centroid(cluster) -> Representative:
    """The reservoir member most cosine-similar to the centroid.

    Ties break toward the earliest reservoir insertion, so repeated calls on
    an unchanged cluster are stable.
    """
    if not cluster.reservoir:
        raise EmptyReservoir(f"cluster {cluster.id} has an empty reservoir")
    cen = cluster.cen
    cen_norm = float(np.linalg.norm(cen))
    best_idx, best_score = 0, -np.inf
    for idx, (_, vec) in enumerate(cluster.reservoir):
        score = float(np.dot(vec, cen)) / (float(np.linalg.norm(vec)) * cen_norm)
        if score > best_score:
            best_idx, best_score = idx, score
    rid, vec = cluster.reservoir[best_idx]
    return Representative(cluster.id, rid, best_score, vec)


def levenshtein(a: str, b: str) -> int:
    """Classic two-row edit-distance DP."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def representative_by_levenshtein(
    cluster,
    texts: dict[str, str],
    cap: int = LEVENSHTEIN_CAP,
    force: bool = False,
) -> Representative:
    """The medoid under pairwise edit distance.

    Quadratic in both member count and text length, hence the size cap;
    pass force=True to run anyway.
    """
    members = cluster.reservoir
    if not members:
        raise EmptyReservoir(f"cluster {cluster.id} has an empty reservoir")
    if len(members) > cap and not force:
        raise TooLarge(
            f"cluster {cluster.id} reservoir has {len(members)} members (cap {cap})"
        )
    strings = [texts[rid] for rid, _ in members]
    n = len(strings)
    dist = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = levenshtein(strings[i], strings[j])
            dist[i][j] = dist[j][i] = d
    sums = [sum(row) for row in dist]
    best_idx = min(range(n), key=lambda i: (sums[i], i))
    rid, vec = members[best_idx]
    return Representative(cluster.id, rid, -float(sums[best_idx]), vec, strings[best_idx])
