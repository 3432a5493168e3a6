"""Representative extraction."""

import numpy as np
import pytest

from logevo.clustering import ClusterState, HyperParams
from logevo.errors import EmptyReservoir, TooLarge
from logevo.representatives import (
    levenshtein,
    representative_by_centroid,
    representative_by_levenshtein,
)

from helpers import record, unit_vectors


def cluster_with(vectors, cen=None, texts=None):
    state = ClusterState(HyperParams(theta=2.0))
    for i, v in enumerate(vectors):
        state.ingest_point(record(f"m{i}"), np.array(v, dtype=float))
    c = state.get(0)
    if cen is not None:
        c.cen = np.array(cen, dtype=float)
    return c


class TestCentroid:
    def test_singleton(self):
        c = cluster_with([(1, 0)])
        rep = representative_by_centroid(c)
        assert rep.record_id == "m0"
        assert rep.score == pytest.approx(1.0)

    def test_picks_closest_axis(self):
        c = cluster_with([(1, 0), (0, 1)], cen=(0.7, 0.3))
        assert representative_by_centroid(c).record_id == "m0"

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        vectors = unit_vectors(rng, 50, 6)
        c = cluster_with(vectors)
        rep = representative_by_centroid(c)
        cen = c.cen / np.linalg.norm(c.cen)
        sims = [float(v @ cen) for _, v in c.reservoir]
        assert rep.record_id == c.reservoir[int(np.argmax(sims))][0]

    def test_tie_breaks_to_earliest(self):
        c = cluster_with([(1, 0), (1, 0)], cen=(1, 0))
        assert representative_by_centroid(c).record_id == "m0"

    def test_stable_on_recompute(self):
        rng = np.random.default_rng(12)
        c = cluster_with(unit_vectors(rng, 20, 4))
        assert (
            representative_by_centroid(c).record_id
            == representative_by_centroid(c).record_id
        )

    def test_empty_reservoir(self):
        c = cluster_with([(1, 0)])
        c.reservoir.clear()
        with pytest.raises(EmptyReservoir):
            representative_by_centroid(c)


class TestLevenshteinDistance:
    @pytest.mark.parametrize(
        "a,b,d",
        [("abc", "abc", 0), ("abc", "abd", 1), ("abc", "xyz", 3), ("", "abc", 3),
         ("kitten", "sitting", 3), ("flaw", "lawn", 2)],
    )
    def test_known_distances(self, a, b, d):
        assert levenshtein(a, b) == d
        assert levenshtein(b, a) == d


class TestLevenshteinMedoid:
    def test_spec_example(self):
        c = cluster_with([(1, 0)] * 3)
        texts = {"m0": "abc", "m1": "abd", "m2": "xyz"}
        rep = representative_by_levenshtein(c, texts)
        assert rep.record_id == "m0"  # sums 4, 4, 6; tie goes earliest
        assert rep.text == "abc"

    def test_singleton(self):
        c = cluster_with([(1, 0)])
        rep = representative_by_levenshtein(c, {"m0": "hello"})
        assert rep.record_id == "m0"
        assert rep.score == 0.0

    def test_identical_texts_first_member(self):
        c = cluster_with([(1, 0)] * 4)
        texts = {f"m{i}": "same text" for i in range(4)}
        assert representative_by_levenshtein(c, texts).record_id == "m0"

    def test_matches_brute_force_small(self):
        rng = np.random.default_rng(13)
        words = ["alpha", "beta", "gamma", "delta"]
        for trial in range(5):
            n = int(rng.integers(2, 10))
            texts = {
                f"m{i}": " ".join(
                    words[int(k)] for k in rng.integers(0, len(words), size=3)
                )
                for i in range(n)
            }
            c = cluster_with([(1, 0)] * n)
            rep = representative_by_levenshtein(c, texts)
            strings = [texts[f"m{i}"] for i in range(n)]
            sums = [
                sum(levenshtein(s, t) for t in strings) for s in strings
            ]
            assert rep.record_id == f"m{int(np.argmin(sums))}"

    def test_size_cap(self):
        c = cluster_with([(1, 0)] * 6)
        texts = {f"m{i}": "t" for i in range(6)}
        with pytest.raises(TooLarge):
            representative_by_levenshtein(c, texts, cap=5)
        rep = representative_by_levenshtein(c, texts, cap=5, force=True)
        assert rep.record_id == "m0"
