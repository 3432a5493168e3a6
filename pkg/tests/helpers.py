"""Shared test utilities: independent oracles and synthetic data generators."""

from __future__ import annotations

import math
from datetime import datetime, timedelta, timezone

import numpy as np

from logevo.records import Level, LogRecord

T0 = datetime(2017, 5, 16, tzinfo=timezone.utc)


def record(rid: str, text: str = "x", ts: datetime | None = None) -> LogRecord:
    return LogRecord.build(rid, ts or T0, Level.ERROR, text)


def unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    v = rng.normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# --- independent straight-line replay of the online clustering listing -------


class ReplayCluster:
    def __init__(self, cen, cid):
        self.cen = np.array(cen, dtype=float)
        self.len = 1
        self.id = cid


def replay_online(points, theta, alpha, gamma):
    """Literal transliteration of the published listing, one point at a time.

    Returns (clusters, assignments) where assignments is a list of
    (cluster id, was_new) tuples.
    """
    clusters: list[ReplayCluster] = []
    assignments = []
    for p in points:
        min_dist = math.inf
        c = None
        for clust in clusters:
            dist = 1.0 - float(
                np.dot(clust.cen, p) / (np.linalg.norm(clust.cen) * np.linalg.norm(p))
            )
            if dist < min_dist:
                min_dist = dist
                c = clust
        if min_dist <= theta:
            if c.len >= gamma:
                c.cen = (1.0 - alpha) * c.cen + alpha * p
            else:
                c.cen = (c.len / (c.len + 1)) * c.cen + (1.0 / (c.len + 1)) * p
            c.len += 1
            assignments.append((c.id, False))
        else:
            clust = ReplayCluster(p, len(clusters))
            clusters.append(clust)
            assignments.append((clust.id, True))
    return clusters, assignments


# --- brute-force silhouette reference ---------------------------------------


def silhouette_reference(points):
    """Plain double-loop cosine silhouette; singleton points score 0."""
    n = len(points)
    if n < 2:
        return None
    labels = [cid for _, cid in points]
    if len(set(labels)) < 2:
        return None

    def cos_dist(a, b):
        return 1.0 - float(np.dot(a, b)) / (
            float(np.linalg.norm(a)) * float(np.linalg.norm(b))
        )

    scores = []
    for i in range(n):
        same = [j for j in range(n) if j != i and labels[j] == labels[i]]
        if not same:
            scores.append(0.0)
            continue
        a = sum(cos_dist(points[i][0], points[j][0]) for j in same) / len(same)
        b = math.inf
        for lab in set(labels):
            if lab == labels[i]:
                continue
            other = [j for j in range(n) if labels[j] == lab]
            b = min(
                b,
                sum(cos_dist(points[i][0], points[j][0]) for j in other) / len(other),
            )
        denom = max(a, b)
        scores.append(0.0 if denom == 0 else (b - a) / denom)
    return sum(scores) / n


# --- synthetic raw log files in the preset layouts --------------------------

_MESSAGES = [
    ("Connection timeout to host db-{}", "ERROR"),
    ("Failed to replicate block blk-{} to datanode", "ERROR"),
    ("Out of memory while allocating buffer of size {}", "ERROR"),
    ("Disk quota exceeded on volume vol-{}", "ERROR"),
    ("Authentication failure for user svc-{}", "ERROR"),
    ("Unable to open session with quorum peer {}", "ERROR"),
    ("Request queue overflow, dropping {} requests", "ERROR"),
    ("Checksum mismatch reading segment {}", "ERROR"),
    ("Heartbeat received from node {}", "INFO"),
    ("Snapshot completed in {} ms", "INFO"),
]


def _sample_stream(n, seed):
    """Yields (timestamp, level, message) spread over ~8 days."""
    rng = np.random.default_rng(seed)
    step = timedelta(seconds=int(8 * 86400 / n))
    ts = T0
    for i in range(n):
        template, level = _MESSAGES[int(rng.integers(len(_MESSAGES)))]
        yield ts, level, template.format(int(rng.integers(1000)))
        ts += step


def make_loghub_sample(fmt_name: str, n: int, seed: int = 0) -> str:
    """Render n lines in the named preset layout, plus a few continuations."""
    lines = []
    for i, (ts, level, msg) in enumerate(_sample_stream(n, seed)):
        if fmt_name == "HDFS_2":
            stamp = ts.strftime("%Y-%m-%d %H:%M:%S,123")
            lines.append(f"{stamp} {level} [main] org.apache.hadoop.hdfs: {msg}")
        elif fmt_name == "Linux":
            stamp = ts.strftime("%b %d %H:%M:%S")
            lines.append(f"{stamp} combo kernel[{1000 + i % 50}]: {msg}")
        elif fmt_name == "Zookeeper":
            stamp = ts.strftime("%Y-%m-%d %H:%M:%S,648")
            lines.append(f"{stamp} - {level}  [main:QuorumPeer@913] - {msg}")
        elif fmt_name == "OpenStack":
            stamp = ts.strftime("%Y-%m-%d %H:%M:%S")
            lines.append(
                f"nova-api.log.1.2017-05-16_13:53:08 {stamp}.008 25746 {level} "
                f"nova.osapi_compute.wsgi.server {msg}"
            )
        else:
            raise ValueError(fmt_name)
        if i % 400 == 7:  # occasional stack-trace continuation
            lines.append("    at java.lang.Thread.run(Thread.java:748)")
    return "\n".join(lines) + "\n"


# --- three-direction synthetic evolution stream -----------------------------

BASE_PHRASES = [
    "database connection pool exhausted retry limit reached primary replica stalled",
    "filesystem checksum mismatch corrupted segment detected during compaction sweep",
    "scheduler queue saturation worker heartbeat missed deadline threshold breached",
]

NOISE_TOKENS = ["alpha", "beta", "delta", "sigma", "kappa", "omega", "lambda"]


def make_evolution_jsonl(days: int = 10, per_kind: int = 20, seed: int = 5):
    """Records for three stable defect families over daily batches.

    Each day each family emits one pure base-phrase log plus noisy variants
    carrying one extra token.
    """
    rng = np.random.default_rng(seed)
    rows = []
    rid = 0
    for day in range(days):
        for kind, phrase in enumerate(BASE_PHRASES):
            base_ts = T0 + timedelta(days=day, hours=kind)
            rows.append((f"r{rid}", base_ts, phrase))
            rid += 1
            for j in range(per_kind):
                noise = NOISE_TOKENS[int(rng.integers(len(NOISE_TOKENS)))]
                rows.append(
                    (f"r{rid}", base_ts + timedelta(minutes=1 + j), f"{phrase} {noise}")
                )
                rid += 1
    return [
        LogRecord.build(rid_, ts, Level.ERROR, text) for rid_, ts, text in rows
    ]
