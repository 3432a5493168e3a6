"""Online clustering of embedded logs.

Each incoming point merges into the nearest active cluster by cosine
distance when within the acceptance threshold, otherwise opens a new
cluster. Centroids follow a rolling mean until the cluster reaches the
minimum size, then switch to an exponential moving average so mature
clusters drift slowly. Clusters untouched for the staleness window are
retired from assignment and the census.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .errors import NoActiveClusters
from .records import Batch, LogRecord
from .representatives import Representative, representative_by_centroid

DEFAULT_RESERVOIR_CAP = 512


@dataclass(frozen=True)
class HyperParams:
    theta: float = 0.05
    alpha: float = 0.1
    gamma: int = 100
    staleness: timedelta = timedelta(days=30)
    reservoir_cap: int = DEFAULT_RESERVOIR_CAP

    def __post_init__(self):
        if not 0.0 <= self.theta <= 2.0:
            raise ValueError("theta must be in [0, 2]")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if self.gamma < 1:
            raise ValueError("gamma must be a positive integer")
        if self.staleness <= timedelta(0):
            raise ValueError("staleness must be positive")


@dataclass
class Cluster:
    id: int
    cen: np.ndarray
    len: int
    created_at: datetime
    last_updated: datetime
    active: bool = True
    # (record id, vector), most recent reservoir_cap members, oldest first.
    reservoir: list[tuple[str, np.ndarray]] = field(default_factory=list)

    def _remember(self, record_id: str, vec: np.ndarray, cap: int) -> None:
        self.reservoir.append((record_id, vec))
        if len(self.reservoir) > cap:
            self.reservoir.pop(0)


@dataclass(frozen=True)
class AssignmentOutcome:
    record_id: str
    cluster_id: int
    was_new: bool
    distance: float


@dataclass
class BatchReport:
    index: int
    assignments: list[AssignmentOutcome]
    points: list[tuple[np.ndarray, int]]  # (vector, assigned cluster id)
    nr_clust: int  # active clusters at batch end
    reps: dict[int, Representative]
    expired: list[int]


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 1.0 - float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


class ClusterState:
    def __init__(self, params: HyperParams | None = None):
        self.params = params or HyperParams()
        self.clusters: list[Cluster] = []
        self.next_id = 0

    def active_clusters(self) -> list[Cluster]:
        return [c for c in self.clusters if c.active]

    def get(self, cluster_id: int) -> Cluster:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        raise KeyError(cluster_id)

    def nearest_cluster(self, p: np.ndarray) -> tuple[int, float]:
        """Nearest active cluster by cosine distance; oldest id wins ties."""
        best_id, best_dist = None, np.inf
        for c in self.clusters:
            if not c.active:
                continue
            dist = cosine_distance(c.cen, p)
            if dist < best_dist:
                best_dist = dist
                best_id = c.id
        if best_id is None:
            raise NoActiveClusters("no active clusters")
        return best_id, best_dist

    def ingest_point(self, record: LogRecord, p: np.ndarray) -> AssignmentOutcome:
        params = self.params
        try:
            cid, dist = self.nearest_cluster(p)
        except NoActiveClusters:
            cid, dist = None, np.inf

        if cid is not None and dist <= params.theta:
            c = self.get(cid)
            if c.len >= params.gamma:
                c.cen = (1.0 - params.alpha) * c.cen + params.alpha * p
            else:
                c.cen = (c.len / (c.len + 1)) * c.cen + (1.0 / (c.len + 1)) * p
            c.len += 1
            c.last_updated = record.timestamp
            c._remember(record.id, p, params.reservoir_cap)
            return AssignmentOutcome(record.id, c.id, False, dist)

        c = Cluster(
            id=self.next_id,
            cen=np.array(p, dtype=float),
            len=1,
            created_at=record.timestamp,
            last_updated=record.timestamp,
        )
        c._remember(record.id, p, params.reservoir_cap)
        self.clusters.append(c)
        self.next_id += 1
        return AssignmentOutcome(record.id, c.id, True, dist)

    def expire_stale(self, now: datetime) -> list[int]:
        """Retire active clusters idle longer than the staleness window."""
        expired = []
        cutoff = now - self.params.staleness
        for c in self.clusters:
            if c.active and c.last_updated < cutoff:
                c.active = False
                expired.append(c.id)
        return expired

    def process_batch(self, batch: Batch, vectors: list[np.ndarray]) -> BatchReport:
        """Expire stale clusters, ingest the batch in order, report the census.

        ``vectors`` aligns one-to-one with ``batch.records``. Expiry runs only
        at the batch boundary so in-batch behavior is clock-independent.
        """
        expired = self.expire_stale(batch.start)
        assignments = []
        points = []
        for record, vec in zip(batch.records, vectors):
            outcome = self.ingest_point(record, vec)
            assignments.append(outcome)
            points.append((vec, outcome.cluster_id))
        active = self.active_clusters()
        reps = {c.id: representative_by_centroid(c) for c in active if c.reservoir}
        return BatchReport(
            index=batch.index,
            assignments=assignments,
            points=points,
            nr_clust=len(active),
            reps=reps,
            expired=expired,
        )

    # -- persistence ---------------------------------------------------------

    def to_snapshot(self) -> dict:
        return {
            "params": {
                "theta": self.params.theta,
                "alpha": self.params.alpha,
                "gamma": self.params.gamma,
                "staleness_seconds": self.params.staleness.total_seconds(),
                "reservoir_cap": self.params.reservoir_cap,
            },
            "next_id": self.next_id,
            "clusters": [
                {
                    "id": c.id,
                    "cen": [float(x) for x in c.cen],
                    "len": c.len,
                    "created_at": c.created_at.isoformat(),
                    "last_updated": c.last_updated.isoformat(),
                    "active": c.active,
                    "reservoir_ids": [rid for rid, _ in c.reservoir],
                    "reservoir_vectors": [
                        [float(x) for x in vec] for _, vec in c.reservoir
                    ],
                }
                for c in self.clusters
            ],
        }

    @classmethod
    def from_snapshot(cls, doc: dict) -> "ClusterState":
        p = doc["params"]
        state = cls(
            HyperParams(
                theta=p["theta"],
                alpha=p["alpha"],
                gamma=p["gamma"],
                staleness=timedelta(seconds=p["staleness_seconds"]),
                reservoir_cap=p.get("reservoir_cap", DEFAULT_RESERVOIR_CAP),
            )
        )
        state.next_id = doc["next_id"]
        for cd in doc["clusters"]:
            vectors = cd.get("reservoir_vectors")
            if vectors is None:
                vectors = [[] for _ in cd["reservoir_ids"]]
            cluster = Cluster(
                id=cd["id"],
                cen=np.array(cd["cen"], dtype=float),
                len=cd["len"],
                created_at=datetime.fromisoformat(cd["created_at"]).astimezone(timezone.utc),
                last_updated=datetime.fromisoformat(cd["last_updated"]).astimezone(timezone.utc),
                active=cd["active"],
                reservoir=[
                    (rid, np.array(vec, dtype=float))
                    for rid, vec in zip(cd["reservoir_ids"], vectors)
                ],
            )
            state.clusters.append(cluster)
        return state

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_snapshot(), indent=1), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ClusterState":
        return cls.from_snapshot(json.loads(Path(path).read_text(encoding="utf-8")))
