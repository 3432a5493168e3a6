"""logevo: online semantic clustering of error logs with evolution scoring."""

from .clustering import AssignmentOutcome, BatchReport, Cluster, ClusterState, HyperParams
from .metrics import EvolutionScore, score_C, score_LCE, score_R, score_S, silhouette_batch
from .records import Batch, BatchPlan, Level, LineFormat, LogRecord, plan_batches, scrub
from .textnorm import TokenSeq, normalize

__all__ = [
    "AssignmentOutcome",
    "Batch",
    "BatchPlan",
    "BatchReport",
    "Cluster",
    "ClusterState",
    "EvolutionScore",
    "HyperParams",
    "Level",
    "LineFormat",
    "LogRecord",
    "TokenSeq",
    "normalize",
    "plan_batches",
    "score_C",
    "score_LCE",
    "score_R",
    "score_S",
    "scrub",
    "silhouette_batch",
]

__version__ = "0.1.0"
