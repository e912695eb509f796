"""Toolkit for state-of-practice assessments of research software.

Mine repositories, score the measurement template, rank packages with the
Analytic Hierarchy Process and write the reports.
"""

from .ahp import priority_vector, rank_packages, sensitivity
from .catalog import QUALITIES, builtin_catalog, parse_answers
from .derived import compute_status, derive
from .repo_metrics import aggregate_tree, analyze_history, count_lines
from .scoring import score_all, score_quality

__version__ = "0.1.0"

__all__ = [
    "QUALITIES", "aggregate_tree", "analyze_history", "builtin_catalog", "compute_status",
    "count_lines", "derive", "parse_answers", "priority_vector", "rank_packages",
    "score_all", "score_quality", "sensitivity",
]
