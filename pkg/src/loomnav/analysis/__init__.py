"""Path statistics, role analysis and pursuit classification."""

from .correlation import pearson, windowed_count_vs_y
from .pairs import (PairMetrics, PairRecord, PursuitClass, classify_pursuit, make_pair, pair_metrics,
                    pursuit_measures)
from .paths import PathStatistics, arc_length_resample, ensemble_stats
from .roles import (FollowerEffect, RoleClass, classify_roles, follow_phase_x_range, follower_effect, groups,
                    leader_relation, role_counts)
from .smoothing import smooth, smoothing_spline

__all__ = [
    "FollowerEffect", "PairMetrics", "PairRecord", "PathStatistics", "PursuitClass", "RoleClass",
    "arc_length_resample", "classify_pursuit", "classify_roles", "ensemble_stats", "follow_phase_x_range", "follower_effect", "groups",
    "leader_relation", "make_pair", "pair_metrics", "pearson", "pursuit_measures", "role_counts",
    "smooth", "smoothing_spline", "windowed_count_vs_y",
]
