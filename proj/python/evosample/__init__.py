"""Hybrid resampling for binary imbalanced data.

Multi-task GP oversampling with knowledge transfer, followed by
granular-ball undersampling; SMOTE and a kNN/AUC/G-mean evaluation
harness are included for comparison runs.
"""

from evosample._core import (
    Config,
    Dataset,
    auc,
    class_partition,
    evaluate,
    feasibility_threshold,
    g_mean,
    generate_balls,
    knn_scores,
    parse_csv,
    parse_keel,
    resample,
    smote,
    stratified_split,
    write_csv,
)

__all__ = [
    "Config",
    "Dataset",
    "auc",
    "class_partition",
    "evaluate",
    "feasibility_threshold",
    "g_mean",
    "generate_balls",
    "knn_scores",
    "parse_csv",
    "parse_keel",
    "resample",
    "smote",
    "stratified_split",
    "write_csv",
]
