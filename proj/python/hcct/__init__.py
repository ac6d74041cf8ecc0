"""Streaming hot calling context tree profiler."""

from ._hcct import (
    MAIN_P_Q_SYMBOLS,
    EmptyPool,
    EmptyTrace,
    Error,
    ExactCct,
    HcctBuilder,
    HcctReport,
    InvalidThreshold,
    MalformedRecord,
    MismatchedRun,
    Trace,
    UnbalancedTrace,
    compare,
    generate_zipf,
    main_p_q,
)

__all__ = [
    "MAIN_P_Q_SYMBOLS",
    "EmptyPool",
    "EmptyTrace",
    "Error",
    "ExactCct",
    "HcctBuilder",
    "HcctReport",
    "InvalidThreshold",
    "MalformedRecord",
    "MismatchedRun",
    "Trace",
    "UnbalancedTrace",
    "compare",
    "generate_zipf",
    "main_p_q",
]
