"""Discrete-event simulator for cloud-bursting batch schedulers.

The heavy lifting lives in the compiled ``_burstsim`` extension; this package
re-exports its surface.
"""

from ._burstsim import (  # noqa: F401
    Scenario,
    SimError,
    WaitTable,
    compare,
    estimate_wait_table,
    format_hms,
    load_trace_jsonl,
    replay,
    run,
    scaled_runtime,
    __version__,
)

__all__ = [
    "Scenario",
    "SimError",
    "WaitTable",
    "compare",
    "estimate_wait_table",
    "format_hms",
    "load_trace_jsonl",
    "replay",
    "run",
    "scaled_runtime",
    "__version__",
]
