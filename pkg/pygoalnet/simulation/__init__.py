__all__ = []

from . import simulator
from .simulator import (
    Trace,
    PolicyReport,
    ComparisonReport,
    stream_rng,
    run_episode,
    empirical_cost,
    monte_carlo_compare,
    write_trace_csv,
    summary_to_json,
    comparison_to_json,
    format_comparison_table
)
__all__.extend(simulator.__all__)
