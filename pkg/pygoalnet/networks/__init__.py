__all__ = []

from . import (
    metrics,
    scheduling,
    channel
)

from .metrics import (
    AoiTracker,
    PriorityMatrix,
    coil,
    voi,
    aoi_update,
    aoi_summary,
    aoi_area_ratio,
    priority_matrix,
    loop_metric
)
__all__.extend(metrics.__all__)

from .scheduling import (
    ScheduleDecision,
    BASELINES,
    is_feasible,
    assign_max_weight,
    assign_baseline,
    brute_force_schedule
)
__all__.extend(scheduling.__all__)

from .channel import (
    ChannelOutcome,
    realize
)
__all__.extend(channel.__all__)
