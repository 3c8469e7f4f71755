__all__ = []

from . import (
    scenario,
    synthesis,
    estimation
)

from .scenario import (
    LoopSpec,
    Scenario,
    POLICIES,
    parse_and_validate,
    load_scenario,
    dump_scenario
)
__all__.extend(scenario.__all__)

from .synthesis import (
    LoopSynthesis,
    CovarianceLadder,
    solve_control_dare,
    solve_filter_riccati,
    gamma_infinity,
    cov_propagate,
    synthesize_loop,
    synthesize
)
__all__.extend(synthesis.__all__)

from .estimation import (
    SensorFilterState,
    ControllerState,
    sensor_step,
    sensor_time_update,
    sensor_on_delivery,
    controller_on_receive,
    controller_on_loss,
    controller_predict
)
__all__.extend(estimation.__all__)
