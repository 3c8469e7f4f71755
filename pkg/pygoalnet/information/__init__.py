__all__ = []

from . import shannon
from .shannon import (
    DiscreteJoint,
    entropy,
    binary_entropy,
    joint_entropy,
    conditional_entropy,
    kl_divergence,
    mutual_information,
    conditional_mi,
    gaussian_rd,
    gaussian_rd_parallel
)
__all__.extend(shannon.__all__)

from . import rate_distortion
from .rate_distortion import (
    RdPoint,
    blahut_arimoto,
    rate_utility,
    rd_curve,
    indirect_rd_scalar,
    indirect_rd_error,
    indirect_rd_diagonal
)
__all__.extend(rate_distortion.__all__)

from . import bottleneck
from .bottleneck import (
    IbResult,
    ib_solve,
    ib_curve,
    ib_lagrangian
)
__all__.extend(bottleneck.__all__)

from . import semantic
from .semantic import (
    TruthTable,
    semantic_mi,
    semantic_distortion
)
__all__.extend(semantic.__all__)
