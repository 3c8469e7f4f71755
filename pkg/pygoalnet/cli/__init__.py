__all__ = []

from . import commands
from .commands import (
    RunConfig,
    cmd_run,
    cmd_compare,
    cmd_curves,
    parse_betas,
    main
)
__all__.extend(commands.__all__)
