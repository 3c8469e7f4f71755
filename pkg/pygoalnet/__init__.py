from .utils import *
from .control import *
from .networks import *
from .simulation import *
from .information import *
