"""Wake-up trees for the freeze-tag problem in normed planes."""
from .norms import Cone, DomainError, InvalidInputError, Norm
from .core import Instance, ValidationError, WakeupTree, makespan, trivial_lower_bound, validate
from .exact import optimal_tree, unif_makespan, verify_13_6
from .cones import (
    GammaBounds,
    StrategyReport,
    gamma_bounds,
    general_norm_wakeup,
    heap_strategy,
    line_optimal,
    linear_split_strategy,
    split_cone_strategy,
    wake_four_general,
)
from .l1 import wake_l1_disk
from .io import emit_instance, emit_tree, parse_instance, parse_tree
from .generators import generate

__version__ = "0.1.0"
