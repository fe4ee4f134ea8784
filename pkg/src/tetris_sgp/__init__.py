"""Tetris variants as finite transformation semigroups.

Enumerates game states and semigroup elements, tests aperiodicity, and
computes holonomy decompositions with identified permutation groups.
"""

__version__ = "0.1.0"

from .engine import (
    BoardState,
    Event,
    GameConfig,
    OverflowPolicy,
    StateSpace,
    Variant,
    apply_event,
    enumerate_state_space,
    resting_offset,
)
from .tsgrp import (
    SemigroupEnumeration,
    Transformation,
    compose,
    element_is_aperiodic,
    enumerate_semigroup,
    semigroup_is_aperiodic_elementwise,
)
