"""Holonomy decomposition: skeleton, subduction classes, tiles and groups."""

from .classify import EquivClassification, TileMode, classify, tiles
from .decomposition import (
    DecompositionReport,
    HolonomyComponent,
    aperiodic_via_holonomy,
    decomposition_report,
    holonomy_group,
    point_group_is_trivial,
)
from .groups import GroupFingerprint, identify_group
from .skeleton import ImageSet, Skeleton, build_skeleton, subduction_leq

__all__ = [
    "DecompositionReport", "EquivClassification", "GroupFingerprint", "HolonomyComponent",
    "ImageSet", "Skeleton", "TileMode", "aperiodic_via_holonomy", "build_skeleton", "classify",
    "decomposition_report", "holonomy_group", "identify_group", "point_group_is_trivial",
    "subduction_leq", "tiles",
]
