"""Shared, memoized builders so expensive instances are computed once per run."""

from functools import lru_cache

from tetris_sgp.engine import GameConfig, enumerate_state_space
from tetris_sgp.holonomy import build_skeleton, classify, decomposition_report
from tetris_sgp.pieces import REDUCED_PIECES, TRITRIS_PIECES
from tetris_sgp.tsgrp import enumerate_semigroup

TRITRIS = TRITRIS_PIECES
REDUCED = REDUCED_PIECES


@lru_cache(maxsize=None)
def space(n, k, variant="standard", pieces=TRITRIS, overflow="pre-clear"):
    return enumerate_state_space(GameConfig(n, k, variant, overflow, pieces))


@lru_cache(maxsize=None)
def semigroup(n, k, variant="standard", pieces=TRITRIS):
    return enumerate_semigroup(space(n, k, variant, pieces).tables)


@lru_cache(maxsize=None)
def skeleton(n, k, variant="standard", pieces=TRITRIS):
    return build_skeleton(space(n, k, variant, pieces))


@lru_cache(maxsize=None)
def classes(n, k, variant="standard", pieces=TRITRIS):
    return classify(skeleton(n, k, variant, pieces))


@lru_cache(maxsize=None)
def report(n, k, variant="standard", pieces=TRITRIS):
    return decomposition_report(space(n, k, variant, pieces), skeleton=skeleton(n, k, variant, pieces),
                                classes=classes(n, k, variant, pieces))
