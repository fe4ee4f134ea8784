"""Subduction classes, heights and tiles of a skeleton."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import TetrisSgpError
from .skeleton import Skeleton


class TileMode(str, Enum):
    MAXIMAL = "maximal"
    STRICT = "strict"


@dataclass(frozen=True, eq=False)
class EquivClassification:
    """Mutual-subduction classes of Q.

    ``heights`` is None when it was not requested (it needs the inclusion
    covers, which are out of reach on very large skeletons).
    """

    class_of: np.ndarray
    representative: np.ndarray
    heights: np.ndarray | None

    @property
    def n_classes(self) -> int:
        return self.representative.size

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)

    def height(self, node: int) -> int:
        if self.heights is None:
            raise TetrisSgpError("heights were not computed")
        return int(self.heights[node])

    @property
    def height_of_states(self) -> int:
        """Height of the full state set (node 0)."""
        return self.height(0)

    def is_representative(self, node: int) -> bool:
        return int(self.representative[self.class_of[node]]) == node


def _generator_graph(skel: Skeleton):
    q = len(skel)
    rows = np.repeat(np.arange(q), skel.n_generators)
    cols = skel.edges.ravel()
    return csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(q, q))


def classify(skel: Skeleton, with_heights: bool = True) -> EquivClassification:
    """Split Q into subduction classes and compute heights.

    Mutually subducting sets have equal size and are images of each other,
    so the classes are the strongly connected components of the generator
    graph alone.  Heights count strict steps in the longest chain below a
    set, with every singleton at height 0.
    """
    _, labels = connected_components(_generator_graph(skel), directed=True, connection="strong")
    # renumber classes by their first node so node 0 is in class 0
    first = {}
    for node, lab in enumerate(labels):
        first.setdefault(int(lab), node)
    order = sorted(first, key=first.get)
    remap = np.empty(len(order), dtype=np.int64)
    for new, old in enumerate(order):
        remap[old] = new
    class_of = remap[labels]
    representative = np.array([first[old] for old in order], dtype=np.int64)
    heights = _heights(skel, class_of, representative) if with_heights else None
    for arr in (class_of, representative) + ((heights,) if heights is not None else ()):
        arr.setflags(write=False)
    return EquivClassification(class_of, representative, heights)


def _heights(skel: Skeleton, class_of: np.ndarray, representative: np.ndarray) -> np.ndarray:
    covers = skel.covers()
    nc = representative.size
    below = [set() for _ in range(nc)]
    for a in range(len(skel)):
        ca = int(class_of[a])
        for b in skel.edges[a]:
            cb = int(class_of[b])
            if cb != ca:
                below[ca].add(cb)
        for b in covers[a]:
            below[ca].add(int(class_of[b]))
    # Kahn's algorithm from the bottom up
    above_count = [len(s) for s in below]
    above = [[] for _ in range(nc)]
    for c, bs in enumerate(below):
        for b in bs:
            above[b].append(c)
    singleton_class = np.zeros(nc, dtype=bool)
    singleton_class[class_of[skel.sizes == 1]] = True
    h = np.zeros(nc, dtype=np.int64)
    queue = deque(c for c in range(nc) if above_count[c] == 0)
    done = 0
    while queue:
        c = queue.popleft()
        done += 1
        if not singleton_class[c]:
            h[c] = max((h[b] + 1 for b in below[c]), default=0)
        for up in above[c]:
            above_count[up] -= 1
            if above_count[up] == 0:
                queue.append(up)
    if done != nc:
        raise TetrisSgpError("subduction condensation is not acyclic")
    return h[class_of]


def tiles(rep: int, skel: Skeleton, mode: TileMode | str = TileMode.MAXIMAL) -> list:
    """Tiles of node ``rep``, as node indices in ascending order.

    MAXIMAL: inclusion-maximal proper subsets in Q.
    STRICT: proper subsets ``A`` with no ``Z`` in Q other than ``A`` and
    ``rep`` satisfying ``A <= Z <= rep`` in the subduction order.
    """
    if skel.sizes[rep] < 2:
        raise TetrisSgpError("singletons have no tiles")
    mode = TileMode(mode)
    if mode is TileMode.MAXIMAL:
        return sorted(int(x) for x in skel.covers_of(rep))
    below_rep = skel.down_set(rep)
    out = []
    for a in skel.proper_subsets(rep):
        a = int(a)
        between = [z for z in np.flatnonzero(below_rep) if z != a and z != rep and skel.down_set(int(z))[a]]
        if not between:
            out.append(a)
    return out
