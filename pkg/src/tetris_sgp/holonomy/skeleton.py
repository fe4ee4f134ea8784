"""Image-set skeleton: the family Q of images of the state set.

Q holds the whole state set, every image of it under a product of
generators, and every singleton.  Sets are stored as rows of a packed bit
matrix so that skeletons with millions of nodes still fit in memory.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceededError, EnumerationLimitError

DEFAULT_NODE_CAP = 5_000_000
DEFAULT_COVER_LIMIT = 20_000


@dataclass(frozen=True, order=True)
class ImageSet:
    members: tuple

    def __post_init__(self):
        members = tuple(sorted(set(int(m) for m in self.members)))
        if not members:
            raise ValueError("image sets are non-empty")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return x in self.members

    def issubset(self, other: "ImageSet") -> bool:
        return set(self.members) <= set(other.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def _pack(bool_rows: np.ndarray) -> np.ndarray:
    return np.packbits(bool_rows, axis=-1, bitorder="little")


class _Imager:
    """Image of many sets under one generator at once."""

    def __init__(self, table: np.ndarray):
        order = np.argsort(table, kind="stable")
        targets = table[order]
        starts = np.flatnonzero(np.r_[True, targets[1:] != targets[:-1]])
        self.order = order
        self.starts = starts
        self.targets = targets[starts]
        self.n = table.size

    def __call__(self, sets: np.ndarray) -> np.ndarray:
        out = np.zeros_like(sets)
        out[:, self.targets] = np.logical_or.reduceat(sets[:, self.order], self.starts, axis=1)
        return out


class Skeleton:
    """The node set Q with generator edges and in-words.

    ``edges[i, g]`` is the node ``nodes[i] . g``.  ``parent``/``parent_gen``
    record how a node was first reached from node 0 (the whole state set);
    singletons that are not images carry ``parent == -2``.
    """

    def __init__(self, tables, bits, edges, parent, parent_gen, cover_limit=DEFAULT_COVER_LIMIT,
                 index=None):
        self.tables = np.asarray(tables)
        self.n_states = self.tables.shape[1]
        self.bits = bits
        self.edges = edges
        self.parent = parent
        self.parent_gen = parent_gen
        self.sizes = np.bitwise_count(bits).sum(axis=1, dtype=np.int64)
        self.cover_limit = cover_limit
        if index is None:
            width = bits.shape[1]
            raw = bits.tobytes()
            index = {raw[i * width:(i + 1) * width]: i for i in range(len(self))}
        self._index = index
        self._covers = None
        self._down = {}
        for arr in (self.bits, self.edges, self.sizes):
            arr.setflags(write=False)

    def __len__(self):
        return self.bits.shape[0]

    @property
    def n_generators(self) -> int:
        return self.tables.shape[0]

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(np.unpackbits(self.bits[i], count=self.n_states, bitorder="little"))

    def node(self, i: int) -> ImageSet:
        return ImageSet(tuple(self.members(i).tolist()))

    @property
    def nodes(self) -> list:
        return [self.node(i) for i in range(len(self))]

    def index(self, s) -> int:
        """Node index of an ImageSet or iterable of states; KeyError if not in Q."""
        row = np.zeros(self.n_states, dtype=bool)
        row[list(s)] = True
        key = _pack(row).tobytes()
        return self._index[key]

    def find(self, s):
        try:
            return self.index(s)
        except (KeyError, IndexError):
            return None

    def singleton(self, x: int) -> int:
        return self.index((x,))

    def in_word(self, i: int):
        """Generator indices taking the full state set onto node ``i``, or None."""
        if self.parent[i] == -2:
            return None
        word = []
        while i != 0:
            word.append(int(self.parent_gen[i]))
            i = int(self.parent[i])
        return tuple(reversed(word))

    def image_of(self, i: int, word) -> int:
        for g in word:
            i = int(self.edges[i, g])
        return i

    # -- inclusion -----------------------------------------------------

    def proper_subsets(self, i: int) -> np.ndarray:
        """All nodes strictly contained in node ``i``."""
        outside = np.bitwise_and(self.bits, np.bitwise_not(self.bits[i]))
        inside = ~outside.any(axis=1)
        inside[i] = False
        return np.flatnonzero(inside)

    def _maximal(self, cand: np.ndarray) -> np.ndarray:
        # largest first: a set is maximal iff it is not inside an earlier maximal one
        cand = cand[np.argsort(-self.sizes[cand], kind="stable")]
        keep = []
        kept_bits = np.empty((0, self.bits.shape[1]), dtype=np.uint8)
        for c in cand:
            row = self.bits[c]
            if kept_bits.shape[0] and (~np.bitwise_and(row, np.bitwise_not(kept_bits)).any(axis=1)).any():
                continue
            keep.append(int(c))
            kept_bits = np.vstack([kept_bits, row])
        return np.array(sorted(keep), dtype=np.int64)

    def covers_of(self, i: int) -> np.ndarray:
        """Inclusion-maximal nodes strictly inside node ``i``."""
        if self._covers is not None:
            return self._covers[i]
        return self._maximal(self.proper_subsets(i))

    def covers(self) -> list:
        """Covering relation of Q under inclusion, one array per node."""
        if self._covers is None:
            if len(self) > self.cover_limit:
                raise BudgetExceededError(
                    f"skeleton has {len(self)} nodes; inclusion covers are limited to {self.cover_limit}")
            self._covers = _all_covers(self)
        return self._covers

    @property
    def inclusion_edges(self) -> list:
        """Pairs ``(a, b)`` with ``b`` a maximal proper subset of ``a``."""
        return [(a, int(b)) for a, cov in enumerate(self.covers()) for b in cov]

    def down_set(self, i: int) -> np.ndarray:
        """Boolean mask of every node subducted by node ``i``."""
        if i not in self._down:
            covers = self.covers()
            mask = np.zeros(len(self), dtype=bool)
            mask[i] = True
            stack = [i]
            while stack:
                a = stack.pop()
                for b in list(self.edges[a]) + list(covers[a]):
                    if not mask[b]:
                        mask[b] = True
                        stack.append(int(b))
            self._down[i] = mask
        return self._down[i]


def _all_covers(skel: Skeleton) -> list:
    q = len(skel)
    u = np.unpackbits(skel.bits, axis=1, count=skel.n_states, bitorder="little").astype(np.float32)
    comp = 1.0 - u
    sub = np.empty((q, q), dtype=bool)
    step = 2048
    for lo in range(0, q, step):
        sub[lo:lo + step] = (u[lo:lo + step] @ comp.T) < 0.5
    np.fill_diagonal(sub, False)
    out = []
    for b in range(q):
        cand = np.flatnonzero(sub[:, b])
        if cand.size > 1:
            cand = cand[~sub[np.ix_(cand, cand)].any(axis=1)]
        cand.setflags(write=False)
        out.append(cand)
    return out


def build_skeleton(space, node_cap: int = DEFAULT_NODE_CAP, chunk: int = 8192,
                   cover_limit: int = DEFAULT_COVER_LIMIT) -> Skeleton:
    """Breadth-first closure of the full state set under the generators, plus singletons.

    Never enumerates the semigroup itself.
    """
    tables = np.asarray(space.tables)
    n_gen, n = tables.shape
    width = (n + 7) // 8
    imagers = [_Imager(tables[g]) for g in range(n_gen)]

    full = _pack(np.ones((1, n), dtype=bool))
    index = {full.tobytes(): 0}
    bit_blocks = [full]
    edge_blocks = []
    parent = [-1]
    parent_gen = [-1]
    count = 1

    frontier = full
    while frontier.shape[0]:
        new_rows = []
        level_edges = np.empty((frontier.shape[0], n_gen), dtype=np.int32)
        first = count - frontier.shape[0]
        for lo in range(0, frontier.shape[0], chunk):
            sets = np.unpackbits(frontier[lo:lo + chunk], axis=1, count=n, bitorder="little").astype(bool)
            images = np.stack([_pack(img(sets)) for img in imagers], axis=1)  # m x G x width
            raw = images.tobytes()
            pos = 0
            for e in range(images.shape[0]):
                for g in range(n_gen):
                    key = raw[pos:pos + width]
                    pos += width
                    j = index.get(key)
                    if j is None:
                        if count >= node_cap:
                            raise EnumerationLimitError("image set", node_cap, count)
                        j = index[key] = count
                        count += 1
                        new_rows.append(key)
                        parent.append(first + lo + e)
                        parent_gen.append(g)
                    level_edges[lo + e, g] = j
        edge_blocks.append(level_edges)
        frontier = (np.frombuffer(b"".join(new_rows), dtype=np.uint8).reshape(len(new_rows), width)
                    if new_rows else np.empty((0, width), dtype=np.uint8))
        bit_blocks.append(frontier)

    # singletons that are not images of the full set
    eye = _pack(np.eye(n, dtype=bool))
    extra = []
    for x in range(n):
        key = eye[x].tobytes()
        if key not in index:
            index[key] = count
            count += 1
            extra.append(x)
            parent.append(-2)
            parent_gen.append(-1)
    bits = np.concatenate(bit_blocks + [eye[extra]], axis=0)
    edges = np.concatenate(edge_blocks, axis=0) if edge_blocks else np.empty((0, n_gen), dtype=np.int32)
    if extra:
        single = [index[eye[tables[g][x]].tobytes()] for x in extra for g in range(n_gen)]
        edges = np.concatenate([edges, np.array(single, dtype=np.int32).reshape(len(extra), n_gen)])
    del bit_blocks, edge_blocks, frontier
    return Skeleton(tables, np.ascontiguousarray(bits), edges.astype(np.int32, copy=False),
                    np.array(parent, dtype=np.int64), np.array(parent_gen, dtype=np.int32),
                    cover_limit=cover_limit, index=index)


def subduction_leq(a, b, skel: Skeleton) -> bool:
    """``a <= b``: ``a`` lies inside some image of ``b`` under the monoid.

    Decided by reachability from ``b`` along generator edges and inclusion
    covers.  Arguments are node indices or ImageSets.
    """
    ia = a if isinstance(a, (int, np.integer)) else skel.index(a)
    ib = b if isinstance(b, (int, np.integer)) else skel.index(b)
    return bool(skel.down_set(int(ib))[int(ia)])


def orbit_nodes(skel: Skeleton, start: int) -> list:
    """Nodes reachable from ``start`` along generator edges alone, BFS order."""
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in skel.edges[a]:
            b = int(b)
            if b not in seen:
                seen.add(b)
                order.append(b)
                queue.append(b)
    return order
