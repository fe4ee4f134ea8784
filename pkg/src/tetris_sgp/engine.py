"""Tetris dynamics on an n x k board and reachable state-space enumeration.

Boards are stored as a tuple of row bitmasks, bottom row first, with
trailing empty rows trimmed.  Bit ``c`` of a row is column ``c``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, EnumerationLimitError, PlacementError
from .pieces import DEFAULT_CATALOG, PieceShape

DEFAULT_STATE_CAP = 1_000_000


class Variant(str, Enum):
    STANDARD = "standard"
    PERIODIC = "periodic"


class OverflowPolicy(str, Enum):
    # PRE_CLEAR: a piece poking above row k-1 loses even if rows then clear.
    PRE_CLEAR = "pre-clear"
    POST_CLEAR = "post-clear"


@dataclass(frozen=True)
class GameConfig:
    n: int
    k: int
    variant: Variant = Variant.STANDARD
    overflow_policy: OverflowPolicy = OverflowPolicy.PRE_CLEAR
    pieces: tuple = ("LS", "RS", "LUS", "RUS", "V")
    catalog: Mapping[str, PieceShape] = field(default=DEFAULT_CATALOG, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "overflow_policy", OverflowPolicy(self.overflow_policy))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.n < 1 or self.k < 1:
            raise ConfigError(f"board must be at least 1x1, got {self.n}x{self.k}")
        if not self.pieces:
            raise ConfigError("piece list is empty")
        if len(set(self.pieces)) != len(self.pieces):
            raise ConfigError(f"duplicate pieces in {self.pieces}")
        for label in self.pieces:
            if label not in self.catalog:
                raise ConfigError(f"unknown piece label {label!r}")
            width = self.catalog[label].width
            if width > self.n:
                raise ConfigError(
                    f"piece {label!r} has width {width}, which exceeds board width {self.n}")

    @property
    def shapes(self) -> tuple:
        return tuple(self.catalog[p] for p in self.pieces)

    def shape(self, label: str) -> PieceShape:
        if label not in self.pieces:
            raise ConfigError(f"piece {label!r} is not in this game's piece set {self.pieces}")
        return self.catalog[label]

    def generators(self) -> tuple:
        """Every basic event, pieces in configured order, columns ascending."""
        return tuple(
            Event(label, col)
            for label in self.pieces
            for col in range(self.n - self.catalog[label].width + 1)
        )

    def describe(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "variant": self.variant.value,
            "overflow_policy": self.overflow_policy.value,
            "pieces": [
                {"label": p.label, "cells": [list(c) for c in p.sorted_cells()]}
                for p in self.shapes
            ],
        }


@dataclass(frozen=True)
class BoardState:
    rows: tuple = ()
    is_end: bool = False

    def __post_init__(self):
        rows = tuple(self.rows)
        while rows and rows[-1] == 0:
            rows = rows[:-1]
        object.__setattr__(self, "rows", rows)
        if self.is_end and rows:
            raise ValueError("the end state carries no cells")

    @classmethod
    def from_cells(cls, cells) -> "BoardState":
        rows: list[int] = []
        for c, r in cells:
            while len(rows) <= r:
                rows.append(0)
            rows[r] |= 1 << c
        return cls(tuple(rows))

    @property
    def filled(self) -> frozenset:
        return frozenset(
            (c, r) for r, bits in enumerate(self.rows) for c in range(bits.bit_length()) if bits >> c & 1
        )

    @property
    def is_empty(self) -> bool:
        return not self.is_end and not self.rows

    def column_height(self, col: int) -> int:
        for r in range(len(self.rows) - 1, -1, -1):
            if self.rows[r] >> col & 1:
                return r + 1
        return 0

    def render(self, n: int, k: int) -> str:
        """ASCII picture, top row first."""
        if self.is_end:
            return "\n".join(["E" * n] * k)
        lines = []
        for r in reversed(range(k)):
            bits = self.rows[r] if r < len(self.rows) else 0
            lines.append("".join("#" if bits >> c & 1 else "." for c in range(n)))
        return "\n".join(lines)

    def __str__(self):
        if self.is_end:
            return "E"
        if not self.rows:
            return "e"
        return "/".join(format(r, "b")[::-1] for r in self.rows)


EMPTY = BoardState()
END = BoardState((), True)


@dataclass(frozen=True)
class Event:
    piece: str
    column: int

    def __str__(self):
        return f"{self.piece}_{self.column}"


def _check_event(event: Event, config: GameConfig) -> PieceShape:
    shape = config.shape(event.piece)
    if not 0 <= event.column <= config.n - shape.width:
        raise PlacementError(
            f"{event} is out of bounds: {event.piece} needs column in "
            f"[0, {config.n - shape.width}] on a board of width {config.n}")
    return shape


def resting_offset(board: BoardState, event: Event, config: GameConfig) -> int:
    """Row at which the piece's bounding box comes to rest.

    The piece falls straight down until one of its cells touches a filled
    cell or the floor; it can hang over lower cells of other columns.
    """
    if board.is_end:
        raise PlacementError("cannot drop a piece on the end state")
    shape = _check_event(event, config)
    return max(max(0, board.column_height(event.column + c) - r) for c, r in shape.cells)


def apply_event(board: BoardState, event: Event, config: GameConfig) -> BoardState:
    shape = _check_event(event, config)
    if board.is_end:
        return END
    v = resting_offset(board, event, config)
    rows = list(board.rows)
    for c, r in shape.cells:
        while len(rows) <= v + r:
            rows.append(0)
        rows[v + r] |= 1 << (event.column + c)
    lost = END if config.variant is Variant.STANDARD else EMPTY
    if config.overflow_policy is OverflowPolicy.PRE_CLEAR and len(rows) > config.k:
        return lost
    full = (1 << config.n) - 1
    # all full rows vanish at once; rows above drop rigidly
    rows = [bits for bits in rows if bits != full]
    while rows and rows[-1] == 0:
        rows.pop()
    if len(rows) > config.k:
        return lost
    return BoardState(tuple(rows))


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Reachable states of a game plus one transition table per generator.

    ``tables[g, i]`` is the index of ``states[i] . generators[g]``.
    """

    config: GameConfig
    states: tuple
    generators: tuple
    tables: np.ndarray

    def __post_init__(self):
        self.tables.setflags(write=False)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def generator_labels(self) -> tuple:
        return tuple(str(g) for g in self.generators)

    def index_of(self, board: BoardState) -> int:
        return self._index[board]

    def generator_index(self, event: Event) -> int:
        try:
            return self.generators.index(event)
        except ValueError:
            raise PlacementError(f"{event} is not a generator of this state space") from None

    @property
    def end_index(self):
        return self._index.get(END)

    def __eq__(self, other):
        if not isinstance(other, StateSpace):
            return NotImplemented
        return (self.config == other.config and self.states == other.states
                and self.generators == other.generators
                and np.array_equal(self.tables, other.tables))

    __hash__ = None


def enumerate_state_space(config: GameConfig, cap: int = DEFAULT_STATE_CAP) -> StateSpace:
    """Breadth-first closure of the empty board under every basic event."""
    gens = config.generators()
    index = {EMPTY: 0}
    states = [EMPTY]
    rows: list[list[int]] = []
    queue = deque([EMPTY])
    while queue:
        board = queue.popleft()
        row = []
        for ev in gens:
            nxt = apply_event(board, ev, config)
            j = index.get(nxt)
            if j is None:
                if len(states) >= cap:
                    raise EnumerationLimitError("state", cap, len(states))
                j = index[nxt] = len(states)
                states.append(nxt)
                queue.append(nxt)
            row.append(j)
        rows.append(row)
    tables = np.ascontiguousarray(np.array(rows, dtype=np.int32).T)
    return StateSpace(config, tuple(states), gens, tables)
