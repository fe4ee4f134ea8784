"""Piece shapes and the built-in catalogs.

A piece is a set of ``(column, row)`` offsets with row 0 at the bottom of
its bounding box.  Orientation is part of the shape: the four rotations of
the L-triomino are four different pieces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import ConfigError

CATALOG_VERSION = 1


@dataclass(frozen=True)
class PieceShape:
    label: str
    cells: frozenset

    def __post_init__(self):
        cells = frozenset((int(c), int(r)) for c, r in self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ConfigError(f"piece {self.label!r} has no cells")
        if min(c for c, _ in cells) != 0 or min(r for _, r in cells) != 0:
            raise ConfigError(f"piece {self.label!r} offsets are not normalized")
        if not _connected(cells):
            raise ConfigError(f"piece {self.label!r} is not edge-connected")

    @property
    def width(self) -> int:
        return len({c for c, _ in self.cells})

    @property
    def height(self) -> int:
        return len({r for _, r in self.cells})

    def sorted_cells(self):
        return sorted(self.cells)

    def ascii(self) -> str:
        rows = []
        for r in reversed(range(self.height)):
            rows.append("".join("#" if (c, r) in self.cells else "." for c in range(self.width)))
        return "\n".join(rows)


def _connected(cells) -> bool:
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        c, r = stack.pop()
        for nb in ((c + 1, r), (c - 1, r), (c, r + 1), (c, r - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def _catalog(shapes: Mapping[str, Iterable]) -> dict[str, PieceShape]:
    return {label: PieceShape(label, frozenset(cells)) for label, cells in shapes.items()}


# LS/RS rest on two bottom cells with the upright on the left/right;
# LUS/RUS are the upside-down forms standing on a single cell.
TRIOMINOES = _catalog({
    "LS": [(0, 0), (1, 0), (0, 1)],
    "RS": [(0, 0), (1, 0), (1, 1)],
    "LUS": [(0, 0), (0, 1), (1, 1)],
    "RUS": [(1, 0), (0, 1), (1, 1)],
    "V": [(0, 0), (0, 1), (0, 2)],
    "H": [(0, 0), (1, 0), (2, 0)],
})

# One fixed orientation of each one-sided tetromino.
TETROMINOES = _catalog({
    "I": [(0, 0), (1, 0), (2, 0), (3, 0)],
    "O": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "T": [(0, 0), (1, 0), (2, 0), (1, 1)],
    "S": [(0, 0), (1, 0), (1, 1), (2, 1)],
    "Z": [(1, 0), (2, 0), (0, 1), (1, 1)],
    "J": [(0, 0), (1, 0), (2, 0), (0, 1)],
    "L": [(0, 0), (1, 0), (2, 0), (2, 1)],
})

DEFAULT_CATALOG = MappingProxyType({**TRIOMINOES, **TETROMINOES})

# Tri-tris without the horizontal line, which acts as the identity at n = 3.
TRITRIS_PIECES = ("LS", "RS", "LUS", "RUS", "V")
REDUCED_PIECES = ("RS", "LUS", "RUS", "V")


def catalog_to_dict(catalog: Mapping[str, PieceShape]) -> dict:
    return {
        "version": CATALOG_VERSION,
        "pieces": [
            {"label": p.label, "cells": [list(c) for c in p.sorted_cells()]}
            for p in catalog.values()
        ],
    }


def catalog_from_dict(data: dict) -> dict[str, PieceShape]:
    if data.get("version") != CATALOG_VERSION:
        raise ConfigError(f"unsupported piece catalog version {data.get('version')!r}")
    out = {}
    for entry in data["pieces"]:
        label = entry["label"]
        if label in out:
            raise ConfigError(f"duplicate piece label {label!r}")
        out[label] = PieceShape(label, frozenset(tuple(c) for c in entry["cells"]))
    return out


def load_catalog(path) -> dict[str, PieceShape]:
    return catalog_from_dict(json.loads(Path(path).read_text()))


def save_catalog(catalog: Mapping[str, PieceShape], path) -> None:
    Path(path).write_text(json.dumps(catalog_to_dict(catalog), indent=1) + "\n")
