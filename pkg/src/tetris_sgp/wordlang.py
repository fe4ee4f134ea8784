"""Event words such as ``"V_0 LS_1 V_2"``: parsing, evaluation, tile action.

Grammar::

    word  := token+
    token := LABEL '_' NAT

Whitespace between tokens is optional; labels are case-sensitive and
matched longest first, so ``"V_1LUS_0"`` reads as ``V_1 LUS_0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .engine import Event, GameConfig
from .errors import PlacementError, WordError
from .holonomy.classify import tiles
from .holonomy.skeleton import ImageSet
from .tsgrp import Transformation


@dataclass(frozen=True)
class EventWord:
    tokens: tuple
    source_text: str = ""

    def __len__(self):
        return len(self.tokens)

    def __add__(self, other: "EventWord") -> "EventWord":
        return EventWord(self.tokens + other.tokens, render(self.tokens + other.tokens))

    def __str__(self):
        return render(self)


def render(word) -> str:
    tokens = word.tokens if isinstance(word, EventWord) else word
    return " ".join(str(ev) for ev in tokens)


def _token_re(labels):
    alts = "|".join(re.escape(l) for l in sorted(labels, key=len, reverse=True))
    return re.compile(rf"({alts})_(\d+)")


def parse_word(text: str, config: GameConfig) -> EventWord:
    squeezed = "".join(text.split())
    if not squeezed:
        raise WordError("empty word")
    token = _token_re(config.catalog)
    tokens = []
    pos = 0
    while pos < len(squeezed):
        m = token.match(squeezed, pos)
        if m is None:
            bad = re.match(r"[A-Za-z]\w*?(?=_|$)", squeezed[pos:])
            if bad:
                raise WordError(f"unknown piece label {bad.group(0)!r} at offset {pos}")
            raise WordError(f"cannot parse {squeezed[pos:pos + 12]!r} at offset {pos}")
        label, col = m.group(1), int(m.group(2))
        if label not in config.pieces:
            raise WordError(f"piece {label!r} is not part of this game (pieces: {' '.join(config.pieces)})")
        width = config.catalog[label].width
        if col > config.n - width:
            raise WordError(f"column {col} is out of range for {label} on a board of width {config.n}")
        tokens.append(Event(label, col))
        pos = m.end()
    return EventWord(tuple(tokens), text)


def relabel(word: EventWord, mapping) -> EventWord:
    """Rename piece labels; labels missing from ``mapping`` are kept."""
    tokens = tuple(Event(mapping.get(ev.piece, ev.piece), ev.column) for ev in word.tokens)
    return EventWord(tokens, render(tokens))


def generator_indices(word: EventWord, space) -> list:
    try:
        return [space.generator_index(ev) for ev in word.tokens]
    except PlacementError as exc:
        raise WordError(str(exc)) from None


def evaluate_word(word: EventWord, space) -> Transformation:
    """Transformation of the whole state set; the empty word gives the identity."""
    f = np.arange(space.n_states)
    for g in generator_indices(word, space):
        f = space.tables[g][f]
    return Transformation(f)


def word_from_letters(letters, space) -> EventWord:
    tokens = tuple(space.generators[g] for g in letters)
    return EventWord(tokens, render(tokens))


@dataclass(frozen=True)
class TileAction:
    """Result of applying a word to a component's tiles.

    ``permutation`` is set when the tiles are permuted; otherwise
    ``offending_tile`` is the first tile whose image is not a fresh tile.
    """

    permutation: tuple | None
    offending_tile: int | None = None
    offending_image: ImageSet | None = None

    @property
    def is_permutation(self) -> bool:
        return self.permutation is not None


def induced_tile_action(word, component, space) -> TileAction:
    t = word if isinstance(word, Transformation) else evaluate_word(word, space)
    return action_on_sets(t, component.tile_sets)


def action_on_sets(t: Transformation, tile_sets) -> TileAction:
    """How ``t`` moves a family of sets: a permutation or the first failure."""
    position = {tile: i for i, tile in enumerate(tile_sets)}
    perm = []
    used = set()
    for i, tile in enumerate(tile_sets):
        image = ImageSet(tuple(t(x) for x in tile))
        j = position.get(image)
        if j is None or j in used:
            return TileAction(None, i, image)
        used.add(j)
        perm.append(j)
    return TileAction(tuple(perm))


def stabilized_members(word, rep, skel, classes, space, tile_mode="maximal") -> list:
    """``(node, TileAction)`` for every member of ``rep``'s class that ``word`` fixes setwise.

    Holonomy groups of one class are conjugate, so a word fixing some other
    member still tells which permutations occur.
    """
    t = word if isinstance(word, Transformation) else evaluate_word(word, space)
    letters = None if isinstance(word, Transformation) else generator_indices(word, space)
    out = []
    for b in classes.members(int(classes.class_of[rep])):
        b = int(b)
        if letters is not None:
            fixed = skel.image_of(b, letters) == b
        else:
            fixed = skel.find(t.map[skel.members(b)]) == b
        if fixed:
            tile_sets = [skel.node(x) for x in tiles(b, skel, tile_mode)]
            out.append((b, action_on_sets(t, tile_sets)))
    return out


def read_words(lines) -> list:
    """``(name, text)`` pairs from word-file lines; unnamed words get ``word<N>``."""
    out = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, text = line.partition(":")
        if not sep:
            name, text = f"word{len(out) + 1}", line
        out.append((name.strip(), text.strip()))
    return out


def load_words(path) -> list:
    return read_words(Path(path).read_text().splitlines())


def builtin_words() -> dict:
    text = resources.files("tetris_sgp").joinpath("data/words.txt").read_text()
    return dict(read_words(text.splitlines()))
