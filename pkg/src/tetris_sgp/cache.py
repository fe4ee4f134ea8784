"""On-disk JSON caches for state spaces and semigroup enumerations.

Files are keyed by a content hash of the game configuration and the code
version, and written atomically (temporary file, then rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .engine import BoardState, Event, GameConfig, StateSpace
from .errors import ConfigError
from .pieces import PieceShape
from .tsgrp import SemigroupEnumeration

STATE_SPACE_SCHEMA = "tetris-sgp/state-space"
SEMIGROUP_SCHEMA = "tetris-sgp/semigroup"
CACHE_VERSION = 1
CACHE_ENV = "TETRIS_SGP_CACHE"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tetris_sgp"


def config_key(config: GameConfig) -> str:
    return content_hash({"config": config.describe(), "code_version": __version__})[:20]


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def config_from_dict(d: dict) -> GameConfig:
    catalog = {p["label"]: PieceShape(p["label"], frozenset(tuple(c) for c in p["cells"]))
               for p in d["pieces"]}
    return GameConfig(d["n"], d["k"], d["variant"], d["overflow_policy"],
                      tuple(p["label"] for p in d["pieces"]), catalog)


def state_space_to_dict(space: StateSpace) -> dict:
    return {
        "schema": STATE_SPACE_SCHEMA,
        "version": CACHE_VERSION,
        "code_version": __version__,
        "config": space.config.describe(),
        "states": [
            {"end": s.is_end, "cells": [list(c) for c in sorted(s.filled)]} for s in space.states
        ],
        "generators": [str(g) for g in space.generators],
        "tables": space.tables.tolist(),
    }


def state_space_from_dict(d: dict) -> StateSpace:
    if d.get("schema") != STATE_SPACE_SCHEMA or d.get("version") != CACHE_VERSION:
        raise ConfigError("not a state-space cache file of a supported version")
    config = config_from_dict(d["config"])
    states = tuple(
        BoardState((), True) if s["end"] else BoardState.from_cells(s["cells"]) for s in d["states"]
    )
    gens = []
    for text in d["generators"]:
        label, _, col = text.rpartition("_")
        gens.append(Event(label, int(col)))
    tables = np.array(d["tables"], dtype=np.int32).reshape(len(gens), len(states))
    return StateSpace(config, states, tuple(gens), tables)


def dumps_state_space(space: StateSpace) -> str:
    return json.dumps(state_space_to_dict(space), sort_keys=True, separators=(",", ":")) + "\n"


def save_state_space(space: StateSpace, path) -> None:
    atomic_write(path, dumps_state_space(space))


def load_state_space(path) -> StateSpace:
    return state_space_from_dict(json.loads(Path(path).read_text()))


def state_space_path(config: GameConfig, cache_dir=None) -> Path:
    return Path(cache_dir or default_cache_dir()) / f"space-{config_key(config)}.json"


def cached_state_space(config: GameConfig, cache_dir=None, build=None) -> StateSpace:
    """Load the state space for ``config`` from the cache, building it on a miss."""
    from .engine import enumerate_state_space

    path = state_space_path(config, cache_dir)
    if path.exists():
        space = load_state_space(path)
        if space.config.describe() == config.describe():
            return space
    space = (build or enumerate_state_space)(config)
    save_state_space(space, path)
    return space


def semigroup_to_dict(enum: SemigroupEnumeration, space: StateSpace) -> dict:
    return {
        "schema": SEMIGROUP_SCHEMA,
        "version": CACHE_VERSION,
        "code_version": __version__,
        "state_space_hash": content_hash(state_space_to_dict(space)),
        "size": enum.size,
        "elements": enum.elements.tolist(),
        "witnesses": [list(w) for w in enum.witnesses],
    }


def save_semigroup(enum: SemigroupEnumeration, space: StateSpace, path) -> None:
    atomic_write(path, json.dumps(semigroup_to_dict(enum, space), separators=(",", ":")) + "\n")


def load_semigroup(path, space: StateSpace) -> SemigroupEnumeration:
    d = json.loads(Path(path).read_text())
    if d.get("schema") != SEMIGROUP_SCHEMA or d.get("version") != CACHE_VERSION:
        raise ConfigError("not a semigroup cache file of a supported version")
    if d["state_space_hash"] != content_hash(state_space_to_dict(space)):
        raise ConfigError("semigroup cache belongs to a different state space")
    elements = np.array(d["elements"], dtype=np.uint8 if space.n_states <= 256 else np.uint16)
    # rebuild parent pointers from the witnesses: a witness minus its last letter
    index = {tuple(w): i for i, w in enumerate(d["witnesses"])}
    parent = np.array([index.get(tuple(w[:-1]), -1) for w in d["witnesses"]], dtype=np.int64)
    letter = np.array([w[-1] for w in d["witnesses"]], dtype=np.int32)
    elements.setflags(write=False)
    return SemigroupEnumeration(elements, parent, letter, space.n_generators)
