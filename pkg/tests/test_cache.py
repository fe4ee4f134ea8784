import json

import numpy as np
import pytest

from tetris_sgp.cache import (
    atomic_write,
    cached_state_space,
    config_key,
    default_cache_dir,
    dumps_state_space,
    load_semigroup,
    load_state_space,
    save_semigroup,
    save_state_space,
    state_space_path,
)
from tetris_sgp.engine import GameConfig, enumerate_state_space
from tetris_sgp.errors import ConfigError
from tetris_sgp.tsgrp import enumerate_semigroup

from helpers import space


def test_state_space_roundtrip(tmp_path):
    sp = space(3, 4)
    path = tmp_path / "s.json"
    save_state_space(sp, path)
    assert load_state_space(path) == sp
    assert dumps_state_space(load_state_space(path)) == path.read_text()


def test_serialization_is_deterministic():
    a = enumerate_state_space(GameConfig(3, 3, "periodic"))
    b = enumerate_state_space(GameConfig(3, 3, "periodic"))
    assert dumps_state_space(a) == dumps_state_space(b)


def test_cache_hit_and_miss(tmp_path):
    calls = []

    def build(config):
        calls.append(config)
        return enumerate_state_space(config)

    cfg = GameConfig(3, 3)
    first = cached_state_space(cfg, tmp_path, build=build)
    second = cached_state_space(cfg, tmp_path, build=build)
    assert first == second == enumerate_state_space(cfg)
    assert len(calls) == 1
    assert state_space_path(cfg, tmp_path).exists()


def test_keys_separate_conventions():
    keys = {config_key(GameConfig(3, 3)), config_key(GameConfig(3, 3, "periodic")),
            config_key(GameConfig(3, 3, overflow_policy="post-clear")),
            config_key(GameConfig(3, 4))}
    assert len(keys) == 4


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("TETRIS_SGP_CACHE", str(tmp_path))
    assert default_cache_dir() == tmp_path


def test_atomic_write_leaves_no_temp(tmp_path):
    atomic_write(tmp_path / "a" / "b.txt", "hello")
    assert (tmp_path / "a" / "b.txt").read_text() == "hello"
    assert [p.name for p in (tmp_path / "a").iterdir()] == ["b.txt"]


def test_wrong_schema_rejected(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"schema": "other", "version": 1}))
    with pytest.raises(ConfigError):
        load_state_space(path)


def test_semigroup_roundtrip(tmp_path):
    sp = space(3, 3)
    enum = enumerate_semigroup(sp)
    path = tmp_path / "sg.json"
    save_semigroup(enum, sp, path)
    back = load_semigroup(path, sp)
    assert np.array_equal(back.elements, enum.elements)
    assert back.witnesses == enum.witnesses
    with pytest.raises(ConfigError):
        load_semigroup(path, space(3, 3, "periodic"))
