"""Acceptance criteria, one group of checks per criterion.

Each check records its outcome in RESULTS before asserting, and the
terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
from collections import defaultdict

import numpy as np
import pytest

import tetris_sgp.tsgrp as tsgrp
from tetris_sgp.engine import GameConfig, enumerate_state_space
from tetris_sgp.holonomy import (
    aperiodic_via_holonomy,
    build_skeleton,
    classify,
    decomposition_report,
    subduction_leq,
    tiles,
)
from tetris_sgp.holonomy.groups import closure, cycle_type, identify_group
from tetris_sgp.pieces import DEFAULT_CATALOG
from tetris_sgp.tsgrp import (
    Transformation,
    compose,
    enumerate_semigroup,
    evaluate_letters,
    flip_flop,
    semigroup_is_aperiodic_elementwise,
)
from tetris_sgp.wordlang import builtin_words, induced_tile_action, parse_word, stabilized_members

from helpers import REDUCED, classes, report, semigroup, skeleton, space
from oracle import END, drop

RESULTS = defaultdict(list)


def check(criterion, name, ok, detail=""):
    RESULTS[criterion].append((name, bool(ok)))
    assert ok, f"{name}: {detail}"


# -- 1. summary table for the standard game ------------------------------------

@pytest.mark.parametrize("n,k,states,size,height", [
    (3, 3, 35, 2056, 13),
    (3, 4, 135, 259_726, 32),
])
def test_c1_standard_table(n, k, states, size, height):
    sp = space(n, k)
    got = (sp.n_states, semigroup(n, k).size, classes(n, k).height_of_states)
    check(1, f"{n}x{k}", got == (states, size, height), f"expected {(states, size, height)}, got {got}")


def test_c1_3x5_state_count():
    check(1, "3x5 |X|", space(3, 5).n_states == 709, f"got {space(3, 5).n_states}")


# -- 2. aperiodicity of the standard game -----------------------------------------

@pytest.mark.parametrize("n,k", [(3, 3), (3, 4)])
def test_c2_both_methods(n, k):
    elem = semigroup_is_aperiodic_elementwise(semigroup(n, k))
    hol = aperiodic_via_holonomy(report(n, k))
    check(2, f"{n}x{k} element+holonomy", elem and hol, f"element={elem}, holonomy={hol}")


@pytest.mark.slow
def test_c2_3x5_holonomy():
    result = aperiodic_via_holonomy(space(3, 5))
    check(2, "3x5 holonomy", result is True, f"holonomy method returned {result}")


# -- 3. periodic game components -----------------------------------------------------

def test_c3_periodic_3x3():
    sp = space(3, 3, "periodic")
    got = (sp.n_states, semigroup(3, 3, "periodic").size, report(3, 3, "periodic").group_pairs())
    want = (34, 118_637, {(4, "C2xC2"), (3, "S3"), (2, "C2")})
    check(3, "3x3 periodic", got == want, f"got {got}")


def test_c3_reduced_3x4_without_semigroup(monkeypatch):
    def refuse(*a, **kw):
        raise AssertionError("semigroup enumeration was attempted")

    monkeypatch.setattr(tsgrp, "enumerate_semigroup", refuse)
    sp = enumerate_state_space(GameConfig(3, 4, "periodic", pieces=REDUCED))
    rep = decomposition_report(sp)
    want = {(4, "C2"), (5, "S5"), (4, "S4"), (3, "S3"), (2, "C2")}
    got = (sp.n_states, rep.group_pairs())
    check(3, "3x4 reduced periodic", got == (116, want), f"got {got}")


# -- 4. the degree-5 component --------------------------------------------------------

def s5_component():
    return next(c for c in report(3, 4, "periodic", REDUCED).nontrivial() if c.degree == 5)


def test_c4_order_and_element_orders():
    fp = s5_component().identified
    want = {1: 1, 2: 25, 3: 20, 4: 30, 5: 24, 6: 20}
    check(4, "order 120 and element orders", fp.order == 120 and fp.order_multiset() == want,
          f"order {fp.order}, orders {fp.order_multiset()}")


def test_c4_witnesses_generate():
    comp = s5_component()
    sp = space(3, 4, "periodic", REDUCED)
    by_type = {}
    for perm, word in comp.witnesses.items():
        act = induced_tile_action(evaluate_letters(sp.tables, word), comp, sp)
        assert act.permutation == perm
        by_type.setdefault(cycle_type(perm), perm)
    ok = (5,) in by_type and (3, 2) in by_type
    ok = ok and len(closure([by_type[(5,)], by_type[(3, 2)]])) == 120
    check(4, "5-cycle and (3,2) witnesses generate", ok, f"cycle types seen: {sorted(by_type)}")


def test_c4_shipped_words():
    # the shipped words fix a different member of the same class; groups in a class are conjugate
    comp = s5_component()
    sp = space(3, 4, "periodic", REDUCED)
    sk, cl = skeleton(3, 4, "periodic", REDUCED), classes(3, 4, "periodic", REDUCED)
    config = sp.config
    words = builtin_words()
    perms = {}
    for name in ("s5_five_cycle", "s5_three_two"):
        for node, act in stabilized_members(parse_word(words[name], config), comp.representative, sk, cl, sp):
            if act.is_permutation:
                perms[name] = (node, act.permutation)
    ok = (set(perms) == {"s5_five_cycle", "s5_three_two"}
          and perms["s5_five_cycle"][0] == perms["s5_three_two"][0]
          and cycle_type(perms["s5_five_cycle"][1]) == (5,)
          and cycle_type(perms["s5_three_two"][1]) == (3, 2)
          and identify_group(closure([p for _, p in perms.values()])).name == "S5")
    check(4, "shipped words", ok, f"got {perms}")


# -- 5. property suites ---------------------------------------------------------------

INSTANCES = [(3, 3), (3, 3, "periodic"), (3, 4, "periodic", REDUCED)]


def test_c5_subduction_preorder():
    rng = np.random.default_rng(5)
    ok = True
    for inst in INSTANCES:
        sk = skeleton(*inst)
        q = len(sk)
        for _ in range(500):
            a, b, c = (int(x) for x in rng.integers(0, q, 3))
            ok &= subduction_leq(a, a, sk)
            c = int(rng.integers(0, q))
            b = int(rng.choice(np.flatnonzero(sk.down_set(c))))
            a = int(rng.choice(np.flatnonzero(sk.down_set(b))))
            ok &= subduction_leq(a, c, sk)
    check(5, "subduction reflexive/transitive", ok)


def test_c5_tile_covering():
    ok = True
    for inst in INSTANCES + [(3, 4)]:
        sk, cl = skeleton(*inst), classes(*inst)
        for rep in cl.representative:
            rep = int(rep)
            if sk.sizes[rep] > 1:
                union = set().union(*(set(sk.members(t).tolist()) for t in tiles(rep, sk)))
                ok &= union == set(sk.members(rep).tolist())
    check(5, "tile covering", ok)


def test_c5_witness_soundness():
    ok = True
    for inst in [(3, 3), (3, 3, "periodic")]:
        sp, enum = space(*inst), semigroup(*inst)
        for i in range(enum.size):
            ok &= np.array_equal(evaluate_letters(sp.tables, enum.witness(i)).map, enum.elements[i])
    for inst in INSTANCES:
        sp = space(*inst)
        for comp in report(*inst).components:
            for perm, word in comp.witnesses.items():
                ok &= induced_tile_action(evaluate_letters(sp.tables, word), comp, sp).permutation == perm
    check(5, "witness soundness", ok)


def test_c5_associativity():
    rng = np.random.default_rng(9)
    enum = semigroup(3, 3, "periodic")
    ok = True
    for _ in range(1000):
        a, b, c = (Transformation(enum.elements[int(i)]) for i in rng.integers(0, enum.size, 3))
        ok &= compose(compose(a, b), c) == compose(a, compose(b, c))
    check(5, "associativity", ok)


def test_c5_method_agreement():
    pairs = []
    for inst in [(3, 3), (3, 4), (3, 3, "periodic")]:
        pairs.append((semigroup_is_aperiodic_elementwise(semigroup(*inst)), aperiodic_via_holonomy(report(*inst))))
    ff = flip_flop()
    pairs.append((semigroup_is_aperiodic_elementwise(enumerate_semigroup(ff)),
                  aperiodic_via_holonomy(decomposition_report(ff))))
    check(5, "element-wise vs holonomy agreement", all(a == b for a, b in pairs), f"got {pairs}")


def test_c5_flip_flop():
    ff = flip_flop()
    rep = decomposition_report(ff)
    ok = (enumerate_semigroup(ff).size == 3 and semigroup_is_aperiodic_elementwise(enumerate_semigroup(ff))
          and all(c.is_trivial for c in rep.components) and rep.height == 1)
    check(5, "flip-flop", ok)


# -- 6. brute-force oracle ------------------------------------------------------------

@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_c6_oracle(n, k):
    config = GameConfig(n, k, pieces=("V",))
    sp = enumerate_state_space(config)
    index = {(END if s.is_end else frozenset(s.filled)): i for i, s in enumerate(sp.states)}
    shape = DEFAULT_CATALOG["V"].cells
    ok = True
    seen_states, seen_moves = set(), set()
    for length in range(0, 9):
        for seq in itertools.product(range(sp.n_generators), repeat=length):
            cells, i = frozenset(), 0
            for g in seq:
                after = drop(cells, shape, sp.generators[g].column, n, k)
                j = int(sp.tables[g, i])
                ok &= index.get(after) == j
                seen_moves.add((i, g))
                cells, i = after, j
            seen_states.add(i)
    all_moves = {(i, g) for i in range(sp.n_states) for g in range(sp.n_generators)}
    ok &= seen_states == set(range(sp.n_states)) and seen_moves == all_moves
    check(6, f"{n}x{k} V only", ok)


if __name__ == "__main__":
    import pathlib

    here = pathlib.Path(__file__)
    sys.exit(pytest.main([str(here), "-q", "-p", "no:cacheprovider", "--rootdir", str(here.parent.parent)]))
