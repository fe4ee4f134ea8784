from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetris_sgp.engine import EMPTY, GameConfig, enumerate_state_space
from tetris_sgp.errors import WordError
from tetris_sgp.holonomy import build_skeleton, classify, decomposition_report
from tetris_sgp.holonomy.groups import closure, cycle_type, identify_group
from tetris_sgp.pieces import DEFAULT_CATALOG, PieceShape
from tetris_sgp.tsgrp import Transformation, compose
from tetris_sgp.wordlang import (
    EventWord,
    builtin_words,
    evaluate_word,
    induced_tile_action,
    parse_word,
    read_words,
    render,
    stabilized_members,
    word_from_letters,
)

from helpers import REDUCED, classes, report, skeleton, space

CFG = GameConfig(3, 3)
PER = GameConfig(3, 3, "periodic")
RED = GameConfig(3, 4, "periodic", pieces=REDUCED)


def test_parse_simple():
    w = parse_word("V_0 V_1 V_2", CFG)
    assert len(w) == 3
    assert [str(t) for t in w.tokens] == ["V_0", "V_1", "V_2"]


def test_parse_word_a():
    w = parse_word("V_0 LS_1 V_2 V_0 RS_1 V_1 V_2 V_0 RS_1 V_1", CFG)
    assert len(w) == 10


def test_parse_without_spaces_and_longest_label():
    w = parse_word("LUS_0RUS_1LS_0V_2", CFG)
    assert [t.piece for t in w.tokens] == ["LUS", "RUS", "LS", "V"]


@pytest.mark.parametrize("text,msg", [
    ("Q_9", "unknown piece label"),
    ("", "empty"),
    ("   ", "empty"),
    ("V_3", "out of range"),
    ("LS_2", "out of range"),
    ("V_0 ??", "cannot parse"),
])
def test_parse_errors(text, msg):
    with pytest.raises(WordError, match=msg):
        parse_word(text, CFG)


def test_piece_not_in_game():
    with pytest.raises(WordError, match="not part of this game"):
        parse_word("LS_0", RED)


def test_render_roundtrip():
    text = "V_0   LS_1\nV_2"
    w = parse_word(text, CFG)
    assert render(w) == "V_0 LS_1 V_2"
    assert parse_word(render(w), CFG).tokens == w.tokens


tokens = st.lists(st.sampled_from([str(e) for e in CFG.generators()]), min_size=1, max_size=12)


@settings(max_examples=100, deadline=None)
@given(tokens, tokens)
def test_concatenation_is_composition(a, b):
    sp = space(3, 3)
    wa, wb = parse_word(" ".join(a), CFG), parse_word(" ".join(b), CFG)
    assert evaluate_word(wa + wb, sp) == compose(evaluate_word(wa, sp), evaluate_word(wb, sp))
    assert parse_word(render(wa), CFG).tokens == wa.tokens


def test_evaluate_basics():
    sp = space(3, 3)
    assert evaluate_word(EventWord(()), sp) == Transformation.identity(sp.n_states)
    t = evaluate_word(parse_word("V_0 V_1 V_2", CFG), sp)
    assert sp.states[t(0)] == EMPTY


def test_word_from_letters():
    sp = space(3, 3)
    assert str(word_from_letters((0, 10), sp)) == "LS_0 V_2"


def test_read_words():
    lines = ["# comment", "", "a: V_0 V_1", "V_2  # trailing"]
    assert read_words(lines) == [("a", "V_0 V_1"), ("word2", "V_2")]


def test_builtin_fixture_parses():
    words = builtin_words()
    assert set(words) >= {"c2xc2_a", "c2xc2_b", "c2xc2_c", "s5_five_cycle", "s5_three_two"}
    for name in ("c2xc2_a", "c2xc2_b", "c2xc2_c"):
        parse_word(words[name], PER)
    assert len(parse_word(words["s5_five_cycle"], RED)) == 85
    assert len(parse_word(words["s5_three_two"], RED)) == 56


def test_identity_word_on_every_component():
    sp, rep = space(3, 3, "periodic"), report(3, 3, "periodic")
    for comp in rep.components:
        act = induced_tile_action(Transformation.identity(sp.n_states), comp, sp)
        assert act.permutation == tuple(range(comp.degree))


def test_non_permutation_is_reported():
    sp, rep = space(3, 3, "periodic"), report(3, 3, "periodic")
    comp = next(c for c in rep.nontrivial() if c.degree == 4)
    act = induced_tile_action(parse_word("V_0", PER), comp, sp)
    assert not act.is_permutation
    assert act.offending_tile is not None and act.offending_image is not None


def test_c2xc2_words():
    sp, rep = space(3, 3, "periodic"), report(3, 3, "periodic")
    comp = next(c for c in rep.nontrivial() if c.identified.name == "C2xC2")
    words = builtin_words()
    perms = []
    for name in ("c2xc2_a", "c2xc2_b", "c2xc2_c"):
        act = induced_tile_action(parse_word(words[name], PER), comp, sp)
        assert act.is_permutation
        assert cycle_type(act.permutation) == (2, 2)
        perms.append(act.permutation)
    assert identify_group(closure(perms)).name == "C2xC2"


def s5_actions(words, sp=None, sk=None, cl=None, rep=None):
    sp = sp or space(3, 4, "periodic", REDUCED)
    sk = sk or skeleton(3, 4, "periodic", REDUCED)
    cl = cl or classes(3, 4, "periodic", REDUCED)
    rep = rep or report(3, 4, "periodic", REDUCED)
    comps = [c for c in rep.nontrivial() if c.degree == 5]
    if not comps:
        return None
    out = []
    for w in words:
        acts = stabilized_members(w, comps[0].representative, sk, cl, sp)
        out.append({cycle_type(a.permutation) for _, a in acts if a.is_permutation})
    return out


def test_s5_words_cycle_types():
    words = builtin_words()
    five = parse_word(words["s5_five_cycle"], RED)
    three_two = parse_word(words["s5_three_two"], RED)
    assert s5_actions([five, three_two]) == [{(5,)}, {(3, 2)}]


@pytest.mark.slow
def test_label_convention_is_the_unique_match():
    # hand the four L shapes to the four labels in every order and replay the shipped words
    words = builtin_words()
    labels = ("LS", "RS", "LUS", "RUS")
    matches = []
    for perm in permutations(labels):
        catalog = dict(DEFAULT_CATALOG)
        for label, source in zip(labels, perm):
            catalog[label] = PieceShape(label, DEFAULT_CATALOG[source].cells)
        config = GameConfig(3, 4, "periodic", pieces=REDUCED, catalog=catalog)
        sp = enumerate_state_space(config)
        sk = build_skeleton(sp)
        cl = classify(sk)
        rep = decomposition_report(sp, skeleton=sk, classes=cl)
        found = s5_actions([parse_word(words["s5_five_cycle"], config),
                            parse_word(words["s5_three_two"], config)], sp, sk, cl, rep)
        if found == [{(5,)}, {(3, 2)}]:
            matches.append(perm)
    assert matches == [labels]


def test_relabel():
    from tetris_sgp.wordlang import relabel

    w = relabel(parse_word("LS_0 V_1 RS_1", CFG), {"LS": "RS", "RS": "LS"})
    assert str(w) == "RS_0 V_1 LS_1"
