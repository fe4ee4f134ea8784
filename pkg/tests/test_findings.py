"""Observed facts about the larger boards, each confirmed two independent ways."""

from tetris_sgp.engine import GameConfig
from tetris_sgp.pieces import DEFAULT_CATALOG
from tetris_sgp.tsgrp import element_is_aperiodic
from tetris_sgp.wordlang import evaluate_word, parse_word

from helpers import semigroup, space
from oracle import drop, play

SHAPES = {label: shape.cells for label, shape in DEFAULT_CATALOG.items()}
SWAP_WORD = "RUS_1 RS_0 V_2 RS_1 V_0 V_1 V_2 LS_0 RUS_1 V_0 V_1 RUS_1 LUS_0 V_2 LUS_0 LUS_0 LS_0"


def test_3x4_state_count_and_semigroup():
    assert space(3, 4).n_states == 153
    assert semigroup(3, 4).size == 259_726


def test_3x5_standard_has_a_period_two_element():
    config = GameConfig(3, 5)
    sp = space(3, 5)
    word = parse_word(SWAP_WORD, config)
    t = evaluate_word(word, sp)
    assert not element_is_aperiodic(t)

    # replay with the cell simulator: a board reached from the empty one flips between two boards
    tokens = [(ev.piece, ev.column) for ev in word.tokens]
    start = play([("LUS", 0), ("LS", 0)], SHAPES, 3, 5)
    assert start == {(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (0, 3)}
    boards = [start]
    for _ in range(4):
        cells = boards[-1]
        for label, col in tokens:
            cells = drop(cells, SHAPES[label], col, 3, 5)
        boards.append(cells)
    assert boards[2] == boards[0] and boards[3] == boards[1] and boards[1] != boards[0]
    i, j = (sp.index_of(type(sp.states[0]).from_cells(b)) for b in boards[:2])
    assert t(i) == j and t(j) == i
