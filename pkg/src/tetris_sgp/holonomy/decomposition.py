"""Holonomy groups of the class representatives and the per-height report."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..errors import BudgetExceededError, TetrisSgpError
from .classify import EquivClassification, TileMode, classify, tiles
from .groups import GroupFingerprint, identify_group, identity_perm
from .skeleton import ImageSet, Skeleton, build_skeleton

DEFAULT_SEARCH_BUDGET = 10_000_000
HEIGHT_CONVENTION = "strict steps, singletons at 0"


@dataclass(frozen=True, eq=False)
class HolonomyComponent:
    """Permutation group induced on the tiles of one class representative.

    ``witnesses`` maps each permutation to a word (generator indices) that
    fixes the representative and induces it.  ``lower_bound`` marks a group
    cut short by the search budget.
    """

    representative: int
    representative_set: ImageSet
    tiles: tuple
    tile_sets: tuple
    group_perms: frozenset
    witnesses: dict = field(repr=False)
    identified: GroupFingerprint = None
    height: int | None = None
    lower_bound: bool = False
    search_states: int = 0

    @property
    def degree(self) -> int:
        return len(self.tiles)

    @property
    def order(self) -> int:
        return len(self.group_perms)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def label(self) -> str:
        return f"({self.degree},{self.identified.name})"


def holonomy_group(rep: int, skel: Skeleton, classes: EquivClassification,
                   tile_mode=TileMode.MAXIMAL, budget: int = DEFAULT_SEARCH_BUDGET,
                   tile_list=None) -> HolonomyComponent:
    """Permutations of the tiles of ``rep`` induced by words fixing ``rep``.

    Breadth-first search over tuples of current tile images, starting from
    the tiles themselves.  A branch is dropped as soon as the image of
    ``rep`` leaves its subduction class: such a word can never come back.
    Whenever the image returns to ``rep`` with the tiles permuted, that
    permutation is recorded together with the word that produced it.
    """
    if skel.sizes[rep] < 2:
        raise TetrisSgpError("holonomy groups are defined for sets with at least two elements")
    tile_nodes = tuple(tile_list if tile_list is not None else tiles(rep, skel, tile_mode))
    position = {t: i for i, t in enumerate(tile_nodes)}
    target = sorted(tile_nodes)
    cls = classes.class_of[rep]
    edges = skel.edges
    n_gen = skel.n_generators
    ident = identity_perm(len(tile_nodes))

    start = tile_nodes
    # state -> (parent state, generator, image of rep)
    seen = {start: (None, -1, rep)}
    found = {ident: ()}
    queue = deque([start])

    def word_to(state):
        word = []
        while True:
            parent, g, _ = seen[state]
            if parent is None:
                return tuple(reversed(word))
            word.append(g)
            state = parent

    exhausted = False
    while queue:
        state = queue.popleft()
        rep_img = seen[state][2]
        cols = np.asarray(state, dtype=np.int64)
        for g in range(n_gen):
            nxt_rep = int(edges[rep_img, g])
            if classes.class_of[nxt_rep] != cls:
                continue
            nxt = tuple(edges[cols, g].tolist()) if cols.size else ()
            if nxt in seen:
                continue
            seen[nxt] = (state, g, nxt_rep)
            if nxt_rep == rep and sorted(nxt) == target:
                perm = tuple(position[t] for t in nxt)
                found.setdefault(perm, word_to(nxt))
            if len(seen) > budget:
                exhausted = True
                break
            queue.append(nxt)
        if exhausted:
            break

    comp = HolonomyComponent(
        representative=rep,
        representative_set=skel.node(rep),
        tiles=tile_nodes,
        tile_sets=tuple(skel.node(t) for t in tile_nodes),
        group_perms=frozenset(found),
        witnesses=found,
        identified=identify_group(found, check=not exhausted),
        height=None if classes.heights is None else int(classes.heights[rep]),
        lower_bound=exhausted,
        search_states=len(seen),
    )
    if exhausted:
        raise BudgetExceededError(
            f"holonomy search at node {rep} exceeded {budget} states; group order >= {comp.order}",
            partial=comp)
    return comp


def point_group_is_trivial(rep: int, skel: Skeleton, classes: EquivClassification) -> bool:
    """True iff every word fixing ``rep`` fixes each of its points.

    Follows the class of ``rep`` recording, for each set reached, the
    bijection from ``rep`` induced by the first word reaching it.  Two
    different bijections onto the same set exist exactly when some word
    stabilizing ``rep`` permutes it non-trivially.  A trivial point group
    forces a trivial holonomy group.
    """
    cls = classes.class_of[rep]
    tables = skel.tables
    phi = {rep: skel.members(rep)}
    queue = deque([rep])
    while queue:
        b = queue.popleft()
        f = phi[b]
        for g in range(skel.n_generators):
            c = int(skel.edges[b, g])
            if classes.class_of[c] != cls:
                continue
            fg = tables[g][f]
            if c in phi:
                if not np.array_equal(phi[c], fg):
                    return False
            else:
                phi[c] = fg
                queue.append(c)
    return True


def _trivial_component(rep, skel, classes, tile_list):
    ident = identity_perm(len(tile_list))
    return HolonomyComponent(
        representative=rep,
        representative_set=skel.node(rep),
        tiles=tuple(tile_list),
        tile_sets=tuple(skel.node(t) for t in tile_list),
        group_perms=frozenset([ident]),
        witnesses={ident: ()},
        identified=identify_group([ident]),
        height=None if classes.heights is None else int(classes.heights[rep]),
    )


@dataclass(eq=False)
class DecompositionReport:
    n_states: int
    n_generators: int
    skeleton_size: int
    n_classes: int
    height: int | None
    components: list
    tile_mode: str = TileMode.MAXIMAL.value
    height_convention: str = HEIGHT_CONVENTION
    semigroup_size: int | None = None
    config: dict | None = None
    failures: list = field(default_factory=list)
    sparse: bool = False
    generator_labels: tuple = ()

    @property
    def partial(self) -> bool:
        return bool(self.failures) or any(c.lower_bound for c in self.components)

    def levels(self) -> dict:
        if self.height is None:
            return {None: list(self.components)}
        out = {i: [] for i in range(1, self.height + 1)}
        for c in self.components:
            out.setdefault(c.height, []).append(c)
        return out

    def nontrivial(self) -> list:
        return [c for c in self.components if not c.is_trivial]

    def group_pairs(self) -> set:
        """Distinct (degree, group name) pairs of the non-trivial components."""
        return {(c.degree, c.identified.name) for c in self.nontrivial()}

    def table_pairs(self) -> list:
        """Non-trivial pairs in report order: highest level first, larger degree first."""
        seen = []
        for c in sorted(self.nontrivial(), key=lambda c: (-(c.height or 0), -c.degree, c.representative)):
            pair = (c.degree, c.identified.name)
            if pair not in seen:
                seen.append(pair)
        return seen


def decomposition_report(space, tile_mode=TileMode.MAXIMAL, budget: int = DEFAULT_SEARCH_BUDGET,
                         semigroup_size=None, skeleton: Skeleton | None = None,
                         classes: EquivClassification | None = None,
                         shortcut: bool = True) -> DecompositionReport:
    """Holonomy components of every class representative with two or more states.

    With ``shortcut`` on, representatives whose point stabilizer is trivial
    get the trivial group without running the tile search.  Budget
    failures are recorded per component; the rest of the report is kept.

    Skeletons too large for the inclusion covers get a sparse report: no
    heights, and only the components that can be non-trivial are listed.
    """
    skel = skeleton if skeleton is not None else build_skeleton(space)
    sparse = len(skel) > skel.cover_limit
    if classes is None:
        classes = classify(skel, with_heights=not sparse)
    sparse = sparse or classes.heights is None
    tile_mode = TileMode(tile_mode)
    if sparse and tile_mode is not TileMode.MAXIMAL:
        raise TetrisSgpError("strict tiles need the full subduction order")

    if sparse:
        reps = _candidate_reps(skel, classes)
    else:
        reps = [int(r) for r in classes.representative if skel.sizes[r] > 1]
        reps.sort(key=lambda r: (classes.heights[r], r))
    components = []
    failures = []
    for rep in reps:
        trivial = shortcut and point_group_is_trivial(rep, skel, classes)
        if trivial and sparse:
            continue
        tile_list = tiles(rep, skel, tile_mode)
        if trivial:
            components.append(_trivial_component(rep, skel, classes, tile_list))
            continue
        try:
            components.append(holonomy_group(rep, skel, classes, tile_mode, budget, tile_list))
        except BudgetExceededError as exc:
            components.append(exc.partial)
            failures.append((rep, str(exc)))
    if sparse:
        components = [c for c in components if not c.is_trivial or c.lower_bound]
    config = space.config.describe() if getattr(space, "config", None) is not None else None
    return DecompositionReport(
        n_states=skel.n_states,
        n_generators=skel.n_generators,
        skeleton_size=len(skel),
        n_classes=classes.n_classes,
        height=None if sparse else classes.height_of_states,
        components=components,
        tile_mode=tile_mode.value,
        semigroup_size=semigroup_size,
        config=config,
        failures=failures,
        sparse=sparse,
        generator_labels=tuple(getattr(space, "generator_labels", ())),
    )


def aperiodic_via_holonomy(source, budget: int = DEFAULT_SEARCH_BUDGET) -> bool:
    """True iff every holonomy group is trivial.

    ``source`` is either a finished DecompositionReport or anything with
    generator tables.  In the second case heights are not needed, so the
    inclusion covers are skipped and tiles are only computed for the few
    representatives whose point stabilizer is non-trivial.
    """
    if isinstance(source, DecompositionReport):
        if source.partial:
            raise TetrisSgpError("decomposition report is partial; aperiodicity is undecided")
        return all(c.is_trivial for c in source.components)

    skel = build_skeleton(source)
    classes = classify(skel, with_heights=False)
    for rep in _candidate_reps(skel, classes):
        if point_group_is_trivial(rep, skel, classes):
            continue
        comp = holonomy_group(rep, skel, classes, budget=budget, tile_list=tiles(rep, skel))
        if not comp.is_trivial:
            return False
    return True


def _candidate_reps(skel: Skeleton, classes: EquivClassification):
    """Representatives that might carry a non-trivial point group.

    A class with one member only has self-loop words; a self-loop that
    fixes every point of the set cannot permute anything.
    """
    class_size = np.bincount(classes.class_of, minlength=classes.n_classes)
    reps = classes.representative
    big = reps[(skel.sizes[reps] > 1)]
    lone = big[class_size[classes.class_of[big]] == 1]
    multi = big[class_size[classes.class_of[big]] > 1]

    n = skel.n_states
    # fixed-point masks of each generator, packed like the skeleton rows
    fixed = np.packbits(skel.tables == np.arange(n), axis=1, bitorder="little")
    suspicious = set()
    for g in range(skel.n_generators):
        loops = lone[skel.edges[lone, g] == lone]
        if loops.size:
            moved = np.bitwise_and(skel.bits[loops], np.bitwise_not(fixed[g])).any(axis=1)
            suspicious.update(int(r) for r in loops[moved])
    return sorted(suspicious) + [int(r) for r in multi]
