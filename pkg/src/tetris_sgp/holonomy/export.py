"""Serialized forms of a decomposition: JSON report, CSV rows and DOT."""

from __future__ import annotations

import csv
import io

import numpy as np

from .classify import EquivClassification
from .decomposition import DecompositionReport, HolonomyComponent
from .groups import cycle_type
from .skeleton import Skeleton

REPORT_SCHEMA = "tetris-sgp/holonomy-report"
REPORT_VERSION = 1


def render_word(word, labels) -> str:
    if not labels:
        return " ".join(str(g) for g in word)
    return " ".join(labels[g] for g in word)


def component_to_dict(comp: HolonomyComponent, labels=()) -> dict:
    perms = sorted(comp.group_perms)
    return {
        "representative": list(comp.representative_set.members),
        "node": comp.representative,
        "height": comp.height,
        "degree": comp.degree,
        "tiles": [list(t.members) for t in comp.tile_sets],
        "group": {
            "name": comp.identified.name,
            "order": comp.identified.order,
            "abelian": comp.identified.abelian,
            "element_orders": {str(k): v for k, v in comp.identified.element_orders},
            "lower_bound": comp.lower_bound,
        },
        "permutations": [
            {"perm": list(p), "cycle_type": list(cycle_type(p)),
             "word": render_word(comp.witnesses[p], labels)}
            for p in perms
        ],
    }


def report_to_dict(report: DecompositionReport, include_trivial: bool = True) -> dict:
    labels = report.generator_labels
    comps = report.components if include_trivial else report.nontrivial()
    levels = []
    for h, members in sorted(report.levels().items(), key=lambda kv: (kv[0] is None, kv[0] or 0)):
        chosen = [c for c in members if include_trivial or not c.is_trivial]
        levels.append({
            "height": h,
            "components": [f"({c.degree},{c.identified.name})" for c in chosen],
        })
    return {
        "schema": REPORT_SCHEMA,
        "version": REPORT_VERSION,
        "config": report.config,
        "n_states": report.n_states,
        "n_generators": report.n_generators,
        "semigroup_size": report.semigroup_size,
        "skeleton_size": report.skeleton_size,
        "n_classes": report.n_classes,
        "height": report.height,
        "height_convention": report.height_convention,
        "tile_mode": report.tile_mode,
        "sparse": report.sparse,
        "partial": report.partial,
        "aperiodic": None if report.partial else not report.nontrivial(),
        "groups": [{"degree": d, "name": n} for d, n in report.table_pairs()],
        "levels": levels,
        "components": [component_to_dict(c, labels) for c in comps],
        "failures": [{"node": r, "message": m} for r, m in report.failures],
    }


def format_pairs(pairs) -> str:
    return ", ".join(f"({d},{n})" for d, n in pairs)


def components_csv(report: DecompositionReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["height", "node", "size", "degree", "group", "order", "lower_bound"])
    for c in report.components:
        writer.writerow([
            "-" if c.height is None else c.height, c.representative, len(c.representative_set),
            c.degree, c.identified.name, c.order, int(c.lower_bound),
        ])
    return buf.getvalue()


def condensation_dot(skel: Skeleton, classes: EquivClassification,
                     report: DecompositionReport | None = None) -> str:
    """DOT graph of the subduction classes, higher sets on top.

    Arcs come from single generator or inclusion steps between classes;
    an arc also implied by a two-step path is left out.
    """
    names = {}
    if report is not None:
        for c in report.components:
            if not c.is_trivial:
                names[int(classes.class_of[c.representative])] = f"({c.degree},{c.identified.name})"
    nc = classes.n_classes
    below = [set() for _ in range(nc)]
    covers = skel.covers()
    for a in range(len(skel)):
        ca = int(classes.class_of[a])
        for b in list(skel.edges[a]) + list(covers[a]):
            cb = int(classes.class_of[b])
            if cb != ca:
                below[ca].add(cb)
    lines = ["digraph subduction {", "  rankdir=TB;", "  node [shape=box, fontsize=10];"]
    for c in range(nc):
        rep = int(classes.representative[c])
        size = int(skel.sizes[rep])
        h = classes.heights[rep] if classes.heights is not None else "-"
        label = f"h={h} |A|={size} n={np.count_nonzero(classes.class_of == c)}"
        if c in names:
            label += f"\\n{names[c]}"
        style = ', style=filled, fillcolor="#f4c095"' if c in names else ""
        lines.append(f'  c{c} [label="{label}"{style}];')
    for c in range(nc):
        direct = below[c]
        # drop arcs implied through another direct successor
        reach_two = set()
        for b in direct:
            reach_two |= below[b]
        for b in sorted(direct - reach_two):
            lines.append(f"  c{c} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
