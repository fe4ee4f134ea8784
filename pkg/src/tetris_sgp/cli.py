"""Command line front end: ``tetris-sgp <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 cap or budget exceeded,
4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cache import cached_state_space, default_cache_dir
from .engine import DEFAULT_STATE_CAP, GameConfig, OverflowPolicy, Variant, enumerate_state_space
from .errors import ConfigError, EnumerationLimitError, InvariantError, TetrisSgpError
from .holonomy import (
    TileMode,
    aperiodic_via_holonomy,
    build_skeleton,
    classify,
    decomposition_report,
)
from .holonomy.decomposition import DEFAULT_SEARCH_BUDGET
from .holonomy.export import components_csv, condensation_dot, format_pairs, report_to_dict
from .holonomy.groups import cycle_type
from .holonomy.skeleton import DEFAULT_COVER_LIMIT, DEFAULT_NODE_CAP
from .pieces import REDUCED_PIECES, TRITRIS_PIECES, load_catalog, DEFAULT_CATALOG
from .tsgrp import (
    DEFAULT_ELEMENT_CAP,
    enumerate_semigroup,
    semigroup_is_aperiodic_elementwise,
)
from .wordlang import builtin_words, evaluate_word, load_words, parse_word, stabilized_members

log = logging.getLogger("tetris_sgp")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


@dataclass
class RunConfig:
    n: int = 3
    k: int = 3
    variant: str = Variant.STANDARD.value
    pieces: tuple = TRITRIS_PIECES
    overflow: str = OverflowPolicy.PRE_CLEAR.value
    state_cap: int = DEFAULT_STATE_CAP
    element_cap: int = DEFAULT_ELEMENT_CAP
    search_budget: int = DEFAULT_SEARCH_BUDGET
    skeleton_cap: int = DEFAULT_NODE_CAP
    fmt: str = "text"
    cache_dir: str | None = None
    use_cache: bool = True
    tile_mode: str = TileMode.MAXIMAL.value
    catalog: dict = field(default_factory=lambda: dict(DEFAULT_CATALOG))

    def __post_init__(self):
        for name in ("state_cap", "element_cap", "search_budget", "skeleton_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")

    def game(self) -> GameConfig:
        return GameConfig(self.n, self.k, self.variant, self.overflow, tuple(self.pieces), self.catalog)

    def space(self):
        config = self.game()
        build = lambda c: enumerate_state_space(c, cap=self.state_cap)  # noqa: E731
        if not self.use_cache:
            return build(config)
        return cached_state_space(config, self.cache_dir, build=build)


def parse_board(text: str):
    try:
        n, k = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"board must look like 3x4, got {text!r}") from None
    return n, k


def parse_pieces(text: str) -> tuple:
    if text == "tritris":
        return TRITRIS_PIECES
    if text == "reduced":
        return REDUCED_PIECES
    return tuple(p.strip() for p in text.split(",") if p.strip())


def run_config(args) -> RunConfig:
    n, k = args.board
    catalog = dict(DEFAULT_CATALOG)
    if getattr(args, "catalog", None):
        catalog.update(load_catalog(args.catalog))
    return RunConfig(
        n=n, k=k, variant=args.variant, pieces=args.pieces, overflow=args.overflow,
        state_cap=args.state_cap, element_cap=args.element_cap, search_budget=args.search_budget,
        skeleton_cap=args.skeleton_cap, fmt=args.format, cache_dir=args.cache_dir,
        use_cache=not args.no_cache, tile_mode=args.tile_mode, catalog=catalog,
    )


def emit(obj, fmt, text_lines, csv_rows=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump(obj, out, indent=2, sort_keys=True)
        out.write("\n")
    elif fmt == "csv" and csv_rows is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(csv_rows)
    else:
        out.write("\n".join(text_lines) + "\n")


# -- commands ---------------------------------------------------------


def cmd_enumerate(args):
    rc = run_config(args)
    space = rc.space()
    obj = {"config": space.config.describe(), "n_states": space.n_states,
           "n_generators": space.n_generators, "generators": list(space.generator_labels)}
    lines = [f"|X| = {space.n_states}, generators = {space.n_generators}"]
    emit(obj, rc.fmt, lines, [["n", "k", "variant", "states", "generators"],
                              [rc.n, rc.k, rc.variant, space.n_states, space.n_generators]])
    return EXIT_OK


def cmd_states(args):
    rc = run_config(args)
    space = rc.space()
    wanted = args.state if args.state else range(space.n_states)
    blocks = []
    for i in wanted:
        if not 0 <= i < space.n_states:
            raise ConfigError(f"state {i} out of range 0..{space.n_states - 1}")
        blocks.append(f"state {i}\n{space.states[i].render(rc.n, rc.k)}")
    sys.stdout.write("\n\n".join(blocks) + "\n")
    return EXIT_OK


def cmd_semigroup(args):
    rc = run_config(args)
    space = rc.space()
    t0 = time.perf_counter()
    enum = enumerate_semigroup(space.tables, cap=rc.element_cap)
    obj = {"n_states": space.n_states, "semigroup_size": enum.size,
           "seconds": round(time.perf_counter() - t0, 3)}
    emit(obj, rc.fmt, [f"|X| = {space.n_states}, |S| = {enum.size}"],
         [["states", "semigroup_size"], [space.n_states, enum.size]])
    return EXIT_OK


def cmd_aperiodic(args):
    rc = run_config(args)
    space = rc.space()
    if args.method == "element":
        enum = enumerate_semigroup(space.tables, cap=rc.element_cap)
        result = semigroup_is_aperiodic_elementwise(enum)
    else:
        result = aperiodic_via_holonomy(space, budget=rc.search_budget)
    obj = {"method": args.method, "aperiodic": result, "n_states": space.n_states}
    emit(obj, rc.fmt, [f"aperiodic ({args.method}): {'yes' if result else 'no'}"],
         [["method", "aperiodic"], [args.method, int(result)]])
    return EXIT_OK


def _write_outputs(out_dir: Path, report, skel, classes, space):
    from . import plotting

    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    (out_dir / "report.json").write_text(json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n")
    (out_dir / "components.csv").write_text(components_csv(report))
    written += ["report.json", "components.csv"]
    if not report.sparse:
        (out_dir / "subduction.dot").write_text(condensation_dot(skel, classes, report))
        plotting.plot_height_profile(report, out_dir / "height_profile.png")
        written += ["subduction.dot", "height_profile.png"]
    for comp in report.nontrivial():
        name = f"component_{comp.representative}.png"
        plotting.plot_component_states(space, comp, out_dir / name)
        written.append(name)
    return written


def cmd_holonomy(args):
    rc = run_config(args)
    space = rc.space()
    skel = build_skeleton(space, node_cap=rc.skeleton_cap)
    classes = classify(skel, with_heights=len(skel) <= skel.cover_limit)
    report = decomposition_report(space, rc.tile_mode, rc.search_budget, skeleton=skel, classes=classes)
    if args.dot:
        Path(args.dot).write_text(condensation_dot(skel, classes, report))
    written = _write_outputs(Path(args.out), report, skel, classes, space) if args.out else []
    lines = [
        f"|X| = {report.n_states}, |Q| = {report.skeleton_size}, classes = {report.n_classes}",
        f"h(X) = {'-' if report.height is None else report.height}",
        f"nontrivial components: {format_pairs(report.table_pairs()) or 'none'}",
    ]
    if report.partial:
        lines.append(f"partial: {len(report.failures)} search(es) ran out of budget")
    if written:
        lines.append(f"wrote {', '.join(written)} to {args.out}")
    emit(report_to_dict(report, include_trivial=args.all), rc.fmt, lines,
         list(csv.reader(io.StringIO(components_csv(report)))))
    return EXIT_BUDGET if report.partial else EXIT_OK


def cmd_eval_word(args):
    rc = run_config(args)
    config = rc.game()
    if args.word:
        words = [("word", args.word)]
    elif args.builtin:
        table = builtin_words()
        if args.builtin not in table:
            raise ConfigError(f"no built-in word {args.builtin!r}; known: {', '.join(sorted(table))}")
        words = [(args.builtin, table[args.builtin])]
    else:
        words = load_words(args.file)
    parsed = [(name, parse_word(text, config)) for name, text in words]
    space = rc.space()
    report = skel = classes = None
    if args.actions:
        skel = build_skeleton(space, node_cap=rc.skeleton_cap)
        classes = classify(skel, with_heights=len(skel) <= skel.cover_limit)
        report = decomposition_report(space, rc.tile_mode, rc.search_budget, skeleton=skel, classes=classes)

    results = []
    lines = []
    for name, word in parsed:
        t = evaluate_word(word, space)
        image = sorted(set(t.map.tolist()))
        entry = {"name": name, "length": len(word), "word": str(word), "rank": len(image), "image": image,
                 "actions": []}
        lines.append(f"{name}: length {len(word)}, rank {len(image)}")
        if report is not None:
            for comp in report.nontrivial():
                for node, act in stabilized_members(word, comp.representative, skel, classes, space,
                                                    rc.tile_mode):
                    ct = None if act.permutation is None else list(cycle_type(act.permutation))
                    entry["actions"].append({"component": comp.label(), "node": node,
                                             "permutation": act.permutation, "cycle_type": ct})
                    desc = "not a permutation" if ct is None else f"cycle type {tuple(ct) or '()'}"
                    lines.append(f"  {comp.label()} fixes node {node}: {desc}")
        results.append(entry)
    rows = [["name", "length", "rank"]] + [[r["name"], r["length"], r["rank"]] for r in results]
    emit({"words": results}, rc.fmt, lines, rows)
    return EXIT_OK


# -- reproduction harness ----------------------------------------------

TABLE1_ROWS = [(3, 3), (3, 4), (3, 5)]
TABLE2_ROWS = [(3, 3, TRITRIS_PIECES), (3, 4, TRITRIS_PIECES), (3, 4, REDUCED_PIECES)]


def _semigroup_size(space, cap):
    try:
        return enumerate_semigroup(space.tables, cap=cap).size
    except EnumerationLimitError as exc:
        log.info("semigroup cap hit: %s", exc)
        return None


def _dash(x):
    return "-" if x is None else x


def table1_rows(rc: RunConfig):
    rows = [["n", "k", "states", "semigroup", "height"]]
    for n, k in TABLE1_ROWS:
        row = RunConfig(**{**rc.__dict__, "n": n, "k": k, "variant": "standard", "pieces": TRITRIS_PIECES})
        space = row.space()
        size = _semigroup_size(space, rc.element_cap)
        height = None
        try:
            # heights need the inclusion covers, so stop once those are out of reach
            skel = build_skeleton(space, node_cap=min(rc.skeleton_cap, DEFAULT_COVER_LIMIT + 1))
            if len(skel) <= skel.cover_limit:
                height = classify(skel).height_of_states
        except EnumerationLimitError as exc:
            log.info("skeleton cap hit: %s", exc)
        rows.append([n, k, space.n_states, _dash(size), _dash(height)])
    return rows


def table2_rows(rc: RunConfig):
    rows = [["n", "k", "pieces", "states", "semigroup", "components"]]
    for n, k, pieces in TABLE2_ROWS:
        row = RunConfig(**{**rc.__dict__, "n": n, "k": k, "variant": "periodic", "pieces": pieces})
        space = row.space()
        # the holonomy pipeline never needs S; only small rows get |S|
        size = _semigroup_size(space, rc.element_cap) if space.n_states < 100 else None
        comps = None
        try:
            skel = build_skeleton(space, node_cap=rc.skeleton_cap)
            classes = classify(skel, with_heights=len(skel) <= skel.cover_limit)
            report = decomposition_report(space, rc.tile_mode, rc.search_budget, skeleton=skel,
                                          classes=classes)
            if not report.partial:
                comps = format_pairs(report.table_pairs()) or "none"
        except EnumerationLimitError as exc:
            log.info("skeleton cap hit: %s", exc)
        rows.append([n, k, " ".join(pieces), space.n_states, _dash(size), _dash(comps)])
    return rows


def cmd_reproduce(args):
    rc = run_config(args)
    rows = table1_rows(rc) if args.table == "table1" else table2_rows(rc)
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.table}.csv").write_text(buf.getvalue())
    if rc.fmt == "json":
        emit([dict(zip(rows[0], r)) for r in rows[1:]], "json", [])
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def _add_common(p, board="3x3"):
    g = p.add_argument_group("game")
    g.add_argument("--board", type=parse_board, default=parse_board(board), metavar="NxK",
                   help="board width x height (default %(default)s)")
    g.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.STANDARD.value)
    g.add_argument("--pieces", type=parse_pieces, default=TRITRIS_PIECES,
                   help="comma separated labels, or 'tritris' / 'reduced'")
    g.add_argument("--overflow", choices=[o.value for o in OverflowPolicy],
                   default=OverflowPolicy.PRE_CLEAR.value)
    g.add_argument("--catalog", help="JSON piece catalog merged over the built-in shapes")
    c = p.add_argument_group("limits and output")
    c.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    c.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)
    c.add_argument("--skeleton-cap", type=int, default=DEFAULT_NODE_CAP)
    c.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    c.add_argument("--tile-mode", choices=[m.value for m in TileMode], default=TileMode.MAXIMAL.value)
    c.add_argument("--format", choices=["text", "json", "csv"], default="text")
    c.add_argument("--cache-dir", default=None,
                   help=f"state-space cache (default {default_cache_dir()}, env TETRIS_SGP_CACHE)")
    c.add_argument("--no-cache", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tetris-sgp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="reachable states and generator count")
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("states", help="ASCII pictures of states")
    _add_common(p)
    p.add_argument("--state", type=int, action="append", help="state index (repeatable)")
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("semigroup", help="size of the transformation semigroup")
    _add_common(p)
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("aperiodic", help="decide aperiodicity")
    _add_common(p)
    p.add_argument("--method", choices=["element", "holonomy"], default="holonomy")
    p.set_defaults(func=cmd_aperiodic)

    p = sub.add_parser("holonomy", help="holonomy decomposition report")
    _add_common(p)
    p.add_argument("--out", help="directory for report.json, components.csv, DOT and figures")
    p.add_argument("--dot", help="write the subduction DOT graph to this file")
    p.add_argument("--all", action="store_true", help="include trivial components in JSON output")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("eval-word", help="evaluate event words")
    _add_common(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help="tokens such as 'V_0 LS_1'")
    src.add_argument("--file", help="word file, one 'name: tokens' per line")
    src.add_argument("--builtin", help="name of a shipped word")
    p.add_argument("--actions", action="store_true",
                   help="show the tile permutation each word induces on non-trivial components")
    p.set_defaults(func=cmd_eval_word)

    p = sub.add_parser("reproduce", help="rebuild the summary tables as CSV")
    _add_common(p)
    p.add_argument("table", choices=["table1", "table2"])
    p.add_argument("--out", help="also write <table>.csv into this directory")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except TetrisSgpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code if exc.exit_code in (EXIT_VALIDATION, EXIT_BUDGET) else EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
