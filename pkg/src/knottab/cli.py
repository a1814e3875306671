"""Command-line front end for the tabulation pipeline.

Subcommands map onto the library stages: `enumerate` and `classify` expose
the code and class layers, `tests` and `invariants` the color-test layer,
and `run`/`table` the whole checkpointed pipeline.  Output goes to stdout
in the owning module's text format; errors print one diagnostic line to
stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import sys

from .codes import enumerate_codes, parse_code, serialize_code
from .colortests import enumerate_tests, invariant_vector, parse_test, serialize_test
from .moves import classify, serialize_store
from .realize import realize
from .tabulate import (RunConfig, census_classes, distinguish, emit_table,
                       resume, run, _pad_rows, _poly_dense, _stage_codes,
                       serialize_invariants, _entry_str)
from .alexander import alexander_poly


def _cmd_enumerate(args) -> int:
    for n in range(args.max_crossings + 1):
        for code in enumerate_codes(n, canonical_only=args.canonical_only):
            print(serialize_code(code))
    return 0


def _cmd_classify(args) -> int:
    config = RunConfig(max_crossings=args.max_crossings,
                       identify_mirrors=not args.no_mirror_identify)
    codes = _stage_codes(config)
    store = classify(codes, config.max_crossings, config.identify_mirrors)
    sys.stdout.write(serialize_store(store))
    return 0


def _cmd_tests(args) -> int:
    for n in range(1, args.max_colors + 1):
        for M in enumerate_tests(n):
            print(serialize_test(M))
    return 0


def _cmd_invariants(args) -> int:
    with open(args.suite) as fh:
        suite = [parse_test(line) for line in fh if line.strip()]
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        code = parse_code(line)
        diagram = realize(code)
        vec = invariant_vector(diagram, suite)
        counts = ";".join(f"{tid}={_entry_str(v)}" for tid, v in vec.entries)
        poly = ",".join(str(c) for c in _poly_dense(alexander_poly(diagram)))
        print(f"{line}\t{counts or '-'}\t{poly or '0'}")
    return 0


def _cmd_run(args) -> int:
    config = RunConfig(max_crossings=args.max_crossings,
                       max_colors=args.max_colors,
                       affine_mods=tuple(args.affine_mods),
                       sym_max=args.sym_max,
                       identify_mirrors=not args.no_mirror_identify,
                       checkpoint_path=args.checkpoint,
                       jobs=args.jobs)
    state = resume(args.checkpoint) if args.resume else None
    report = run(config, resume_from=state)
    sys.stdout.write(report.table)
    for key in sorted(report.stats):
        print(f"# {key}: {report.stats[key]}")
    return 0


def _cmd_table(args) -> int:
    state = resume(args.checkpoint)
    if state.covers("table"):
        sys.stdout.write(state.table_text)
        return 0
    if not state.covers("invariants"):
        raise RuntimeError("checkpoint has no invariants stage to report")
    vectors = {r.perm: r.vector for r in state.invariants}
    rows = _pad_rows(distinguish(state.store, vectors),
                     state.config.enumerate_limit)
    sys.stdout.write(emit_table(rows))
    return 0


def _mods(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knottab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="print pair codes up to a size")
    p.add_argument("--max-crossings", type=int, required=True)
    p.add_argument("--canonical-only", action="store_true")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("classify", help="print the move-equivalence store")
    p.add_argument("--max-crossings", type=int, required=True)
    p.add_argument("--no-mirror-identify", action="store_true")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("tests", help="print enumerated color tests")
    p.add_argument("--max-colors", type=int, required=True)
    p.set_defaults(fn=_cmd_tests)

    p = sub.add_parser("invariants",
                       help="compute invariants for codes on stdin")
    p.add_argument("--suite", required=True,
                   help="file of serialized color tests, one per line")
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("run", help="full checkpointed tabulation")
    p.add_argument("--max-crossings", type=int, required=True)
    p.add_argument("--max-colors", type=int, default=5)
    p.add_argument("--affine-mods", type=_mods, default=[3, 5, 7])
    p.add_argument("--sym-max", type=int, default=5)
    p.add_argument("--no-mirror-identify", action="store_true")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("table", help="print the table from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(fn=_cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 0
    except Exception as e:  # one diagnostic line, nonzero exit
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
