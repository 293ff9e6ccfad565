"""Command line front end.

Exit codes: 0 success, 1 validation failure, 2 lemma violation, 3 resource
cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .corpus import random_pocset, random_resolution
from .dual import default_vertex_cap, dual_complex
from .errors import CubefoldError, NotResolution
from .fileio import Workspace
from .folding import ResolutionState, folding_sequence, trace_text
from .maps import classify_map, induced_complex_map
from .quotient import check_admissible, quotient


@dataclass
class RunConfig:
    vertex_cap: int
    verify: bool = True
    seed: int = 0
    fmt: str = "text"
    out: str | None = None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _say(cfg: RunConfig, line: str) -> None:
    """Human-readable status; kept off stdout when stdout carries an export."""
    stream = sys.stderr if (cfg.fmt != "text" and not cfg.out) else sys.stdout
    print(line, file=stream)


def cmd_validate(args, cfg: RunConfig, ws: Workspace) -> int:
    p = ws.pocset(args.pocset)
    print(f"pocset OK: {p.n_hyperplanes} hyperplanes")
    for name, ok in p.checks.items():
        print(f"  {name}: {'ok' if ok else 'FAIL'}")
    status = 0
    if args.action:
        a = ws.action(args.action, p)
        print(f"action OK: {len(a.generators)} generators, group order {a.order}, no inversion")
    if args.relation:
        report = check_admissible(ws.relation(args.relation, p))
        print("\n".join(report.lines()))
        status |= 0 if report.admissible else 1
    if args.map:
        if not args.target:
            raise CubefoldError("--map needs --target")
        q = ws.pocset(args.target)
        c = classify_map(ws.map(args.map, p, q))
        print("\n".join(c.lines()))
        status |= 0 if c.admissible else 1
    return status


def cmd_dual(args, cfg: RunConfig, ws: Workspace) -> int:
    X = dual_complex(ws.pocset(args.pocset), cfg.vertex_cap)
    if cfg.fmt == "dot":
        _emit(cfg, X.to_dot())
    elif cfg.fmt == "json":
        _emit(cfg, X.to_json())
    elif cfg.out:
        _emit(cfg, X.summary() + "\n")
    _say(cfg, X.summary())
    return 0


def cmd_quotient(args, cfg: RunConfig, ws: Workspace) -> int:
    p = ws.pocset(args.pocset)
    rel = ws.relation(args.relation, p)
    report = check_admissible(rel)
    for line in report.lines():
        _say(cfg, line)
    if not report.admissible:
        return 1
    Q = quotient(rel)
    if cfg.fmt == "json":
        data = {
            "classes": rel.class_names(),
            "quotient_pocset": Q.pocset.to_text(),
            "projection": {p.names[h]: Q.pocset.names[c] for h, c in enumerate(Q.projection)},
        }
        _emit(cfg, json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        _emit(cfg, Q.pocset.to_text())
    X = dual_complex(Q.pocset, cfg.vertex_cap)
    _say(cfg, f"quotient: {Q.pocset.n_hyperplanes} hyperplanes; dual: {X.summary()}")
    return 0


def cmd_check_map(args, cfg: RunConfig, ws: Workspace) -> int:
    p, q = ws.pocset(args.domain), ws.pocset(args.codomain)
    f = ws.map(args.map, p, q)
    c = classify_map(f)
    for line in c.lines():
        _say(cfg, line)
    if c.is_resolution and cfg.fmt == "json":
        F = induced_complex_map(f, vertex_cap=cfg.vertex_cap)
        _emit(cfg, json.dumps(F.to_pairs()) + "\n")
    return 0 if c.admissible else 1


def _load_state(args, ws: Workspace) -> ResolutionState:
    p, q = ws.pocset(args.domain), ws.pocset(args.target)
    dom = ws.action(args.action, p) if args.action else ws.action_trivial(p)
    cod = ws.action(args.target_action, q) if args.target_action else ws.action_trivial(q)
    return ResolutionState.create(dom, ws.map(args.map, p, q), cod)


def cmd_fold(args, cfg: RunConfig, ws: Workspace) -> int:
    try:
        st = _load_state(args, ws)
    except NotResolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    trace = folding_sequence(st, verify=cfg.verify, vertex_cap=cfg.vertex_cap)
    data = trace.to_dict()
    _emit(cfg, json.dumps(data, indent=2, sort_keys=True) + "\n" if cfg.fmt == "json" else trace_text(data))
    if cfg.out or cfg.fmt == "json":
        _say(cfg, f"{len(trace.steps)} folds; final map is an embedding: {'yes' if data['final_is_embedding'] else 'no'}")
    ok = data["final_is_embedding"] and data["reproduces_input"] and trace.all_checks_pass()
    return 0 if ok else 2


def cmd_trace_show(args, cfg: RunConfig, ws: Workspace) -> int:
    try:
        data = json.loads(Path(args.trace).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"error: {args.trace}: not a trace file ({exc})", file=sys.stderr)
        return 1
    if cfg.fmt == "json":
        _emit(cfg, json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        _emit(cfg, trace_text(data))
    return 0


def cmd_sample(args, cfg: RunConfig, ws: Workspace) -> int:
    """Write a seeded random instance (for experiments and regression files)."""
    rng = random.Random(cfg.seed)
    outdir = Path(args.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.kind == "pocset":
        p = random_pocset(rng, args.size)
        (outdir / "pocset.txt").write_text(p.to_text(), encoding="utf-8")
        written = ["pocset.txt"]
    else:
        st = random_resolution(rng, args.group)
        files = {
            "domain.txt": st.pocset.to_text(),
            "target.txt": st.target.to_text(),
            "map.txt": st.map_to_target.to_text(),
            "action.txt": st.action.to_text(),
            "target_action.txt": st.target_action.to_text(),
        }
        for name, text in files.items():
            (outdir / name).write_text(text, encoding="utf-8")
        written = list(files)
    print(f"wrote {', '.join(written)} to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the export here instead of stdout")
    common.add_argument("--format", choices=("dot", "json", "text"), default="text")
    common.add_argument("--vertex-cap", type=int, metavar="N", help="maximum number of vertices to enumerate")
    common.add_argument("--no-verify", action="store_true", help="skip per-fold verification checks")
    common.add_argument("--seed", type=int, default=0, help="seed for the random instance generators")

    parser = argparse.ArgumentParser(prog="cubefold", description="Pocsets, dual cube complexes and folds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check pocset, action, relation and map files")
    s.add_argument("pocset")
    s.add_argument("--action")
    s.add_argument("--relation")
    s.add_argument("--map")
    s.add_argument("--target", help="codomain pocset for --map")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("dual", parents=[common], help="build the dual cube complex")
    s.add_argument("pocset")
    s.set_defaults(run=cmd_dual)

    s = sub.add_parser("quotient", parents=[common], help="quotient a pocset by a relation")
    s.add_argument("pocset")
    s.add_argument("relation")
    s.set_defaults(run=cmd_quotient)

    s = sub.add_parser("check-map", parents=[common], help="classify a map of pocsets")
    s.add_argument("domain")
    s.add_argument("codomain")
    s.add_argument("map")
    s.set_defaults(run=cmd_check_map)

    s = sub.add_parser("fold", parents=[common], help="fold an equivariant resolution into an embedding")
    s.add_argument("domain")
    s.add_argument("target")
    s.add_argument("map")
    s.add_argument("--action", help="group action on the domain")
    s.add_argument("--target-action", help="group action on the target")
    s.set_defaults(run=cmd_fold)

    s = sub.add_parser("trace-show", parents=[common], help="print a saved fold trace")
    s.add_argument("trace")
    s.set_defaults(run=cmd_trace_show)

    s = sub.add_parser("sample", parents=[common], help="write a seeded random instance")
    s.add_argument("kind", choices=("pocset", "resolution"))
    s.add_argument("directory")
    s.add_argument("--size", type=int, default=6, help="hyperplanes in a random pocset")
    s.add_argument("--group", type=int, choices=(1, 2, 4), default=2, help="order of the cyclic group")
    s.set_defaults(run=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cap = args.vertex_cap if args.vertex_cap is not None else default_vertex_cap()
    if cap < 1:
        parser.error("--vertex-cap must be at least 1")
    cfg = RunConfig(vertex_cap=cap, verify=not args.no_verify, seed=args.seed, fmt=args.format, out=args.out)
    try:
        return args.run(args, cfg, Workspace())
    except CubefoldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.witness:
            print(f"witness: {' '.join(map(str, exc.witness))}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
