"""Command-line interface: ``smgroup <verb> ...``.

Exit codes: 0 definite result, 1 negative verdict, 2 input error,
3 budget hit or inexact answer.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .formats import (
    FormatError,
    format_derivation,
    format_presentation,
    parse_machine,
    parse_machine_source,
    parse_presentation,
    parse_profile,
    read_text,
)
from .gn import KappaParams, SmallNWarning, compile_gn, default_N
from .hn import compile_hn, gb_presentation, validate_profile
from .metrics import distortion_trials, growth_csv, trials_csv
from .presentation import PresentationError, relation_census
from .search import BudgetHit, SearchBudget
from .smachine import (
    Found,
    NotAdmissible,
    NotApplicable,
    Report,
    ResultNotAdmissible,
    default_machine_budget,
    format_rule_ref,
    parse_history,
    run_history,
    search_reachable,
    validate_hardware,
    validate_rule,
)
from .wordproblem import (
    AreaSolver,
    DerivationError,
    Geodesic,
    Trivial,
    dehn_profile,
    default_area_budget,
    geodesic_length,
    result_json,
    synthesize,
    verify_derivation,
)
from .words import Word, WordError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _budget(args, default: SearchBudget | None) -> SearchBudget | None:
    if args.budget_len is None and args.budget_nodes is None and args.budget_depth is None:
        return default
    base = default or SearchBudget(args.budget_len or 64)
    return base.with_overrides(args.budget_len, args.budget_nodes, args.budget_depth)


def _word(text: str) -> Word:
    return Word.parse(text)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _kv(pairs) -> str:
    return "".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in pairs)


def _require_format(args, allowed) -> None:
    if args.format not in allowed:
        raise InputError(f"{args.cmd} does not support --format {args.format}")


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args) -> int:
    lines = []
    status = EXIT_OK
    for path in args.paths:
        p = Path(path)
        text = read_text(p)
        report = Report()
        if p.suffix == ".smf":
            ms = parse_machine_source(text, str(p))
            report.extend(validate_hardware(ms.hardware), "hardware: ")
            names = [r.name for r in ms.rules]
            for r, no in zip(ms.rules, ms.rule_lines):
                if names.count(r.name) > 1:
                    report.add(f"line {no}: rule name {r.name} used twice")
                report.extend(validate_rule(ms.hardware, r), f"line {no}: rule {r.name}: ")
        elif p.suffix == ".emb":
            report.extend(validate_profile(parse_profile(text, str(p))))
        elif p.suffix == ".gp":
            parse_presentation(text, str(p))
        else:
            raise InputError(f"{p}: cannot validate files with suffix {p.suffix!r}")
        if not report.ok:
            status = EXIT_NEGATIVE
        lines.append((str(p), report))
    if args.format == "json":
        _emit(args, _json([{"path": p, "ok": r.ok, "violations": r.violations} for p, r in lines]))
    else:
        out = []
        for p, r in lines:
            out.append(f"{p}: {'ok' if r.ok else 'invalid'}")
            out += [f"  {v}" for v in r.violations]
        _emit(args, "\n".join(out) + "\n")
    return status


def _machine(path: str):
    return parse_machine(read_text(path), path)


def cmd_run(args) -> int:
    m = _machine(args.machine)
    start = m.admissible(_word(args.word))
    try:
        comp = run_history(m, start, parse_history(args.history))
    except (NotApplicable, ResultNotAdmissible) as exc:
        _emit(args, f"error: {exc}\n")
        return EXIT_NEGATIVE
    return _emit_computation(args, comp)


def _emit_computation(args, comp) -> int:
    hist = [format_rule_ref(r) for r in comp.history]
    if args.format == "json":
        _emit(
            args,
            _json(
                {
                    "history": hist,
                    "trace": [str(w) for w in comp.trace],
                    "length": comp.length,
                    "area": comp.area,
                    "reduced": comp.is_reduced,
                }
            ),
        )
    elif args.format == "csv":
        rows = [["step", "rule", "word"], [0, "", str(comp.trace[0])]]
        rows += [[i, h, str(w)] for i, (h, w) in enumerate(zip(hist, comp.trace[1:]), 1)]
        _emit(args, _csv(rows))
    else:
        out = [str(comp.end)]
        out.append(f"# history: {' '.join(hist)}".rstrip())
        out.append(f"# length {comp.length} area {comp.area} reduced {str(comp.is_reduced).lower()}")
        _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_search(args) -> int:
    m = _machine(args.machine)
    src = m.admissible(_word(args.src))
    dst = m.admissible(_word(args.dst))
    r = search_reachable(m, src, dst, _budget(args, default_machine_budget(src, dst)), args.threads)
    if isinstance(r, Found):
        return _emit_computation(args, r.computation)
    if args.format == "json":
        _emit(args, _json({"verdict": r.verdict, "nodes_expanded": r.nodes_expanded}))
    else:
        _emit(args, f"{r.verdict} after {r.nodes_expanded} nodes\n")
    return EXIT_BUDGET if isinstance(r, BudgetHit) else EXIT_NEGATIVE


def _params(args, m) -> KappaParams:
    if args.N is not None:
        return KappaParams(args.N)
    return KappaParams(default_N(m))


def cmd_compile_gn(args) -> int:
    _require_format(args, ("text",))
    m = _machine(args.machine)
    W0 = m.admissible(_word(args.W0))
    p = _params(args, m)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SmallNWarning)
        g = compile_gn(m, W0, p)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(args, format_presentation(g))
    return EXIT_OK


def _presentation(path: str):
    return parse_presentation(read_text(path), path)


def cmd_compile_hn(args) -> int:
    _require_format(args, ("text",))
    g = _presentation(args.presentation)
    prof = parse_profile(read_text(args.profile), args.profile)
    _emit(args, format_presentation(compile_hn(g, prof)))
    return EXIT_OK


def cmd_area(args) -> int:
    g = _presentation(args.presentation)
    w = _word(args.word)
    r = AreaSolver(g).solve(w, _budget(args, default_area_budget(g, w)))
    if isinstance(r, Trivial) and args.derivation:
        Path(args.derivation).write_text(format_derivation(r.derivation), encoding="utf-8")
    data = result_json(r)
    if args.format == "json":
        _emit(args, _json(data))
    else:
        pairs = [("verdict", r.verdict)]
        if isinstance(r, Trivial):
            pairs += [("area", r.area), ("exact", str(r.exact).lower())]
        elif isinstance(r, BudgetHit):
            pairs += [("reason", r.reason)]
        else:
            pairs += [("proved", str(r.proved).lower())]
        pairs.append(("nodes_expanded", r.nodes_expanded))
        _emit(args, _kv(pairs))
    if isinstance(r, Trivial):
        return EXIT_OK if r.exact else EXIT_BUDGET
    if isinstance(r, BudgetHit):
        return EXIT_BUDGET
    return EXIT_NEGATIVE if r.proved else EXIT_BUDGET


def cmd_geodesic(args) -> int:
    g = _presentation(args.presentation)
    w = _word(args.word)
    r = geodesic_length(g, w, _budget(args, None))
    if isinstance(r, Geodesic):
        data = {"verdict": "geodesic", "length": r.length, "exact": r.exact, "nodes_expanded": r.nodes_expanded}
    else:
        data = {"verdict": r.verdict, "reason": r.reason, "nodes_expanded": r.nodes_expanded}
    if args.format == "json":
        _emit(args, _json(data))
    else:
        _emit(args, _kv(data.items()))
    if isinstance(r, Geodesic):
        return EXIT_OK if r.exact else EXIT_BUDGET
    return EXIT_BUDGET


def cmd_dehn(args) -> int:
    g = _presentation(args.presentation)
    t = dehn_profile(g, args.max_n, _budget(args, None), args.threads)
    if args.format == "csv":
        _emit(args, growth_csv(t))
    elif args.format == "json":
        _emit(args, _json([{"n": n, "value": v, "exact": e} for n, (v, e) in sorted(t.entries.items())]))
    else:
        _emit(args, "".join(f"{n} {v} {'exact' if e else 'bound'}\n" for n, (v, e) in sorted(t.entries.items())))
    return EXIT_OK if t.exact else EXIT_BUDGET


def cmd_derive(args) -> int:
    m = _machine(args.machine)
    start = m.admissible(_word(args.word))
    comp = run_history(m, start, parse_history(args.history))
    p = _params(args, m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallNWarning)
        g = compile_gn(m, comp.end, p)
    rep = synthesize(g, comp, p)
    ok = verify_derivation(g, rep.derivation).ok
    if args.format == "json":
        d = rep.derivation
        _emit(
            args,
            _json(
                {
                    "verdict": "verified" if ok else "failed",
                    "area": rep.area,
                    "bound": rep.bound,
                    "C": rep.C,
                    "start": str(d.start),
                    "end": str(d.end),
                    "steps": [[s.pos, s.orbit, s.shift, s.sign] for s in d.steps],
                }
            ),
        )
    else:
        head = f"# area {rep.area} bound {rep.bound} C {rep.C} {'verified' if ok else 'FAILED'}\n"
        _emit(args, head + format_derivation(rep.derivation))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_distortion(args) -> int:
    m = _machine(args.machine)
    prof = parse_profile(read_text(args.profile), args.profile)
    G = _presentation(args.group)
    W0 = m.admissible(_word(args.W0))
    p = KappaParams(args.N if args.N is not None else 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallNWarning)
        gn = compile_gn(m, W0, p)
    h = compile_hn(gn, prof)
    gb = gb_presentation(G, prof)
    records = distortion_trials(gb, h, args.trials, args.seed, args.perturbations, args.max_u, _budget(args, None))
    bad = sum(1 for r in records if r.exact and not r.holds)
    exact = sum(1 for r in records if r.exact)
    if args.format == "csv":
        _emit(args, trials_csv(records))
    elif args.format == "json":
        rows = [
            {"seed": r.seed, "u": str(r.u), "v": str(r.v), "L": r.L, "R": r.R, "holds": r.holds, "exact": r.exact}
            for r in records
        ]
        _emit(args, _json({"trials": rows, "exact": exact, "counterexamples": bad}))
    else:
        _emit(args, _kv([("trials", len(records)), ("exact", exact), ("counterexamples", bad)]))
    if bad:
        return EXIT_NEGATIVE
    return EXIT_OK if exact == len(records) else EXIT_BUDGET


def cmd_census(args) -> int:
    path = Path(args.path)
    if path.suffix == ".smf":
        if args.W0 is None:
            raise InputError("census of a machine needs --W0")
        m = _machine(str(path))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallNWarning)
            g = compile_gn(m, m.admissible(_word(args.W0)), _params(args, m))
    else:
        g = _presentation(str(path))
    c = relation_census(g)
    if args.format == "json":
        _emit(
            args,
            _json(
                {
                    "kinds": {k: {"orbits": v.orbits, "expanded": v.expanded, "max_length": v.max_length} for k, v in c.kinds.items()},
                    "generators": c.generator_counts,
                    "total_generators": c.total_generators,
                }
            ),
        )
    elif args.format == "csv":
        _emit(args, _csv([["kind", "orbits", "expanded", "max_length"], *c.rows()]))
    else:
        out = [f"{k} orbits {o} expanded {e} max_length {ml}" for k, o, e, ml in c.rows()]
        out += [f"class {t} {n}" for t, n in c.generator_counts.items()]
        out.append(f"generators {c.total_generators}")
        _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-len", "--cap", dest="budget_len", type=int, help="word length cap")
    common.add_argument("--budget-nodes", type=int, help="maximum expanded nodes")
    common.add_argument("--budget-depth", type=int, help="maximum search depth")
    common.add_argument("--N", type=int, help="kappa parameter N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("text", "json", "csv"), help="default: from --out suffix, else text")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="smgroup", description="S-machines, G_N(S) and H_N(S), word problems")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", parents=[common], help="check .smf, .emb and .gp files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", parents=[common], help="apply a rule history")
    p.add_argument("machine")
    p.add_argument("--word", required=True)
    p.add_argument("--history", default="")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("search", parents=[common], help="breadth-first reachability")
    p.add_argument("machine")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("compile-gn", parents=[common], help="emit the presentation G_N(S)")
    p.add_argument("machine")
    p.add_argument("--W0", required=True, help="stop word")
    p.set_defaults(func=cmd_compile_gn)

    p = sub.add_parser("compile-hn", parents=[common], help="extend G_N(S) to H_N(S)")
    p.add_argument("presentation")
    p.add_argument("profile")
    p.set_defaults(func=cmd_compile_hn)

    p = sub.add_parser("area", parents=[common], help="exact area of a word")
    p.add_argument("presentation")
    p.add_argument("--word", required=True)
    p.add_argument("--derivation", help="write the derivation (.drv) here")
    p.set_defaults(func=cmd_area)

    p = sub.add_parser("geodesic", parents=[common], help="word length in the group")
    p.add_argument("presentation")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("dehn", parents=[common], help="area profile up to a length")
    p.add_argument("presentation")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_dehn)

    p = sub.add_parser("derive", parents=[common], help="derivation of kappa(W) = 1 from a computation")
    p.add_argument("machine")
    p.add_argument("--word", required=True, help="start word")
    p.add_argument("--history", default="")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("distortion", parents=[common], help="seeded distortion trials")
    p.add_argument("machine")
    p.add_argument("profile")
    p.add_argument("group", help="presentation of G over A")
    p.add_argument("--W0", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--perturbations", type=int, default=3)
    p.add_argument("--max-u", type=int, default=6)
    p.set_defaults(func=cmd_distortion)

    p = sub.add_parser("census", parents=[common], help="relator counts per kind")
    p.add_argument("path")
    p.add_argument("--W0")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        for name in ("budget_len", "budget_nodes", "budget_depth", "N", "threads"):
            v = getattr(args, name)
            if v is not None and v <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if args.format is None:
            suffix = Path(args.out).suffix if args.out else ""
            args.format = {".json": "json", ".csv": "csv"}.get(suffix, "text")
        return args.func(args)
    except (
        OSError,
        FormatError,
        WordError,
        NotAdmissible,
        InputError,
        PresentationError,
        DerivationError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
