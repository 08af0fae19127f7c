"""Command line entry point: ``selfaffine {analyze,sweep,verify,render,reproduce}``.

Exit codes: 0 success, 1 invalid input, 2 resource limit, 3 reproduction mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from .algebra import LatticePoint, QuadraticPoly, as_rational
from .connectivity import (
    ConnectivityReport,
    Verdict,
    decide,
    decide_xn_pm_q,
    frange,
    sweep,
    transitions,
)
from .coords import DEFAULT_TERMS
from .neighbors import DEFAULT_STATE_LIMIT, DigitSystem, StateLimitExceeded
from .radix import eval_expansion, parse_expansion, verify

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_LIMIT, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("selfaffine")


class InvalidInput(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


def parse_rational_list(text: str) -> list[Fraction]:
    try:
        return [as_rational(tok) for tok in str(text).split(",") if tok.strip()]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational list {text!r}: {exc}") from None


def _rational(text) -> Fraction:
    try:
        return as_rational(str(text))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational {text!r}: {exc}") from None


def load_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names with
    dashes or underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def report_to_dict(rep: ConnectivityReport, *, route: str = "automaton",
                   closed_form: Verdict | None = None, wall_time: float | None = None) -> dict:
    sys_ = rep.system
    certs = []
    for (a, b), m in sorted(rep.certificates.items()):
        certs.append({
            "pair": [str(a), str(b)],
            "difference": str(b - a),
            "edge": m.member,
            "witness": str(m.witness) if m.witness is not None else None,
            "refutation": None if m.member else {"reason": m.reason, "states_explored": m.explored},
        })
    out = {
        "schema": SCHEMA_VERSION,
        "input": {
            "p": sys_.poly.p,
            "q": sys_.poly.q,
            "polynomial": str(sys_.poly),
            "digits": [str(d) for d in sys_.digits],
        },
        "route": route,
        "verdict": rep.verdict.value,
        "e_graph": {
            "vertices": [str(d) for d in rep.e_graph.vertices],
            "edges": [[str(a), str(b)] for a, b in sorted(rep.e_graph.edges)],
            "components": [[str(d) for d in c] for c in rep.e_graph.components()],
        },
        "is_tile": rep.is_tile,
        "certificates": certs,
        "bounds": rep.bounds.as_dict() if rep.bounds else None,
        "automaton": {"states": rep.states, "alive": rep.alive},
        "wall_time_s": round(rep.seconds if wall_time is None else wall_time, 6),
    }
    if closed_form is not None:
        out["closed_form_verdict"] = closed_form.value
        out["automaton_verdict"] = rep.verdict.value
        out["verdict"] = closed_form.value
    return out


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _poly(args) -> QuadraticPoly:
    if args.p is None or args.q is None:
        raise InvalidInput("both -p and -q are required")
    try:
        return QuadraticPoly(int(args.p), int(args.q))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def _system(args) -> DigitSystem:
    if not args.digits:
        raise InvalidInput("--digits is required")
    digits = parse_rational_list(args.digits)
    if len(set(digits)) != len(digits):
        raise InvalidInput("digits must be distinct")
    return DigitSystem.translated(_poly(args), digits)


def cmd_analyze(args) -> int:
    system = _system(args)
    t0 = time.perf_counter()
    rep = decide(system, terms=int(args.terms), state_limit=int(args.state_limit))
    route, closed = "automaton", None
    if system.poly.p == 0 and len(system.digits) == abs(system.poly.q):
        route, closed = "xn_pm_q", decide_xn_pm_q(system.digits, system.poly.q)
    doc = report_to_dict(rep, route=route, closed_form=closed,
                         wall_time=time.perf_counter() - t0)
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


SWEEP_FIELDS = ["b", "numerator", "denominator", "verdict", "states", "ms"]


def write_sweep_csv(rows, fh, *, with_timing: bool = True) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        verdict = r.verdict.value if r.verdict else f"error: {r.error}"
        ms = f"{r.ms:.3f}" if with_timing else ""
        w.writerow([str(r.b), r.b.numerator, r.b.denominator, verdict, r.states, ms])


def cmd_sweep(args) -> int:
    poly = _poly(args)
    if args.b_values:
        bs = parse_rational_list(args.b_values)
    else:
        if args.b_from is None or args.b_to is None or args.step is None:
            raise InvalidInput("give --b-values or all of --b-from, --b-to, --step")
        try:
            bs = frange(_rational(args.b_from), _rational(args.b_to), _rational(args.step))
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None
    if any(b <= 1 for b in bs):
        raise InvalidInput("every b must exceed 1")
    rows = sweep(poly, bs, jobs=int(args.jobs), terms=int(args.terms),
                 state_limit=int(args.state_limit))
    timing = not args.no_timing
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_sweep_csv(rows, fh, with_timing=timing)
    else:
        write_sweep_csv(rows, sys.stdout, with_timing=timing)
    for lo, hi in transitions(rows):
        log.info("verdict changes between b=%s and b=%s", lo, hi)
    if any(r.error and "states" in r.error for r in rows):
        return EXIT_LIMIT
    return EXIT_OK


def cmd_verify(args) -> int:
    poly = _poly(args)
    try:
        exp = parse_expansion(args.expansion)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    target = parse_rational_list(args.target)
    if len(target) != 2:
        raise InvalidInput("--target needs two coordinates gamma,delta")
    alphabet = None
    if args.digits:
        alphabet = DigitSystem.translated(poly, parse_rational_list(args.digits)).differences
    ok = verify(exp, LatticePoint(*target), poly, alphabet)
    value = eval_expansion(exp, poly)
    print(dumps({
        "schema": SCHEMA_VERSION,
        "expansion": str(exp),
        "target": [str(x) for x in target],
        "value": [str(value.gamma), str(value.delta)],
        "verified": ok,
    }))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import FIGURES, BudgetExceeded, RenderConfig, component_estimate, render, visual_gap

    basis = (1, 0)
    if args.figure:
        if args.figure not in FIGURES:
            raise InvalidInput(f"unknown figure {args.figure!r}; choose from {sorted(FIGURES)}")
        _, p, q, digits, basis = FIGURES[args.figure]
        system = DigitSystem(QuadraticPoly(p, q), digits)
    else:
        system = _system(args)
    if args.basis:
        basis = tuple(parse_rational_list(args.basis))
    if not args.out:
        raise InvalidInput("--out is required")
    config = RenderConfig(
        depth=int(args.depth) if args.depth else None,
        width=int(args.width),
        height=int(args.height),
        basis_vector=basis,
    )
    try:
        path, cloud = render(system, args.out, config)
    except BudgetExceeded as exc:
        raise ResourceLimit(str(exc)) from None
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    print(dumps({
        "schema": SCHEMA_VERSION,
        "out": str(path),
        "points": int(len(cloud)),
        "depth": config.resolve_depth(len(system.digits)),
        "visual_components": component_estimate(cloud, visual_gap(cloud, config)),
    }))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .tables import TABLES

    names = list(TABLES) if args.table == "all" else [args.table]
    bad = 0
    for name in names:
        rows = TABLES[name](terms=int(args.terms), state_limit=int(args.state_limit))
        print(f"== {name}")
        width = max(len(r.label) for r in rows)
        for r in rows:
            mark = "PASS" if r.ok else "FAIL"
            extra = f"  {r.detail}" if r.detail else ""
            print(f"{mark}  {r.label.ljust(width)}  expected={r.expected}  got={r.got}"
                  f"  ({r.seconds * 1000:.1f} ms){extra}")
        n_bad = sum(not r.ok for r in rows)
        print(f"-- {name}: {len(rows) - n_bad}/{len(rows)} match")
        bad += n_bad
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfaffine", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value file mirroring the flags (flags win)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, digits=True):
        sp.add_argument("-p", type=int, help="linear coefficient of x^2 + p x + q")
        sp.add_argument("-q", type=int, help="constant coefficient")
        if digits:
            sp.add_argument("--digits", help="comma separated rationals, e.g. 0,1,8/5")
        sp.add_argument("--terms", default=DEFAULT_TERMS, help="series terms for the tail bounds")
        sp.add_argument("--state-limit", default=DEFAULT_STATE_LIMIT)

    sp = sub.add_parser("analyze", help="decide connectedness, emit a JSON report")
    common(sp)
    sp.add_argument("--out", help="also write the report here")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("sweep", help="decide D = {0, 1, b} over a range of b, emit CSV")
    common(sp, digits=False)
    sp.add_argument("--b-from")
    sp.add_argument("--b-to")
    sp.add_argument("--step")
    sp.add_argument("--b-values", help="explicit comma separated list instead of a range")
    sp.add_argument("--jobs", default=1)
    sp.add_argument("--out")
    sp.add_argument("--no-timing", action="store_true", help="leave the ms column empty")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check a radix expansion against a target")
    common(sp)
    sp.add_argument("--expansion", required=False)
    sp.add_argument("--target", default="")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="rasterize a depth-N approximation to PGM")
    common(sp)
    sp.add_argument("--figure", help="one of fig1a..fig1d, fig2a..fig2d, fig3a, fig3b")
    sp.add_argument("--out")
    sp.add_argument("--depth")
    sp.add_argument("--width", default=800)
    sp.add_argument("--height", default=800)
    sp.add_argument("--basis", help="basis vector v as two rationals, default 1,0")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("reproduce", help="rerun a published table and compare")
    sp.add_argument("table", choices=["thm1_3", "thm1_4", "prop1_2", "sec5", "sec3_radix", "all"])
    sp.add_argument("--terms", default=DEFAULT_TERMS)
    sp.add_argument("--state-limit", default=DEFAULT_STATE_LIMIT)
    sp.set_defaults(func=cmd_reproduce)
    return ap


def parse_args(argv=None) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        config = load_config(args.config)
        subparser = ap._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = set(config) - known
        if unknown:
            raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
        subparser.set_defaults(**config)
        args = ap.parse_args(argv)
    return args


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"schema": SCHEMA_VERSION, "error": kind, "message": message}),
          file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except InvalidInput as exc:
        return _fail("invalid-input", str(exc), EXIT_INVALID)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        for key in ("terms", "state_limit"):
            if int(getattr(args, key)) < (2 if key == "terms" else 1):
                raise InvalidInput(f"--{key.replace('_', '-')} too small")
        return args.func(args)
    except InvalidInput as exc:
        return _fail("invalid-input", str(exc), EXIT_INVALID)
    except StateLimitExceeded as exc:
        return _fail("state-limit", str(exc), EXIT_LIMIT)
    except ResourceLimit as exc:
        return _fail("point-budget", str(exc), EXIT_LIMIT)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        return _fail("invalid-input", str(exc), EXIT_INVALID)


if __name__ == "__main__":
    sys.exit(main())
