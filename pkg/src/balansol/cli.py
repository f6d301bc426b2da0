"""Command-line front end.

Exit codes: 0 ok, 2 parse/usage error, 3 cap exceeded, 4 simple-mode weight
violation, 5 verifier and LP disagree, 10 the search got stuck.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import certificate, configlp, general, simple
from .graph import GraphFormatError, Orientation, fingerprint, format_fraction, format_graph, \
    parse_fraction, parse_graph
from .oracle import FAMILIES, OracleCapExceeded, brute_force_opt, enumerate_instances, gen_family
from .search import CapExceeded, Done, ModeError, Stuck, replay

EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MODE = 4
EXIT_ALARM = 5
EXIT_STUCK = 10


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None


def _rational(s: str) -> Fraction:
    try:
        return parse_fraction(s)
    except (ValueError, ZeroDivisionError):
        raise _Exit(EXIT_PARSE, f"not a rational number: {s!r}") from None


def _fmt(x):
    return None if x is None else format_fraction(Fraction(x))


# -- verbs ----------------------------------------------------------------------------


def cmd_optstar(args) -> int:
    g = _load(args.file)
    r = configlp.opt_star(g, args.cap)
    print(format_fraction(r.opt_star))
    print(f"breakpoints {len(r.breakpoints)}")
    return 0


def _stuck_certificate(g, state, cap):
    cert = certificate.build(g, state)
    verdict = certificate.verify(g, cert, cap)
    if not verdict:
        heavy = certificate.heavy_edge_certificate(g, state.tau)
        if heavy is not None:
            cert, verdict = heavy, certificate.verify(g, heavy, cap)
    return cert, verdict


def cmd_solve(args) -> int:
    g = _load(args.file)
    report: dict = {"fingerprint": fingerprint(g), "mode": args.mode}
    if args.tau == "opt":
        tau = configlp.opt_star(g, args.cap).opt_star
        report["opt_star"] = format_fraction(tau)
    else:
        tau = _rational(args.tau)
    if tau <= 0 and g.edges:
        raise _Exit(EXIT_PARSE, "tau must be positive")
    report["tau"] = format_fraction(tau)

    events: list[dict] = []
    if args.mode == "simple":
        try:
            simple.check_weights(g, tau)
        except ModeError as exc:
            raise _Exit(EXIT_MODE, str(exc)) from None
        start = Orientation.toward_second(g)
    else:
        try:
            start = general.starting_orientation(g, tau, args.cap)
        except configlp.OrientationError as exc:
            raise _Exit(EXIT_STUCK, f"no starting orientation: {exc}") from None
    run = simple.run_simple if args.mode == "simple" else general.run_general
    res = run(g, tau, args.iteration_cap, start, None, not args.no_check, events.append)

    report["outcome"] = res.outcome
    report["iterations"] = res.iterations
    report["makespan"] = format_fraction(res.state.makespan())
    if isinstance(res, Done):
        report["orientation"] = list(res.orientation.targets)
    code = 0
    if isinstance(res, Stuck):
        cert, verdict = _stuck_certificate(g, res.state, args.cap)
        path = Path(args.certificate or f"{args.file if args.file != '-' else 'stdin'}.cert.json")
        path.write_text(cert.to_json() + "\n")
        report["certificate"] = str(path)
        report["certificate_verdict"] = "accept" if verdict else f"reject: {verdict.reason}"
        code = EXIT_STUCK
    elif isinstance(res, CapExceeded):
        code = EXIT_CAP

    if args.trace:
        head = {"event": "start", "mode": args.mode, "tau": format_fraction(tau),
                "orientation": list(start.targets)}
        with open(args.trace, "w") as fh:
            for ev in [head, *events]:
                fh.write(json.dumps(ev) + "\n")
    if args.replay_check:
        final, pending = replay(g, start, events)
        ok = final == res.state.orientation() and pending == list(res.state.P)
        report["replay"] = "ok" if ok else "mismatch"
        if not ok:
            code = code or EXIT_ALARM
    print(json.dumps(report, indent=1))
    return code


def cmd_certify(args) -> int:
    g = _load(args.file)
    tau = _rational(args.tau)
    out = certificate.certify_infeasibility(g, tau, args.cap, args.iteration_cap)
    lp = configlp.lp_feasible(g, tau, args.cap)
    lp_infeasible = isinstance(lp, configlp.Infeasible)
    if isinstance(out, certificate.Certificate):
        if not lp_infeasible:
            print("SOUNDNESS ALARM: verified certificate but the LP is feasible", file=sys.stderr)
            return EXIT_ALARM
        if args.out:
            Path(args.out).write_text(out.certificate.to_json() + "\n")
        else:
            print(out.certificate.to_json())
        print(f"CERTIFIED tau < OPT* (tau = {format_fraction(tau)}, "
              f"sum y = {format_fraction(out.verdict.sum_y)}, "
              f"sum z = {format_fraction(out.verdict.sum_z)})")
        return 0
    if lp_infeasible:
        print(f"no certificate ({out.reason}; the LP is infeasible: {lp.reason})")
    else:
        print("no certificate (feasible)")
    return 0


_FIELDS = ["fingerprint", "opt_star", "integral_opt", "ratio", "outcome", "makespan"]


def _sweep_instances(args):
    if args.enumerate:
        v, e = args.enumerate
        pool = [_rational(w) for w in args.pool.split(",")]
        yield from enumerate_instances(v, e, pool, args.loops)
        return
    params = json.loads(args.params) if args.params else {}
    for seed in range(args.seed, args.seed + args.count):
        yield gen_family(args.family, params, seed)


def cmd_sweep(args) -> int:
    if args.family is None and args.enumerate is None:
        raise _Exit(EXIT_PARSE, "sweep needs --family or --enumerate")
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    log = sys.stderr if args.out == "-" else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=_FIELDS)
    writer.writeheader()
    fh.flush()
    best: Fraction | None = None
    count = 0
    try:
        it = _sweep_instances(args)
        if args.limit is not None:
            it = itertools.islice(it, args.limit)
        for g in it:
            bf = brute_force_opt(g, args.oracle_cap)
            r = configlp.opt_star(g, args.cap, hint=bf.witness)
            ratio = bf.integral_opt / r.opt_star if r.opt_star else Fraction(1)
            row = {"fingerprint": bf.fingerprint, "opt_star": _fmt(r.opt_star),
                   "integral_opt": _fmt(bf.integral_opt), "ratio": _fmt(ratio)}
            if g.edges:
                try:
                    o = configlp.initial_orientation(g, r.witness)
                    res = general.run_general(g, r.opt_star, args.iteration_cap, o)
                    row["outcome"] = res.outcome
                    row["makespan"] = _fmt(res.state.makespan())
                except configlp.OrientationError as exc:
                    row["outcome"] = f"error: {exc}"
            else:
                row["outcome"], row["makespan"] = "done", "0/1"
            writer.writerow(row)
            fh.flush()
            count += 1
            best = ratio if best is None else max(best, ratio)
    except (configlp.InstanceTooLarge, OracleCapExceeded) as exc:
        print(f"cap hit after {count} instances: {exc}", file=sys.stderr)
        return EXIT_CAP
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(f"instances {count} max ratio {_fmt(best) if best is not None else '-'}", file=log)
    return 0


def cmd_gen(args) -> int:
    params = json.loads(args.params) if args.params else {}
    try:
        g = gen_family(args.name, params, args.seed)
    except (ValueError, TypeError) as exc:
        raise _Exit(EXIT_PARSE, str(exc)) from None
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="balansol", description=__doc__.splitlines()[0])
    p.add_argument("--cap", type=int, default=None,
                   help="column / subset-sum cap (default: $BALANSOL_CAP or 2^20)")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("optstar", help="print OPT* and the breakpoint count")
    s.add_argument("file")
    s.set_defaults(func=cmd_optstar)

    s = sub.add_parser("solve", help="run the local search and print a JSON report")
    s.add_argument("file")
    s.add_argument("--tau", required=True, help="rational value or 'opt'")
    s.add_argument("--mode", choices=["simple", "general"], default="general")
    s.add_argument("--iteration-cap", type=int, default=1_000_000)
    s.add_argument("--trace", help="write JSON-lines trace events here")
    s.add_argument("--certificate", help="where to write the certificate when stuck")
    s.add_argument("--replay-check", action="store_true",
                   help="replay the trace and compare with the final state")
    s.add_argument("--no-check", action="store_true", help="skip per-step invariant checks")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("certify", help="try to prove tau < OPT*")
    s.add_argument("file")
    s.add_argument("--tau", required=True)
    s.add_argument("--out", help="certificate JSON path (default: standard output)")
    s.add_argument("--iteration-cap", type=int, default=1_000_000)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="CSV of OPT*, integral optimum and run outcome")
    src = s.add_mutually_exclusive_group()
    src.add_argument("--family", choices=FAMILIES)
    src.add_argument("--enumerate", nargs=2, type=int, metavar=("VERTICES", "EDGES"))
    s.add_argument("--params", help="family parameters as JSON")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1, help="family instances (seeds) to draw")
    s.add_argument("--pool", default="1", help="comma-separated weights for --enumerate")
    s.add_argument("--loops", action="store_true")
    s.add_argument("--limit", type=int, default=None)
    s.add_argument("--oracle-cap", type=int, default=20)
    s.add_argument("--iteration-cap", type=int, default=1_000_000)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("gen", help="write a family instance")
    s.add_argument("name", choices=FAMILIES)
    s.add_argument("--params", help="JSON object")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"balansol: {exc}", file=sys.stderr)
        return exc.code
    except (configlp.InstanceTooLarge, OracleCapExceeded) as exc:
        print(f"balansol: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except json.JSONDecodeError as exc:
        print(f"balansol: bad JSON: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
