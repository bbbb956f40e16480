"""Command line front end.

``clutch verify <suite>`` runs an invariant suite and prints a JSON report;
``clutch emit <kind>`` prints a computed series or matrix as JSON, LaTeX or
text.  Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time

from .elliptic import WpContext, f_latex, f_series, wp_latex, wp_series
from .glue import witt_bracket
from .node import NodeContext
from .periods import genus1_ab, genus1_pi, genus1_pi_swapped, pi_graded, symbolic_pair
from .series import SeriesError
from .suites import SUITE_NAMES, run_checks, suite_checks

EMIT_KINDS = ("wp", "fdiff", "recursion", "period", "witt")
FORMATS = ("json", "latex", "text")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# -- verify --------------------------------------------------------------

def run_verify(suite: str, N=None, K=None, seed: int = 0, timing: bool = False) -> tuple[dict, int]:
    """Run a suite; returns the report and the exit status."""
    if suite not in SUITE_NAMES + ("all",):
        raise UsageError(f"unknown suite {suite!r}")
    start = time.perf_counter()
    checks = run_checks(suite_checks(suite, N, K, seed))
    report = {
        "suite": suite,
        "params": {"N": N, "K": K, "seed": seed},
        "checks": checks,
        "passed": sum(c["status"] == "pass" for c in checks),
        "failed": sum(c["status"] == "fail" for c in checks),
    }
    if timing:
        report["wall_time"] = round(time.perf_counter() - start, 3)
    return report, 0 if report["failed"] == 0 else 1


# -- emit ------------------------------------------------------------------

def _tau_latex(text: str) -> str:
    text = re.sub(r"c(\d+)_t(\d)", lambda m: rf"c_{{{m.group(1)}}}(\tau_{m.group(2)})", text)
    text = re.sub(r"(\d+)/(\d+)", r"\\frac{\1}{\2}", text)
    return text.replace("*", " ")


def _q_latex(q) -> str:
    from .combo import _latex_q
    return _tau_latex(_latex_q(q))


def _emit_wp(args):
    K = 8 if args.window is None else args.window
    ctx = WpContext(order=max(K + 2, 40))
    series = wp_series(ctx, K)
    if args.format == "json":
        return _dump({"kind": "wp", "K": K, "series": series.to_json()})
    if args.format == "latex":
        return wp_latex(ctx, K)
    return f"wp(z) = {series}"


def _emit_fdiff(args):
    n = 3 if args.n is None else args.n
    K = 8 if args.window is None else args.window
    if n < 2:
        raise UsageError("fdiff needs --n >= 2")
    ctx = WpContext(order=max(K + n + 2, 40))
    series = f_series(n, ctx, K).series
    if args.format == "json":
        return _dump({"kind": "fdiff", "n": n, "K": K, "series": series.to_json()})
    if args.format == "latex":
        return f_latex(n, ctx, K)
    return f"f[-{n}] = {series}"


def _emit_recursion(args):
    N = 11 if args.order is None else args.order
    ab = genus1_ab(N)
    if args.format == "json":
        return _dump({"kind": "recursion", **ab.to_json()})
    rows = [(f"a{k}", k, v) for k, v in sorted(ab.a.items())] + \
           [(f"b{k}", k, v) for k, v in sorted(ab.b.items())]
    if args.format == "latex":
        return " \\\\\n".join(rf"{name[0]}_{{{k}}} \equiv {_q_latex(v)} \bmod q^{{{N + 1}}}"
                              for name, k, v in rows)
    return "\n".join(f"{name} = {v if v else 0} mod q^{N + 1}" for name, _, v in rows)


def _emit_period(args):
    N = 11 if args.order is None else args.order
    if (args.g1 is None) != (args.g2 is None):
        raise UsageError("give both --g1 and --g2, or neither")
    if args.g1 is not None:
        if args.g1 < 1 or args.g2 < 1:
            raise UsageError("genera must be >= 1")
        P = pi_graded(symbolic_pair(args.g1, args.g2, N))
        if args.format == "json":
            return _dump({"kind": "period", "g1": args.g1, "g2": args.g2, "N": N, "grades": P.to_json()})
        if args.format == "latex":
            return P.to_latex()
        return str(P)
    classes = {"dx1": genus1_pi(N), "dx2": genus1_pi_swapped(N)}
    if args.format == "json":
        return _dump({"kind": "period", "N": N,
                      "classes": {k: [c.to_json() for c in v] for k, v in classes.items()}})
    if args.format == "latex":
        lines = []
        for name, seed in (("dx1", r"(dx_1, 0)"), ("dx2", r"(0, dx_2)")):
            first, second = classes[name]
            lines.append(rf"\Pi{seed} \equiv \left({_tau_latex(first.to_latex())},\ "
                         rf"{_tau_latex(second.to_latex())}\right) \bmod q^{{{N + 1}}}")
        return " \\\\\n".join(lines)
    return "\n".join(f"Pi({'dx1, 0' if k == 'dx1' else '0, dx2'}) = ({v[0]}, {v[1]}) mod q^{N + 1}"
                     for k, v in classes.items())


def _emit_witt(args):
    if args.i is None or args.j is None:
        raise UsageError("witt needs -i and -j")
    i, j = args.i, args.j
    N = max(abs(i), abs(j)) if args.order is None else args.order
    K = max(1, abs(i) + abs(j)) if args.window is None else args.window
    try:
        w = witt_bracket(i, j, NodeContext(N, K))
    except (SeriesError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        return _dump({"kind": "witt", "i": i, "j": j, "N": N, "bracket": w.to_json()})
    text = str(w)
    if args.format == "latex":
        text = re.sub(r"M_(-?\d+)", r"M_{\1}", text).replace("·", " ")
        text = re.sub(r"q\^(\d+)", r"q^{\1}", text)
        return rf"[M_{{{i}}}, M_{{{j}}}] = {text}"
    return text


_EMITTERS = {"wp": _emit_wp, "fdiff": _emit_fdiff, "recursion": _emit_recursion,
             "period": _emit_period, "witt": _emit_witt}


def emit(kind: str, args) -> str:
    if kind not in _EMITTERS:
        raise UsageError(f"unknown kind {kind!r}")
    for name in ("order", "window"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise UsageError(f"--{name} must be >= 0")
    return _EMITTERS[kind](args)


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clutch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an invariant suite and print a JSON report")
    v.add_argument("suite", choices=SUITE_NAMES + ("all",))
    v.add_argument("-N", "--order", type=int, default=None, help="q-order")
    v.add_argument("-K", "--window", type=int, default=None, help="x-window")
    v.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    v.add_argument("--out", help="also write the report to this file")
    v.add_argument("--timing", action="store_true", help="include wall time (not reproducible)")

    e = sub.add_parser("emit", help="print a computed object")
    e.add_argument("kind", choices=EMIT_KINDS)
    e.add_argument("-N", "--order", type=int, default=None, help="q-order")
    e.add_argument("-K", "--window", type=int, default=None, help="z-window")
    e.add_argument("--n", type=int, default=None, help="pole order for fdiff")
    e.add_argument("-i", type=int, default=None, help="first Witt index")
    e.add_argument("-j", type=int, default=None, help="second Witt index")
    e.add_argument("--g1", type=int, default=None, help="genus of the first curve (symbolic periods)")
    e.add_argument("--g2", type=int, default=None, help="genus of the second curve (symbolic periods)")
    e.add_argument("--format", choices=FORMATS, default="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return 2 if exc.code else 0
    try:
        if args.command == "verify":
            for name in ("order", "window"):
                val = getattr(args, name)
                if val is not None and val < (0 if name == "order" else 1):
                    raise UsageError(f"--{name} out of range")
            report, status = run_verify(args.suite, args.order, args.window, args.seed, args.timing)
            text = _dump(report)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text + "\n")
            print(text)
            return status
        print(emit(args.kind, args))
        return 0
    except UsageError as exc:
        print(f"clutch: error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:  # console script wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
