"""Command-line front end.

Every subcommand prints a JSON report (command, config, payload,
trust_degree, elapsed_seconds) and optionally writes it to ``--out``.

Exit codes: 0 ok, 1 configuration or parse error, 2 axiom failure,
3 not an automorphism, 4 not of strong CFT type.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from typing import List

from . import autgroup, bform, conformal
from .endo import Endo
from .errors import (ConfigError, NotAutomorphism, NotInJ1, NotStrongCFT, ParseError,
                     TruncationExceeded)
from .fock import AlgebraConfig, format_scalar
from .modes import HeisenbergVOA, run_axiom_suite
from .syntax import parse_vector

EXIT_OK, EXIT_CONFIG, EXIT_AXIOM, EXIT_NOT_AUT, EXIT_NOT_SCFT = 0, 1, 2, 3, 4


class CommandFailed(Exception):
    """Carries a report together with a nonzero exit code."""

    def __init__(self, code, payload):
        super().__init__(payload.get("error", ""))
        self.code = code
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1, not argparse's 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


# -- endomorphism expressions ------------------------------------------------------


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


_CALL = re.compile(r"^(\w+)\s*\((.*)\)$", re.S)


def build_endo(voa, text: str) -> Endo:
    """Compose factors separated by top-level '*', applied right to left.

    Factors: ``id``, ``sigma``, ``exp(<vector in J_1>)``, ``perm(2,1)``
    (one-line notation, 1-based), ``signs(1,-1)`` and ``orth(a,b;c,d)``
    (rows of a rational orthogonal matrix).
    """
    result = None
    for factor in _split_top(text, "*"):
        f = _endo_factor(voa, factor)
        result = f if result is None else result @ f
    if result is None:
        raise ParseError("empty endomorphism expression")
    return result


def _endo_factor(voa, text: str) -> Endo:
    if text in ("id", "1"):
        return Endo.identity(voa)
    if text == "sigma":
        return autgroup.sign_automorphism(voa)
    m = _CALL.match(text)
    if not m:
        raise ParseError(f"unknown endomorphism factor {text!r}")
    name, arg = m.group(1), m.group(2)
    r = voa.rank
    try:
        if name == "exp":
            return autgroup.exp_j1(voa, parse_vector(arg, voa))
        if name in ("perm", "signs"):
            vals = [int(x) for x in _split_top(arg, ",")]
            if len(vals) != r:
                raise ParseError(f"{name} needs {r} entries")
            if name == "perm":
                if sorted(vals) != list(range(1, r + 1)):
                    raise ParseError("perm needs a permutation of 1..rank")
                mat = autgroup.signed_permutation_matrix([v - 1 for v in vals], [1] * r)
            else:
                if any(v not in (1, -1) for v in vals):
                    raise ParseError("signs must be +1 or -1")
                mat = autgroup.signed_permutation_matrix(list(range(r)), vals)
            return autgroup.orthogonal_lift(voa, mat)
        if name == "orth":
            rows = [[_fraction(x) for x in _split_top(row, ",")] for row in _split_top(arg, ";")]
            return autgroup.orthogonal_lift(voa, rows)
    except (ValueError, ConfigError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown endomorphism factor {name!r}")


def _load_endo(voa, path: str) -> Endo:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read endomorphism file {path}: {exc}") from exc
    if "blocks" not in data and "payload" in data:
        data = data["payload"].get("endo", data)
    try:
        return Endo.from_json(voa, data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"malformed endomorphism file {path}: {exc}") from exc


def _write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- commands ---------------------------------------------------------------------


def cmd_verify_axioms(voa, args):
    rep = run_axiom_suite(voa, indices=range(args.lo, args.hi + 1),
                          pair_degree=args.pair_degree, triple_degree=args.triple_degree)
    payload = {"ok": rep.ok, "checks": rep.to_json()}
    if not rep.ok:
        raise CommandFailed(EXIT_AXIOM, payload)
    return payload, voa.max_degree


def cmd_check_conformal(voa, args):
    a = parse_vector(args.vector, voa)
    rep = conformal.conformal_report(voa, a)
    payload = {"vector": a.to_text(), "report": rep.to_json()}
    return payload, rep.trust_degree


def _classify_samples(voa, args):
    samples = []
    th = voa.translate(voa.h(1))
    for s in (args.s.split(",") if args.s else []):
        samples.append(voa.omega + th * _fraction(s))
    for text in args.vectors or []:
        samples.append(parse_vector(text, voa))
    if not samples:
        raise ParseError("classify-v2 needs --s values or --vectors")
    return samples


def cmd_classify_v2(voa, args):
    samples = _classify_samples(voa, args)
    rep = autgroup.classify_v2(voa, samples)
    return rep.to_json(), voa.max_degree


def cmd_decompose(voa, args):
    if args.endo_file:
        f = _load_endo(voa, args.endo_file)
    elif args.endo:
        f = build_endo(voa, args.endo)
    else:
        raise ParseError("decompose needs an endomorphism file or --endo")
    try:
        d = autgroup.decompose(f)
    except NotAutomorphism as exc:
        raise CommandFailed(EXIT_NOT_AUT, {"error": str(exc)}) from exc
    payload = d.summary()
    payload.update(g=d.g.to_json(), h=d.h.to_json(), k=d.k.to_json())
    return payload, d.trust_degree


def cmd_conjugate(voa, args):
    a = parse_vector(args.vector, voa)
    try:
        f = autgroup.conjugate_to_omega(voa, a)
    except NotStrongCFT as exc:
        raise CommandFailed(EXIT_NOT_SCFT, {"error": str(exc), "vector": a.to_text()}) from exc
    payload = {"vector": a.to_text(), "image_of_omega": f(voa.omega).to_text(),
               "endo": f.to_json()}
    u = a.project(1)
    payload["equals_exp_pr1"] = f == autgroup.exp_j1(voa, u)
    if args.endo_out:
        _write_json(args.endo_out, f.to_json())
    return payload, f.trust_degree


def cmd_build_endo(voa, args):
    f = build_endo(voa, args.expr)
    mem = autgroup.membership(f)
    if args.endo_out:
        _write_json(args.endo_out, f.to_json())
    return {"expr": args.expr, "membership": mem.to_json(), "endo": f.to_json()}, f.trust_degree


def cmd_membership(voa, args):
    f = _load_endo(voa, args.endo_file)
    mem = autgroup.membership(f, exhaustive=args.exhaustive)
    if not mem.is_aut:
        raise CommandFailed(EXIT_NOT_AUT, {"membership": mem.to_json(), "error": mem.failure})
    return {"membership": mem.to_json()}, f.trust_degree


def cmd_mode(voa, args):
    a = parse_vector(args.a, voa)
    b = parse_vector(args.b, voa)
    out, gap = voa.mode_with_gap(a, args.n, b)
    if gap and not args.truncate:
        raise TruncationExceeded(f"a({args.n})b leaves V_<=N; pass --truncate to drop the excess")
    return {"a": a.to_text(), "n": args.n, "b": b.to_text(), "result": out.to_text(),
            "truncated": gap, "json": out.to_json()}, voa.max_degree


def cmd_gram(voa, args):
    degrees = range(args.degree, args.degree + 1) if args.up_to is None else range(args.up_to + 1)
    grams = {}
    for n in degrees:
        grams[str(n)] = [[format_scalar(x) for x in row] for row in bform.gram(voa, n)]
    pos = bform.is_positive_definite(voa, max(degrees))
    return {"gram": grams, "positivity": pos.to_json()}, voa.max_degree


def cmd_positivity(voa, args):
    up_to = voa.max_degree if args.up_to is None else args.up_to
    pos = bform.is_positive_definite(voa, up_to)
    payload = {"positivity": pos.to_json()}
    if pos:
        payload["pos_l"] = bform.verify_pos_l(voa, up_to, args.trials, args.seed).to_json()
        payload["no_high_conformal"] = bform.no_high_conformal(
            voa, up_to, args.trials, args.seed).to_json()
    return payload, voa.max_degree


COMMANDS = {
    "verify-axioms": cmd_verify_axioms,
    "check-conformal": cmd_check_conformal,
    "classify-v2": cmd_classify_v2,
    "decompose": cmd_decompose,
    "conjugate": cmd_conjugate,
    "build-endo": cmd_build_endo,
    "membership": cmd_membership,
    "mode": cmd_mode,
    "gram": cmd_gram,
    "positivity": cmd_positivity,
}


def _add_common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--rank", type=int, default=d(1), help="number of free bosons (default 1)")
    p.add_argument("--level", default=d("1"), help="level kappa as p/q (default 1)")
    p.add_argument("--max-degree", type=int, default=d(6), help="truncation degree N (default 6)")
    p.add_argument("--out", default=d(None), help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="voakit", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-axioms", parents=[common], help="run the axiom suite")
    p.add_argument("--lo", type=int, default=-4)
    p.add_argument("--hi", type=int, default=4)
    p.add_argument("--pair-degree", type=int, default=None)
    p.add_argument("--triple-degree", type=int, default=3)

    p = sub.add_parser("check-conformal", parents=[common], help="full conformal report")
    p.add_argument("vector")

    p = sub.add_parser("classify-v2", parents=[common], help="orbit table of V_2 vectors")
    p.add_argument("--s", help="comma-separated parameters s for omega + s*T(h1), e.g. 0,1/2,-1/2")
    p.add_argument("--vectors", nargs="*", help="vector literals")

    p = sub.add_parser("decompose", parents=[common], help="factor f = g h k")
    p.add_argument("endo_file", nargs="?")
    p.add_argument("--endo", help="endomorphism expression instead of a file")

    p = sub.add_parser("conjugate", parents=[common], help="automorphism sending omega to a")
    p.add_argument("vector")
    p.add_argument("--endo-out", help="write the witness automorphism here")

    p = sub.add_parser("build-endo", parents=[common], help="build and save an endomorphism")
    p.add_argument("expr", help="e.g. 'exp(h1)*sigma'")
    p.add_argument("--endo-out")

    p = sub.add_parser("membership", parents=[common], help="automorphism test for a saved endo")
    p.add_argument("endo_file")
    p.add_argument("--exhaustive", action="store_true")

    p = sub.add_parser("mode", parents=[common], help="evaluate a(n)b")
    p.add_argument("a")
    p.add_argument("n", type=int)
    p.add_argument("b")
    p.add_argument("--truncate", action="store_true")

    p = sub.add_parser("gram", parents=[common], help="Gram matrices of the pairing")
    p.add_argument("degree", type=int, nargs="?", default=1)
    p.add_argument("--up-to", type=int, default=None)

    p = sub.add_parser("positivity", parents=[common], help="positivity suite of the pairing")
    p.add_argument("--up-to", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv=None):
    """Parse ``argv`` and execute; returns (exit code, report dict)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    report = {"command": args.command, "config": None}
    try:
        config = AlgebraConfig(rank=args.rank, level=_fraction(args.level),
                               max_degree=args.max_degree)
        report["config"] = config.to_json()
        voa = HeisenbergVOA(config)
        payload, trust = COMMANDS[args.command](voa, args)
        code = EXIT_OK
    except CommandFailed as exc:
        payload, trust, code = exc.payload, None, exc.code
    except NotAutomorphism as exc:
        payload, trust, code = {"error": str(exc)}, None, EXIT_NOT_AUT
    except (ConfigError, ParseError, NotInJ1, TruncationExceeded) as exc:
        payload, trust, code = {"error": f"{type(exc).__name__}: {exc}"}, None, EXIT_CONFIG
    report.update(payload=payload, trust_degree=trust, exit_code=code,
                  elapsed_seconds=round(time.perf_counter() - start, 3))
    return code, report, args.out


def main(argv=None) -> int:
    code, report, out = run(argv)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
