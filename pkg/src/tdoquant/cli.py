"""Command line: ``python3 -m tdoquant {verify,cohomology,oracle} ...``.

Exit status 0 when no check failed, 1 when one did, 2 on malformed input.
Reports are canonical: sorted keys, rationals as "p/q" strings, no timings,
so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import __version__, suites
from .exact import Poly
from .parse import ParseError, infer_nvars, parse_poly
from .weyl import OneForm, parse_one_form
from .window import TruncationWindow

SCHEMA = 1

VERIFY = ("hochschild", "braces", "cup", "phi", "torsor", "bar", "main-theorem", "bv")
COHOMOLOGY = ("diff-complex", "koszul", "twisted-derham")
ORACLE = ("jacobian", "weyl-window")

# per-suite defaults for flags left unset: (order, arity, degree cap, bar length)
_DEFAULTS = {
    "hochschild": (2, 3, 3, 2),
    "braces": (2, 3, 3, 2),
    "cup": (2, 3, 3, 2),
    "phi": (3, 3, 3, 2),
    "torsor": (3, 3, 3, 2),
    "bar": (1, 2, 3, 2),
    "main-theorem": (1, 2, 3, 2),
    "bv": (2, 3, 3, 2),
    "diff-complex": (3, 3, 3, 2),
    "koszul": (2, 3, 8, 2),
    "twisted-derham": (2, 3, 8, 2),
    "jacobian": (2, 3, 10, 2),
    "weyl-window": (1, 2, 3, 2),
}


class InputError(ValueError):
    """Malformed polynomial, twist or flag combination."""


@dataclass(frozen=True)
class SuiteConfig:
    group: str
    suite: str
    window: TruncationWindow
    twist: str | None
    f: str | None
    seed: int
    format: str

    def echo(self) -> dict:
        w = self.window
        return {"suite": f"{self.group} {self.suite}", "vars": w.nvars, "order": w.order_cap,
                "arity": w.arity_cap, "degree_cap": w.degree_cap, "bar_length": w.bar_length_cap,
                "weight": w.bernstein_weight, "twist": self.twist, "f": self.f, "seed": self.seed}


def canonical(obj):
    """JSON-ready copy: Fractions as "p/q", dict keys as strings, tuples as lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return str(obj)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdoquant", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tdoquant {__version__}")
    groups = p.add_subparsers(dest="group", required=True)
    for name, choices in (("verify", VERIFY), ("cohomology", COHOMOLOGY), ("oracle", ORACLE)):
        g = groups.add_parser(name)
        g.add_argument("suite", choices=choices)
        g.add_argument("--vars", type=int, default=None, help="number of variables")
        g.add_argument("--order", type=int, default=None, help="total derivation order cap")
        g.add_argument("--arity", type=int, default=None, help="cochain arity cap")
        g.add_argument("--degree-cap", type=int, default=None, help="polynomial degree cap")
        g.add_argument("--bar-length", type=int, default=None, help="bar word length cap")
        g.add_argument("--weight", type=int, default=None, help="Bernstein weight slice")
        g.add_argument("--twist", default=None, help="one-form nu, e.g. 'x^2*dy'")
        g.add_argument("--f", default=None, help="polynomial potential, e.g. 'x^3+y^3'")
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--format", choices=("text", "json"), default="text")
        g.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def _config(args: argparse.Namespace) -> SuiteConfig:
    order, arity, dcap, blen = _DEFAULTS[args.suite]
    nvars = args.vars
    if nvars is None:
        texts = [t for t in (args.f, args.twist) if t]
        nvars = max((infer_nvars(t) for t in texts), default=1)
    if not 0 <= args.seed < 2 ** 64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    try:
        window = TruncationWindow(
            nvars=nvars,
            order_cap=args.order if args.order is not None else order,
            arity_cap=args.arity if args.arity is not None else arity,
            degree_cap=args.degree_cap if args.degree_cap is not None else dcap,
            bernstein_weight=args.weight,
            bar_length_cap=args.bar_length if args.bar_length is not None else blen,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return SuiteConfig(args.group, args.suite, window, args.twist, args.f, args.seed, args.format)


def _twist(cfg: SuiteConfig) -> OneForm | None:
    if cfg.twist is None:
        return None
    return parse_one_form(cfg.twist, cfg.window.nvars)


def _poly(cfg: SuiteConfig, required: bool = True) -> Poly | None:
    if cfg.f is None:
        if required:
            raise InputError(f"{cfg.suite} needs --f")
        return None
    return parse_poly(cfg.f, cfg.window.nvars)


def dispatch(cfg: SuiteConfig) -> list[suites.CheckRecord]:
    w, s = cfg.window, cfg.suite
    nu = _twist(cfg)
    seed = cfg.seed
    if cfg.group == "verify":
        if s == "hochschild":
            return suites.hochschild_suite(w, nu, seed)
        if s == "braces":
            return suites.brace_suite(w, seed)
        if s == "cup":
            return suites.cup_suite(w, nu, seed)
        if s == "phi":
            return suites.phi_suite(w, nu, seed)
        if s == "torsor":
            return suites.torsor_suite(w, nu, seed)
        if s == "bar":
            return suites.bar_suite(w, nu, seed)
        if s == "main-theorem":
            return suites.main_theorem_suite(w, nu, seed)
        if s == "bv":
            return suites.bv_suite(w, _poly(cfg, required=False), seed)
    if cfg.group == "cohomology":
        if s == "diff-complex":
            return suites.diff_complex_suite(w, nu)
        if s == "koszul":
            return suites.koszul_suite(_poly(cfg), w.degree_cap)
        if s == "twisted-derham":
            return suites.twisted_derham_suite(_poly(cfg), w.degree_cap)
    if cfg.group == "oracle":
        if s == "jacobian":
            return suites.jacobian_oracle(_poly(cfg), w.degree_cap)
        if s == "weyl-window":
            return suites.weyl_window_oracle(w, nu)
    raise InputError(f"unknown suite {cfg.group} {s}")


def make_report(cfg: SuiteConfig, records: Sequence[suites.CheckRecord]) -> dict:
    summary = {k: sum(r.status == k for r in records) for k in suites.STATUSES}
    return canonical({
        "schema": SCHEMA,
        "tool": {"name": "tdoquant", "version": __version__},
        "config": cfg.echo(),
        "checks": [{"id": r.id, "status": r.status, "data": r.data} for r in records],
        "summary": summary,
    })


def _text_value(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    cfg = report["config"]
    lines = [f"tdoquant {report['tool']['version']}  {cfg['suite']}  "
             + " ".join(f"{k}={_text_value(cfg[k])}" for k in sorted(cfg) if k != "suite" and cfg[k] is not None)]
    for c in report["checks"]:
        detail = "  ".join(f"{k}={_text_value(v)}" for k, v in sorted(c["data"].items()))
        lines.append(f"{c['status'].upper():<12} {c['id']}" + (f"  {detail}" if detail else ""))
    s = report["summary"]
    lines.append(f"summary: {s['pass']} passed, {s['fail']} failed, {s['provisional']} provisional")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (int(exc.code) if exc.code is not None else 0), None
    try:
        cfg = _config(args)
        records = dispatch(cfg)
    except (ParseError, InputError, KeyError) as exc:
        print(f"tdoquant: input error: {exc}", file=sys.stderr)
        return 2, None
    except ValueError as exc:
        # raised by the text parsers for malformed one-forms and the like
        print(f"tdoquant: input error: {exc}", file=sys.stderr)
        return 2, None
    report = make_report(cfg, records)
    text = render(report, cfg.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report["summary"]["provisional"]:
        print(f"tdoquant: warning: {report['summary']['provisional']} provisional check(s)", file=sys.stderr)
    return (1 if report["summary"]["fail"] else 0), report


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
