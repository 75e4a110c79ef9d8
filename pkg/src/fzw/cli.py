"""Command line entry point.

Exit codes: 0 success, 1 parse or input error, 2 arity or parity error,
3 capacity error, 4 an inequality or failed check.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import axioms, circuits, dualrail, dsl, normalform
from .errors import ArityError, CapacityError, MixedParityError, OddParityError, ParseError
from .evaluate import evaluate
from .linalg import DEFAULT_TOL, MAX_WIRES, bits, dump, format_real

EXIT_PARSE, EXIT_ARITY, EXIT_CAPACITY, EXIT_CHECK = 1, 2, 3, 4
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class Config:
    tolerance: float = DEFAULT_TOL
    max_wires: int = MAX_WIRES
    output: str = "text"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 0 < self.max_wires <= MAX_WIRES:
            raise ValueError(f"max_wires must be between 1 and {MAX_WIRES}")
        if self.output not in FORMATS:
            raise ValueError(f"output format must be one of {', '.join(FORMATS)}")


def human(x: float) -> str:
    x = float(x)
    return "0" if x == 0 else format(x, ".6g")


def human_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return human(z.real)
    if z.real == 0:
        return human(z.imag) + "i"
    im = human(z.imag)
    return human(z.real) + ("" if im.startswith("-") else "+") + im + "i"


def _read_term(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 0, 0) from None
    try:
        return dsl.parse(text)
    except ParseError as exc:
        exc.path = path
        raise
    except ArityError as exc:
        raise ArityError(f"{path}: {exc}") from None


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


# Commands ---------------------------------------------------------------------------

def cmd_eval(path: str, cfg: Config) -> tuple[int, str]:
    t = _read_term(path)
    m = evaluate(t, cfg.max_wires)
    if cfg.output == "json":
        nz = zip(*np.nonzero(np.abs(m.entries) > cfg.tolerance))
        entries = [{"row": bits(int(r), m.n_out), "col": bits(int(c), m.n_in),
                    "re": float(m.entries[r, c].real), "im": float(m.entries[r, c].imag)} for r, c in nz]
        doc = {"n_in": m.n_in, "n_out": m.n_out, "parity": m.parity.value, "entries": entries}
        return 0, json.dumps(doc) + "\n"
    if cfg.output == "csv":
        rows = [("row", "col", "re", "im")]
        for line in dump(m, cfg.tolerance).splitlines():
            rows.append(tuple(line.split()))
        return 0, _csv(rows)
    return 0, dump(m, cfg.tolerance)


def cmd_normalize(path: str, cfg: Config) -> tuple[int, str]:
    t = _read_term(path)
    nf, n_in, n_out = normalform.normalize(t, cfg.tolerance)
    if cfg.output == "json":
        return 0, json.dumps(nf.to_dict()) + "\n"
    if cfg.output == "csv":
        rows = [("bits", "re", "im")] + [(p, format_real(z.real), format_real(z.imag)) for z, p in nf.whites]
        return 0, _csv(rows)
    lines = [f"wires {nf.n_outputs} ({n_in} inputs bent, {n_out} outputs) parity {nf.parity.value}"]
    lines += [f"{p or '-'} {human_complex(z)}" for z, p in nf.whites]
    return 0, "\n".join(lines) + "\n"


def cmd_equal(path_a: str, path_b: str, cfg: Config) -> tuple[int, str]:
    a, b = _read_term(path_a), _read_term(path_b)
    same = normalform.equal(a, b, cfg.tolerance)
    if cfg.output == "json":
        return (0 if same else EXIT_CHECK), json.dumps({"equal": same}) + "\n"
    return (0 if same else EXIT_CHECK), ("equal\n" if same else "not equal\n")


def cmd_axioms_check(cfg: Config, group: str | None = None) -> tuple[int, str]:
    reports = axioms.check_all(cfg.tolerance, group)
    failed = [r for r in reports if not r.passed]
    if cfg.output == "json":
        doc = {"total": len(reports), "failed": len(failed),
               "rules": [{"rule": r.rule, "group": r.group, "deviation": r.deviation, "passed": r.passed}
                         for r in reports]}
        return (EXIT_CHECK if failed else 0), json.dumps(doc) + "\n"
    if cfg.output == "csv":
        rows = [("rule", "group", "deviation", "passed")]
        rows += [(r.rule, r.group, format_real(r.deviation), "pass" if r.passed else "fail") for r in reports]
        return (EXIT_CHECK if failed else 0), _csv(rows)
    by_name: dict[str, list] = {}
    for r in reports:
        by_name.setdefault(r.rule.split("[")[0], []).append(r)
    width = max(len(k) for k in by_name)
    lines = [f"{'rule':<{width}}  {'group':<12}  {'inst':>4}  {'max dev':>10}  result"]
    for name, rs in by_name.items():
        worst = max(x.deviation for x in rs)
        ok = all(x.passed for x in rs)
        lines.append(f"{name:<{width}}  {rs[0].group:<12}  {len(rs):>4}  {human(worst):>10}  {'pass' if ok else 'FAIL'}")
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} instances pass at tolerance {human(cfg.tolerance)}")
    return (EXIT_CHECK if failed else 0), "\n".join(lines) + "\n"


def cmd_axioms_list(group: str | None = None) -> tuple[int, str]:
    lines = []
    for s in axioms.schemes():
        if group in (None, s.group):
            n = sum(1 for _ in s.instances())
            lines.append(f"{s.name}\t{s.group}\t{n}\t{s.doc}".rstrip())
    return 0, "\n".join(lines) + "\n"


def parse_complex(text: str) -> complex:
    p = dsl._Parser(text)
    z = p.complex_()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return z


def cmd_mach_zehnder(theta: float, r: complex, t: complex, r2: complex, t2: complex,
                     sweep: int | None, cfg: Config) -> tuple[int, str]:
    thetas = [theta] if not sweep else [2 * math.pi * k / sweep for k in range(sweep + 1)]
    rows = [(th, *circuits.mach_zehnder(r, t, r2, t2, th)) for th in thetas]
    if cfg.output == "json":
        doc = [{"theta": th, "p_left": a, "p_right": b} for th, a, b in rows]
        return 0, json.dumps(doc) + "\n"
    if cfg.output == "text":
        return 0, "".join(f"theta={human(th)} p_left={human(a)} p_right={human(b)}\n" for th, a, b in rows)
    return 0, _csv([("theta", "p_left", "p_right")] + [tuple(format_real(x) for x in row) for row in rows])


def cmd_dualrail(gate: str, args: Sequence[str], cfg: Config) -> tuple[int, str]:
    key = gate.lower()
    if key == "zphase":
        if len(args) != 1:
            raise ArityError("zphase takes one angle")
        params: tuple = (float(args[0]),)
    elif key == "zspider":
        if len(args) != 2:
            raise ArityError("zspider takes two leg counts")
        params = (int(args[0]), int(args[1]))
    else:
        if args:
            raise ArityError(f"{gate} takes no parameters")
        params = ()
    rep = dualrail.gate_report(key, *params)
    ok = rep.deviation <= cfg.tolerance
    if cfg.output == "json":
        doc = {"gate": key, "term": dsl.format_term(rep.term),
               "scalar": {"re": rep.scalar.real, "im": rep.scalar.imag},
               "logical": [[{"re": z.real, "im": z.imag} for z in row] for row in rep.logical.entries],
               "deviation": rep.deviation}
        return (0 if ok else EXIT_CHECK), json.dumps(doc) + "\n"
    rows = "\n".join("  [" + ", ".join(human_complex(z) for z in row) + "]" for row in rep.logical.entries)
    out = (f"term: {dsl.format_term(rep.term)}\n"
           f"logical:\n{rows}\n"
           f"scalar: {human_complex(rep.scalar)}\n"
           f"deviation from scalar * standard gate: {human(rep.deviation)}\n")
    return (0 if ok else EXIT_CHECK), out


def cmd_render(path: str, fmt: str) -> tuple[int, str]:
    from .render import to_dot

    if fmt != "dot":
        raise ValueError(f"unsupported render format {fmt!r}")
    return 0, to_dot(_read_term(path))


# Argument parsing -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="absolute tolerance (default 1e-10)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format")
    p.add_argument("--max-wires", type=int, default=argparse.SUPPRESS, help="dense wire limit (at most 14)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fzw", parents=[common],
                                     description="Evaluate, normalize and check fermionic string diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="print the nonzero matrix entries of a diagram")
    p.add_argument("file")
    p = sub.add_parser("normalize", parents=[common], help="print the normal form of a diagram")
    p.add_argument("file")
    p = sub.add_parser("equal", parents=[common], help="decide whether two diagrams are equal")
    p.add_argument("file_a")
    p.add_argument("file_b")

    p = sub.add_parser("axioms", parents=[common], help="inspect the rule catalogue")
    asub = p.add_subparsers(dest="action", required=True)
    a = asub.add_parser("check", parents=[common], help="check every rule instance numerically")
    a.add_argument("--group", choices=axioms.GROUPS)
    a = asub.add_parser("list", parents=[common], help="list rule schemes")
    a.add_argument("--group", choices=axioms.GROUPS)

    p = sub.add_parser("mach-zehnder", parents=[common], help="interferometer detection probabilities")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--r", default="0.70710678118654757", help="second splitter reflectivity")
    p.add_argument("--t", default="0.70710678118654757i", help="second splitter transmissivity")
    p.add_argument("--r2", default="0.70710678118654757", help="first splitter reflectivity")
    p.add_argument("--t2", default="0.70710678118654757i", help="first splitter transmissivity")
    p.add_argument("--sweep", type=int, help="tabulate N+1 phases evenly over [0, 2 pi]")

    p = sub.add_parser("dualrail", parents=[common], help="dual-rail logical gates")
    dsub = p.add_subparsers(dest="action", required=True)
    g = dsub.add_parser("gate", parents=[common], help="show a logical gate construction")
    g.add_argument("gate", choices=("h", "zphase", "cz", "zspider"))
    g.add_argument("params", nargs="*")

    p = sub.add_parser("render", parents=[common], help="export a diagram for Graphviz")
    p.add_argument("file")
    p.add_argument("--to", default="dot", choices=("dot",), help="render format")
    return parser


def _config(ns: argparse.Namespace) -> Config:
    fmt = getattr(ns, "format", "text")
    if getattr(ns, "json", False):
        fmt = "json"
    return Config(getattr(ns, "tol", DEFAULT_TOL), getattr(ns, "max_wires", MAX_WIRES), fmt)


def run(ns: argparse.Namespace) -> tuple[int, str]:
    cfg = _config(ns)
    c = ns.command
    if c == "eval":
        return cmd_eval(ns.file, cfg)
    if c == "normalize":
        return cmd_normalize(ns.file, cfg)
    if c == "equal":
        return cmd_equal(ns.file_a, ns.file_b, cfg)
    if c == "axioms":
        if ns.action == "check":
            return cmd_axioms_check(cfg, ns.group)
        return cmd_axioms_list(ns.group)
    if c == "mach-zehnder":
        if not hasattr(ns, "format") and not getattr(ns, "json", False):
            cfg = replace(cfg, output="csv")  # the table is CSV unless asked otherwise
        values = [parse_complex(x) for x in (ns.r, ns.t, ns.r2, ns.t2)]
        return cmd_mach_zehnder(ns.theta, *values, ns.sweep, cfg)
    if c == "dualrail":
        return cmd_dualrail(ns.gate, ns.params, cfg)
    return cmd_render(ns.file, ns.to)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors as 2, which we reserve
        return EXIT_PARSE if exc.code else 0
    try:
        code, out = run(ns)
    except ParseError as exc:
        where = f"{exc.path}: " if getattr(exc, "path", None) else ""
        print(f"fzw: {where}parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ArityError, MixedParityError, OddParityError) as exc:
        print(f"fzw: {exc}", file=sys.stderr)
        return EXIT_ARITY
    except CapacityError as exc:
        print(f"fzw: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"fzw: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
