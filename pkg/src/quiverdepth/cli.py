"""Command-line entry point.

Exit codes: 0 resolved, 3 depth only bounded below at the cutoff,
1 usage error, 2 invalid input, 4 paper-suite failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .algebra import Algebra, AlgebraError, SubalgebraEmbedding, parse_vector, path_algebra, subalgebra_closure
from .bimodule import TensorChain
from .depth import DepthConfig, DepthEngine, DepthReport
from .exactlin import FieldSpec
from .families import arrow_subalgebra, diagonal_subalgebra, jordan_subalgebra, top_subalgebra
from .quiver import (
    Quiver, QuiverError, branched_tree_quiver, kronecker_quiver, linear_quiver, parse_quiver,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_UNRESOLVED, EXIT_SUITE = 0, 1, 2, 3, 4
SUBS = ("top", "arrow", "diagonal", "jordan", "custom")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class JobSpec:
    quiver: Quiver
    family: Optional[str]
    sub: str
    generators_file: Optional[str]
    field: FieldSpec
    cutoff: int
    fmt: str


# --- job construction ------------------------------------------------------

def named_quiver(name: str) -> Quiver:
    m = re.fullmatch(r"[Tt](\d+)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise InputError("T<n> needs n >= 1")
        return linear_quiver(n)
    if name.lower() == "kronecker":
        return kronecker_quiver()
    if name.lower() == "tree":
        return branched_tree_quiver()
    raise InputError(f"unknown family {name!r}; expected T<n>, kronecker or tree")


def _is_linear(q: Quiver) -> bool:
    return q == linear_quiver(q.n_vertices)


def parse_generators(a: Algebra, text: str) -> list:
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            gens.append(parse_vector(a, line))
        except AlgebraError as exc:
            raise InputError(f"generator line {lineno}: {exc}") from None
    return gens


def build_extension(job: JobSpec) -> SubalgebraEmbedding:
    try:
        a = path_algebra(job.quiver, job.field)
    except (QuiverError, AlgebraError) as exc:
        raise InputError(str(exc)) from None
    if job.sub == "top":
        return top_subalgebra(a)
    if job.sub == "arrow":
        return arrow_subalgebra(a)
    if job.sub == "diagonal":
        return diagonal_subalgebra(a)
    if job.sub == "jordan":
        if not _is_linear(job.quiver):
            raise InputError("--sub jordan is only defined for the linear quivers T<n>")
        return jordan_subalgebra(job.quiver.n_vertices, job.field, ambient=a)
    try:
        text = Path(job.generators_file).read_text()
    except OSError as exc:
        raise InputError(f"cannot read generator file: {exc}") from None
    # the unit is always adjoined so the subalgebra is unital
    return subalgebra_closure(a, [a.unit] + parse_generators(a, text))


def job_from_args(ns) -> JobSpec:
    if (ns.family is None) == (ns.quiver is None):
        raise UsageError("give exactly one of --family and --quiver")
    sub = ns.sub[0]
    if sub not in SUBS:
        raise UsageError(f"--sub must be one of {', '.join(SUBS)}")
    gen_file = None
    if sub == "custom":
        if len(ns.sub) != 2:
            raise UsageError("--sub custom needs a generator file")
        gen_file = ns.sub[1]
    elif len(ns.sub) != 1:
        raise UsageError(f"--sub {sub} takes no file")
    try:
        field = FieldSpec.parse(ns.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if ns.cutoff < 1:
        raise UsageError("--cutoff must be >= 1")
    if ns.family is not None:
        q = named_quiver(ns.family)
    else:
        try:
            q = parse_quiver(Path(ns.quiver).read_text())
        except OSError as exc:
            raise InputError(f"cannot read quiver file: {exc}") from None
        except QuiverError as exc:
            raise InputError(f"{ns.quiver}: {exc}") from None
    return JobSpec(q, ns.family, sub, gen_file, field, ns.cutoff, ns.format)


# --- rendering -------------------------------------------------------------

def _cell(v) -> str:
    return "" if v is None else str(v).lower()


def _depth_text(d) -> str:
    return "unknown" if d is None else str(d)


def render_report(r: DepthReport, fmt: str) -> str:
    if fmt == "json":
        return r.dumps() + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in ("min_depth", "odd_depth", "h_depth"):
            w.writerow([k, _depth_text(getattr(r, k))])
        w.writerow(["depth1", _cell(r.depth1)])
        w.writerow(["cutoff", r.cutoff])
        w.writerow(["field", r.field])
        w.writerow([])
        w.writerow(["n", "AA", "AB", "BA", "BB"])
        for f in r.flags:
            w.writerow([f.n] + [_cell(f.values[k]) for k in ("AA", "AB", "BA", "BB")])
        return buf.getvalue()
    lines = [
        f"minimum depth: {r.min_depth}",
        f"odd depth:     {_depth_text(r.odd_depth)}",
        f"H-depth:       {_depth_text(r.h_depth)}",
        f"depth one:     {r.depth1} (B | A: {r.depth1_reverse})",
        f"field {r.field}, cutoff {r.cutoff}",
        "flags (C_{n+1} in add(C_n)):",
    ]
    for f in r.flags:
        cells = []
        for k in ("AA", "AB", "BA", "BB"):
            v = f.values[k]
            tag = "-" if v is None else ("yes" if v else "no")
            if k in f.derived:
                tag += f" ({f.derived[k]})"
            cells.append(f"{k}={tag}")
        lines.append(f"  n={f.n}: " + "  ".join(cells))
    return "\n".join(lines) + "\n"


def render_rows(header: Sequence[str], rows: List[Sequence], fmt: str, note: Optional[str] = None) -> str:
    if fmt == "json":
        out = {"rows": [dict(zip(header, r)) for r in rows]}
        if note:
            out["note"] = note
        return json.dumps(out) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if note:
            buf.write(f"# {note}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    width = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = [note] if note else []
    for r in [header] + list(rows):
        lines.append("  ".join(str(x).rjust(k) for x, k in zip(r, width)))
    return "\n".join(lines) + "\n"


# --- commands --------------------------------------------------------------

def cmd_depth(ns, out) -> int:
    job = job_from_args(ns)
    e = build_extension(job)
    r = DepthEngine(e, DepthConfig(cutoff=job.cutoff)).report(with_h_depth=ns.h_depth)
    out.write(render_report(r, job.fmt))
    return EXIT_OK if r.resolved else EXIT_UNRESOLVED


def cmd_tensor_dims(ns, out) -> int:
    job = job_from_args(ns)
    if ns.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    ch = TensorChain(build_extension(job))
    rows = [(n, ch.dim(n)) for n in range(ns.max_n + 1)]
    out.write(render_rows(("n", "dim"), rows, job.fmt))
    return EXIT_OK


def cmd_paper_suite(ns, out) -> int:
    from . import paper_suite

    only = [s.strip() for chunk in (ns.only or []) for s in chunk.split(",") if s.strip()]
    try:
        paper_suite.select(only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = paper_suite.run(only, echo=lambda line: (out.write(line + "\n"), out.flush()))
    failed = [r.key for r in res if r.passed is False]
    skipped = [r.key for r in res if r.passed is None]
    out.write(f"{len(res) - len(failed) - len(skipped)} passed, {len(failed)} failed, {len(skipped)} skipped\n")
    return EXIT_SUITE if failed or skipped else EXIT_OK


def _n_range(text: str) -> range:
    m = re.fullmatch(r"(\d+)(?:-(\d+))?", text.strip())
    if not m:
        raise UsageError("--n expects N or N-M")
    lo = int(m.group(1))
    hi = int(m.group(2) or lo)
    if lo < 2 or hi < lo:
        raise UsageError("--n needs 2 <= N <= M")
    return range(lo, hi + 1)


def cmd_explore_jordan(ns, out) -> int:
    try:
        field = FieldSpec.parse(ns.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if ns.cutoff < 1:
        raise UsageError("--cutoff must be >= 1")
    rows = []
    for n in _n_range(ns.n):
        r = DepthEngine(jordan_subalgebra(n, field), DepthConfig(cutoff=ns.cutoff)).report(with_h_depth=False)
        d = r.min_depth
        rows.append((n, d if r.resolved else f">={d.at_least}", "yes" if r.resolved else "no"))
    note = "exploratory, not a paper claim"
    out.write(render_rows(("n", "min_depth", "resolved"), rows, ns.format, note))
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def _job_options(p):
    src = p.add_argument_group("extension")
    src.add_argument("--family", help="named ambient algebra: T<n>, kronecker or tree")
    src.add_argument("--quiver", help="quiver file ('vertices n' / 'arrow label s t')")
    src.add_argument("--sub", nargs="+", default=["top"], metavar="KIND",
                     help="top | arrow | diagonal | jordan | custom <file>")
    p.add_argument("--field", default="q", help="q or fp:<p> (default q)")
    p.add_argument("--cutoff", type=int, default=6, help="largest depth value tested (default 6)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quiverdepth", description="Depth of subalgebras of path algebras.")
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log flag computations")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    d = sub.add_parser("depth", parents=[common], help="minimum, odd and H-depth of one extension")
    _job_options(d)
    d.add_argument("--h-depth", action="store_true", help="also compute the H-depth")
    d.set_defaults(func=cmd_depth)

    t = sub.add_parser("tensor-dims", parents=[common], help="dimensions of C_n for n = 0..max-n")
    _job_options(t)
    t.add_argument("--max-n", type=int, default=4)
    t.set_defaults(func=cmd_tensor_dims)

    s = sub.add_parser("paper-suite", parents=[common], help="run the reproduction suite")
    s.add_argument("--only", action="append", metavar="SECTION",
                   help="props, sec3, sec4, sec5, sec6 or an item key such as C4")
    s.set_defaults(func=cmd_paper_suite)

    j = sub.add_parser("explore-jordan", parents=[common], help="depth of J_n in T_n over a range of n")
    j.add_argument("--n", default="2-3", help="N or N-M (default 2-3)")
    j.add_argument("--field", default="q")
    j.add_argument("--cutoff", type=int, default=6)
    j.add_argument("--format", choices=("json", "csv", "text"), default="csv")
    j.set_defaults(func=cmd_explore_jordan)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return ns.func(ns, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
