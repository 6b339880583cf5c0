"""Command line entry point: ``hodge hyper`` and ``hodge ci``.

Input files are line oriented::

    # comment
    5 6
    0 -3 0 1 0 0
    ...
    nef 2 : 1 3 5 ; 2 4 6

The matrix columns are the vertices; the optional ``nef`` line lists the
parts as 1-based column indices.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .errors import (
    ConsistencyError,
    HodgeError,
    IndexOutOfRange,
    InvalidPartition,
    ParseError,
    ValidationError,
    WrongDimension,
)
from .nef import cayley, hypersurface_pair, is_indecomposable, validate_nef_partition
from .polytope import Polytope, convex_hull, polar
from .stringy import (
    HodgeDiamond,
    TermBreakdown,
    ample_case_hodge,
    consistency_relations,
    e_poly,
    h11_ci_generic,
    h11_ci_indecomposable,
    h11_hypersurface,
    h11_hypersurface_cayley,
    h21_ci,
    hodge_from_e,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONSISTENCY = 4


@dataclass
class ParsedInput:
    columns: list[tuple[int, ...]]
    parts: Optional[list[list[int]]]  # 1-based column indices

    @property
    def n(self) -> int:
        return len(self.columns[0])


def _tokens(line: str, start: int = 0, end: Optional[int] = None):
    """Whitespace separated tokens of ``line[start:end]`` with 1-based columns."""
    end = len(line) if end is None else end
    return [(m.group(), start + m.start() + 1) for m in re.finditer(r"\S+", line[start:end])]


def _ints(tokens, lineno):
    out = []
    for tok, col in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None
    return out


def parse_text(text: str) -> ParsedInput:
    lines = list(enumerate(text.splitlines(), start=1))
    data = [(i, ln) for i, ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not data:
        raise ParseError("no data", 1, 1)
    lineno, line = data[0]
    header = _tokens(line)
    if len(header) != 2:
        raise ParseError(f"header must be 'rows columns', got {len(header)} fields", lineno, 1)
    n, k = _ints(header, lineno)
    if n <= 0 or k <= 0:
        raise ParseError("matrix dimensions must be positive", lineno, 1)
    if len(data) < 1 + n:
        raise ParseError(f"expected {n} matrix rows, found {len(data) - 1}",
                         data[-1][0], len(data[-1][1]) + 1)
    rows = []
    for lineno, line in data[1:1 + n]:
        tokens = _tokens(line)
        if len(tokens) != k:
            col = tokens[k][1] if len(tokens) > k else len(line) + 1
            raise ParseError(f"expected {k} entries, found {len(tokens)}", lineno, col)
        rows.append(_ints(tokens, lineno))
    columns = [tuple(row[j] for row in rows) for j in range(k)]
    parts = None
    rest = data[1 + n:]
    if rest:
        lineno, line = rest[0]
        parts = _parse_nef(line, lineno, k)
        if len(rest) > 1:
            raise ParseError("unexpected content after the nef line", rest[1][0], 1)
    return ParsedInput(columns, parts)


def _parse_nef(line: str, lineno: int, k: int) -> list[list[int]]:
    head = _tokens(line, 0, line.find(":") if ":" in line else None)
    if not head or head[0][0] != "nef":
        col = head[0][1] if head else 1
        raise ParseError("expected a line of the form 'nef r : i1 i2 ... ; j1 j2 ...'", lineno, col)
    if ":" not in line:
        raise ParseError("missing ':' in nef line", lineno, len(line) + 1)
    if len(head) != 2:
        raise ParseError("nef line must start with 'nef r :'", lineno, head[-1][1])
    (r,) = _ints(head[1:], lineno)
    pos = line.index(":") + 1
    groups = []
    while True:
        cut = line.find(";", pos)
        groups.append(_tokens(line, pos, None if cut < 0 else cut))
        if cut < 0:
            break
        pos = cut + 1
    if len(groups) != r:
        raise ParseError(f"nef line declares {r} parts but lists {len(groups)}",
                         lineno, head[1][1])
    parts = []
    for g in groups:
        idx = _ints(g, lineno)
        for i, (_, col) in zip(idx, g):
            if not 1 <= i <= k:
                raise IndexOutOfRange(f"line {lineno}, column {col}: index {i} outside 1..{k}")
        parts.append(idx)
    return parts


def parse_input(path: str) -> ParsedInput:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


def _polytope_and_parts(data: ParsedInput) -> tuple[Polytope, Optional[list[list[int]]]]:
    delta = convex_hull(data.columns)
    if data.parts is None:
        return delta, None
    index = {v: i for i, v in enumerate(delta.vertices)}
    parts = []
    for part in data.parts:
        mapped = []
        for j in part:
            col = data.columns[j - 1]
            if col not in index:
                raise InvalidPartition(f"column {j} is not a vertex of the polytope")
            mapped.append(index[col])
        parts.append(mapped)
    if len(index) != len(data.columns) or len(set(data.columns)) != len(data.columns):
        raise InvalidPartition("with a nef line every column must be a distinct vertex")
    return delta, parts


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    n: int
    r: int
    mode: str
    h11: TermBreakdown
    h21: TermBreakdown
    diamond: Optional[HodgeDiamond] = None
    cross_check: Optional[bool] = None
    relations: Optional[bool] = None
    ample: Optional[tuple[TermBreakdown, TermBreakdown]] = None
    timings: Optional[dict] = None

    def verify_totals(self) -> None:
        # both renderings must reproduce the total from the terms they show
        for b in (self.h11, self.h21) + (self.ample or ()):
            from_json = sum(item["value"] for item in b.as_json())
            from_text = int(b.render().rsplit("=", 1)[1])
            if not from_json == from_text == b.total:
                raise ConsistencyError("breakdown total does not match its terms")

    def as_json(self) -> dict:
        self.verify_totals()
        d = self.diamond
        out = {
            "n": self.n,
            "r": self.r,
            "h11": self.h11.total,
            "h21": self.h21.total,
            "diamond": d.h if d is not None else None,
            "e_coeffs": ([[p, q, c] for (p, q), c in sorted(d.e.terms.items())]
                         if d is not None else None),
            "h11_terms": self.h11.as_json(),
            "h21_terms": self.h21.as_json(),
            "checks": {"cross_check": self.cross_check, "relations": self.relations},
        }
        if self.ample is not None:
            out["ample"] = {"h11_terms": self.ample[0].as_json(),
                            "h21_terms": self.ample[1].as_json(),
                            "h11": self.ample[0].total, "h21": self.ample[1].total}
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def as_text(self) -> str:
        self.verify_totals()
        lines = [f"n = {self.n}, r = {self.r}, formula: {self.mode}",
                 f"h11: {self.h11.render()}",
                 f"h21: {self.h21.render()}"]
        if self.ample is not None:
            lines.append(f"ample h11: {self.ample[0].render()}")
            lines.append(f"ample h21: {self.ample[1].render()}")
        if self.diamond is not None:
            lines.append(f"E-function: (h11, h21) = ({self.diamond.h11}, {self.diamond.h21})")
            lines.append(self.diamond.pretty())
            lines += [f"note: {msg}" for msg in self.diamond.diagnostics]
        if self.cross_check is not None:
            lines.append("cross-check: " + ("ok" if self.cross_check else "FAILED"))
        if self.relations is not None:
            lines.append("relations: " + ("ok" if self.relations else "FAILED"))
        if self.timings is not None:
            lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in self.timings.items()))
        return "\n".join(lines)


class _Clock:
    def __init__(self):
        self.times = {}

    def run(self, name, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        self.times[name] = self.times.get(name, 0.0) + time.perf_counter() - t0
        return out


def _compare(report: Report, diamond: HodgeDiamond) -> None:
    got = (diamond.h11, diamond.h21)
    want = (report.h11.total, report.h21.total)
    if got != want:
        raise ConsistencyError(f"closed forms give (h11, h21) = {want}, E-function gives {got}")
    report.cross_check = True


def run_hyper(data: ParsedInput, want_e: bool, memo: bool = True, threads: int = 1,
              clock: Optional[_Clock] = None) -> Report:
    clock = clock or _Clock()
    if data.parts is not None and len(data.parts) != 1:
        raise WrongDimension("hyper expects no nef line or a single part")
    delta, _ = _polytope_and_parts(data)
    h11 = clock.run("closed_form", h11_hypersurface, delta)
    h21 = clock.run("closed_form", h11_hypersurface, polar(delta))
    report = Report(delta.ambient_dim, 1, "hypersurface", h11, h21)
    if want_e:
        cp = hypersurface_pair(delta)
        e = clock.run("e_poly", e_poly, cp, memo=memo, threads=threads)
        report.diamond = hodge_from_e(e, cp.n, cp.r)
        _compare(report, report.diamond)
        # the same numbers through the r = 1 Cayley construction
        full = validate_nef_partition(delta, [list(range(len(delta.vertices)))])
        ccp = clock.run("cayley", cayley, full)
        e1 = clock.run("e_poly", e_poly, ccp, memo=memo, threads=threads)
        if e1 != e or h11_hypersurface_cayley(ccp).total != h11.total:
            raise ConsistencyError("Cayley route for r = 1 disagrees with the direct route")
    report.timings = clock.times
    return report


def run_ci(data: ParsedInput, mode: str = "auto", want_e: bool = False, relations: bool = False,
           ample: bool = False, memo: bool = True, threads: int = 1,
           clock: Optional[_Clock] = None) -> Report:
    clock = clock or _Clock()
    if data.parts is None:
        raise InvalidPartition("ci needs a nef line")
    delta, parts = _polytope_and_parts(data)
    np_ = clock.run("validate", validate_nef_partition, delta, parts)
    if np_.n != 5 or np_.r != 2:
        raise WrongDimension(f"ci needs n = 5 and r = 2, got n = {np_.n}, r = {np_.r}")
    cp = clock.run("cayley", cayley, np_)
    if mode == "auto":
        mode = "indecomposable" if clock.run("validate", is_indecomposable, np_) else "generic"
    if mode == "generic":
        h11 = clock.run("closed_form", h11_ci_generic, cp)
    elif mode == "indecomposable":
        h11 = clock.run("closed_form", h11_ci_indecomposable, cp)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    h21 = clock.run("closed_form", h21_ci, cp, mode)
    report = Report(np_.n, np_.r, mode, h11, h21)
    if relations:
        clock.run("relations", consistency_relations, cp)
        report.relations = True
    if ample:
        report.ample = clock.run("ample", ample_case_hodge, np_, cp)
        totals = (report.ample[0].total, report.ample[1].total)
        if totals != (h11.total, h21.total):
            raise ConsistencyError(f"ample-case formulas give {totals}, "
                                   f"main formulas give {(h11.total, h21.total)}")
    if want_e:
        e = clock.run("e_poly", e_poly, cp, memo=memo, threads=threads)
        report.diamond = hodge_from_e(e, cp.n, cp.r)
        _compare(report, report.diamond)
    report.timings = clock.times
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hodge", description="Stringy Hodge numbers of toric "
                                 "Calabi-Yau hypersurfaces and complete intersections.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file")
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.add_argument("--cross-check", action="store_true",
                       help="also compute the E-function and compare")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--oracle-no-memo", action="store_true",
                       help="recompute every poset polynomial without the shared memo")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings")

    common(sub.add_parser("hyper", help="hypersurface in a 4-dimensional toric variety"))
    ci = sub.add_parser("ci", help="complete intersection threefold for a two-part nef partition")
    common(ci)
    ci.add_argument("--mode", choices=["auto", "generic", "indecomposable"], default="auto")
    ci.add_argument("--relations", action="store_true")
    ci.add_argument("--ample", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    want_e = args.json or args.cross_check
    kw = dict(memo=not args.oracle_no_memo, threads=max(1, args.threads))
    try:
        data = parse_input(args.file)
        if args.command == "hyper":
            report = run_hyper(data, want_e, **kw)
        else:
            report = run_ci(data, args.mode, want_e, args.relations, args.ample, **kw)
        if not args.timings:
            report.timings = None
        if args.json:
            print(json.dumps(report.as_json(), sort_keys=True))
        else:
            print(report.as_text())
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"invalid input ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as exc:
        print(f"consistency failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except HodgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
