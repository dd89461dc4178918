"""Text formats: arrangement files and certificate replay files.

Arrangement file::

    # comment
    field d = -3          (or: field rational)
    a0 b0 a1 b1 a2 b2     one line (a0 + b0 s(d)) x + (a1 + b1 s(d)) y + (a2 + b2 s(d)) z = 0

Replay file: same header, then records ``+|- a0 b0 a1 b1 a2 b2 e0 e1 e2``
giving the move and the exponents claimed for the arrangement after it.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import ArrangementSyntaxError, DuplicateLineError
from .exactnum import FieldContext, QuadScalar
from .geometry import Arrangement, Triple
from .search import ReplayRecord

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")
_HEADER = re.compile(r"field\s+(?:rational|d\s*=\s*([+-]?\d+))\s*\Z")


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _tokens(line: str) -> List[Tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, body


def _parse_rational(tok: str, line: int, col: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ArrangementSyntaxError(f"expected a rational, got {tok!r}", line, col)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ArrangementSyntaxError("zero denominator", line, col) from None


def _parse_header(no: int, body: str) -> FieldContext:
    m = _HEADER.match(body.strip())
    if not m:
        col = len(body) - len(body.lstrip()) + 1
        raise ArrangementSyntaxError("expected 'field d = <int>' or 'field rational'", no, col)
    if m.group(1) is None:
        return FieldContext(None)
    return FieldContext(int(m.group(1)))


def _parse_triple(ctx: FieldContext, toks: Sequence[Tuple[str, int]], no: int) -> Triple:
    vals = [_parse_rational(t, no, c) for t, c in toks]
    coords = []
    for k in range(3):
        a, b = vals[2 * k], vals[2 * k + 1]
        if ctx.d is None and b:
            raise ArrangementSyntaxError("irrational part in a rational arrangement", no, toks[2 * k + 1][1])
        coords.append(QuadScalar(a, b, ctx.d))
    if all(c.is_zero() for c in coords):
        raise ArrangementSyntaxError("all coefficients are zero", no, toks[0][1])
    return Triple(*coords, ctx=ctx)


def parse_arrangement(text: str) -> Arrangement:
    lines = list(_content_lines(text))
    if not lines:
        raise ArrangementSyntaxError("missing field header", 1, 1)
    ctx = _parse_header(*lines[0])
    triples: List[Triple] = []
    seen = {}
    for no, body in lines[1:]:
        toks = _tokens(body)
        if len(toks) != 6:
            col = toks[min(len(toks), 6) - 1][1] if toks else 1
            raise ArrangementSyntaxError(f"six rationals required, found {len(toks)}", no, col)
        t = _parse_triple(ctx, toks, no)
        if t in seen:
            raise DuplicateLineError(f"line {no} repeats the line given on line {seen[t]}")
        seen[t] = no
        triples.append(t)
    return Arrangement(ctx, tuple(triples))


def format_header(ctx: FieldContext) -> str:
    return "field rational" if ctx.d is None else f"field d = {ctx.d}"


def format_triple(t: Triple) -> str:
    return " ".join(f"{fmt_rational(c.a)} {fmt_rational(c.b)}" for c in t.coords)


def serialize_arrangement(A: Arrangement, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(format_header(A.ctx))
    out.extend(format_triple(t) for t in A.lines)
    return "\n".join(out) + "\n"


def serialize_replay(ctx: FieldContext, records: Sequence[ReplayRecord], comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(format_header(ctx))
    for r in records:
        a, b = r.exponents
        out.append(f"{r.sign} {format_triple(r.line)} 1 {a} {b}")
    return "\n".join(out) + "\n"


def parse_replay(text: str) -> Tuple[FieldContext, List[ReplayRecord]]:
    lines = list(_content_lines(text))
    if not lines:
        raise ArrangementSyntaxError("missing field header", 1, 1)
    ctx = _parse_header(*lines[0])
    records = []
    for no, body in lines[1:]:
        toks = _tokens(body)
        if len(toks) != 10:
            raise ArrangementSyntaxError(f"record needs a sign, six rationals and three exponents; found {len(toks)} fields", no, toks[0][1])
        sign, col = toks[0]
        if sign not in ("+", "-"):
            raise ArrangementSyntaxError(f"expected '+' or '-', got {sign!r}", no, col)
        t = _parse_triple(ctx, toks[1:7], no)
        exps = []
        for tok, c in toks[7:]:
            if not re.fullmatch(r"\d+", tok):
                raise ArrangementSyntaxError(f"expected a nonnegative integer exponent, got {tok!r}", no, c)
            exps.append(int(tok))
        if exps[0] != 1 and exps != [0, 0, 0]:
            raise ArrangementSyntaxError("exponent triples start with 1", no, toks[7][1])
        records.append(ReplayRecord(sign, t, tuple(sorted(exps[1:]))))
    return ctx, records
