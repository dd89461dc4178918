"""Rank-2 multiarrangements and their logarithmic derivation modules.

Binary forms in ``u, v`` are stored by coefficient lists in the monomial
order ``u^d, u^(d-1) v, ..., v^d``.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from math import comb
from typing import List, Sequence, Tuple

from .errors import NotLogarithmicError, SingleLineError
from .exactnum import RATIONAL, FieldContext, QuadScalar, Scalar, rank
from .geometry import Arrangement, Triple, meet


@dataclass(frozen=True)
class BinaryForm:
    coeffs: Tuple[QuadScalar, ...]

    @classmethod
    def of(cls, coeffs: Sequence[Scalar], ctx: FieldContext = RATIONAL) -> BinaryForm:
        return cls(tuple(ctx.lift(c) for c in coeffs))

    @classmethod
    def zero(cls, degree: int, ctx: FieldContext = RATIONAL) -> BinaryForm:
        return cls(tuple(ctx.zero for _ in range(degree + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: BinaryForm) -> BinaryForm:
        if self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        return BinaryForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: BinaryForm) -> BinaryForm:
        return self + other.scale(-1)

    def scale(self, c) -> BinaryForm:
        return BinaryForm(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: BinaryForm) -> BinaryForm:
        zero = self.coeffs[0] * 0
        out = [zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return BinaryForm(tuple(out))

    def __pow__(self, k: int) -> BinaryForm:
        out = BinaryForm((self.coeffs[0] * 0 + 1,))
        for _ in range(k):
            out = out * self
        return out


@dataclass(frozen=True)
class MultiLine:
    """The linear form ``p u + q v`` (normalized: leftmost nonzero is 1) with multiplicity."""

    p: QuadScalar
    q: QuadScalar
    mult: int

    @classmethod
    def of(cls, p: Scalar, q: Scalar, mult: int = 1, ctx: FieldContext = RATIONAL) -> MultiLine:
        p, q = ctx.lift(p), ctx.lift(q)
        if p:
            p, q = ctx.one, q / p
        elif q:
            q = ctx.one
        else:
            raise ValueError("zero linear form")
        if mult < 1:
            raise ValueError("multiplicity must be positive")
        return cls(p, q, mult)

    @property
    def form(self) -> BinaryForm:
        return BinaryForm((self.p, self.q))


@dataclass(frozen=True)
class Multiarrangement2:
    ctx: FieldContext
    lines: Tuple[MultiLine, ...]

    def __post_init__(self):
        keys = [(l.p, l.q) for l in self.lines]
        if len(set(keys)) != len(keys):
            raise ValueError("multiarrangement forms must be pairwise non-proportional")

    @classmethod
    def of(cls, items: Sequence[Tuple[Scalar, Scalar, int]], ctx: FieldContext = RATIONAL) -> Multiarrangement2:
        return cls(ctx, tuple(MultiLine.of(p, q, m, ctx) for p, q, m in items))

    @property
    def total_mult(self) -> int:
        return sum(l.mult for l in self.lines)

    @property
    def multiplicities(self) -> List[int]:
        return sorted((l.mult for l in self.lines), reverse=True)

    def defining_form(self) -> BinaryForm:
        out = BinaryForm((self.ctx.one,))
        for l in self.lines:
            out = out * (l.form ** l.mult)
        return out


@dataclass(frozen=True)
class Derivation2:
    """theta = f d/du + g d/dv with f, g homogeneous of a common degree."""

    f: BinaryForm
    g: BinaryForm

    def __post_init__(self):
        if self.f.degree != self.g.degree:
            raise ValueError("derivation components must have equal degree")

    @property
    def degree(self) -> int:
        return self.f.degree


@dataclass(frozen=True)
class MultiExponents:
    d1: int
    d2: int

    def __iter__(self):
        return iter((self.d1, self.d2))


def ziegler_restriction(A: Arrangement, pivot: int) -> Multiarrangement2:
    """Restrict A to line ``pivot``; each point weighted by the lines through it minus one."""
    if len(A) < 2:
        raise SingleLineError("Ziegler restriction needs at least two lines")
    H = A.line(pivot)
    others = [h for k, h in enumerate(A.lines, 1) if k != pivot]
    pts = sorted({meet(H, h) for h in others}, key=Triple.sort_key)
    p0 = pts[0]
    if len(pts) > 1:
        p1 = pts[1]
    else:
        # pencil: every other line passes through p0; pick another point on H
        axes = [Triple(1, 0, 0, A.ctx), Triple(0, 1, 0, A.ctx), Triple(0, 0, 1, A.ctx)]
        p1 = next(q for q in sorted((meet(H, e) for e in axes if e != H), key=Triple.sort_key) if q != p0)
    groups: "OrderedDict[Tuple[QuadScalar, QuadScalar], int]" = OrderedDict()
    for h in others:
        ml = MultiLine.of(h.dot(p0), h.dot(p1), 1, A.ctx)
        key = (ml.p, ml.q)
        groups[key] = groups.get(key, 0) + 1
    return Multiarrangement2(A.ctx, tuple(MultiLine(p, q, m) for (p, q), m in groups.items()))


def _condition_rows(line: MultiLine, d: int, ctx: FieldContext) -> List[List[QuadScalar]]:
    """Linear conditions on (f_0..f_d, g_0..g_d) for p f + q g to be divisible by (p u + q v)^m.

    With p = 1 the form vanishes at u = r v, r = -q; the conditions are the
    first m Taylor coefficients of (p f + q g)(u, 1) at u = r.  With p = 0 the
    line is v = 0 and the conditions are the coefficients of u^(d-k) v^k, k < m.
    """
    zero = ctx.zero
    rows = []
    k_max = min(line.mult, d + 1)
    if line.p.is_zero():
        for k in range(k_max):
            row = [zero] * (2 * (d + 1))
            row[d + 1 + k] = line.q
            rows.append(row)
        return rows
    r = -line.q
    rpow = [ctx.one]
    for _ in range(d):
        rpow.append(rpow[-1] * r)
    for j in range(k_max):
        row = [zero] * (2 * (d + 1))
        for k in range(d + 1):
            e = d - k - j
            if e < 0:
                continue
            c = comb(d - k, j) * rpow[e]
            row[k] = c * line.p
            row[d + 1 + k] = c * line.q
        rows.append(row)
    return rows


def derivation_dim(M: Multiarrangement2, d: int) -> int:
    """dim of the degree-d part of D(M), as the nullity of an exact linear system."""
    if d < 0:
        return 0
    rows = []
    for l in M.lines:
        rows.extend(_condition_rows(l, d, M.ctx))
    return 2 * (d + 1) - rank(rows, 2 * (d + 1))


def multi_exponents(M: Multiarrangement2) -> MultiExponents:
    total = M.total_mult
    for d in range(total // 2 + 1):
        if derivation_dim(M, d) > 0:
            return MultiExponents(d, total - d)
    raise AssertionError("rank-2 multiarrangement without a derivation of degree <= |m|/2")


def is_logarithmic(M: Multiarrangement2, theta: Derivation2) -> bool:
    d = theta.degree
    vec = list(theta.f.coeffs) + list(theta.g.coeffs)
    for l in M.lines:
        for row in _condition_rows(l, d, M.ctx):
            if sum((a * b for a, b in zip(row, vec)), M.ctx.zero):
                return False
    return True


def saito_check(M: Multiarrangement2, t1: Derivation2, t2: Derivation2) -> bool:
    """True iff det [[f1, g1], [f2, g2]] is a nonzero multiple of the defining form of M."""
    for t in (t1, t2):
        if not is_logarithmic(M, t):
            raise NotLogarithmicError(f"{t} is not tangent to M to the required orders")
    det = t1.f * t2.g - t2.f * t1.g
    Q = M.defining_form()
    if det.degree != Q.degree or det.is_zero():
        return False
    k = next(i for i, c in enumerate(Q.coeffs) if c)
    c = det.coeffs[k] / Q.coeffs[k]
    return (det - Q.scale(c)).is_zero()
