"""Projective lines and points over Q(sqrt d) and the intersection lattice.

Points and lines share the :class:`Triple` type.  A triple is stored in its
canonical normal form (leftmost nonzero coordinate equal to 1) so that equal
projective objects are equal Python objects.  Line indices are 1-based
throughout, matching the usual ``H_1, ..., H_l`` labelling.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import DuplicateLineError, EmptyArrangementError, EqualLinesError, MixedFieldError
from .exactnum import RATIONAL, FieldContext, QuadScalar, Scalar

FVector = Tuple[int, ...]


class Triple:
    """Homogeneous coordinates ``[c0 : c1 : c2]``, canonically normalized."""

    __slots__ = ("coords", "_hash")

    def __init__(self, c0: Scalar, c1: Scalar, c2: Scalar, ctx: FieldContext = RATIONAL):
        cs = [ctx.lift(c) for c in (c0, c1, c2)]
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise ValueError("the zero triple is not a projective point")
        if lead != 1:
            inv = lead.inverse()
            cs = [c * inv for c in cs]
        self.coords: Tuple[QuadScalar, QuadScalar, QuadScalar] = tuple(cs)
        self._hash = hash(self.coords)

    @property
    def d(self) -> Optional[int]:
        return self.coords[0].d

    def dot(self, other: Triple) -> QuadScalar:
        a, b, c = self.coords
        x, y, z = other.coords
        return a * x + b * y + c * z

    def incident(self, other: Triple) -> bool:
        return self.dot(other).is_zero()

    def cross(self, other: Triple) -> Triple:
        a, b, c = self.coords
        x, y, z = other.coords
        ctx = FieldContext(a.d)
        return Triple(b * z - c * y, c * x - a * z, a * y - b * x, ctx)

    def conjugate(self) -> Triple:
        return Triple(*(c.conjugate() for c in self.coords), ctx=FieldContext(self.d))

    def sort_key(self):
        return tuple(c.sort_key() for c in self.coords)

    def affine(self) -> Tuple[QuadScalar, QuadScalar]:
        """Affine coordinates ``(x/z, y/z)`` of a point off the line z = 0."""
        x, y, z = self.coords
        if not z:
            raise ValueError("point at infinity has no affine coordinates")
        return x / z, y / z

    def __eq__(self, other):
        return isinstance(other, Triple) and self.coords == other.coords

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


def meet(l1: Triple, l2: Triple) -> Triple:
    """Intersection point of two distinct lines (equivalently, join of two points)."""
    if l1 == l2:
        raise EqualLinesError(f"{l1!r} taken twice")
    return l1.cross(l2)


join = meet


@dataclass(frozen=True)
class Arrangement:
    ctx: FieldContext
    lines: Tuple[Triple, ...]

    def __post_init__(self):
        lines = tuple(self.ctx_lift(t) for t in self.lines)
        if len(set(lines)) != len(lines):
            raise DuplicateLineError("arrangement lines must be pairwise distinct")
        object.__setattr__(self, "lines", lines)

    def ctx_lift(self, t: Triple) -> Triple:
        if t.d == self.ctx.d:
            return t
        if t.d is not None and self.ctx.d is not None:
            raise MixedFieldError(f"line over Q(sqrt {t.d}) in arrangement over {self.ctx}")
        return Triple(*t.coords, ctx=self.ctx)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Scalar]], ctx: FieldContext = RATIONAL) -> Arrangement:
        return cls(ctx, tuple(Triple(*r, ctx=ctx) for r in rows))

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def line(self, i: int) -> Triple:
        if not 1 <= i <= len(self.lines):
            raise IndexError(f"line index {i} out of range 1..{len(self.lines)}")
        return self.lines[i - 1]

    def index(self, line: Triple) -> int:
        return self.lines.index(self.ctx_lift(line)) + 1

    def __contains__(self, line: Triple) -> bool:
        return self.ctx_lift(line) in self.lines

    def add(self, line: Triple) -> Arrangement:
        line = self.ctx_lift(line)
        if line in self.lines:
            raise DuplicateLineError(f"{line!r} already in the arrangement")
        return Arrangement(self.ctx, self.lines + (line,))

    def delete(self, i: int) -> Arrangement:
        self.line(i)
        return Arrangement(self.ctx, self.lines[: i - 1] + self.lines[i:])

    def subarrangement(self, indices: Iterable[int]) -> Arrangement:
        return Arrangement(self.ctx, tuple(self.line(i) for i in sorted(indices)))

    @cached_property
    def lattice(self) -> Lattice:
        return compute_lattice(self)


@dataclass(frozen=True)
class LatticePoint:
    point: Triple
    incident: Tuple[int, ...]

    @property
    def mu(self) -> int:
        return len(self.incident) - 1


@dataclass(frozen=True)
class LineProfile:
    line_index: int
    n: int
    fh: FVector
    mu_line: int


@dataclass(frozen=True)
class Lattice:
    """Multiple points of an arrangement with their incident line sets.

    ``labels`` are the line indices the lattice talks about; for a lattice
    computed from an arrangement they are ``1..l``, for a restriction they
    are the surviving subset.
    """

    points: Tuple[LatticePoint, ...]
    labels: Tuple[int, ...]
    by_line: Dict[int, Tuple[int, ...]] = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.by_line is None:
            idx: Dict[int, List[int]] = {h: [] for h in self.labels}
            for k, p in enumerate(self.points):
                for h in p.incident:
                    idx[h].append(k)
            object.__setattr__(self, "by_line", {h: tuple(v) for h, v in idx.items()})

    @property
    def ell(self) -> int:
        return len(self.labels)

    @property
    def mu_total(self) -> int:
        return sum(p.mu for p in self.points)

    @property
    def max_mu(self) -> int:
        return max((p.mu for p in self.points), default=0)

    def points_on(self, h: int) -> List[LatticePoint]:
        return [self.points[k] for k in self.by_line[h]]

    def n(self, h: int) -> int:
        return len(self.by_line[h])

    def family(self) -> Counter:
        return Counter(frozenset(p.incident) for p in self.points)

    def point_of(self, i: int, j: int) -> LatticePoint:
        s = set(self.by_line[j])
        for k in self.by_line[i]:
            if k in s:
                return self.points[k]
        raise KeyError((i, j))

    def restrict(self, keep: Iterable[int]) -> Lattice:
        """Lattice of the subarrangement on ``keep``, computed combinatorially."""
        keep = set(keep)
        pts = []
        for p in self.points:
            inc = tuple(h for h in p.incident if h in keep)
            if len(inc) >= 2:
                pts.append(LatticePoint(p.point, inc))
        return Lattice(tuple(pts), tuple(h for h in self.labels if h in keep))


def compute_lattice(A: Arrangement) -> Lattice:
    groups: Dict[Triple, set] = {}
    lines = A.lines
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            groups.setdefault(meet(lines[i], lines[j]), set()).update((i + 1, j + 1))
    pts = tuple(LatticePoint(p, tuple(sorted(s))) for p, s in sorted(groups.items(), key=lambda kv: kv[0].sort_key()))
    return Lattice(pts, tuple(range(1, len(lines) + 1)))


def _trim(counts: Dict[int, int]) -> FVector:
    top = max((k for k, v in counts.items() if v), default=0)
    return tuple(counts.get(i, 0) for i in range(1, top + 1))


def f_vector(L: Union[Lattice, Arrangement]) -> FVector:
    if isinstance(L, Arrangement):
        L = L.lattice
    return _trim(Counter(p.mu for p in L.points))


def line_profile(L: Lattice, A: Optional[Arrangement], i: int) -> LineProfile:
    if i not in L.by_line:
        raise IndexError(f"line index {i} not in the lattice")
    pts = L.points_on(i)
    return LineProfile(i, len(pts), _trim(Counter(p.mu for p in pts)), sum(p.mu for p in pts))


def line_profiles(L: Lattice) -> List[LineProfile]:
    return [line_profile(L, None, h) for h in L.labels]


@dataclass(frozen=True)
class CharPoly:
    """chi(A, t) = (t - 1) * (t^2 - (l - 1) t + (mu_A - l + 1))."""

    ell: int
    mu_total: int

    @property
    def q(self) -> Tuple[int, int, int]:
        return (1, -(self.ell - 1), self.mu_total - self.ell + 1)

    @property
    def constant(self) -> int:
        return self.mu_total - self.ell + 1

    def q_at(self, t):
        _, b, c = self.q
        return t * t + b * t + c

    def chi_at(self, t):
        return (t - 1) * self.q_at(t)

    def __str__(self):
        _, b, c = self.q
        return f"(t - 1)(t^2 {'-' if b < 0 else '+'} {abs(b)}t {'-' if c < 0 else '+'} {abs(c)})"


def char_poly(L: Union[Lattice, Arrangement]) -> CharPoly:
    if isinstance(L, Arrangement):
        L = L.lattice
    if L.ell == 0:
        raise EmptyArrangementError("chi of the empty arrangement is not handled here")
    return CharPoly(L.ell, L.mu_total)


def cone(affine_lines: Iterable[Sequence[Scalar]], add_infinity: bool = True, ctx: FieldContext = RATIONAL) -> Arrangement:
    """Homogenize affine lines ``a x + b y + c = 0``; optionally append ``z = 0``."""
    rows = [tuple(r) for r in affine_lines]
    if add_infinity:
        rows.append((0, 0, 1))
    lines = tuple(Triple(*r, ctx=ctx) for r in rows)
    return Arrangement(ctx, lines)


def conjugate_arrangement(A: Arrangement) -> Arrangement:
    return Arrangement(A.ctx, tuple(t.conjugate() for t in A.lines))


def substitute(A: Arrangement, M: Sequence[Sequence[Scalar]]) -> Arrangement:
    """Image of A under the coordinate change ``x = M x'`` (line c becomes c M)."""
    m = [[A.ctx.lift(v) for v in row] for row in M]
    out = []
    for t in A.lines:
        c = t.coords
        out.append(Triple(*(sum((c[k] * m[k][j] for k in range(3)), A.ctx.zero) for j in range(3)), ctx=A.ctx))
    return Arrangement(A.ctx, tuple(out))


# -- lattice isomorphism ------------------------------------------------------

def _signature(L: Lattice, h: int):
    return tuple(sorted(p.mu for p in L.points_on(h)))


def iter_lattice_isomorphisms(LA: Lattice, LB: Lattice) -> Iterator[Dict[int, int]]:
    """All bijections of line labels carrying the point family of LA onto LB's."""
    if LA.ell != LB.ell or f_vector(LA) != f_vector(LB):
        return
    sig_a = {h: _signature(LA, h) for h in LA.labels}
    sig_b = {h: _signature(LB, h) for h in LB.labels}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return

    # point index of each (unordered) pair of lines
    def pair_table(L: Lattice):
        tab = {}
        for k, p in enumerate(L.points):
            for x in p.incident:
                for y in p.incident:
                    if x != y:
                        tab[x, y] = k
        return tab

    pa, pb = pair_table(LA), pair_table(LB)

    # assign lines so that each new line shares big points with assigned ones
    order: List[int] = []
    remaining = set(LA.labels)
    while remaining:
        if not order:
            nxt = min(remaining, key=lambda h: (-max(sig_a[h], default=0), h))
        else:
            nxt = min(remaining, key=lambda h: (-sum(LA.points[pa[h, g]].mu for g in order), h))
        order.append(nxt)
        remaining.discard(nxt)

    sigma: Dict[int, int] = {}
    used = set()
    pmap: Dict[int, int] = {}
    pinv: Dict[int, int] = {}

    def extend(depth: int):
        if depth == len(order):
            yield dict(sigma)
            return
        h = order[depth]
        for g in LB.labels:
            if g in used or sig_b[g] != sig_a[h]:
                continue
            added = []
            ok = True
            for h2 in order[:depth]:
                ka, kb = pa[h, h2], pb[g, sigma[h2]]
                if len(LA.points[ka].incident) != len(LB.points[kb].incident):
                    ok = False
                    break
                if ka in pmap:
                    if pmap[ka] != kb:
                        ok = False
                        break
                elif kb in pinv:
                    ok = False
                    break
                else:
                    pmap[ka] = kb
                    pinv[kb] = ka
                    added.append(ka)
            if ok:
                sigma[h] = g
                used.add(g)
                yield from extend(depth + 1)
                del sigma[h]
                used.discard(g)
            for ka in added:
                del pinv[pmap.pop(ka)]

    yield from extend(0)


def lattice_isomorphic(A: Union[Arrangement, Lattice], B: Union[Arrangement, Lattice]) -> Optional[Dict[int, int]]:
    """A witness bijection of line indices identifying the lattices, or None."""
    LA = A.lattice if isinstance(A, Arrangement) else A
    LB = B.lattice if isinstance(B, Arrangement) else B
    sigma = next(iter_lattice_isomorphisms(LA, LB), None)
    if sigma is not None and not is_lattice_map(LA, LB, sigma):
        raise AssertionError("isomorphism search produced an invalid witness")
    return sigma


def is_lattice_map(LA: Lattice, LB: Lattice, sigma: Dict[int, int]) -> bool:
    image = Counter(frozenset(sigma[h] for h in p.incident) for p in LA.points)
    return image == LB.family()
