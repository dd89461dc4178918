"""Deciding freeness of line arrangements in the projective plane.

Three engines are available: the characteristic-polynomial/ABT test for
arrangements with a line meeting the others in more than ``min(a, b)``
points, Yoshinaga's criterion through the Ziegler restriction, and, for
balanced arrangements of at most 12 lines, comparison of the lattice with
the three known balanced free lattices.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, isqrt
from typing import Any, List, Optional, Tuple

from .errors import EmptyArrangementError, InvariantViolation, PreconditionError
from .geometry import Arrangement, CharPoly, FVector, Lattice, char_poly, lattice_isomorphic
from .multiarr import multi_exponents, ziegler_restriction


class Status(enum.Enum):
    FREE = "Free"
    NOT_FREE = "NotFree"


class Method(enum.Enum):
    TRIVIAL = "Trivial"
    CHI_NON_INTEGRAL = "ChiNonIntegral"
    ABT = "ABT"
    YOSHINAGA = "Yoshinaga"
    CLASSIFIED_BALANCED = "ClassifiedBalanced"


class BalancedClass(enum.Enum):
    DUAL_HESSE = "DualHesse"
    PENTAGONAL = "Pentagonal"
    G443 = "G443"
    NOT_FREE = "NotFree"


@dataclass(frozen=True)
class FreenessVerdict:
    status: Status
    exponents: Optional[Tuple[int, int]]
    method: Method
    witness: Any = field(default=None, compare=False)

    @property
    def free(self) -> bool:
        return self.status is Status.FREE

    def __post_init__(self):
        if self.free and self.exponents is None:
            raise ValueError("a free verdict carries exponents")

    def describe(self) -> str:
        if self.free:
            a, b = self.exponents
            return f"Free (1, {a}, {b}) [{self.method.value}]"
        return f"NotFree [{self.method.value}]"


@dataclass(frozen=True)
class BalancedProfile:
    ell: int
    a_min: int
    f: FVector


def _lat(A: Arrangement, L: Optional[Lattice]) -> Lattice:
    return A.lattice if L is None else L


def integer_roots(q: CharPoly) -> Optional[Tuple[int, int]]:
    """Nonnegative integer roots (a <= b) of t^2 - (l-1) t + (mu - l + 1), if any."""
    s = q.ell - 1
    p = q.constant
    disc = s * s - 4 * p
    if disc < 0:
        return None
    r = isqrt(disc)
    if r * r != disc or (s - r) % 2:
        return None
    a, b = (s - r) // 2, (s + r) // 2
    if a < 0:
        return None
    return a, b


def is_balanced(L: Lattice, roots: Tuple[int, int]) -> bool:
    return max((L.n(h) for h in L.labels), default=0) <= roots[0]


def max_n_line(L: Lattice) -> int:
    """Line with the most intersection points, lowest index on ties."""
    return min(L.labels, key=lambda h: (-L.n(h), h))


def abt_decide(A: Arrangement, L: Optional[Lattice], roots: Tuple[int, int]) -> Optional[FreenessVerdict]:
    L = _lat(A, L)
    a, b = roots
    h = max_n_line(L)
    n = L.n(h)
    if n <= a:
        return None
    if n in (a + 1, b + 1):
        return FreenessVerdict(Status.FREE, (a, b), Method.ABT, h)
    return FreenessVerdict(Status.NOT_FREE, None, Method.ABT, h)


def yoshinaga_decide(A: Arrangement, pivot: Optional[int] = None) -> FreenessVerdict:
    """Free iff the product of Ziegler exponents equals the constant term of chi/(t - 1)."""
    L = A.lattice
    if pivot is None:
        pivot = max_n_line(L)
    A.line(pivot)
    q = char_poly(L)
    d1, d2 = multi_exponents(ziegler_restriction(A, pivot))
    if q.constant == d1 * d2:
        roots = integer_roots(q)
        if roots != (d1, d2):
            raise InvariantViolation(f"Yoshinaga free with exponents {(d1, d2)} but chi roots {roots}")
        return FreenessVerdict(Status.FREE, (d1, d2), Method.YOSHINAGA, {"pivot": pivot, "ziegler": (d1, d2)})
    return FreenessVerdict(Status.NOT_FREE, None, Method.YOSHINAGA, {"pivot": pivot, "ziegler": (d1, d2)})


def enumerate_profiles(ell_max: int) -> List[BalancedProfile]:
    """Candidate (l, min exponent, F) triples of balanced free arrangements with l <= ell_max.

    Solves, over nonnegative integers F_1..F_{a-2},
    sum i F_i = (l-1)(a+1) - a^2, sum (i+1) F_i <= a l, sum C(i+1, 2) F_i = C(l, 2).
    """
    out = []
    for ell in range(2, ell_max + 1):
        for a in range((ell - 1) // 2 + 1):
            k = a - 2
            if k < 1:
                continue
            mu = (ell - 1) * (a + 1) - a * a
            pairs = comb(ell, 2)
            cap = a * ell
            for f in _solve(k, mu, cap, pairs):
                while f and f[-1] == 0:
                    f = f[:-1]
                out.append(BalancedProfile(ell, a, tuple(f)))
    out.sort(key=lambda p: (p.ell, p.a_min, p.f))
    return out


def _solve(k: int, mu: int, cap: int, pairs: int):
    # choose F_k, F_{k-1}, ..., F_1 from the top; F_1 is forced by the mu equation
    def rec(i, mu_left, cap_left, pairs_left, acc):
        if i == 1:
            f1 = mu_left
            if f1 >= 0 and 2 * f1 <= cap_left and f1 == pairs_left:
                yield [f1] + acc
            return
        w_pairs = comb(i + 1, 2)
        top = min(mu_left // i, cap_left // (i + 1), pairs_left // w_pairs)
        for fi in range(top, -1, -1):
            yield from rec(i - 1, mu_left - i * fi, cap_left - (i + 1) * fi, pairs_left - w_pairs * fi, [fi] + acc)

    yield from rec(k, mu, cap, pairs, [])


@lru_cache(maxsize=None)
def _reference_lattices():
    from . import catalog

    return {
        9: (BalancedClass.DUAL_HESSE, catalog.dual_hesse().lattice),
        11: (BalancedClass.PENTAGONAL, catalog.pentagonal().lattice),
        12: (BalancedClass.G443, catalog.g443().lattice),
    }


def classify_balanced(A: Arrangement, L: Optional[Lattice], roots: Tuple[int, int]):
    """Match a balanced arrangement of <= 12 lines against the known balanced free lattices.

    Returns ``(BalancedClass, witness)`` where the witness is the line bijection
    onto the reference lattice (None when not free).
    """
    L = _lat(A, L)
    if L.ell > 12:
        raise PreconditionError("combinatorial classification covers at most 12 lines")
    if not is_balanced(L, roots):
        raise PreconditionError("arrangement is not balanced; use the ABT test")
    ref = _reference_lattices().get(L.ell)
    if ref is not None:
        cls, RL = ref
        sigma = lattice_isomorphic(L, RL)
        if sigma is not None:
            return cls, sigma
    return BalancedClass.NOT_FREE, None


def decide_free(A: Arrangement, method: str = "auto", pivot: Optional[int] = None, cross_check: bool = False) -> FreenessVerdict:
    if len(A) == 0:
        raise EmptyArrangementError("decide_free needs at least one line")
    if len(A) == 1:
        return FreenessVerdict(Status.FREE, (0, 0), Method.TRIVIAL)
    if method == "yoshinaga":
        return yoshinaga_decide(A, pivot)
    L = A.lattice
    q = char_poly(L)
    roots = integer_roots(q)
    if roots is None:
        v = FreenessVerdict(Status.NOT_FREE, None, Method.CHI_NON_INTEGRAL, q.q)
        if cross_check:
            _agree(v, yoshinaga_decide(A, pivot))
        return v
    v = abt_decide(A, L, roots)
    if method == "abt":
        if v is None:
            raise PreconditionError("ABT test inapplicable: every line meets the others in <= min(a, b) points")
        return v
    if v is None:
        if method == "classify" or (method == "auto" and L.ell <= 12):
            cls, sigma = classify_balanced(A, L, roots)
            if cls is BalancedClass.NOT_FREE:
                v = FreenessVerdict(Status.NOT_FREE, None, Method.CLASSIFIED_BALANCED, cls)
            else:
                v = FreenessVerdict(Status.FREE, roots, Method.CLASSIFIED_BALANCED, {"class": cls, "bijection": sigma})
        else:
            v = yoshinaga_decide(A, pivot)
    elif method == "classify":
        raise PreconditionError("combinatorial classification applies to balanced arrangements only")
    if cross_check and v.method is not Method.YOSHINAGA:
        _agree(v, yoshinaga_decide(A, pivot))
    if v.free and v.exponents != roots:
        raise InvariantViolation(f"exponents {v.exponents} do not match chi roots {roots}")
    return v


def _agree(v: FreenessVerdict, w: FreenessVerdict) -> None:
    if v.status is not w.status or (v.free and v.exponents != w.exponents):
        raise InvariantViolation(f"engines disagree: {v.describe()} vs {w.describe()}")
