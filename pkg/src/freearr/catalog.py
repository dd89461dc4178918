"""Named arrangements, built exactly and checked against their known lattices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from .errors import NonGenericLambdaError, ValidationFailedError
from .exactnum import RATIONAL, FieldContext
from .geometry import Arrangement, FVector, Triple, cone, f_vector

NAMES = ("dual_hesse", "dual_hesse_affine", "pentagonal", "g443", "g443_affine", "ch13", "pencil", "near_pencil")

DEFAULT_LAMBDA = Fraction(2, 3)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Dict[str, object]
    arrangement: Arrangement
    expected_f: FVector
    expected_exponents: Tuple[int, int]


def _pointsets(A: Arrangement, mu: int):
    return {frozenset(p.incident) for p in A.lattice.points if p.mu == mu}


def _sets(*groups):
    return {frozenset(g) for g in groups}


def _validate(name: str, A: Arrangement, f: FVector, multiple: Optional[Dict[int, set]] = None) -> None:
    got = f_vector(A)
    if got != f:
        raise ValidationFailedError(f"{name}: F-vector {list(got)} != expected {list(f)}")
    for mu, want in (multiple or {}).items():
        have = _pointsets(A, mu)
        if have != want:
            raise ValidationFailedError(f"{name}: points of multiplicity {mu} differ from the known lattice")


def dual_hesse() -> Arrangement:
    """(x^3 - y^3)(y^3 - z^3)(z^3 - x^3) over Q(sqrt -3)."""
    K = FieldContext(-3)
    w = K(Fraction(-1, 2), Fraction(1, 2))
    roots = [K.one, w, w * w]
    rows = [(1, -r, 0) for r in roots] + [(0, 1, -r) for r in roots] + [(-r, 0, 1) for r in roots]
    return Arrangement.from_rows(rows, K)


def dual_hesse_affine() -> Arrangement:
    """The realization with H_9 at infinity, h_1 = x, h_2 = x - 1, h_3 = y, h_4 = y - 1."""
    K = FieldContext(-3)
    w = K(Fraction(-1, 2), Fraction(1, 2))
    w2 = w * w
    rows = [
        (1, 0, 0), (1, 0, -1), (0, 1, 0), (0, 1, -1),
        (w, 1, 0), (w, 1, w2), (-w2, 1, -1), (-w2, 1, w2),
    ]
    return cone(rows, add_infinity=True, ctx=K)


DUAL_HESSE_TRIPLES = _sets(
    (1, 2, 9), (3, 4, 9), (5, 6, 9), (7, 8, 9), (1, 3, 5), (1, 4, 7),
    (1, 6, 8), (2, 3, 8), (3, 6, 7), (2, 4, 6), (4, 5, 8), (2, 5, 7),
)


def pentagonal() -> Arrangement:
    """Five sides and five diagonals of a pentagon, coned; z = 0 is H_11."""
    K = FieldContext(5)
    z = K(Fraction(1, 2), Fraction(1, 2))  # z^2 - z - 1 = 0
    rows = [
        (1, 0, 0), (1, 1, -1), (0, 1, -1), (1, -z, z), (0, 1, 0),
        (1, -z, 0), (z, -1, 0), (z, -1, -z), (1, 0, -1), (1, 1, -z - 1),
    ]
    return cone(rows, add_infinity=True, ctx=K)


PENTAGONAL_QUADRUPLES = _sets((1, 2, 3, 4), (1, 5, 6, 7), (2, 5, 8, 9), (3, 6, 8, 10), (4, 7, 9, 10))
PENTAGONAL_TRIPLES = _sets((1, 9, 11), (2, 10, 11), (3, 5, 11), (4, 6, 11), (7, 8, 11))


def g443() -> Arrangement:
    """(x^4 - y^4)(y^4 - z^4)(z^4 - x^4) over Q(sqrt -1)."""
    K = FieldContext(-1)
    i = K.sqrt
    roots = [K.one, i, -K.one, -i]
    rows = [(1, -r, 0) for r in roots] + [(0, 1, -r) for r in roots] + [(-r, 0, 1) for r in roots]
    return Arrangement.from_rows(rows, K)


def g443_affine() -> Arrangement:
    """The affine model with {p, q} = {i, 1 + i}; the line at infinity is not a member."""
    K = FieldContext(-1)
    i = K.sqrt
    p, q = i, 1 + i
    rows = [
        (1, 0, 0), (1, 0, -1), (1, 0, -p), (1, 0, -q),
        (0, 1, 0), (0, 1, -1), (0, 1, -p), (0, 1, -q),
        (1, -1, 0), (1, -i, -1), (1, 1, -1 - i), (1, i, -i),
    ]
    return cone(rows, add_infinity=False, ctx=K)


G443_QUADRUPLES = _sets((1, 2, 3, 4), (5, 6, 7, 8), (9, 10, 11, 12))


def is_generic_lambda(lam: Fraction) -> bool:
    lam = Fraction(lam)
    return lam * (lam - 1) * (lam - 2) * (2 * lam - 1) * (lam + 1) * (lam * lam - lam + 1) != 0


def ch13(lam: Fraction = DEFAULT_LAMBDA) -> Arrangement:
    """The 13-line arrangement over Q(sqrt 3); H_13 is the line at infinity."""
    lam = Fraction(lam)
    if not is_generic_lambda(lam):
        raise NonGenericLambdaError(f"lambda = {lam} is not generic")
    K = FieldContext(3)
    s = K.sqrt
    c = -lam * lam + lam - 1
    rows = [
        (-s, -1, lam + 1),
        (0, 2, lam + 1),
        (s, -1, lam + 1),
        (s, -1, lam - 2),
        (-s, -1, lam - 2),
        (0, 2, lam - 2),
        (0, 2, -2 * lam + 1),
        (s, -1, -2 * lam + 1),
        (-s, -1, -2 * lam + 1),
        (s * (1 - lam), lam + 1, c),
        (s * lam, lam - 2, c),
        (-s, 1 - 2 * lam, c),
    ]
    return cone(rows, add_infinity=True, ctx=K)


CH13_M2 = _sets((1, 6, 8), (2, 4, 9), (3, 5, 7))
CH13_M3 = _sets((1, 5, 9, 13), (2, 6, 7, 13), (3, 4, 8, 13))
CH13_M4 = _sets((1, 4, 7, 10, 11), (2, 5, 8, 11, 12), (3, 6, 9, 10, 12))


def pencil(k: int) -> Arrangement:
    """k lines x - j y = 0 through [0:0:1]."""
    if k < 1:
        raise ValueError("a pencil needs at least one line")
    return Arrangement.from_rows([(1, -j, 0) for j in range(k)])


def near_pencil(k: int) -> Arrangement:
    """A pencil of k - 1 lines plus the line z = 0."""
    if k < 3:
        raise ValueError("a near pencil needs at least three lines")
    return pencil(k - 1).add(Triple(0, 0, 1))


def _pencil_f(k: int) -> FVector:
    return tuple(1 if i == k - 1 else 0 for i in range(1, k))


def _near_pencil_f(k: int) -> FVector:
    f = [0] * (k - 2)
    f[0] += k - 1
    f[k - 3] += 1
    return tuple(f)


Builder = Callable[..., CatalogEntry]


def _entry_dual_hesse(**_):
    A = dual_hesse()
    _validate("dual_hesse", A, (0, 12))
    return CatalogEntry("dual_hesse", {}, A, (0, 12), (4, 4))


def _entry_dual_hesse_affine(**_):
    A = dual_hesse_affine()
    _validate("dual_hesse_affine", A, (0, 12), {2: DUAL_HESSE_TRIPLES})
    return CatalogEntry("dual_hesse_affine", {}, A, (0, 12), (4, 4))


def _entry_pentagonal(**_):
    A = pentagonal()
    _validate("pentagonal", A, (10, 5, 5), {2: PENTAGONAL_TRIPLES, 3: PENTAGONAL_QUADRUPLES})
    return CatalogEntry("pentagonal", {}, A, (10, 5, 5), (5, 5))


def _entry_g443(**_):
    A = g443()
    _validate("g443", A, (0, 16, 3))
    return CatalogEntry("g443", {}, A, (0, 16, 3), (5, 6))


def _entry_g443_affine(**_):
    A = g443_affine()
    _validate("g443_affine", A, (0, 16, 3), {3: G443_QUADRUPLES})
    return CatalogEntry("g443_affine", {}, A, (0, 16, 3), (5, 6))


def _entry_ch13(lam=None, **_):
    lam = DEFAULT_LAMBDA if lam is None else Fraction(lam)
    A = ch13(lam)
    _validate(f"ch13(lambda={lam})", A, (21, 3, 3, 3), {2: CH13_M2, 3: CH13_M3, 4: CH13_M4})
    return CatalogEntry("ch13", {"lambda": lam}, A, (21, 3, 3, 3), (6, 6))


def _entry_pencil(k=3, **_):
    A = pencil(k)
    f = _pencil_f(k)
    _validate(f"pencil({k})", A, f)
    return CatalogEntry("pencil", {"k": k}, A, f, (0, k - 1))


def _entry_near_pencil(k=4, **_):
    A = near_pencil(k)
    f = _near_pencil_f(k)
    _validate(f"near_pencil({k})", A, f)
    return CatalogEntry("near_pencil", {"k": k}, A, f, (1, k - 2))


BUILDERS: Dict[str, Builder] = {
    "dual_hesse": _entry_dual_hesse,
    "dual_hesse_affine": _entry_dual_hesse_affine,
    "pentagonal": _entry_pentagonal,
    "g443": _entry_g443,
    "g443_affine": _entry_g443_affine,
    "ch13": _entry_ch13,
    "pencil": _entry_pencil,
    "near_pencil": _entry_near_pencil,
}


def get(name: str, lam: Optional[Fraction] = None, k: Optional[int] = None) -> CatalogEntry:
    try:
        build = BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}") from None
    kwargs = {}
    if lam is not None:
        kwargs["lam"] = lam
    if k is not None:
        kwargs["k"] = k
    return build(**kwargs)
