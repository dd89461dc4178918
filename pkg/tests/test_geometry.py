import itertools
import random
from collections import Counter
from fractions import Fraction
from math import comb

import pytest

from freearr import catalog
from freearr.errors import DuplicateLineError, EmptyArrangementError, EqualLinesError
from freearr.exactnum import RATIONAL, FieldContext
from freearr.geometry import (Arrangement, Triple, char_poly, compute_lattice, cone, conjugate_arrangement,
                              f_vector, is_lattice_map, iter_lattice_isomorphisms, lattice_isomorphic,
                              line_profile, line_profiles, meet, substitute)
from freearr.randgen import random_arrangement, random_invertible


def T(*c, ctx=RATIONAL):
    return Triple(*c, ctx=ctx)


def test_triple_normalization():
    assert T(2, 4, 6) == T(1, 2, 3) == T(-1, -2, -3)
    assert T(0, 3, -6).coords == (0, 1, -2)
    with pytest.raises(ValueError):
        T(0, 0, 0)


def test_meet_axes():
    assert meet(T(1, 0, 0), T(0, 1, 0)) == T(0, 0, 1)
    assert meet(T(1, 0, -1), T(0, 1, -1)) == T(1, 1, 1)
    with pytest.raises(EqualLinesError):
        meet(T(1, 2, 3), T(2, 4, 6))


def test_meet_dual_hesse_affine():
    A = catalog.dual_hesse_affine()
    p = meet(A.line(1), A.line(5))
    assert p == T(0, 0, 1, ctx=A.ctx)
    assert A.line(3).incident(p)


def test_pencil_lattice():
    A = Arrangement.from_rows([(1, 0, 0), (0, 1, 0), (1, -1, 0)])
    L = A.lattice
    assert [(p.point, p.incident, p.mu) for p in L.points] == [(T(0, 0, 1), (1, 2, 3), 2)]
    assert f_vector(L) == (0, 1)


def test_duplicates_rejected():
    with pytest.raises(DuplicateLineError):
        Arrangement.from_rows([(1, 0, 0), (2, 0, 0)])
    with pytest.raises(DuplicateLineError):
        cone([(1, 0, 0), (0, 0, 1)])  # z = 0 twice once coned


@pytest.mark.parametrize("name,f,pts", [
    ("dual_hesse", (0, 12), 12),
    ("dual_hesse_affine", (0, 12), 12),
    ("g443", (0, 16, 3), 19),
    ("pentagonal", (10, 5, 5), 20),
    ("ch13", (21, 3, 3, 3), 30),
])
def test_catalog_lattices(name, f, pts):
    A = catalog.get(name).arrangement
    assert f_vector(A) == f
    assert len(A.lattice.points) == pts


def test_line_profiles():
    for p in line_profiles(catalog.dual_hesse().lattice):
        assert (p.n, p.fh) == (4, (0, 4))
    P = catalog.pentagonal()
    profs = line_profiles(P.lattice)
    assert all((p.n, p.fh) == (5, (2, 1, 2)) for p in profs[:10])
    assert (profs[10].n, profs[10].fh) == (5, (0, 5))
    assert all(p.n == 6 for p in line_profiles(catalog.ch13().lattice))
    with pytest.raises(IndexError):
        line_profile(P.lattice, P, 12)


@pytest.mark.parametrize("name,q", [
    ("dual_hesse", (1, -8, 16)),
    ("ch13", (1, -12, 36)),
    ("g443", (1, -11, 30)),
    ("pentagonal", (1, -10, 25)),
])
def test_char_poly(name, q):
    cp = char_poly(catalog.get(name).arrangement)
    assert cp.q == q
    assert cp.chi_at(1) == 0


def test_char_poly_empty():
    with pytest.raises(EmptyArrangementError):
        char_poly(Arrangement(RATIONAL, ()))


def test_cone():
    assert len(cone([(1, 0, 0), (0, 1, 0)], add_infinity=False)) == 2
    A = cone([(1, 0, -1), (1, 0, -2), (0, 1, 0)])
    assert len(A) == 4
    assert meet(A.line(1), A.line(2)) == T(0, 1, 0)
    assert A.line(4) == T(0, 0, 1)
    assert A.line(4).incident(T(0, 1, 0))


def test_conjugate():
    A = catalog.dual_hesse_affine()
    C = conjugate_arrangement(A)
    assert C != A
    assert conjugate_arrangement(C) == A
    assert f_vector(C) == (0, 12)
    R = catalog.pencil(4)
    assert conjugate_arrangement(R) == R


def test_isomorphism_examples():
    A = catalog.dual_hesse()
    perm = list(A.lines)
    random.Random(3).shuffle(perm)
    assert lattice_isomorphic(A, Arrangement(A.ctx, tuple(perm))) is not None
    assert lattice_isomorphic(A, catalog.dual_hesse_affine()) is not None
    assert lattice_isomorphic(A, catalog.pencil(9)) is None
    assert lattice_isomorphic(catalog.g443(), catalog.g443_affine()) is not None
    assert lattice_isomorphic(catalog.ch13(Fraction(2, 3)), catalog.ch13(Fraction(3, 5))) is not None
    # same F-vector, different lattices
    assert lattice_isomorphic(catalog.pentagonal(), nonbalanced_55()) is None


def nonbalanced_55():
    return Arrangement.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, -1), (1, 0, 1), (0, 1, -1),
                                  (0, 1, 1), (1, -1, 0), (1, 1, 0), (1, -1, 1), (1, -1, 2)])


def test_dual_hesse_automorphism_count():
    # 9 lines and 12 triple points form the affine plane of order 3; |AGL(2,3)| = 432
    L = catalog.dual_hesse().lattice
    assert sum(1 for _ in iter_lattice_isomorphisms(L, L)) == 432


def test_ch13_rotation_is_automorphism():
    L = catalog.ch13().lattice
    sigma = {13: 13}
    for i in range(4):
        sigma.update({3 * i + 1: 3 * i + 2, 3 * i + 2: 3 * i + 3, 3 * i + 3: 3 * i + 1})
    assert is_lattice_map(L, L, sigma)
    bad = dict(sigma)
    bad[1], bad[2] = sigma[2], sigma[1]
    assert not is_lattice_map(L, L, bad)


def brute_points(A):
    """Oracle: group pairs by solving the 2x2 system for the meet directly."""
    out = Counter()
    groups = {}
    for i, j in itertools.combinations(range(1, len(A) + 1), 2):
        p = A.line(i).cross(A.line(j))
        groups.setdefault(p, set()).update((i, j))
    for s in groups.values():
        out[frozenset(s)] += 1
    return out


def test_lattice_against_oracle():
    rng = random.Random(11)
    for _ in range(150):
        K = rng.choice([RATIONAL, FieldContext(-3), FieldContext(2)])
        A = random_arrangement(rng, rng.randint(2, 9), K)
        fam = A.lattice.family()
        assert fam == brute_points(A)
        for p in A.lattice.points:
            assert all(A.line(h).incident(p.point) for h in p.incident)
            assert not any(A.line(h).incident(p.point) for h in range(1, len(A) + 1) if h not in p.incident)


def test_identities_random():
    rng = random.Random(5)
    for _ in range(200):
        A = random_arrangement(rng, rng.randint(2, 9))
        L = compute_lattice(A)
        F = f_vector(L)
        assert sum(comb(i + 1, 2) * x for i, x in enumerate(F, 1)) == comb(len(A), 2)
        assert sum(i * x for i, x in enumerate(F, 1)) == L.mu_total
        for h in L.labels:
            prof = line_profile(L, A, h)
            assert sum(i * x for i, x in enumerate(prof.fh, 1)) == len(A) - 1


def test_substitution_invariance():
    rng = random.Random(8)
    for _ in range(100):
        K = rng.choice([RATIONAL, FieldContext(5)])
        A = random_arrangement(rng, rng.randint(2, 8), K)
        B = substitute(A, random_invertible(rng, K))
        assert B.lattice.family() == A.lattice.family()


def test_restrict_matches_deletion():
    A = catalog.ch13()
    L = A.lattice
    keep = [h for h in L.labels if h not in (4, 13)]
    R = L.restrict(keep)
    D = A.subarrangement(keep)
    relabel = {h: k for k, h in enumerate(keep, 1)}
    assert Counter(frozenset(relabel[h] for h in s) for s in R.family()) == D.lattice.family()


def test_arrangement_indexing():
    A = catalog.pencil(3)
    assert A.line(1) == T(1, 0, 0)
    assert A.index(T(1, -2, 0)) == 3
    with pytest.raises(IndexError):
        A.line(0)
    with pytest.raises(IndexError):
        A.line(4)
    assert len(A.delete(2)) == 2 and T(1, -1, 0) not in A.delete(2)
