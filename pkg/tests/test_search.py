import random
from collections import Counter

import pytest

from freearr import catalog
from freearr.acceptance import ch13_probes
from freearr.errors import BoundViolatedError, DuplicateLineError, InvariantViolation, PreconditionError
from freearr.exactnum import RATIONAL
from freearr.freeness import Method, decide_free
from freearr.geometry import Arrangement, Triple, meet
from freearr.randgen import random_arrangement
from freearr.search import (Add, CertificateKind, Delete, ReplayRecord, addition_profiles, candidate_additions,
                            completeness_bound, exponents_after_addition, exponents_after_deletion,
                            inductive_certificate, prove_stuck, recursive_sequence, replay, try_step)


def test_exponent_bookkeeping():
    assert exponents_after_addition((4, 4), 5) == (4, 5)
    assert exponents_after_addition((4, 5), 6) == (5, 5)
    assert exponents_after_addition((4, 5), 5) == (4, 6)
    assert exponents_after_addition((4, 5), 7) is None
    assert exponents_after_addition((4, 4), 4) is None
    assert exponents_after_deletion((4, 5), 5) == (4, 4)
    assert exponents_after_deletion((0, 3), 1) == (0, 2)
    assert exponents_after_deletion((0, 0), 1) is None


def test_candidates_dual_hesse():
    for A in (catalog.dual_hesse(), catalog.dual_hesse_affine()):
        cands = candidate_additions(A, None, 5)
        assert len(cands) == 12
        assert all(c.resulting_n == 5 for c in cands)
        assert addition_profiles(A, None, 5) == Counter({(3, 0, 2): 12})


def test_candidates_pentagonal():
    P = catalog.pentagonal()
    assert len(candidate_additions(P, None, 6)) == 10
    prof = addition_profiles(P, None, 6)
    assert prof == Counter({(3, 2, 0, 1): 5, (4, 0, 1, 1): 5})
    assert (1, 5, 0, 0) not in prof and (2, 3, 1) not in prof


def test_candidates_ch13_empty():
    assert candidate_additions(catalog.ch13(), None, 7) == []
    assert addition_profiles(catalog.ch13(), None, 7) == Counter()


def test_bound_violation():
    A = catalog.ch13()
    assert completeness_bound(A.lattice) == 8
    with pytest.raises(BoundViolatedError):
        candidate_additions(A, None, 9)


def brute_candidates(A, target):
    """Oracle: every line with small coefficients, counted directly."""
    out = set()
    rng = range(-3, 4)
    for a in rng:
        for b in rng:
            for c in rng:
                if (a, b, c) == (0, 0, 0):
                    continue
                H = Triple(a, b, c)
                if H in A:
                    continue
                if len({meet(H, h) for h in A.lines}) == target:
                    out.add(H)
    return out


def test_candidates_against_brute_force():
    rng = random.Random(4)
    checked = 0
    while checked < 25:
        A = random_arrangement(rng, rng.randint(4, 7), RATIONAL, spread=1)
        L = A.lattice
        bound = completeness_bound(L)
        if bound < 1:
            continue
        for t in range(1, bound + 1):
            got = {c.line for c in candidate_additions(A, L, t)}
            small = brute_candidates(A, t)
            # every small-coefficient line with the right n must be found
            assert small <= got
        checked += 1


def test_try_step():
    A = catalog.dual_hesse_affine()
    B, v = try_step(A, Add(Triple(1, -1, 0, ctx=A.ctx)), decide_free(A))
    assert v.exponents == (4, 5) and B.lattice.n(10) == 5
    C, w = try_step(B, Delete(9), v)
    assert w.exponents == (4, 4)
    with pytest.raises(DuplicateLineError):
        try_step(A, Add(A.line(3)))
    with pytest.raises(IndexError):
        try_step(A, Delete(10))


def test_try_step_g443():
    G = catalog.g443_affine()
    B, v = try_step(G, Add(Triple(0, 0, 1, ctx=G.ctx)), decide_free(G))
    assert B.lattice.n(13) == 6 and v.exponents == (5, 7)
    assert B.lattice.n(9) == 6
    C, w = try_step(B, Delete(9), v)
    assert w.exponents == (5, 6)


def test_inductive_pencil():
    cert = inductive_certificate(catalog.pencil(5))
    assert cert.kind is CertificateKind.INDUCTIVE_CHAIN
    assert [s.line_index for s in cert.chain] == [1, 2, 3, 4, 5]
    assert [s.exponents for s in cert.chain] == [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)]


def test_inductive_none():
    for name in ("dual_hesse", "pentagonal", "g443", "ch13"):
        assert inductive_certificate(catalog.get(name).arrangement) is None
    assert inductive_certificate(Arrangement.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])) is None


def test_inductive_replays():
    P = catalog.pentagonal()
    A1 = P.add(Triple(1, -1, 0, ctx=P.ctx))
    cert = inductive_certificate(A1)
    assert cert is not None
    R = replay(A1.ctx, cert.records())
    assert set(R.lines) == set(A1.lines)


def test_inductive_random_replay():
    rng = random.Random(9)
    found = 0
    for _ in range(200):
        A = random_arrangement(rng, rng.randint(2, 8))
        cert = inductive_certificate(A)
        if cert is None:
            continue
        found += 1
        R = replay(A.ctx, cert.records())
        assert set(R.lines) == set(A.lines)
    assert found > 30


def test_replay_rejects_wrong_claim():
    P = catalog.pencil(3)
    recs = inductive_certificate(P).records()
    bad = recs[:-1] + [ReplayRecord("+", recs[-1].line, (1, 1))]
    with pytest.raises(InvariantViolation):
        replay(P.ctx, bad)
    # deleting a line that is not there
    with pytest.raises(InvariantViolation):
        replay(P.ctx, recs + [ReplayRecord("-", Triple(0, 0, 1), (0, 1))])
    # a non-free intermediate: three general lines plus a fourth
    G = Arrangement.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    gen = inductive_certificate(G).records() + [ReplayRecord("+", Triple(1, 1, 1), (1, 2))]
    with pytest.raises(InvariantViolation):
        replay(G.ctx, gen)


def test_stuck_ch13():
    A = catalog.ch13()
    cert = prove_stuck(A)
    assert cert.kind is CertificateKind.STUCK
    assert [i for i, _ in cert.deletions] == list(range(1, 14))
    assert all(v.method is Method.CHI_NON_INTEGRAL for _, v in cert.deletions)
    assert cert.additions == {7: []}
    assert cert.bound == 8


def test_stuck_none():
    assert prove_stuck(catalog.dual_hesse()) is None
    assert prove_stuck(catalog.pencil(3)) is None
    with pytest.raises(PreconditionError):
        prove_stuck(Arrangement.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]))
    with pytest.raises(ValueError):
        prove_stuck(catalog.ch13()).records()


def test_ch13_probes():
    pr = ch13_probes(catalog.ch13())
    for pair, n in pr["double_pairs"].items():
        assert n == (10 if (10, 13) in pair else 11), pair
    assert pr["triple_pair"] == 9
    assert pr["quintuple"] == {(2, 3): 8, (5, 6): 8, (8, 9): 8}
    assert pr["horizontal_set"] and pr["horizontal_distinct_y"] == 9


def test_recursive_sequences():
    D = catalog.dual_hesse_affine()
    h = Triple(1, -1, 0, ctx=D.ctx)
    recs = recursive_sequence(D, [Add(h), Delete(9), Delete(7)])
    assert recs[-1] == ReplayRecord("-", h, (4, 4))
    assert set(replay(D.ctx, recs).lines) == set(D.lines)
    with pytest.raises(PreconditionError):
        recursive_sequence(D, [])
    with pytest.raises(PreconditionError):
        recursive_sequence(D, [Delete(1)])
