"""Addition and deletion moves, inductive chains, and non-recursive-freeness certificates."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import BoundViolatedError, DuplicateLineError, InvariantViolation, PreconditionError
from .exactnum import FieldContext
from .freeness import FreenessVerdict, Method, Status, decide_free
from .geometry import Arrangement, FVector, Lattice, LatticePoint, Triple, join, line_profile

Exps = Tuple[int, int]


@dataclass(frozen=True)
class CandidateLine:
    line: Triple
    through: Tuple[Tuple[int, ...], ...]
    resulting_n: int


@dataclass(frozen=True)
class Add:
    line: Triple


@dataclass(frozen=True)
class Delete:
    index: int


Move = Union[Add, Delete]


@dataclass(frozen=True)
class ReplayRecord:
    """One step of a replayable sequence: add or delete ``line``, claiming exponents afterwards."""

    sign: str
    line: Triple
    exponents: Exps


class CertificateKind(enum.Enum):
    INDUCTIVE_CHAIN = "InductiveChain"
    STUCK = "Stuck"


@dataclass(frozen=True)
class ChainStep:
    line_index: int
    line: Triple
    n: int
    exponents: Exps


@dataclass
class Certificate:
    kind: CertificateKind
    chain: List[ChainStep] = field(default_factory=list)
    verdict: Optional[FreenessVerdict] = None
    deletions: List[Tuple[int, FreenessVerdict]] = field(default_factory=list)
    additions: Dict[int, List[Tuple[CandidateLine, FreenessVerdict]]] = field(default_factory=dict)
    bound: Optional[int] = None

    def records(self) -> List[ReplayRecord]:
        if self.kind is not CertificateKind.INDUCTIVE_CHAIN:
            raise ValueError("only inductive chains replay as move sequences")
        return [ReplayRecord("+", s.line, s.exponents) for s in self.chain]


def _lat(A: Arrangement, L: Optional[Lattice]) -> Lattice:
    return A.lattice if L is None else L


def completeness_bound(L: Lattice) -> int:
    return L.ell - 1 - L.max_mu


def new_line_n(L: Lattice, line: Triple) -> Tuple[int, List[LatticePoint]]:
    """n of a new line added to the arrangement with lattice L, and the lattice points it hits."""
    on = [p for p in L.points if line.incident(p.point)]
    return L.ell - sum(p.mu for p in on), on


def candidate_additions(A: Arrangement, L: Optional[Lattice], target_n: int) -> List[CandidateLine]:
    """Every line outside A whose addition meets A in exactly target_n points.

    Complete only when target_n <= l - 1 - max mu: a line through at most one
    lattice point meets A in at least l - max mu points, so every candidate
    is spanned by two lattice points.
    """
    L = _lat(A, L)
    bound = completeness_bound(L)
    if target_n > bound:
        raise BoundViolatedError(f"target n = {target_n} exceeds completeness bound {bound}")
    seen = set()
    pts = L.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            seen.add(join(pts[i].point, pts[j].point))
    members = set(A.lines)
    out = []
    for line in sorted(seen - members, key=Triple.sort_key):
        n, on = new_line_n(L, line)
        if n == target_n:
            out.append(CandidateLine(line, tuple(p.incident for p in on), n))
    for c in out:
        B = A.add(c.line)
        if line_profile(B.lattice, B, len(B)).n != c.resulting_n:
            raise InvariantViolation(f"candidate {c.line!r}: stored n disagrees with recomputation")
    return out


def addition_profiles(A: Arrangement, L: Optional[Lattice], target_n: int) -> Counter:
    out = Counter()
    for c in candidate_additions(A, L, target_n):
        B = A.add(c.line)
        out[line_profile(B.lattice, B, len(B)).fh] += 1
    return out


def exponents_after_addition(exps: Exps, n: int) -> Optional[Exps]:
    a, b = exps
    if n == a + 1:
        return tuple(sorted((a, b + 1)))
    if n == b + 1:
        return tuple(sorted((a + 1, b)))
    return None


def exponents_after_deletion(exps: Exps, n: int) -> Optional[Exps]:
    a, b = exps
    if n == a + 1 and b >= 1:
        return tuple(sorted((a, b - 1)))
    if n == b + 1 and a >= 1:
        return tuple(sorted((a - 1, b)))
    return None


_EMPTY_FREE = FreenessVerdict(Status.FREE, (0, 0), Method.TRIVIAL)


def try_step(A: Arrangement, move: Move, known: Optional[FreenessVerdict] = None) -> Tuple[Arrangement, FreenessVerdict]:
    """Apply a move and decide freeness of the result.

    When ``known`` is a free verdict for A, the addition-deletion shortcut is
    evaluated as well and must agree with the full decision.
    """
    if isinstance(move, Add):
        if move.line in A:
            raise DuplicateLineError(f"{move.line!r} already in the arrangement")
        B = A.add(move.line)
        n = B.lattice.n(len(B))
        shortcut = exponents_after_addition
    else:
        B = A.delete(move.index)
        n = A.lattice.n(move.index)
        shortcut = exponents_after_deletion
    if len(B) == 0:
        return B, _EMPTY_FREE
    v = decide_free(B)
    if known is not None and known.free and len(B) >= 2:
        predicted = shortcut(known.exponents, n)
        if (predicted is not None) != v.free or (predicted is not None and predicted != v.exponents):
            raise InvariantViolation(f"addition-deletion predicts {predicted}, decision gave {v.describe()}")
    return B, v


def inductive_certificate(A: Arrangement, verdict: Optional[FreenessVerdict] = None) -> Optional[Certificate]:
    """Search for a chain of free deletions down to a single line.

    Deletions are tried from the highest index down, so the forward chain
    adds earlier lines first where possible.
    """
    if len(A) == 0:
        return Certificate(CertificateKind.INDUCTIVE_CHAIN, [])
    verdict = decide_free(A) if verdict is None else verdict
    if not verdict.free:
        return None
    full = A.lattice
    dead = set()

    def dfs(labels: frozenset, exps: Exps) -> Optional[List[Tuple[int, int, Exps]]]:
        if len(labels) == 1:
            return []
        if labels in dead:
            return None
        L = full.restrict(labels)
        for h in sorted(labels, reverse=True):
            n = L.n(h)
            nxt = exponents_after_deletion(exps, n)
            if nxt is None:
                continue
            rest = dfs(labels - {h}, nxt)
            if rest is not None:
                return rest + [(h, n, exps)]
        dead.add(labels)
        return None

    labels = frozenset(full.labels)
    path = dfs(labels, verdict.exponents)
    if path is None:
        return None
    first = (labels - {h for h, _, _ in path})
    (h0,) = first
    chain = [ChainStep(h0, A.line(h0), 0, (0, 0))]
    chain += [ChainStep(h, A.line(h), n, exps) for h, n, exps in path]
    return Certificate(CertificateKind.INDUCTIVE_CHAIN, chain, verdict=verdict)


def replay(ctx: FieldContext, records: Sequence[ReplayRecord], start: Optional[Arrangement] = None) -> Arrangement:
    """Re-run a move sequence from ``start`` (default empty), checking every claim.

    Each intermediate arrangement must be decided free with the claimed exponents.
    """
    A = Arrangement(ctx, ()) if start is None else start
    known: Optional[FreenessVerdict] = None
    if len(A):
        known = decide_free(A)
        if not known.free:
            raise InvariantViolation("replay starts from a non-free arrangement")
    for k, r in enumerate(records, 1):
        if r.sign == "+":
            move: Move = Add(r.line)
        elif r.sign == "-":
            if r.line not in A:
                raise InvariantViolation(f"record {k}: deleting a line not in the arrangement")
            move = Delete(A.index(r.line))
        else:
            raise ValueError(f"record {k}: bad sign {r.sign!r}")
        A, v = try_step(A, move, known)
        if not v.free:
            raise InvariantViolation(f"record {k}: result is not free ({v.describe()})")
        if v.exponents != tuple(r.exponents):
            raise InvariantViolation(f"record {k}: claimed exponents {r.exponents}, found {v.exponents}")
        known = v
    return A


def recursive_sequence(A: Arrangement, moves_down: Sequence[Move]) -> List[ReplayRecord]:
    """Turn free moves away from A plus an inductive chain of the endpoint into a sequence from the empty arrangement.

    ``moves_down`` is applied to A (every intermediate must stay free); the
    endpoint must be inductively free.  The returned records build the
    endpoint by additions and then undo ``moves_down`` in reverse, ending at A.
    """
    states = [(A, decide_free(A))]
    if not states[0][1].free:
        raise PreconditionError("arrangement is not free")
    for mv in moves_down:
        B, v = try_step(states[-1][0], mv, states[-1][1])
        if not v.free:
            raise PreconditionError(f"move {mv} leaves the free arrangements ({v.describe()})")
        states.append((B, v))
    end, end_v = states[-1]
    cert = inductive_certificate(end, end_v)
    if cert is None:
        raise PreconditionError("endpoint of the moves is not inductively free")
    records = cert.records()
    for k in range(len(moves_down) - 1, -1, -1):
        mv = moves_down[k]
        before, before_v = states[k]
        if isinstance(mv, Add):
            records.append(ReplayRecord("-", mv.line, before_v.exponents))
        else:
            records.append(ReplayRecord("+", before.line(mv.index), before_v.exponents))
    return records


def prove_stuck(A: Arrangement, verdict: Optional[FreenessVerdict] = None) -> Optional[Certificate]:
    """Certificate that no free arrangement is one addition or deletion away from A.

    Together with A being free this rules out recursive freeness: the step
    next to A in any recursive sequence would be such a neighbour.
    """
    verdict = decide_free(A) if verdict is None else verdict
    if not verdict.free:
        raise PreconditionError("prove_stuck needs a free arrangement")
    deletions = []
    for i in range(1, len(A) + 1):
        _, v = try_step(A, Delete(i), verdict)
        if v.free:
            return None
        deletions.append((i, v))
    L = A.lattice
    a, b = verdict.exponents
    additions = {}
    for t in sorted({a + 1, b + 1}):
        rows = []
        for c in candidate_additions(A, L, t):
            _, v = try_step(A, Add(c.line), verdict)
            if v.free:
                return None
            rows.append((c, v))
        additions[t] = rows
    return Certificate(CertificateKind.STUCK, verdict=verdict, deletions=deletions, additions=additions,
                       bound=completeness_bound(L))
