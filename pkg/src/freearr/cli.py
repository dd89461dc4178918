"""Command-line front end.

Exit status: 0 on success, 1 on usage or input errors (and on a failing
``verify-paper``), 2 when an internal cross-check trips.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import catalog
from .acceptance import verify_paper
from .errors import ArrangementError, InvariantViolation
from .fileformat import parse_arrangement, parse_replay, serialize_arrangement, serialize_replay
from .freeness import FreenessVerdict, Method, decide_free, enumerate_profiles
from .geometry import Arrangement, Triple, char_poly, f_vector, line_profiles
from .search import Certificate, inductive_certificate, prove_stuck, replay


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def triple_doc(t: Triple) -> List[str]:
    return [str(c) for c in t.coords]


def _witness_doc(v: FreenessVerdict) -> Any:
    w = v.witness
    if v.method is Method.CLASSIFIED_BALANCED:
        if isinstance(w, dict):
            return {"class": w["class"].value, "bijection": {str(k): w["bijection"][k] for k in sorted(w["bijection"])}}
        return {"class": w.value}
    if v.method is Method.YOSHINAGA:
        return {"pivot": w["pivot"], "ziegler": list(w["ziegler"])}
    if v.method is Method.ABT:
        return {"line": w}
    if v.method is Method.CHI_NON_INTEGRAL:
        return {"q": list(w)}
    return None


def verdict_doc(v: FreenessVerdict) -> Dict[str, Any]:
    return {
        "status": v.status.value,
        "exponents": None if v.exponents is None else [1, *v.exponents],
        "method": v.method.value,
        "witness": _witness_doc(v),
    }


def analyze_doc(A: Arrangement) -> Dict[str, Any]:
    L = A.lattice
    q = char_poly(L)
    return {
        "field": "rational" if A.ctx.d is None else A.ctx.d,
        "ell": len(A),
        "f_vector": list(f_vector(L)),
        "mu": L.mu_total,
        "chi": str(q),
        "q": list(q.q),
        "profiles": [{"line": p.line_index, "n": p.n, "fh": list(p.fh)} for p in line_profiles(L)],
        "verdict": verdict_doc(decide_free(A)),
    }


def chain_doc(cert: Optional[Certificate]) -> Dict[str, Any]:
    if cert is None:
        return {"inductive": False, "chain": None}
    return {
        "inductive": True,
        "chain": [{"line_index": s.line_index, "line": triple_doc(s.line), "n": s.n,
                   "exponents": [1, *s.exponents]} for s in cert.chain],
    }


def stuck_doc(cert: Optional[Certificate]) -> Dict[str, Any]:
    if cert is None:
        return {"stuck": False}
    return {
        "stuck": True,
        "exponents": [1, *cert.verdict.exponents],
        "bound": cert.bound,
        "deletions": [{"line": i, "verdict": verdict_doc(v)} for i, v in cert.deletions],
        "additions": {str(t): [{"line": triple_doc(c.line), "through": [list(p) for p in c.through],
                                "verdict": verdict_doc(v)} for c, v in rows]
                      for t, rows in sorted(cert.additions.items())},
    }


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str) -> Arrangement:
    return parse_arrangement(_read(path))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _emit(args, doc: Dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_analyze(args) -> int:
    A = _load(args.file)
    doc = analyze_doc(A)
    lines = [
        f"field     {A.ctx}",
        f"lines     {doc['ell']}",
        f"F         {doc['f_vector']}",
        f"chi       {doc['chi']}",
        "profiles  " + "  ".join(f"H{p['line']}: n={p['n']} {p['fh']}" for p in doc["profiles"]),
        f"verdict   {decide_free(A).describe()}",
    ]
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_free(args) -> int:
    A = _load(args.file)
    v = decide_free(A, method=args.method, pivot=args.pivot, cross_check=args.cross_check)
    _emit(args, verdict_doc(v), v.describe())
    return 0


def cmd_inductive(args) -> int:
    A = _load(args.file)
    cert = inductive_certificate(A)
    if cert is not None and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_replay(A.ctx, cert.records(), comment="inductive chain"))
    if cert is None:
        text = "no inductive chain (" + decide_free(A).describe() + ")"
    else:
        text = "\n".join(f"+ H{s.line_index}  n={s.n}  exp (1, {s.exponents[0]}, {s.exponents[1]})" for s in cert.chain)
    _emit(args, chain_doc(cert), text)
    return 0


def cmd_stuck(args) -> int:
    A = _load(args.file)
    cert = prove_stuck(A)
    if cert is None:
        text = "not stuck: some addition or deletion stays free"
    else:
        counts = ", ".join(f"n={t}: {len(rows)}" for t, rows in sorted(cert.additions.items()))
        text = (f"stuck: {len(cert.deletions)} deletions all non-free, "
                f"addition candidates {counts} all non-free (bound {cert.bound})")
    _emit(args, stuck_doc(cert), text)
    return 0


def cmd_replay(args) -> int:
    ctx, records = parse_replay(_read(args.cert))
    A = replay(ctx, records)
    doc = {"valid": True, "records": len(records), "ell": len(A), "lines": [triple_doc(t) for t in A.lines]}
    text = f"valid: {len(records)} records, ends at {len(A)} lines"
    if args.expect:
        B = _load(args.expect)
        same = set(A.lines) == set(B.lines)
        doc["matches"] = same
        text += "; matches " + args.expect if same else "; does NOT match " + args.expect
        if not same:
            _emit(args, doc, text)
            return 1
    _emit(args, doc, text)
    return 0


def cmd_profiles(args) -> int:
    ps = enumerate_profiles(args.max)
    doc = {"max": args.max, "profiles": [{"ell": p.ell, "a": p.a_min, "f": list(p.f)} for p in ps]}
    _emit(args, doc, "\n".join(f"({p.ell}, {p.a_min}, {list(p.f)})" for p in ps) or "none")
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        _emit(args, {"names": list(catalog.NAMES)}, "\n".join(catalog.NAMES))
        return 0
    if not args.name:
        raise UsageError("catalog emit needs a NAME")
    try:
        e = catalog.get(args.name, lam=args.lam, k=args.k)
    except KeyError as err:
        raise UsageError(err.args[0]) from None
    params = " ".join(f"{k}={v}" for k, v in sorted(e.params.items()))
    text = serialize_arrangement(e.arrangement, comment=f"{e.name} {params}".rstrip()).rstrip("\n")
    doc = {"name": e.name, "params": {k: str(v) for k, v in sorted(e.params.items())},
           "field": "rational" if e.arrangement.ctx.d is None else e.arrangement.ctx.d,
           "lines": [triple_doc(t) for t in e.arrangement.lines]}
    _emit(args, doc, text)
    return 0


def cmd_verify(args) -> int:
    if args.corrupt is not None and args.corrupt not in catalog.BUILDERS:
        raise UsageError(f"unknown catalog entry {args.corrupt!r}")
    results = verify_paper(lam=args.lam if args.lam is not None else catalog.DEFAULT_LAMBDA, corrupt=args.corrupt)
    ok = all(r.passed for r in results)
    doc = {"passed": ok, "items": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
                                   for r in results]}
    rows = [f"{r.number:>2}  {'PASS' if r.passed else 'FAIL'}  {r.seconds:6.2f}s  {r.name}: {r.detail}" for r in results]
    rows.append("all items pass" if ok else f"{sum(not r.passed for r in results)} item(s) FAIL")
    _emit(args, doc, "\n".join(rows))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freearr", description="Exact freeness analysis of line arrangements.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("analyze", cmd_analyze, "lattice invariants and verdict")
    sp.add_argument("file")
    sp = add("free", cmd_free, "decide freeness")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("auto", "abt", "yoshinaga", "classify"), default="auto")
    sp.add_argument("--pivot", type=int)
    sp.add_argument("--cross-check", action="store_true")
    sp = add("inductive", cmd_inductive, "search for an inductive chain")
    sp.add_argument("file")
    sp.add_argument("--out", help="write the chain as a replay file")
    sp = add("stuck", cmd_stuck, "certify that no neighbour is free")
    sp.add_argument("file")
    sp = add("replay", cmd_replay, "re-verify a replay file")
    sp.add_argument("cert")
    sp.add_argument("--expect", help="arrangement file the replay must rebuild")
    sp = add("profiles", cmd_profiles, "balanced free profiles")
    sp.add_argument("--max", type=int, required=True)
    sp = add("catalog", cmd_catalog, "named arrangements")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--lambda", dest="lam", type=_fraction)
    sp.add_argument("--k", type=int)
    sp = add("verify-paper", cmd_verify, "run the reproduction suite")
    sp.add_argument("--lambda", dest="lam", type=_fraction)
    sp.add_argument("--corrupt", help=argparse.SUPPRESS)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except InvariantViolation as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    except (UsageError, ArrangementError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
