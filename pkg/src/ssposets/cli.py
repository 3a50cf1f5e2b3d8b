"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input or unmet hypothesis.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from .affine import AffineArrangement, AffineError, affine_ss_check, intersection_poset
from .exactalg import LatticeError
from .families import (FiniteGroupTable, SimpleGraph, classical, deck_action, dowling_poset,
                       finite_index_rewrite, graphic_arrangement)
from .invariants import HypothesisError, charpoly_factored, lcs_ranks, poincare
from .layers import Arrangement, ArrangementError, build_layers
from .poset import FinitePoset, PosetError, find_isomorphism, quotient
from .ssolv import (IdealChain, strictly_supersolvable_chain, supersolvable_chain, tower_report,
                    verify_chain)


class InputError(Exception):
    pass


def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _check_format(data: Any, path: str) -> dict:
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if data.get("format", 1) != 1:
        raise InputError(f"{path}: unsupported format {data.get('format')!r}")
    return data


def _load_arrangement(path: str) -> Arrangement:
    data = _check_format(_read_json(path), path)
    if "vectors" not in data:
        raise InputError(f"{path}: not an arrangement (no \"vectors\" key)")
    return Arrangement.from_json(data)


def _load_poset(path: str, workers: int) -> tuple[FinitePoset, str, Any]:
    """Poset from an arrangement, a poset, or an affine arrangement file."""
    data = _check_format(_read_json(path), path)
    if "vectors" in data:
        a = Arrangement.from_json(data)
        return build_layers(a, workers=workers).poset, "arrangement", a
    if "elements" in data:
        return FinitePoset.from_json(data), "poset", None
    if "hyperplanes" in data:
        a = AffineArrangement.from_json(data)
        return intersection_poset(a), "affine", a
    raise InputError(f"{path}: cannot tell the input type (expected \"vectors\", "
                     "\"elements\" or \"hyperplanes\")")


def _emit(text: str, out: str | None = None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj: Any) -> str:
    """JSON with one top-level key per line."""
    if not isinstance(obj, dict):
        return json.dumps(obj) + "\n"
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in obj.items())
    return "{\n" + body + "\n}\n"


# -- subcommands -------------------------------------------------------------------


def cmd_layers(args) -> int:
    a = _load_arrangement(args.input)
    lp = build_layers(a, workers=args.workers)
    text = lp.poset.to_dot() if args.dot else _dumps(lp.to_json())
    _emit(text, args.out)
    return 0


def cmd_ssolve(args) -> int:
    p, kind, _ = _load_poset(args.input, args.workers)
    chain = strictly_supersolvable_chain(p, workers=args.workers)
    if chain is None:
        chain = supersolvable_chain(p, workers=args.workers)
    if chain is None:
        _emit(_dumps({"format": 1, "supersolvable": False,
                      "note": "not supersolvable: every corank-one candidate ideal was exhausted"}),
              args.out)
        return 0
    out = chain.to_json()
    out["labels"] = [[str(p.labels[x]) for x in s] for s in chain.atom_sets]
    _emit(_dumps(out), args.out)
    return 0


def cmd_tower(args) -> int:
    a = _load_arrangement(args.input)
    _emit(tower_report(a, workers=args.workers).to_text(), args.out)
    return 0


def cmd_invariants(args) -> int:
    a = _load_arrangement(args.input)
    lp = build_layers(a, workers=args.workers)
    p = lp.poset
    chi = p.char_poly()
    lines = [f"chi: {chi}", f"chi_coefficients: {chi.tolist()}"]
    chain = strictly_supersolvable_chain(p, workers=args.workers)
    if chain is not None:
        _, factors = charpoly_factored(chain, p)
        lines.append("chi_factored: " + "".join(f"({f})" for f in factors))
        lines.append(f"a: {list(chain.a)}")
    else:
        ss = supersolvable_chain(p, workers=args.workers)
        lines.append("chi_factored: unavailable (needs a strictly supersolvable chain)")
        if ss is not None:
            lines.append(f"a: {list(ss.a)}")
    d, v = a.ambient.d, a.ambient.v
    a_seq = list(chain.a) if chain is not None else None
    if v == 0:
        lines.append("poincare: unavailable (requires v > 0)")
    elif a_seq is None:
        lines.append("poincare: unavailable (needs a strictly supersolvable chain)")
    else:
        pp = poincare(a_seq, d, v, chi)
        lines.append(f"poincare: {pp}")
        lines.append(f"poincare_coefficients: {pp.tolist()}")
    if args.jmax is not None:
        if (d, v) != (1, 1):
            raise HypothesisError("lower central series ranks require d = 1 and v = 1")
        if a_seq is None:
            raise HypothesisError("lower central series ranks require a strictly supersolvable chain")
        lines.append(f"lcs: {lcs_ranks(a_seq, args.jmax)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    data = _check_format(_read_json(args.certificate), args.certificate)
    try:
        chain = IdealChain.from_json(data)
    except ValueError as exc:
        raise InputError(f"{args.certificate}: {exc}") from None
    p, _, _ = _load_poset(args.input, args.workers)
    v = verify_chain(p, chain, data.get("a"))
    if v:
        print(f"ok: valid {'strict ' if chain.strict else ''}chain, a = {list(chain.a)}")
        return 0
    print(f"invalid: {v.reason}" + (f" {list(v.witness)}" if v.witness else ""))
    return 1


def _parse_edges(text: str) -> list[tuple[int, int]]:
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        i, j = part.split("-")
        out.append((int(i), int(j)))
    return out


def _parse_hyperplanes(text: str) -> list[tuple[list[str], str]]:
    out = []
    for part in filter(None, (s.strip() for s in text.split(";"))):
        normal, _, offset = part.partition(":")
        out.append((normal.split(","), offset or "0"))
    return out


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "graphic":
        if args.edges:
            g = SimpleGraph(args.n, _parse_edges(args.edges))
        else:
            g = {"complete": SimpleGraph.complete, "cycle": SimpleGraph.cycle,
                 "path": SimpleGraph.path}[args.shape](args.n)
        obj = graphic_arrangement(g, args.d, args.v).to_json()
    elif fam == "dowling":
        grp = FiniteGroupTable.cyclic(args.group_order)
        if args.s == "regular":
            grp = grp.with_regular_set()
        else:
            grp = grp.with_trivial_set(int(args.s))
        obj = dowling_poset(args.n, grp).to_json()
    elif fam in ("partition", "boolean"):
        obj = classical(fam, args.n).to_json()
    else:
        if not args.hyperplanes:
            raise InputError("gen affine needs --hyperplanes")
        obj = AffineArrangement(args.n, _parse_hyperplanes(args.hyperplanes)).to_json()
    _emit(_dumps(obj), args.out)
    return 0


def cmd_quotient_check(args) -> int:
    a = _load_arrangement(args.input)
    data = _check_format(_read_json(args.sublattice), args.sublattice)
    if "basis" not in data:
        raise InputError(f"{args.sublattice}: expected a \"basis\" key")
    rows = data["basis"]
    b = finite_index_rewrite(a, rows)
    lp1 = build_layers(a, workers=args.workers)
    lp2 = build_layers(b, workers=args.workers)
    ss1 = supersolvable_chain(lp1.poset, workers=args.workers) is not None
    ss2 = supersolvable_chain(lp2.poset, workers=args.workers) is not None
    lines = [f"rewritten vectors: {[list(v) for v in b.vectors]}",
             f"upstairs: {len(lp1.poset)} layers, supersolvable = {ss1}",
             f"downstairs: {len(lp2.poset)} layers, supersolvable = {ss2}"]
    ok = ss1 == ss2
    if a.ambient.d >= 1:
        q = quotient(lp1.poset, deck_action(lp1, rows))
        iso = find_isomorphism(q.poset, lp2.poset) is not None
        lines.append(f"orbit poset isomorphic to downstairs poset: {iso}")
        ok = ok and iso
    lines.append(f"equivalence holds: {ok}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def cmd_affine_check(args) -> int:
    data = _check_format(_read_json(args.input), args.input)
    res = affine_ss_check(AffineArrangement.from_json(data))
    _emit(_dumps(res), args.out)
    return 0


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssposets",
                                 description="Posets of layers and supersolvability.")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for enumeration")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str, out: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        if out:
            sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("layers", cmd_layers, "poset of layers as JSON or DOT")
    sp.add_argument("input")
    sp.add_argument("--dot", action="store_true")

    sp = add("ssolve", cmd_ssolve, "search for a (strict) supersolvability certificate")
    sp.add_argument("input")

    sp = add("tower", cmd_tower, "fiber-type tower report")
    sp.add_argument("input")

    sp = add("invariants", cmd_invariants, "characteristic and Poincaré polynomials, LCS ranks")
    sp.add_argument("input")
    sp.add_argument("--jmax", type=int)

    sp = add("verify", cmd_verify, "re-check a certificate", out=False)
    sp.add_argument("certificate")
    sp.add_argument("input")

    sp = add("gen", cmd_gen, "generate example inputs")
    sp.add_argument("family", choices=["graphic", "dowling", "partition", "boolean", "affine"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--edges", help="graphic: edges like 0-1,1-2")
    sp.add_argument("--shape", choices=["complete", "cycle", "path"], default="complete")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--v", type=int, default=1)
    sp.add_argument("--group-order", type=int, default=1, help="dowling: cyclic group order")
    sp.add_argument("--s", default="0", help="dowling: number of fixed points, or 'regular'")
    sp.add_argument("--hyperplanes", help="affine: normal:offset entries, e.g. '1,0:0;0,1:0;1,1:1'")

    sp = add("quotient-check", cmd_quotient_check, "compare an arrangement with its rewrite "
                                                    "over a finite-index sublattice")
    sp.add_argument("input")
    sp.add_argument("sublattice")

    sp = add("affine-check", cmd_affine_check, "supersolvability of an affine arrangement, "
                                                "directly and through its cone")
    sp.add_argument("input")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"error: hypothesis not met: {exc}", file=sys.stderr)
        return 2
    except (InputError, ArrangementError, AffineError, PosetError, LatticeError,
            ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
