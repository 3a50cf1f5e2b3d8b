"""M-ideals, TM-ideals and (strict) supersolvability chains.

Ideals are handled as bitmasks over the elements of a :class:`FinitePoset`.
Most predicates take a ``within`` mask: the universe (itself an order
ideal) in which joins, maximal elements and atoms are computed.  This is how
"Q_i is an M-ideal of Q_{i+1}" is evaluated without building subposets.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .layers import (Arrangement, LayerPoset, admissible_from_corank1, build_layers,
                     ideal_mask_from_atoms, puncture_count, quotient_layer, sub_and_quotient)
from .exactalg import IntMatrix, LatticeBasis
from .poset import FinitePoset, PosetError, bits, popcount


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class IdealResult:
    elements: int
    pure: bool
    join_closed: bool

    @property
    def ok(self) -> bool:
        return self.pure and self.join_closed


def _as_mask(p: FinitePoset, q: Iterable[int] | int) -> int:
    return q if isinstance(q, int) else p.mask_of(q)


def _universe(p: FinitePoset, within: int | None) -> int:
    return p.full_mask if within is None else within


def ideal_from_atoms(p: FinitePoset, atoms: Iterable[int] | int,
                     within: int | None = None) -> IdealResult:
    """The ideal of elements all of whose atoms are in ``atoms``, with purity and join-closure flags."""
    amask = _as_mask(p, atoms)
    u = _universe(p, within)
    if amask & ~(p.atom_mask & u):
        raise PosetError("atom set contains non-atoms")
    q = ideal_mask_from_atoms(p, amask, u)
    return IdealResult(q, p.is_pure(q), _join_violation(p, q, u) is None)


def _join_violation(p: FinitePoset, q: int, u: int) -> tuple[int, int, int] | None:
    members = list(bits(q))
    for x, y in combinations(members, 2):
        for z in p.minimal(p.above[x] & p.above[y] & u):
            if not q >> z & 1:
                return (x, y, z)
    return None


def _rank_of(p: FinitePoset, mask: int) -> int:
    return max(p.rank[x] for x in bits(mask))


class _ModCache:
    """Memo for modularity of y in P_{<= x}, shared across predicate calls on one poset."""

    def __init__(self, p: FinitePoset):
        self.p = p
        self.memo: dict[tuple[int, int], bool] = {}

    def __call__(self, y: int, x: int) -> bool:
        key = (y, x)
        if key not in self.memo:
            self.memo[key] = self.p.is_modular_in(y, x)
        return self.memo[key]


def _modcache(p: FinitePoset) -> _ModCache:
    c = getattr(p, "_ssolv_modcache", None)
    if c is None:
        c = _ModCache(p)
        p._ssolv_modcache = c
    return c


def _ideal_verdict(p: FinitePoset, q: int, u: int, strict: bool) -> Verdict:
    if q & ~u:
        return Verdict(False, "not contained in the universe")
    for x in bits(q):
        if p.below[x] & ~q:
            return Verdict(False, "not an order ideal", (x,))
    if not p.is_pure(q):
        return Verdict(False, "not pure", tuple(p.maximal(q)))
    jv = _join_violation(p, q, u)
    if jv is not None:
        return Verdict(False, "not join-closed", jv)
    outside = p.atom_mask & u & ~q
    for y in bits(q):
        for a in bits(outside):
            n_joins = len(p.minimal(p.above[a] & p.above[y] & u))
            if n_joins == 0:
                return Verdict(False, "atom outside Q has no join with an element of Q", (a, y))
            if strict and n_joins != 1:
                return Verdict(False, "atom outside Q has several minimal upper bounds "
                                      "with an element of Q", (a, y))
    mod = _modcache(p)
    qmax = p.maximal(q)
    for x in p.maximal(u):
        if not any(p.leq(y, x) and mod(y, x) for y in qmax):
            return Verdict(False, "no maximal element of Q is modular below this maximal element",
                           (x,))
    return Verdict(True)


def is_m_ideal(p: FinitePoset, q: Iterable[int] | int, within: int | None = None) -> Verdict:
    return _ideal_verdict(p, _as_mask(p, q), _universe(p, within), strict=False)


def is_tm_ideal(p: FinitePoset, q: Iterable[int] | int, within: int | None = None) -> Verdict:
    return _ideal_verdict(p, _as_mask(p, q), _universe(p, within), strict=True)


def _geometric(p: FinitePoset) -> bool:
    g = getattr(p, "_ssolv_geometric", None)
    if g is None:
        g = p.is_geometric()
        p._ssolv_geometric = g
    return g


def dagger_check(p: FinitePoset, q_atoms: Iterable[int] | int, cross_check: bool = True) -> bool:
    """Exchange-style test for corank-one M-ideals of a geometric poset.

    For distinct atoms a1, a2 outside Q and every x in a1 ∨ a2, some atom of
    Q lies strictly below x.  When ``cross_check`` is set, the verdict is
    compared with the definitional M-ideal test.
    """
    if not _geometric(p):
        raise PosetError("dagger_check needs a geometric poset")
    amask = _as_mask(p, q_atoms)
    res = ideal_from_atoms(p, amask)
    q = res.elements
    outside = p.atom_mask & ~amask
    verdict = True
    for a1, a2 in combinations(list(bits(outside)), 2):
        for x in p.min_upper_bounds(a1, a2):
            if not p.atoms_below(x) & amask:
                verdict = False
                break
        if not verdict:
            break
    # the equivalence needs rk(Q) < rk(P); a full-rank proper Q can pass vacuously
    if cross_check and res.ok and _rank_of(p, q) < p.height:
        m = bool(is_m_ideal(p, q)) and _rank_of(p, q) == p.height - 1
        if m != verdict:
            raise AssertionError(f"dagger test and M-ideal test disagree on atoms {sorted(bits(amask))}")
    return verdict


# -- chains ----------------------------------------------------------------------


@dataclass(frozen=True)
class IdealChain:
    atom_sets: tuple[tuple[int, ...], ...]
    strict: bool

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(len(self.atom_sets[i]) - len(self.atom_sets[i - 1])
                     for i in range(1, len(self.atom_sets)))

    def to_json(self) -> dict:
        return {"format": 1, "chain": [list(s) for s in self.atom_sets],
                "strict": self.strict, "a": list(self.a)}

    @classmethod
    def from_json(cls, data: dict | str) -> "IdealChain":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("format", 1) != 1:
            raise ValueError(f"unsupported format {data.get('format')!r}")
        try:
            sets = tuple(tuple(int(x) for x in s) for s in data["chain"])
            return cls(sets, bool(data["strict"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from None


def verify_chain(p: FinitePoset, chain: IdealChain, declared_a: Sequence[int] | None = None
                 ) -> Verdict:
    """Re-check a certificate against the definitions."""
    sets = chain.atom_sets
    if declared_a is not None and tuple(declared_a) != chain.a:
        return Verdict(False, "declared a_i do not match the atom sets")
    if not sets or sets[0]:
        return Verdict(False, "chain must start with the empty atom set")
    if set(sets[-1]) != set(p.atoms):
        return Verdict(False, "chain must end with all atoms")
    if len(sets) != p.height + 1:
        return Verdict(False, f"chain has {len(sets) - 1} steps, poset has rank {p.height}")
    masks = []
    for s in sets:
        if any(not (isinstance(x, int) and 0 <= x < len(p)) or x not in p.atoms for x in s):
            return Verdict(False, "chain mentions a non-atom", tuple(s))
        masks.append(p.mask_of(s))
    for i in range(1, len(masks)):
        if masks[i - 1] & ~masks[i] or masks[i - 1] == masks[i]:
            return Verdict(False, "atom sets are not strictly increasing", (i,))
    ideals = [ideal_mask_from_atoms(p, m) for m in masks]
    for i in range(len(ideals)):
        if _rank_of(p, ideals[i]) != i:
            return Verdict(False, f"ideal {i} has rank {_rank_of(p, ideals[i])}", (i,))
    for i in range(1, len(ideals)):
        fn = _ideal_verdict(p, ideals[i - 1], ideals[i], strict=chain.strict)
        if not fn:
            return Verdict(False, f"step {i}: {fn.reason}", fn.witness)
    return Verdict(True)


def _candidates(p: FinitePoset, u: int, strict: bool) -> list[int]:
    """Atom masks of all corank-one (T)M-ideals of the universe ``u``.

    Every such ideal Q meets each maximal interval P_{<= x} in P_{<= y_x} for
    a modular coatom y_x of that interval, so the atoms of Q are fixed by one
    choice of y_x per maximal x.  The choices are combined by backtracking
    with consistency on atoms, then checked in full.
    """
    mod = _modcache(p)
    tops = p.maximal(u)
    r = p.rank[tops[0]]
    options = []
    for x in tops:
        coatoms = [y for y in p.lower_covers[x] if mod(y, x)]
        options.append([(p.atoms_below(y), p.atoms_below(x) & ~p.atoms_below(y)) for y in coatoms])
    order = sorted(range(len(tops)), key=lambda k: len(options[k]))
    found: set[int] = set()

    def go(k: int, inside: int, outside: int):
        if k == len(order):
            found.add(inside)
            return
        for ins, outs in options[order[k]]:
            ni, no = inside | ins, outside | outs
            if ni & no:
                continue
            go(k + 1, ni, no)

    go(0, 0, 0)
    out = []
    for amask in sorted(found, key=lambda m: tuple(bits(m))):
        q = ideal_mask_from_atoms(p, amask, u)
        if _rank_of(p, q) != r - 1:
            continue
        if _ideal_verdict(p, q, u, strict):
            out.append(amask)
    return out


class _Searcher:
    def __init__(self, p: FinitePoset, strict: bool):
        self.p = p
        self.strict = strict
        self.memo: dict[int, list[int] | None] = {}

    def chain_below(self, u: int) -> list[int] | None:
        """Atom masks of a chain from {0^} (included) up to u (excluded), or None."""
        if u in self.memo:
            return self.memo[u]
        p = self.p
        if _rank_of(p, u) == 0:
            res: list[int] | None = []
        else:
            res = None
            for amask in _candidates(p, u, self.strict):
                sub = self.chain_below(ideal_mask_from_atoms(p, amask, u))
                if sub is not None:
                    res = sub + [amask]
                    break
        self.memo[u] = res
        return res


def _search_from(args) -> list[int] | None:
    p, strict, amask, u = args
    s = _Searcher(p, strict)
    sub = s.chain_below(ideal_mask_from_atoms(p, amask, u))
    return None if sub is None else sub + [amask]


def _find_chain(p: FinitePoset, strict: bool, workers: int = 1) -> IdealChain | None:
    if not p.is_graded:
        raise PosetError("poset is not graded")
    if not p.is_pure():
        raise PosetError("poset is not pure")
    if not p.is_locally_geometric():
        raise PosetError("poset is not locally geometric")
    u = p.full_mask
    if p.height == 0:
        masks: list[int] | None = []
    elif workers > 1:
        cands = _candidates(p, u, strict)
        masks = None
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for res in ex.map(_search_from, [(p, strict, c, u) for c in cands]):
                if res is not None:
                    masks = res
                    break
    else:
        masks = _Searcher(p, strict).chain_below(u)
    if masks is None:
        return None
    # masks start with the empty atom set of the rank-zero ideal
    sets = [tuple(bits(m)) for m in masks] + [tuple(p.atoms)]
    chain = IdealChain(tuple(sets), strict)
    v = verify_chain(p, chain)
    if not v:
        raise AssertionError(f"search produced an invalid certificate: {v.reason}")
    return chain


def supersolvable_chain(p: FinitePoset, workers: int = 1) -> IdealChain | None:
    return _find_chain(p, strict=False, workers=workers)


def strictly_supersolvable_chain(p: FinitePoset, workers: int = 1) -> IdealChain | None:
    return _find_chain(p, strict=True, workers=workers)


def corank1_ideals(p: FinitePoset) -> list[int]:
    """Atom masks of all pure, join-closed ideals of rank rk(P) - 1, by brute force over atom subsets."""
    out = []
    atoms = list(p.atoms)
    for k in range(len(atoms) + 1):
        for combo in combinations(atoms, k):
            amask = p.mask_of(combo)
            res = ideal_from_atoms(p, amask)
            if res.ok and res.elements != p.full_mask and \
                    _rank_of(p, res.elements) == p.height - 1:
                out.append(amask)
    return out


# -- tower of fibrations -----------------------------------------------------------

KPI1_SIGNATURES = {(0, 2), (1, 1), (2, 0)}


@dataclass
class TowerStep:
    level: int
    n: int
    vectors: tuple[tuple[int, ...], ...]
    kernel_lattice: tuple[tuple[int, ...], ...]
    gamma_prime: tuple[int, ...]
    punctures: int
    a: int
    c_values: tuple[int, ...]
    strict_step: bool


@dataclass
class TowerReport:
    arrangement: Arrangement
    essential: bool
    supersolvable: bool
    strict: bool
    steps: list[TowerStep] = field(default_factory=list)
    note: str = ""

    @property
    def ell(self) -> list[int]:
        return [s.punctures for s in self.steps]

    @property
    def a(self) -> list[int]:
        return [s.a for s in self.steps]

    @property
    def signature(self) -> tuple[int, int]:
        return (self.arrangement.ambient.d, self.arrangement.ambient.v)

    @property
    def fiber_type(self) -> bool:
        return self.supersolvable

    @property
    def kpi1(self) -> bool:
        return self.supersolvable and self.signature in KPI1_SIGNATURES

    @property
    def fadell_neuwirth_pullback(self) -> bool:
        return self.strict

    @property
    def section(self) -> bool:
        return self.strict

    @property
    def free_ranks(self) -> list[int] | None:
        """Ranks of the free fiber groups, bottom step first (strict, K(pi,1) signatures only)."""
        if not (self.strict and self.signature in KPI1_SIGNATURES):
            return None
        extra = 0 if self.signature == (0, 2) else 1
        return [ell + extra for ell in self.ell]

    def to_text(self) -> str:
        a = self.arrangement
        lines = [f"arrangement: n={a.n} d={a.ambient.d} v={a.ambient.v} "
                 f"vectors={[list(v) for v in a.vectors]}"]
        if not self.essential:
            lines.append("not essential: the span of the vectors has rank < n")
            return "\n".join(lines) + "\n"
        if not self.supersolvable:
            lines.append("fiber-type: no (poset of layers is not supersolvable; exhaustive search)")
            return "\n".join(lines) + "\n"
        lines.append(f"fiber-type: yes ({'strict' if self.strict else 'non-strict'} chain)")
        for s in self.steps:
            ker = ";".join(",".join(str(x) for x in r) for r in s.kernel_lattice) or "0"
            lines.append(
                f"step {s.level}: rank {s.n}, fiber = G minus {s.punctures} points, "
                f"a_{s.level} = {s.a}, kernel lattice <{ker}>, "
                f"complement generator {list(s.gamma_prime)}, c = {list(s.c_values)}")
        lines.append(f"punctures: {self.ell}")
        lines.append(f"a: {self.a}")
        lines.append(f"K(pi,1): {'yes' if self.kpi1 else 'not asserted for this signature'}")
        lines.append(f"pullback of configuration space bundle: {'yes' if self.strict else 'not asserted'}")
        lines.append(f"section: {'yes' if self.strict else 'not asserted'}")
        fr = self.free_ranks
        if fr is not None:
            lines.append("pi_1: iterated semidirect product of free groups of ranks "
                         + ", ".join(str(x) for x in fr))
        return "\n".join(lines) + "\n"


def _identity_max(lp: LayerPoset, q: int) -> int:
    ids = [y for y in lp.poset.maximal(q) if lp.layers[y].is_identity_component()]
    if len(ids) != 1:
        raise AssertionError(f"expected one maximal identity component, found {len(ids)}")
    return ids[0]


def tower_report(a: Arrangement, workers: int = 1) -> TowerReport:
    """Fiber-type tower read off a supersolvability chain of the poset of layers."""
    from .layers import validate

    info = validate(a)
    if not info["essential"]:
        return TowerReport(a, False, False, False, note="not essential")
    lp = build_layers(a, workers=workers)
    p = lp.poset
    chain = strictly_supersolvable_chain(p, workers=workers)
    strict = chain is not None
    if chain is None:
        chain = supersolvable_chain(p, workers=workers)
    if chain is None:
        return TowerReport(a, True, False, False)
    steps: list[TowerStep] = []
    _tower(lp, [p.mask_of(s) for s in chain.atom_sets], strict, steps)
    steps.sort(key=lambda s: s.level)
    return TowerReport(a, True, True, strict, steps)


def _tower(lp: LayerPoset, atom_masks: list[int], strict: bool, steps: list[TowerStep]) -> None:
    p, a = lp.poset, lp.arrangement
    n = a.n
    top_atoms = atom_masks[-1]
    below_atoms = atom_masks[-2]
    q = ideal_mask_from_atoms(p, below_atoms)
    if n == 1:
        lat = LatticeBasis(1, IntMatrix((), 1))
    else:
        y = _identity_max(lp, q)
        lat = lp.layers[y].basis(n)
    proj = admissible_from_corank1(lat)
    idx, qa = sub_and_quotient(a, proj)
    if lp.atoms_of_vectors(idx) != below_atoms:
        raise AssertionError("atoms of the sub-arrangement differ from the atoms of the ideal")
    cvals = tuple(proj.c_of(v) for v in a.vectors)
    steps.append(TowerStep(n, n, a.vectors, lat.rows, proj.gamma_prime, puncture_count(a, proj),
                           popcount(top_atoms & ~below_atoms), cvals, strict))
    if qa is None:
        return
    lq = build_layers(qa)
    image = {}
    for x in bits(q):
        lay = quotient_layer(lp.layers[x], proj, a.ambient.d)
        image[x] = lq.index_of(lay)
    # the identification must be an isomorphism onto the quotient's poset
    if sorted(image.values()) != list(range(len(lq.poset))):
        raise AssertionError("sub-arrangement poset does not match the quotient poset")
    for x in image:
        for z in image:
            if p.leq(x, z) != lq.poset.leq(image[x], image[z]):
                raise AssertionError("identification with the quotient does not preserve order")
    sub_masks = []
    for m in atom_masks[:-1]:
        sub_masks.append(sum(1 << image[x] for x in bits(m)))
    _tower(lq, sub_masks, strict, steps)
