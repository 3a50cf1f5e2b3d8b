"""Rational affine hyperplane arrangements, their cones and de-cones."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poset import FinitePoset, PosetError
from .ssolv import supersolvable_chain

Rational = Fraction
Hyperplane = tuple[tuple[Fraction, ...], Fraction]


class AffineError(ValueError):
    pass


def _canonical(normal: Sequence, offset) -> Hyperplane:
    nrm = [Fraction(x) for x in normal]
    off = Fraction(offset)
    lead = next((x for x in nrm if x != 0), None)
    if lead is None:
        raise AffineError("hyperplane normal must be nonzero")
    return tuple(x / lead for x in nrm), off / lead


@dataclass(frozen=True)
class AffineArrangement:
    """Hyperplanes a.x = b in Q^n, scaled so the first nonzero coefficient of a is 1."""
    n: int
    hyperplanes: tuple[Hyperplane, ...]

    def __init__(self, n: int, hyperplanes: Iterable[tuple[Sequence, object]]):
        if n < 1:
            raise AffineError("dimension must be positive")
        hs = []
        for normal, offset in hyperplanes:
            if len(normal) != n:
                raise AffineError(f"normal {tuple(normal)} has length {len(normal)}, expected {n}")
            h = _canonical(normal, offset)
            if h in hs:
                raise AffineError(f"duplicate hyperplane {h}")
            hs.append(h)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "hyperplanes", tuple(hs))

    def __len__(self) -> int:
        return len(self.hyperplanes)

    @property
    def is_central(self) -> bool:
        return all(b == 0 for _, b in self.hyperplanes)

    def to_json(self) -> dict:
        return {"format": 1, "n": self.n,
                "hyperplanes": [{"normal": [str(x) for x in a], "offset": str(b)}
                                for a, b in self.hyperplanes]}

    @classmethod
    def from_json(cls, data: dict | str) -> "AffineArrangement":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("format", 1) != 1:
            raise AffineError(f"unsupported format {data.get('format')!r}")
        try:
            hs = [([Fraction(x) for x in h["normal"]], Fraction(h.get("offset", "0")))
                  for h in data["hyperplanes"]]
            return cls(int(data["n"]), hs)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, AffineError):
                raise
            raise AffineError(f"malformed affine arrangement: {exc}") from None


def _rref(rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return tuple(tuple(row) for row in m[:r])


def _consistent(flat: tuple[tuple[Fraction, ...], ...]) -> bool:
    return not any(all(x == 0 for x in row[:-1]) for row in flat)


@dataclass(frozen=True)
class FlatPoset:
    poset: FinitePoset
    flats: tuple[tuple[tuple[Fraction, ...], ...], ...]
    containing: tuple[frozenset[int], ...]


def flats(a: AffineArrangement) -> FlatPoset:
    """All nonempty intersections, by closure from the whole space."""
    rows = [list(h[0]) + [h[1]] for h in a.hyperplanes]
    whole: tuple = ()
    seen = {whole: None}
    frontier = [whole]
    covers = set()
    while frontier:
        nxt = []
        for f in frontier:
            for row in rows:
                g = _rref([list(r) for r in f] + [row])
                if len(g) == len(f) or not _consistent(g):
                    continue
                covers.add((f, g))
                if g not in seen:
                    seen[g] = None
                    nxt.append(g)
        frontier = nxt

    def contains(f) -> frozenset[int]:
        return frozenset(i for i, row in enumerate(rows) if len(_rref([list(r) for r in f] + [row])) == len(f))

    cont = {f: contains(f) for f in seen}
    order = sorted(seen, key=lambda f: (len(f), sorted(cont[f])))
    idx = {f: k for k, f in enumerate(order)}
    labels = ["V" if not f else "H{" + ",".join(str(i) for i in sorted(cont[f])) + "}" for f in order]
    p = FinitePoset(labels, [(idx[f], idx[g]) for f, g in covers])
    return FlatPoset(p, tuple(order), tuple(cont[f] for f in order))


def intersection_poset(a: AffineArrangement) -> FinitePoset:
    return flats(a).poset


def cone(a: AffineArrangement) -> AffineArrangement:
    """Central arrangement in dimension n + 1 with x_0 = 0 as hyperplane 0."""
    hs = [([1] + [0] * a.n, 0)]
    hs += [([-b] + list(nrm), 0) for nrm, b in a.hyperplanes]
    return AffineArrangement(a.n + 1, hs)


def decone(a: AffineArrangement, h: int = 0) -> AffineArrangement:
    """Set the linear form of hyperplane ``h`` to 1 in coordinates that extend it to a basis."""
    if not a.is_central:
        raise AffineError("de-cone needs a central arrangement")
    if not 0 <= h < len(a):
        raise AffineError(f"no hyperplane with index {h}")
    if a.n < 2:
        raise AffineError("de-cone needs dimension at least 2")
    u = list(a.hyperplanes[h][0])
    basis = [u]
    for i in range(a.n):
        e = [Fraction(int(j == i)) for j in range(a.n)]
        if len(_rref(basis + [e])) > len(basis):
            basis.append(e)
        if len(basis) == a.n:
            break
    inv = _inverse(basis)
    out = []
    for k, (nrm, _) in enumerate(a.hyperplanes):
        if k == h:
            continue
        # c . x = (c M^{-1}) . (M x) and the new coordinates are y = M x with y_0 = 1
        c = [sum(nrm[i] * inv[i][j] for i in range(a.n)) for j in range(a.n)]
        if all(x == 0 for x in c[1:]):
            raise AffineError(f"hyperplane {k} is parallel to hyperplane {h}")
        out.append((c[1:], -c[0]))
    return AffineArrangement(a.n - 1, out)


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red = _rref(aug)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise AffineError("matrix is singular")
    return [list(row[n:]) for row in red]


def _modular_chain_through(p: FinitePoset, a0: int) -> list[int] | None:
    """A maximal chain of modular elements 0^ < a0 < ... < 1^ in a geometric lattice."""
    top = p.top()
    memo: dict[int, bool] = {}

    def modular(x: int) -> bool:
        if x not in memo:
            memo[x] = p.is_modular_in(x, top)
        return memo[x]

    def go(x: int) -> list[int] | None:
        if x == top:
            return [x]
        for y in p.upper_covers[x]:
            if modular(y):
                rest = go(y)
                if rest is not None:
                    return [x] + rest
        return None

    if not modular(a0):
        return None
    tail = go(a0)
    return None if tail is None else [p.bottom] + tail


def affine_ss_check(a: AffineArrangement) -> dict:
    """Supersolvability of the intersection semilattice, decided directly and through the cone."""
    fp = flats(a)
    p = fp.poset
    if p.height != a.n:
        raise AffineError(f"arrangement is not essential: flats reach rank {p.height}, not {a.n}")
    ss = supersolvable_chain(p) is not None
    lc = intersection_poset(cone(a))
    if not lc.is_geometric_lattice():
        raise AssertionError("cone intersection lattice is not geometric")
    h0 = lc.index("H{0}")
    via_cone = _modular_chain_through(lc, h0) is not None
    if ss != via_cone:
        raise AssertionError(f"semilattice verdict {ss} and cone verdict {via_cone} disagree")
    return {"ss": ss, "cone_ss_through_H0": via_cone}


def semilattice_embedding(a: AffineArrangement) -> list[int]:
    """Index in the cone's lattice of each flat of ``a``, avoiding the upper set of H_0."""
    fa = flats(a)
    fc = flats(cone(a))
    # flat with hyperplanes S upstairs corresponds to S shifted by one in the cone
    by_set = {s: k for k, s in enumerate(fc.containing)}
    out = []
    for s in fa.containing:
        key = frozenset(i + 1 for i in s)
        if key not in by_set:
            raise PosetError("flat has no counterpart in the cone")
        out.append(by_set[key])
    return out
