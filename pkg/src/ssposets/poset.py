"""Finite posets with a unique minimum.

Elements are indexed ``0..n-1``; labels are opaque and only used for
display and (de)serialization.  The order relation is stored as two lists
of Python-int bitmasks, ``below[x]`` (everything ``<= x``) and ``above[x]``
(everything ``>= x``), so set operations on elements are single integer
operations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

from .polynomial import IntPolynomial

__all__ = [
    "PosetError",
    "FinitePoset",
    "GroupAction",
    "IntPolynomial",
    "bits",
    "find_isomorphism",
]


class PosetError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinitePoset:
    """A finite poset with a unique minimal element.

    ``relations`` are pairs ``(i, j)`` meaning ``i < j``; they only need to
    generate the order (covers are recovered by transitive reduction).
    """

    def __init__(self, labels: Sequence[Hashable], relations: Iterable[tuple[int, int]]):
        self.labels: tuple = tuple(labels)
        n = len(self.labels)
        if n == 0:
            raise PosetError("a poset needs at least one element")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != n:
            raise PosetError("duplicate labels")
        succ: list[set[int]] = [set() for _ in range(n)]
        pred: list[set[int]] = [set() for _ in range(n)]
        for i, j in relations:
            if not (0 <= i < n and 0 <= j < n):
                raise PosetError(f"relation ({i}, {j}) out of range")
            if i == j:
                raise PosetError(f"reflexive relation on element {i}")
            succ[i].add(j)
            pred[j].add(i)
        order = self._toposort(succ, pred)
        below = [1 << i for i in range(n)]
        for j in order:
            for i in pred[j]:
                below[j] |= below[i]
        above = [0] * n
        for j in range(n):
            for i in bits(below[j]):
                above[i] |= 1 << j
        self.below: tuple[int, ...] = tuple(below)
        self.above: tuple[int, ...] = tuple(above)
        mins = [i for i in range(n) if below[i] == 1 << i]
        if len(mins) != 1:
            raise PosetError(f"expected a unique minimum, found {len(mins)} minimal elements")
        self.bottom: int = mins[0]
        self.lower_covers: tuple[tuple[int, ...], ...] = tuple(
            tuple(self.maximal(below[j] & ~(1 << j))) for j in range(n))
        upper: list[list[int]] = [[] for _ in range(n)]
        for j in range(n):
            for i in self.lower_covers[j]:
                upper[i].append(j)
        self.upper_covers: tuple[tuple[int, ...], ...] = tuple(tuple(u) for u in upper)
        rank = [0] * n
        for j in order:
            if self.lower_covers[j]:
                rank[j] = 1 + max(rank[i] for i in self.lower_covers[j])
        self.rank: tuple[int, ...] = tuple(rank)
        self.is_graded: bool = all(rank[j] == rank[i] + 1
                                   for j in range(n) for i in self.lower_covers[j])
        self.order: tuple[int, ...] = tuple(sorted(range(n), key=lambda x: (rank[x], x)))
        self.atoms: tuple[int, ...] = self.upper_covers[self.bottom]
        self.atom_mask: int = sum(1 << a for a in self.atoms)
        self.full_mask: int = (1 << n) - 1
        self._mu: tuple[int, ...] | None = None

    @staticmethod
    def _toposort(succ, pred) -> list[int]:
        n = len(succ)
        indeg = [len(p) for p in pred]
        stack = [i for i in range(n) if indeg[i] == 0]
        out = []
        while stack:
            i = stack.pop()
            out.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        if len(out) != n:
            raise PosetError("relations contain a cycle")
        return out

    # -- basic structure ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FinitePoset(n={len(self)}, rank={self.height})"

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PosetError(f"unknown element {label!r}") from None

    def _check(self, x: int) -> int:
        if not (isinstance(x, int) and 0 <= x < len(self)):
            raise PosetError(f"unknown element id {x!r}")
        return x

    @property
    def height(self) -> int:
        """rk(P), the largest rank of an element."""
        return max(self.rank)

    @property
    def covers(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(len(self)) for i in self.lower_covers[j]]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.below[y] >> x & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def minimal(self, mask: int) -> list[int]:
        return [i for i in bits(mask) if self.below[i] & mask == 1 << i]

    def maximal(self, mask: int) -> list[int]:
        return [i for i in bits(mask) if self.above[i] & mask == 1 << i]

    def maximal_elements(self, within: int | None = None) -> list[int]:
        return self.maximal(self.full_mask if within is None else within)

    def mask_of(self, elements: Iterable[int]) -> int:
        m = 0
        for e in elements:
            m |= 1 << self._check(e)
        return m

    def atoms_below(self, x: int) -> int:
        return self.below[x] & self.atom_mask

    def is_pure(self, within: int | None = None) -> bool:
        return len({self.rank[m] for m in self.maximal_elements(within)}) == 1

    # -- joins and meets ---------------------------------------------------

    def min_upper_bounds(self, x: int, y: int, within: int | None = None) -> frozenset[int]:
        """The set x ∨ y (possibly empty)."""
        self._check(x), self._check(y)
        m = self.above[x] & self.above[y]
        if within is not None:
            m &= within
        return frozenset(self.minimal(m))

    def max_lower_bounds(self, x: int, y: int) -> frozenset[int]:
        """The set x ∧ y."""
        self._check(x), self._check(y)
        return frozenset(self.maximal(self.below[x] & self.below[y]))

    def join_set(self, elements: Iterable[int], within: int | None = None) -> frozenset[int]:
        """Minimal upper bounds of an arbitrary subset."""
        m = self.full_mask if within is None else within
        for e in elements:
            m &= self.above[e]
        return frozenset(self.minimal(m))

    def _join1(self, x: int, y: int, within: int) -> int | None:
        """Join inside a sublattice mask; None if it is not unique."""
        mu = self.minimal(self.above[x] & self.above[y] & within)
        return mu[0] if len(mu) == 1 else None

    def _meet1(self, x: int, y: int) -> int | None:
        ml = self.maximal(self.below[x] & self.below[y])
        return ml[0] if len(ml) == 1 else None

    # -- Moebius function and characteristic polynomial ---------------------

    def mobius(self) -> tuple[int, ...]:
        """mu(0^) = 1 and the sum of mu over every proper principal ideal vanishes."""
        if self._mu is None:
            mu = [0] * len(self)
            for x in self.order:
                if x == self.bottom:
                    mu[x] = 1
                else:
                    mu[x] = -sum(mu[y] for y in bits(self.below[x] & ~(1 << x)))
            self._mu = tuple(mu)
        return self._mu

    def char_poly(self) -> IntPolynomial:
        if not self.is_graded:
            raise PosetError("characteristic polynomial needs a graded poset")
        mu = self.mobius()
        r = self.height
        coeffs = [0] * (r + 1)
        for x in range(len(self)):
            coeffs[r - self.rank[x]] += mu[x]
        return IntPolynomial(coeffs)

    # -- geometric lattices and geometric posets ------------------------------

    def _interval_is_geometric_lattice(self, top: int) -> bool:
        """Is P_{<= top} a geometric lattice?"""
        u = self.below[top]
        atoms = self.atom_mask & u
        members = list(bits(u))
        for x, y in combinations(members, 2):
            if self._join1(x, y, u) is None:
                return False
        for y in members:
            for a in bits(atoms & ~self.below[y]):
                j = self._join1(y, a, u)
                if j not in self.upper_covers[y]:
                    return False
            for z in self.upper_covers[y]:
                if not u >> z & 1:
                    continue
                if not self.atoms_below(z) & ~self.below[y]:
                    return False
        return True

    def is_lattice(self) -> bool:
        if len(self.maximal_elements()) != 1:
            return False
        return all(len(self.min_upper_bounds(x, y)) == 1
                   for x, y in combinations(range(len(self)), 2))

    def top(self) -> int:
        mx = self.maximal_elements()
        if len(mx) != 1:
            raise PosetError("poset has no maximum")
        return mx[0]

    def is_geometric_lattice(self) -> bool:
        mx = self.maximal_elements()
        return len(mx) == 1 and self.is_graded and self._interval_is_geometric_lattice(mx[0])

    def is_locally_geometric(self) -> bool:
        if not self.is_graded:
            return False
        return all(self._interval_is_geometric_lattice(x) for x in range(len(self)))

    def _good_atoms(self) -> list[int]:
        """good[x] = atoms a with a not <= x and a ∨ x nonempty."""
        good = []
        for x in range(len(self)):
            g = 0
            for a in bits(self.atom_mask & ~self.below[x]):
                if self.above[a] & self.above[x]:
                    g |= 1 << a
            good.append(g)
        return good

    def bases(self, y: int) -> Iterator[int]:
        """Atom sets I (as masks) with |I| = rk(y) whose join in P_{<= y} is y.

        Assumes P_{<= y} is a geometric lattice; sets are grown one atom at a
        time and only kept while the join rank goes up by one.
        """
        u = self.below[y]
        atoms = list(bits(self.atom_mask & u))
        r = self.rank[y]

        def grow(start: int, join: int, chosen: int, size: int):
            if size == r:
                yield chosen
                return
            for k in range(start, len(atoms)):
                a = atoms[k]
                if self.below[join] >> a & 1:
                    continue
                j = self._join1(join, a, u)
                yield from grow(k + 1, j, chosen | 1 << a, size + 1)

        yield from grow(0, self.bottom, 0, 0)

    def is_geometric(self) -> bool:
        """Locally geometric plus the atom exchange condition on independent sets."""
        if not self.is_locally_geometric():
            return False
        return self.exchange_violation() is None

    def exchange_violation(self) -> tuple[int, int, int] | None:
        """First (x, y, I) violating the exchange condition, or None."""
        good = self._good_atoms()
        by_rank: dict[int, list[int]] = {}
        for x in range(len(self)):
            by_rank.setdefault(self.rank[x], []).append(x)
        for y in self.order:
            ry = self.rank[y]
            lower = [x for r in range(ry) for x in by_rank.get(r, [])]
            for basis in self.bases(y):
                for x in lower:
                    if not basis & good[x]:
                        return (x, y, basis)
        return None

    # -- modular elements ---------------------------------------------------

    def complements(self, x: int, top: int) -> list[int]:
        """Complements of x in the lattice P_{<= top}."""
        u = self.below[top]
        out = []
        for z in bits(u):
            if self._join1(x, z, u) == top and self._meet1(x, z) == self.bottom:
                out.append(z)
        return out

    def is_modular_in(self, x: int, top: int) -> bool:
        """Modularity of x in the geometric lattice P_{<= top}, by two independent tests."""
        if not self.leq(x, top):
            raise PosetError("element is not in the interval")
        comp = self.complements(x, top)
        antichain = all(not self.leq(a, b) for a, b in combinations(comp, 2)) and \
            all(not self.leq(b, a) for a, b in combinations(comp, 2))
        u = self.below[top]
        rx = self.rank[x]
        identity = True
        for y in bits(u):
            j = self._join1(x, y, u)
            m = self._meet1(x, y)
            if rx + self.rank[y] != self.rank[j] + self.rank[m]:
                identity = False
                break
        if antichain != identity:
            raise AssertionError(f"modularity tests disagree on element {x} below {top}")
        return antichain

    def is_modular_element(self, x: int) -> bool:
        self._check(x)
        if not self.is_geometric_lattice():
            raise PosetError("modularity is only defined here for geometric lattices")
        return self.is_modular_in(x, self.top())

    # -- derived posets -------------------------------------------------------

    def subposet(self, mask: int) -> tuple["FinitePoset", list[int]]:
        """Induced subposet on the elements of ``mask`` (must contain a unique minimum)."""
        idx = list(bits(mask))
        pos = {e: k for k, e in enumerate(idx)}
        rel = []
        for e in idx:
            for f in bits(self.below[e] & mask & ~(1 << e)):
                rel.append((pos[f], pos[e]))
        return FinitePoset([self.labels[e] for e in idx], rel), idx

    def ideal(self, elements: Iterable[int]) -> int:
        """Mask of the order ideal generated by the given elements."""
        m = 0
        for e in elements:
            m |= self.below[self._check(e)]
        return m

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": 1,
            "elements": [str(lab) for lab in self.labels],
            "covers": [[i, j] for i, j in sorted(self.covers)],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "FinitePoset":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("format", 1) != 1:
            raise PosetError(f"unsupported format {data.get('format')!r}")
        try:
            elements = data["elements"]
            covers = [(int(i), int(j)) for i, j in data["covers"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PosetError(f"malformed poset JSON: {exc}") from None
        return cls(elements, covers)

    def to_dot(self, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        for i, lab in enumerate(self.labels):
            text = str(lab).replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for r in range(self.height + 1):
            same = " ".join(f"n{i};" for i in range(len(self)) if self.rank[i] == r)
            lines.append(f"  {{ rank=same; {same} }}")
        for i, j in sorted(self.covers):
            lines.append(f"  n{i} -> n{j} [dir=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def find_isomorphism(p: FinitePoset, q: FinitePoset) -> list[int] | None:
    """An order isomorphism p -> q as a list ``f[x]``, or None."""
    if len(p) != len(q) or sorted(p.rank) != sorted(q.rank):
        return None

    def sig(P: FinitePoset, x: int):
        return (P.rank[x], len(P.lower_covers[x]), len(P.upper_covers[x]),
                popcount(P.below[x]), popcount(P.above[x]))

    qs: dict[tuple, list[int]] = {}
    for y in range(len(q)):
        qs.setdefault(sig(q, y), []).append(y)
    psig = [sig(p, x) for x in range(len(p))]
    if sorted(psig) != sorted(sig(q, y) for y in range(len(q))):
        return None
    order = list(p.order)
    f = [-1] * len(p)
    used = [False] * len(q)

    def ok(x: int, y: int) -> bool:
        for x2 in bits(p.below[x] & ~(1 << x)):
            if f[x2] >= 0 and not q.leq(f[x2], y):
                return False
        for x2 in order:
            if f[x2] < 0:
                break
            if q.leq(f[x2], y) != p.leq(x2, x) or q.leq(y, f[x2]) != p.leq(x, x2):
                return False
        return True

    def go(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in qs.get(psig[x], []):
            if not used[y] and ok(x, y):
                f[x], used[y] = y, True
                if go(k + 1):
                    return True
                f[x], used[y] = -1, False
        return False

    return f if go(0) else None


@dataclass(frozen=True)
class QuotientResult:
    poset: FinitePoset
    orbit_of: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]


class GroupAction:
    """A group acting on a finite poset, given by generating permutations."""

    def __init__(self, poset: FinitePoset, generators: Iterable[Sequence[int]]):
        self.poset = poset
        n = len(poset)
        gens = []
        cover_set = set(poset.covers)
        for g in generators:
            g = tuple(int(v) for v in g)
            if sorted(g) != list(range(n)):
                raise PosetError("generator is not a permutation of the elements")
            if {(g[i], g[j]) for i, j in cover_set} != cover_set:
                raise PosetError("generator is not a poset automorphism")
            gens.append(g)
        self.generators: tuple[tuple[int, ...], ...] = tuple(gens)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for g in gens:
            for i in range(n):
                a, b = find(i), find(g[i])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        self.orbits: tuple[tuple[int, ...], ...] = tuple(
            sorted(tuple(v) for v in groups.values()))
        orbit_of = [0] * n
        for k, orb in enumerate(self.orbits):
            for i in orb:
                orbit_of[i] = k
        self.orbit_of: tuple[int, ...] = tuple(orbit_of)

    def translative_violation(self) -> tuple[int, int] | None:
        """A pair x != gx with a common upper bound, or None."""
        p = self.poset
        for orb in self.orbits:
            for x, y in combinations(orb, 2):
                if p.above[x] & p.above[y]:
                    return (x, y)
        return None

    def is_translative(self) -> bool:
        return self.translative_violation() is None


def quotient(p: FinitePoset, action: GroupAction, check_local: bool = True) -> QuotientResult:
    """Orbit poset P/G of a translative action.

    With ``check_local`` each principal ideal is compared with its image.
    """
    if action.poset is not p:
        raise PosetError("action belongs to a different poset")
    bad = action.translative_violation()
    if bad is not None:
        raise PosetError(f"non-translative action: elements {bad[0]} and {bad[1]} "
                         "are in one orbit and share an upper bound")
    oo = action.orbit_of
    rel = {(oo[i], oo[j]) for i, j in p.covers}
    labels = [p.labels[orb[0]] for orb in action.orbits]
    q = FinitePoset(labels, rel)
    if check_local:
        for z in range(len(p)):
            image = 0
            for x in bits(p.below[z]):
                image |= 1 << oo[x]
            if image != q.below[oo[z]] or popcount(image) != popcount(p.below[z]):
                raise AssertionError(f"principal ideal below {z} is not mapped bijectively")
            for x, y in combinations(list(bits(p.below[z])), 2):
                if p.leq(x, y) != q.leq(oo[x], oo[y]) or p.leq(y, x) != q.leq(oo[y], oo[x]):
                    raise AssertionError(f"order below {z} is not preserved")
    return QuotientResult(q, oo, action.orbits)
