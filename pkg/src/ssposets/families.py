"""Generators for standard example families.

Graphic arrangements, Dowling posets, partition and Boolean lattices, and
finite-index rewrites of arrangements together with their deck actions.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exactalg import IntMatrix, LatticeBasis, member, saturate, smith_form
from .layers import Ambient, Arrangement, ArrangementError, Layer, LayerPoset, rational_coordinates
from .poset import FinitePoset, GroupAction, PosetError
from .ssolv import IdealChain


# -- graphs ----------------------------------------------------------------------


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        seen = set()
        for e in edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {(i, j)} has a vertex outside 0..{n - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"repeated edge {key}")
            seen.add(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    def neighbours(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def is_connected(self) -> bool:
        adj = self.neighbours()
        seen, todo = {0}, [0]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.n

    def to_json(self) -> dict:
        return {"format": 1, "n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict | str) -> "SimpleGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), data["edges"])

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, combinations(range(n), 2))

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])


def graphic_arrangement(g: SimpleGraph, d: int = 1, v: int = 1) -> Arrangement:
    """e_i - e_j for each edge, written in a basis of the saturation of their span."""
    if not g.edges:
        raise ArrangementError("graph has no edges")
    if not g.is_connected():
        raise ArrangementError("graph is not connected")
    raw = []
    for i, j in g.edges:
        vec = [0] * g.n
        vec[i], vec[j] = 1, -1
        raw.append(vec)
    sat, _ = saturate(raw, g.n)
    vectors = [member(r, sat)[1] for r in raw]
    return Arrangement(Ambient(sat.rank, d, v), vectors)


def is_chordal(g: SimpleGraph) -> bool:
    """Maximum cardinality search followed by a perfect elimination ordering check."""
    adj = g.neighbours()
    weight = [0] * g.n
    order: list[int] = []
    numbered = [False] * g.n
    for _ in range(g.n):
        v = max((w for w in range(g.n) if not numbered[w]), key=lambda w: (weight[w], -w))
        numbered[v] = True
        order.append(v)
        for w in adj[v]:
            if not numbered[w]:
                weight[w] += 1
    # reversed visit order is a perfect elimination ordering iff g is chordal
    peo = order[::-1]
    pos = {v: k for k, v in enumerate(peo)}
    for v in peo:
        later = [w for w in adj[v] if pos[w] > pos[v]]
        if not later:
            continue
        u = min(later, key=lambda w: pos[w])
        if any(w != u and w not in adj[u] for w in later):
            return False
    return True


# -- finite groups and Dowling posets -------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    """A group on 0..m-1 by multiplication table, with a left action on 0..|S|-1.

    ``action[g][s]`` is g.s.
    """
    mult: tuple[tuple[int, ...], ...]
    identity: int
    action: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        m = len(self.mult)
        if m == 0 or any(len(r) != m for r in self.mult):
            raise ValueError("multiplication table must be square and nonempty")
        if any(not 0 <= x < m for r in self.mult for x in r):
            raise ValueError("multiplication table has entries outside the group")
        e = self.identity
        if any(self.mult[e][g] != g or self.mult[g][e] != g for g in range(m)):
            raise ValueError("identity element is wrong")
        for g, h, k in product(range(m), repeat=3):
            if self.mult[self.mult[g][h]][k] != self.mult[g][self.mult[h][k]]:
                raise ValueError("multiplication is not associative")
        if any(e not in self.mult[g] for g in range(m)):
            raise ValueError("some element has no inverse")
        if self.action:
            if len(self.action) != m:
                raise ValueError("action table needs one row per group element")
            s = len(self.action[0])
            if any(sorted(r) != list(range(s)) for r in self.action):
                raise ValueError("each group element must act by a permutation of S")
            if any(self.action[e][x] != x for x in range(s)):
                raise ValueError("identity does not act trivially")
            for g, h in product(range(m), repeat=2):
                for x in range(s):
                    if self.action[g][self.action[h][x]] != self.action[self.mult[g][h]][x]:
                        raise ValueError("action is not compatible with multiplication")

    @property
    def order(self) -> int:
        return len(self.mult)

    @property
    def s_size(self) -> int:
        return len(self.action[0]) if self.action else 0

    def inverse(self, g: int) -> int:
        return self.mult[g].index(self.identity)

    @classmethod
    def cyclic(cls, m: int, action: Sequence[Sequence[int]] = ()) -> "FiniteGroupTable":
        mult = tuple(tuple((i + j) % m for j in range(m)) for i in range(m))
        return cls(mult, 0, tuple(tuple(r) for r in action))

    def with_trivial_set(self, k: int) -> "FiniteGroupTable":
        """Same group acting trivially on k points."""
        act = tuple(tuple(range(k)) for _ in range(self.order)) if k else ()
        return FiniteGroupTable(self.mult, self.identity, act)

    def with_regular_set(self) -> "FiniteGroupTable":
        """Same group acting on itself by left multiplication."""
        return FiniteGroupTable(self.mult, self.identity, self.mult)

    def to_json(self) -> dict:
        return {"format": 1, "mult": [list(r) for r in self.mult], "identity": self.identity,
                "action": [list(r) for r in self.action]}

    @classmethod
    def from_json(cls, data: dict | str) -> "FiniteGroupTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(r) for r in data["mult"]), int(data.get("identity", 0)),
                   tuple(tuple(r) for r in data.get("action", [])))


Block = tuple[tuple[int, ...], tuple[int, ...]]
DowlingElement = tuple[tuple[Block, ...], tuple[tuple[int, int], ...]]


def _normal_block(elems: Sequence[int], colors: Sequence[int], g: FiniteGroupTable) -> Block:
    pairs = sorted(zip(elems, colors))
    shift = g.inverse(pairs[0][1])
    return (tuple(e for e, _ in pairs), tuple(g.mult[c][shift] for _, c in pairs))


def _dowling_label(x: DowlingElement) -> str:
    blocks = "/".join(",".join(str(e + 1) for e in b) + ":" + ",".join(str(c) for c in col)
                      for b, col in x[0])
    z = ",".join(f"{i + 1}>{s}" for i, s in x[1])
    return f"{blocks}|{z}"


def dowling_elements(n: int, g: FiniteGroupTable) -> tuple[list[DowlingElement], set[tuple[int, int]]]:
    """Elements (blocks, z) reachable from the all-singletons minimum, and the cover pairs."""
    if n < 1:
        raise ValueError("n must be positive")
    bottom: DowlingElement = (tuple(((i,), (g.identity,)) for i in range(n)), ())
    index = {bottom: 0}
    elems = [bottom]
    covers: set[tuple[int, int]] = set()
    todo = deque([bottom])

    def add(src: DowlingElement, blocks: Iterable[Block], z: Iterable[tuple[int, int]]):
        y = (tuple(sorted(blocks)), tuple(sorted(z)))
        if y not in index:
            index[y] = len(elems)
            elems.append(y)
            todo.append(y)
        covers.add((index[src], index[y]))

    while todo:
        x = todo.popleft()
        blocks, z = x
        for i, j in combinations(range(len(blocks)), 2):
            (ea, ca), (eb, cb) = blocks[i], blocks[j]
            rest = [b for k, b in enumerate(blocks) if k not in (i, j)]
            for h in range(g.order):
                merged = _normal_block(ea + eb, ca + tuple(g.mult[c][h] for c in cb), g)
                add(x, rest + [merged], z)
        for i in range(len(blocks)):
            eb, cb = blocks[i]
            rest = [b for k, b in enumerate(blocks) if k != i]
            for s in range(g.s_size):
                zz = list(z) + [(e, g.action[c][s]) for e, c in zip(eb, cb)]
                add(x, rest, zz)
    return elems, covers


def dowling_poset(n: int, g: FiniteGroupTable) -> FinitePoset:
    elems, covers = dowling_elements(n, g)
    return FinitePoset([_dowling_label(x) for x in elems], covers)


def dowling_chain(n: int, g: FiniteGroupTable, p: FinitePoset | None = None) -> IdealChain:
    """The strict chain whose k-th ideal consists of elements with k+1..n as singleton blocks."""
    elems, _ = dowling_elements(n, g)
    if p is None:
        p = dowling_poset(n, g)
    sets = []
    start = 0 if g.s_size else 1
    for k in range(start, n + 1):
        fixed = [((i,), (g.identity,)) for i in range(k, n)]
        sets.append(tuple(a for a in p.atoms if all(b in elems[a][0] for b in fixed)))
    return IdealChain(tuple(sets), True)


# -- classical lattices ------------------------------------------------------------------


def _set_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    out: list[list[list[int]]] = [[]]
    for i in range(n):
        nxt = []
        for part in out:
            for k in range(len(part)):
                nxt.append([b + [i] if j == k else b for j, b in enumerate(part)])
            nxt.append(part + [[i]])
        out = nxt
    return sorted(tuple(sorted(tuple(b) for b in part)) for part in out)


def classical(name: str, n: int) -> FinitePoset:
    """Partition lattice or Boolean lattice on n points."""
    if n < 1:
        raise ValueError("n must be positive")
    if name == "boolean":
        labels = ["{" + ",".join(str(i + 1) for i in range(n) if m >> i & 1) + "}"
                  for m in range(1 << n)]
        rel = [(m, m | 1 << i) for m in range(1 << n) for i in range(n) if not m >> i & 1]
        return FinitePoset(labels, rel)
    if name == "partition":
        parts = sorted(_set_partitions(n), key=lambda p: (-len(p), p))
        idx = {p: k for k, p in enumerate(parts)}
        rel = []
        for p in parts:
            for i, j in combinations(range(len(p)), 2):
                merged = tuple(sorted([b for k, b in enumerate(p) if k not in (i, j)]
                                      + [tuple(sorted(p[i] + p[j]))]))
                rel.append((idx[p], idx[merged]))
        labels = ["/".join("".join(str(e + 1) for e in b) for b in p) for p in parts]
        return FinitePoset(labels, rel)
    raise ValueError(f"unknown family {name!r}")


# -- finite-index rewrites -------------------------------------------------------------


def finite_index_rewrite(a: Arrangement, sub: LatticeBasis | Sequence[Sequence[int]]) -> Arrangement:
    """Vectors of ``a`` in coordinates of a full-rank sublattice basis.

    With a :class:`LatticeBasis` its HNF rows are used, otherwise the rows as given.
    """
    rows = sub.rows if isinstance(sub, LatticeBasis) else [tuple(int(x) for x in r) for r in sub]
    if len(rows) != a.n or any(len(r) != a.n for r in rows):
        raise ArrangementError("sublattice must have full rank")
    from .exactalg import determinant
    if determinant(rows) == 0:
        raise ArrangementError("sublattice must have full rank")
    coords = rational_coordinates(a.vectors, rows)
    return Arrangement(a.ambient, coords)


def deck_generators(lp: LayerPoset, sub_rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Permutations of the layers of ``lp`` induced by Hom(Z^n / sub, (Q/Z)^d).

    A homomorphism vanishing on the sublattice translates each layer's character.
    Requires d >= 1 (otherwise the group is trivial).
    """
    a = lp.arrangement
    n, d = a.n, a.ambient.d
    sf = smith_form(IntMatrix.of(sub_rows, n))
    if len(sf.diagonal) != n:
        raise ArrangementError("sublattice must have full rank")
    # W g in Z^n  <=>  g = V D^{-1} m  (left W right = D)
    gens = []
    for i, f in enumerate(sf.diagonal):
        if f == 1:
            continue
        col = [Fraction(sf.right[r][i], f) for r in range(n)]
        for c in range(d):
            perm = []
            for lay in lp.layers:
                ch = tuple(
                    tuple((lay.character[k][cc] + (sum(row[r] * col[r] for r in range(n))
                                                    if cc == c else 0)) % 1
                          for cc in range(d))
                    for k, row in enumerate(lay.lattice))
                perm.append(lp.index_of(Layer(lay.lattice, ch)))
            gens.append(tuple(perm))
    return gens


def deck_action(lp: LayerPoset, sub_rows: Sequence[Sequence[int]]) -> GroupAction:
    return GroupAction(lp.poset, deck_generators(lp, sub_rows))
