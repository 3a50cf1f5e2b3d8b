"""Posets of layers of abelian arrangements.

The ambient group is ``T = Hom(Z^n, G)`` with ``G = (S^1)^d x R^v``.  An integer
vector ``alpha`` cuts out the subgroup ``H_alpha = {t : t(alpha) = 0}``.

A layer is stored as a pair ``(L, c)``: ``L`` is a saturated sublattice of
``Z^n`` in canonical HNF and ``c`` is a torsion character ``L -> (Q/Z)^d``,
recorded by its values on the HNF rows.  The layer is the coset
``{t : t restricted to L equals c}``; it contains the identity iff ``c = 0``.
``(L1, c1) <= (L2, c2)`` (reverse inclusion of cosets) iff ``L1 <= L2`` and
``c2`` restricts to ``c1``.
"""
from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exactalg import (IntMatrix, LatticeBasis, LatticeError, complete_unimodular, content,
                       hnf, inverse, is_saturated, member, saturate, smith_form,
                       unimodular_inverse)
from .poset import FinitePoset, bits

DEFAULT_MAX_VECTORS = 16


class ArrangementError(ValueError):
    pass


class NonEssentialWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Ambient:
    n: int
    d: int
    v: int

    def __post_init__(self):
        if self.n < 1 or self.d < 0 or self.v < 0 or self.d + self.v < 1:
            raise ArrangementError(f"invalid ambient signature n={self.n}, d={self.d}, v={self.v}")


@dataclass(frozen=True)
class Arrangement:
    ambient: Ambient
    vectors: tuple[tuple[int, ...], ...]

    def __init__(self, ambient: Ambient, vectors: Iterable[Sequence[int]]):
        vecs = tuple(tuple(int(x) for x in v) for v in vectors)
        for v in vecs:
            if len(v) != ambient.n:
                raise ArrangementError(f"vector {v} does not live in Z^{ambient.n}")
            if not any(v):
                raise ArrangementError("zero vector in arrangement")
        if len(set(vecs)) != len(vecs):
            raise ArrangementError("repeated vector in arrangement")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]], d: int = 1, v: int = 1) -> "Arrangement":
        vecs = [tuple(x) for x in vectors]
        if not vecs:
            raise ArrangementError("empty arrangement needs an explicit ambient")
        return cls(Ambient(len(vecs[0]), d, v), vecs)

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def d(self) -> int:
        return self.ambient.d

    def __len__(self) -> int:
        return len(self.vectors)

    def to_json(self) -> dict:
        return {"format": 1, "n": self.n, "d": self.ambient.d, "v": self.ambient.v,
                "vectors": [list(v) for v in self.vectors]}

    @classmethod
    def from_json(cls, data: dict) -> "Arrangement":
        try:
            amb = Ambient(int(data["n"]), int(data["d"]), int(data["v"]))
            return cls(amb, data["vectors"])
        except (KeyError, TypeError) as exc:
            raise ArrangementError(f"malformed arrangement JSON: {exc}") from None


Character = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True, order=True)
class Layer:
    lattice: tuple[tuple[int, ...], ...]
    character: Character

    @property
    def rank(self) -> int:
        return len(self.lattice)

    def basis(self, n: int) -> LatticeBasis:
        return LatticeBasis(n, IntMatrix(self.lattice, n))

    def is_identity_component(self) -> bool:
        return all(x == 0 for row in self.character for x in row)

    def label(self) -> str:
        if not self.lattice:
            return "T"
        lat = ";".join(",".join(str(x) for x in row) for row in self.lattice)
        out = f"<{lat}>"
        if self.character and self.character[0]:
            out += "@" + ";".join(",".join(str(x) for x in row) for row in self.character)
        return out

    def to_json(self) -> dict:
        return {"lattice": [list(r) for r in self.lattice],
                "character": [[f"{x.numerator}/{x.denominator}" for x in row]
                              for row in self.character]}


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def validate(a: Arrangement) -> dict:
    """Report essentiality (rank of the span is n) and irredundancy."""
    rank = saturate(a.vectors, a.n)[0].rank if a.vectors else 0
    clashes = []
    prim: dict[tuple[int, ...], int] = {}
    for i, v in enumerate(a.vectors):
        g = content(v)
        p = tuple(x // g for x in v)
        # a vector and its negative cut out the same subgroup
        key = max(p, tuple(-x for x in p))
        if key in prim:
            clashes.append((prim[key], i))
        else:
            prim[key] = i
    return {"essential": rank == a.n, "rank": rank, "irredundant": not clashes,
            "parallel_pairs": clashes}


def _characters(coords: IntMatrix, d: int) -> list[Character]:
    """All characters of Z^r (r = coords.ncols) into (Q/Z)^d killing the rows of ``coords``.

    Returned as r x d tuples.  ``coords`` must have full column rank.
    """
    r = coords.ncols
    if d == 0:
        return [tuple(() for _ in range(r))]
    sf = smith_form(coords)
    diag = sf.diagonal
    if len(diag) != r:
        raise LatticeError("coordinate matrix is not of full column rank")
    v = sf.right
    single = []
    for ks in product(*(range(f) for f in diag)):
        y = [Fraction(k, f) for k, f in zip(ks, diag)]
        x = tuple(_frac_mod1(sum(v[i][j] * y[j] for j in range(r))) for i in range(r))
        single.append(x)
    single = sorted(set(single))
    out = []
    for cols in product(single, repeat=d):
        out.append(tuple(tuple(cols[k][i] for k in range(d)) for i in range(r)))
    return out


def _independent_subsets(vectors, n, first: int | None = None):
    """Index tuples of linearly independent subsets (optionally with a fixed first index)."""
    m = len(vectors)

    def grow(chosen: list[int], start: int):
        yield tuple(chosen)
        if len(chosen) == n:
            return
        for k in range(start, m):
            cand = chosen + [k]
            rows = [vectors[i] for i in cand]
            if saturate(rows, n)[0].rank == len(cand):
                yield from grow(cand, k + 1)

    if first is None:
        yield from grow([], 0)
    else:
        yield from grow([first], first + 1)


def _layers_from_subsets(vectors, n, d, first):
    out = set()
    for s in _independent_subsets(vectors, n, first):
        if not s:
            out.add(Layer((), ()))
            continue
        rows = [vectors[i] for i in s]
        sat, _ = saturate(rows, n)
        coords = IntMatrix(tuple(member(r, sat)[1] for r in rows), sat.rank)
        for ch in _characters(coords, d):
            out.add(Layer(sat.rows, ch))
    return out


def _restriction_matrix(small: Layer, big: Layer, n: int) -> IntMatrix | None:
    """Coordinates of small.lattice rows in big.lattice's basis, if contained."""
    bb = big.basis(n)
    rows = []
    for r in small.lattice:
        ok, c = member(r, bb)
        if not ok:
            return None
        rows.append(c)
    return IntMatrix(tuple(rows), big.rank)


def _restrict(k: IntMatrix, ch: Character, d: int) -> Character:
    out = []
    for row in k.entries:
        out.append(tuple(_frac_mod1(sum(row[j] * ch[j][c] for j in range(len(row))))
                         for c in range(d)))
    return tuple(out)


@dataclass
class LayerPoset:
    """The poset of layers together with its layer table and atom bookkeeping."""
    arrangement: Arrangement
    poset: FinitePoset
    layers: tuple[Layer, ...]
    atom_vector: dict[int, int] = field(default_factory=dict)
    validation: dict = field(default_factory=dict)

    def index_of(self, layer: Layer) -> int:
        return self._lookup[layer]

    def __post_init__(self):
        self._lookup = {lay: i for i, lay in enumerate(self.layers)}

    def atoms_of_vectors(self, indices: Iterable[int]) -> int:
        """Mask of the atoms that are components of H_alpha for the given alpha indices."""
        want = set(indices)
        m = 0
        for atom, vi in self.atom_vector.items():
            if vi in want:
                m |= 1 << atom
        return m

    def to_json(self) -> dict:
        out = self.poset.to_json()
        out["layers"] = [lay.to_json() for lay in self.layers]
        return out


def build_layers(a: Arrangement, workers: int = 1,
                 max_vectors: int = DEFAULT_MAX_VECTORS) -> LayerPoset:
    """Enumerate all layers and order them by reverse inclusion."""
    if len(a) > max_vectors:
        raise ArrangementError(f"{len(a)} vectors exceeds the limit of {max_vectors}; "
                               "raise max_vectors to proceed")
    info = validate(a)
    if not info["irredundant"]:
        i, j = info["parallel_pairs"][0]
        raise ArrangementError(f"arrangement is not irredundant: vectors {a.vectors[i]} and "
                               f"{a.vectors[j]} share a component")
    if not info["essential"]:
        warnings.warn(f"arrangement is not essential (span has rank {info['rank']} < {a.n})",
                      NonEssentialWarning, stacklevel=2)
    n, d = a.n, a.ambient.d
    vecs = a.vectors
    found = {Layer((), ())}
    firsts = list(range(len(vecs)))
    if workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(_layers_from_subsets, [vecs] * len(firsts), [n] * len(firsts),
                               [d] * len(firsts), firsts):
                found |= part
    else:
        for f in firsts:
            found |= _layers_from_subsets(vecs, n, d, f)
    layers = tuple(sorted(found, key=lambda L: (L.rank, L.lattice, L.character)))
    by_lattice: dict[tuple, list[int]] = {}
    for i, lay in enumerate(layers):
        by_lattice.setdefault(lay.lattice, []).append(i)
    lattices = sorted(by_lattice, key=lambda L: (len(L), L))
    rel = []
    for s in lattices:
        for b in lattices:
            if len(s) >= len(b):
                continue
            k = _restriction_matrix(layers[by_lattice[s][0]], layers[by_lattice[b][0]], n)
            if k is None:
                continue
            small_index = {layers[i].character: i for i in by_lattice[s]}
            for j in by_lattice[b]:
                res = _restrict(k, layers[j].character, d)
                i = small_index.get(res)
                if i is not None:
                    rel.append((i, j))
    poset = FinitePoset([lay.label() for lay in layers], rel)
    atom_vector = {}
    for atom in poset.atoms:
        hits = [i for i, v in enumerate(vecs) if member(v, layers[atom].basis(n))[0]]
        if len(hits) != 1:
            raise AssertionError(f"atom {layers[atom].label()} has vectors {hits}")
        atom_vector[atom] = hits[0]
    return LayerPoset(a, poset, layers, atom_vector, info)


# -- admissible projections and fibration data ---------------------------------


@dataclass(frozen=True)
class AdmissibleProjection:
    """Splitting Z^n = <beta0> + L with L saturated of corank one.

    ``epsilon`` is the functional giving the beta0-coordinate, so the
    projection onto <beta0> along L is alpha -> (epsilon . alpha) beta0.
    """
    lattice: LatticeBasis
    gamma_prime: tuple[int, ...]
    completion: IntMatrix
    epsilon: tuple[int, ...]

    def c_of(self, alpha: Sequence[int]) -> int:
        return c_of(alpha, self)


def admissible_from_corank1(lat: LatticeBasis) -> AdmissibleProjection:
    n = lat.ambient_dim
    if lat.rank != n - 1:
        raise ArrangementError(f"expected a sublattice of rank {n - 1}, got rank {lat.rank}")
    if not is_saturated(lat):
        raise ArrangementError("sublattice is not saturated")
    w = complete_unimodular(lat)
    winv = unimodular_inverse(w)
    eps = tuple(winv[i][n - 1] for i in range(n))
    beta0 = w[n - 1]
    assert sum(x * y for x, y in zip(eps, beta0)) == 1
    return AdmissibleProjection(lat, beta0, w, eps)


def c_of(alpha: Sequence[int], proj: AdmissibleProjection) -> int:
    return abs(sum(int(x) * y for x, y in zip(alpha, proj.epsilon)))


def sub_and_quotient(a: Arrangement, proj: AdmissibleProjection
                     ) -> tuple[tuple[int, ...], Arrangement | None]:
    """Indices of A_Y and the quotient arrangement in coordinates of L's HNF basis.

    For n = 1 the quotient lives in Z^0 and ``None`` is returned for it.
    """
    idx = tuple(i for i, v in enumerate(a.vectors) if c_of(v, proj) == 0)
    if a.n == 1:
        return idx, None
    coords = [member(a.vectors[i], proj.lattice)[1] for i in idx]
    amb = Ambient(a.n - 1, a.ambient.d, a.ambient.v)
    return idx, Arrangement(amb, coords)


def puncture_count(a: Arrangement, proj: AdmissibleProjection) -> int:
    d = a.ambient.d
    return sum(c ** d for c in (c_of(v, proj) for v in a.vectors) if c)


@dataclass(frozen=True)
class HorizontalData:
    hor: frozenset[int]
    meet_set: frozenset[int]

    @property
    def agree(self) -> bool:
        return self.hor == self.meet_set


def horizontal_set(p: FinitePoset, q_atoms: Iterable[int] | int) -> HorizontalData:
    """Atoms outside Q, and the elements X > 0^ with X ∧ Y' = {0^} for every maximal Y' of Q."""
    qmask = q_atoms if isinstance(q_atoms, int) else p.mask_of(q_atoms)
    if qmask & ~p.atom_mask:
        raise ArrangementError("Q_atoms must be a set of atoms")
    q = ideal_mask_from_atoms(p, qmask)
    tops = p.maximal(q)
    hor = frozenset(bits(p.atom_mask & ~qmask))
    meet = frozenset(x for x in range(len(p)) if x != p.bottom and
                     all(p.max_lower_bounds(x, y) == {p.bottom} for y in tops))
    return HorizontalData(hor, meet)


def ideal_mask_from_atoms(p: FinitePoset, atom_mask: int, within: int | None = None) -> int:
    """All x (in the universe) whose atoms lie in ``atom_mask``."""
    u = p.full_mask if within is None else within
    return sum(1 << x for x in bits(u) if not p.atoms_below(x) & ~atom_mask)


def quotient_layer(layer: Layer, proj: AdmissibleProjection, d: int) -> Layer:
    """Image of a layer with lattice inside L under the identification L = Z^{n-1}."""
    lat = proj.lattice
    rows = []
    for r in layer.lattice:
        ok, c = member(r, lat)
        if not ok:
            raise ArrangementError("layer lattice is not contained in L")
        rows.append(c)
    if not rows:
        return Layer((), ())
    h, u = hnf(IntMatrix(tuple(rows), lat.rank))
    k = len(rows)
    new_rows = h.entries[:k]
    # new basis row i = sum_j u[i][j] * old row j
    ch = tuple(tuple(_frac_mod1(sum(u[i][j] * layer.character[j][c] for j in range(k)))
                     for c in range(d)) for i in range(k))
    return Layer(tuple(new_rows), ch)


def component_count(rows: Sequence[Sequence[int]], n: int, d: int) -> int:
    """Number of components of the intersection of H_alpha over the given rows."""
    if not rows:
        return 1
    _, prof = saturate(rows, n)
    return prof.order ** d


def layers_of_subset(a: Arrangement, subset: Sequence[int]) -> list[Layer]:
    """The components of the intersection over ``subset``, enumerated directly.

    Independent of the subset enumeration used by :func:`build_layers`: every
    character of sat(S) of order dividing the torsion exponent is tried.
    """
    n, d = a.n, a.ambient.d
    rows = [a.vectors[i] for i in subset]
    if not rows:
        return [Layer((), ())]
    sat, prof = saturate(rows, n)
    r = sat.rank
    e = max(prof.factors, default=1)
    out = []
    grid = [Fraction(k, e) for k in range(e)]
    for vals in product(product(grid, repeat=r), repeat=d):
        ch = tuple(tuple(vals[c][i] for c in range(d)) for i in range(r))
        ok = True
        for v in rows:
            coord = member(v, sat)[1]
            for c in range(d):
                if _frac_mod1(sum(coord[i] * ch[i][c] for i in range(r))) != 0:
                    ok = False
        if ok:
            out.append(Layer(sat.rows, ch if d else tuple(() for _ in range(r))))
    return sorted(set(out))


def rational_coordinates(vecs, basis_rows) -> list[tuple[int, ...]]:
    """Coordinates of ``vecs`` in a square basis; raises if some are not integral."""
    b = IntMatrix.of(basis_rows)
    inv = inverse(b)
    out = []
    for v in vecs:
        c = [sum(Fraction(v[i]) * inv[i][j] for i in range(len(v))) for j in range(b.ncols)]
        if any(x.denominator != 1 for x in c):
            raise ArrangementError(f"vector {tuple(v)} is not in the sublattice")
        out.append(tuple(int(x) for x in c))
    return out
