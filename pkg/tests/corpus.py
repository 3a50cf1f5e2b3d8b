"""Shared example objects for the test suite."""
from __future__ import annotations

from functools import lru_cache

from ssposets.affine import AffineArrangement, intersection_poset
from ssposets.families import FiniteGroupTable, SimpleGraph, classical, dowling_poset, graphic_arrangement
from ssposets.layers import Arrangement, build_layers
from ssposets.poset import FinitePoset

# three atoms 1, 2, 3 under two maximal elements a = 1∨2∨3 and b = 1∨3
TWO_MAXIMA_LABELS = ["0", "1", "2", "3", "a", "b"]
TWO_MAXIMA_COVERS = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (1, 5), (3, 5)]

SS_TORIC = Arrangement.of([(1, 0), (0, 1), (1, 2)], d=1, v=1)
SSS = Arrangement.of([(1, 0), (0, 2), (1, 2)], d=1, v=1)


def two_maxima() -> FinitePoset:
    return FinitePoset(TWO_MAXIMA_LABELS, TWO_MAXIMA_COVERS)


def b3_minus_top() -> FinitePoset:
    labels = ["{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}"]
    covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (1, 5), (3, 5), (2, 6), (3, 6)]
    return FinitePoset(labels, covers)


def chain(k: int) -> FinitePoset:
    return FinitePoset(list(range(k + 1)), [(i, i + 1) for i in range(k)])


TORIC_CORPUS = [
    [(1, 0), (0, 1), (1, 2)],
    [(1, 0), (0, 2), (1, 2)],
    [(1, 0), (0, 1), (1, 1)],
    [(1, 0), (0, 1), (1, -1)],
    [(1, 0), (0, 1), (1, 1), (1, -1)],
    [(2, 0), (0, 2), (1, 1)],
    [(1, 0), (0, 3), (1, 3)],
    [(2, 1), (1, 2)],
    [(1, 0), (0, 1), (2, 1), (1, 2)],
    [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)],
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
    [(1, -1, 0), (0, 1, -1), (1, 0, -1), (1, 0, 0)],
]


@lru_cache(maxsize=None)
def toric(i: int, d: int = 1, v: int = 1):
    return build_layers(Arrangement.of(TORIC_CORPUS[i], d=d, v=v))


def geometric_corpus() -> list[tuple[str, FinitePoset]]:
    """Geometric posets of varied provenance, each with at most 12 atoms."""
    out = [("two_maxima", two_maxima()), ("b3-top", b3_minus_top())]
    for i in range(len(TORIC_CORPUS)):
        out.append((f"toric{i}", toric(i).poset))
    out.append(("toric0-d2", toric(0, 2, 0).poset))
    out.append(("toric5-d0", toric(5, 0, 2).poset))
    for n in (3, 4):
        out.append((f"partition{n}", classical("partition", n)))
    for n in (2, 3, 4):
        out.append((f"boolean{n}", classical("boolean", n)))
    z2 = FiniteGroupTable.cyclic(2)
    out.append(("dowling2-z2-pt", dowling_poset(2, z2.with_trivial_set(1))))
    out.append(("dowling3-z2", dowling_poset(3, z2.with_trivial_set(0))))
    out.append(("dowling2-z2-reg", dowling_poset(2, z2.with_regular_set())))
    out.append(("c4", build_layers(graphic_arrangement(SimpleGraph.cycle(4))).poset))
    out.append(("k4", build_layers(graphic_arrangement(SimpleGraph.complete(4))).poset))
    for name, hs in AFFINE_CORPUS[:8]:
        out.append((f"affine-{name}", intersection_poset(AffineArrangement(len(hs[0][0]), hs))))
    return out


AFFINE_CORPUS: list[tuple[str, list]] = [
    ("triangle", [((1, 0), 0), ((0, 1), 0), ((1, 1), 1)]),
    ("central3", [((1, 0), 0), ((0, 1), 0), ((1, -1), 0)]),
    ("line1", [((1,), 0)]),
    ("points2", [((1,), 0), ((1,), 1)]),
    ("parallel-pair-cross", [((1, 0), 0), ((1, 0), 1), ((0, 1), 0)]),
    ("grid", [((1, 0), 0), ((1, 0), 1), ((0, 1), 0), ((0, 1), 1)]),
    ("generic4", [((1, 0), 0), ((0, 1), 0), ((1, 1), 1), ((1, -1), 2)]),
    ("braid-affine", [((1, -1), 0), ((1, 0), 0), ((0, 1), 0)]),
    ("triangle-plus-median", [((1, 0), 0), ((0, 1), 0), ((1, 1), 1), ((1, -1), 0)]),
    ("pencil-and-line", [((1, 0), 0), ((0, 1), 0), ((1, 1), 0), ((1, 0), 1)]),
    ("three-parallel-cross", [((1, 0), 0), ((1, 0), 1), ((1, 0), 2), ((0, 1), 0)]),
    ("star4", [((1, 0), 0), ((0, 1), 0), ((1, 1), 0), ((1, -1), 0)]),
    ("coords3", [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)]),
    ("coords3-shift", [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((1, 1, 1), 1)]),
    ("braid3-affine", [((1, -1, 0), 0), ((0, 1, -1), 0), ((1, 0, -1), 0), ((1, 0, 0), 0)]),
    ("generic-planes", [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((1, 1, 0), 1)]),
    ("slab", [((1, 0, 0), 0), ((1, 0, 0), 1), ((0, 1, 0), 0), ((0, 0, 1), 0)]),
    ("half-integer", [((2, 0), 1), ((0, 1), 0), ((1, 1), "1/2")]),
    ("near-pencil", [((1, 0), 0), ((0, 1), 0), ((1, 1), 0), ((1, 2), 1)]),
    ("two-triangles", [((1, 0), 0), ((0, 1), 0), ((1, 1), 1), ((1, 1), 2)]),
]
