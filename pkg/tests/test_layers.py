import warnings
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from corpus import SS_TORIC, SSS, TORIC_CORPUS, toric
from ssposets.exactalg import LatticeBasis, determinant
from ssposets.families import SimpleGraph, classical, graphic_arrangement
from ssposets.layers import (Ambient, Arrangement, ArrangementError, NonEssentialWarning,
                             admissible_from_corank1, build_layers, c_of, component_count,
                             horizontal_set, ideal_mask_from_atoms, layers_of_subset,
                             puncture_count, quotient_layer, sub_and_quotient, validate)
from ssposets.poset import find_isomorphism, popcount
from ssposets.ssolv import is_m_ideal, is_tm_ideal


def covers_by_label(p):
    return {(p.labels[i], p.labels[j]) for i, j in p.covers}


def test_ss_toric_poset():
    for v in (0, 1):
        lp = build_layers(Arrangement.of(SS_TORIC.vectors, d=1, v=v))
        p = lp.poset
        assert len(p) == 6
        h1, h2, h3 = "<1,0>@0", "<0,1>@0", "<1,2>@0"
        origin, other = "<1,0;0,1>@0;0", "<1,0;0,1>@0;1/2"
        assert covers_by_label(p) == {
            ("T", h1), ("T", h2), ("T", h3),
            (h1, origin), (h2, origin), (h3, origin),
            (h1, other), (h3, other)}
        assert str(p.char_poly()) == "t^2 - 3t + 3"
        assert p.is_geometric()


def test_sss_poset():
    p = build_layers(SSS).poset
    assert len(p) == 7 and len(p.atoms) == 4
    assert sum(p.rank[x] == 2 for x in range(7)) == 2
    assert str(p.char_poly()) == "t^2 - 4t + 4"


def test_rank_one_torsion():
    p = build_layers(Arrangement.of([(2,)], d=1, v=0)).poset
    assert len(p) == 3 and str(p.char_poly()) == "t - 2"


def test_validate_examples():
    assert validate(Arrangement.of([(1, 0), (0, 1)], d=0, v=2))["essential"]
    assert validate(Arrangement.of([(1, 0), (0, 1)]))["irredundant"]
    assert not validate(Arrangement.of([(1, 0)]))["essential"]
    assert not validate(Arrangement.of([(1, 0), (2, 0)]))["irredundant"]


def test_non_essential_warns_and_redundant_errors():
    with pytest.warns(NonEssentialWarning):
        lp = build_layers(Arrangement.of([(1, 0)]))
    assert len(lp.poset) == 2
    with pytest.raises(ArrangementError):
        build_layers(Arrangement.of([(1, 0), (2, 0)]))


def test_bad_arrangements():
    with pytest.raises(ArrangementError):
        Arrangement.of([(0, 0)])
    with pytest.raises(ArrangementError):
        Arrangement.of([(1, 0), (1,)])
    with pytest.raises(ValueError):
        Ambient(2, 0, 0)


def test_json_round_trip():
    assert Arrangement.from_json(SSS.to_json()) == SSS
    out = build_layers(SSS).to_json()
    assert out["layers"][2]["character"] == [["1/2"]]


def test_admissible_examples():
    proj = admissible_from_corank1(LatticeBasis.span([[1, 0]], 2))
    assert proj.gamma_prime == (0, 1)
    assert [c_of(a, proj) for a in SS_TORIC.vectors] == [0, 1, 2]
    assert c_of(proj.gamma_prime, proj) == 1
    proj = admissible_from_corank1(LatticeBasis.span([[1, 2]], 2))
    assert abs(determinant(proj.completion)) == 1
    assert c_of((1, 2), proj) == 0 and c_of((2, 4), proj) == 0
    with pytest.raises(ArrangementError):
        admissible_from_corank1(LatticeBasis.span([[0, 2]], 2))
    with pytest.raises(ArrangementError):
        admissible_from_corank1(LatticeBasis.full(2))


def test_sub_and_quotient_examples():
    proj = admissible_from_corank1(LatticeBasis.span([[1, 0]], 2))
    idx, qa = sub_and_quotient(SS_TORIC, proj)
    assert idx == (0,) and qa.vectors == ((1,),) and qa.n == 1
    proj = admissible_from_corank1(LatticeBasis.span([[0, 1]], 2))
    idx, qa = sub_and_quotient(SSS, proj)
    assert [SSS.vectors[i] for i in idx] == [(0, 2)] and qa.vectors == ((2,),)
    proj = admissible_from_corank1(LatticeBasis.span([[1, 1]], 2))
    assert sub_and_quotient(SS_TORIC, proj)[0] == ()


def test_puncture_counts():
    proj = admissible_from_corank1(LatticeBasis.span([[1, 0]], 2))
    assert puncture_count(SS_TORIC, proj) == 3
    assert puncture_count(Arrangement.of(SS_TORIC.vectors, d=0, v=2), proj) == 2
    proj = admissible_from_corank1(LatticeBasis.span([[0, 1]], 2))
    assert puncture_count(SSS, proj) == 2


def test_horizontal_sets():
    lp = build_layers(SS_TORIC)
    p = lp.poset
    h = {i: lp.atoms_of_vectors([i]) for i in range(3)}
    good = horizontal_set(p, h[0])
    assert good.hor == frozenset(x for x in p.atoms if x != h[0].bit_length() - 1)
    assert good.agree
    bad = horizontal_set(p, h[1])
    assert not bad.agree and bad.hor < bad.meet_set
    extra = bad.meet_set - bad.hor
    assert [p.labels[x] for x in extra] == ["<1,0;0,1>@0;1/2"]
    assert not is_m_ideal(p, ideal_mask_from_atoms(p, h[1]))
    assert horizontal_set(p, p.atom_mask).hor == frozenset()


@pytest.mark.parametrize("i", range(len(TORIC_CORPUS)))
@pytest.mark.parametrize("d", [0, 1, 2])
def test_component_counts(i, d):
    a = Arrangement.of(TORIC_CORPUS[i], d=d, v=1)
    lp = build_layers(a)
    found = set(lp.layers)
    for k in range(1, min(3, len(a)) + 1):
        for s in combinations(range(len(a)), k):
            direct = layers_of_subset(a, s)
            assert len(direct) == component_count([a.vectors[j] for j in s], a.n, d)
            assert set(direct) <= found


@pytest.mark.parametrize("i", range(len(TORIC_CORPUS)))
def test_structure(i):
    lp = toric(i)
    p = lp.poset
    assert p.is_locally_geometric() and p.is_geometric()
    assert p.is_pure() and p.height == lp.arrangement.n
    ident = lp.index_of(next(l for l in lp.layers if l.rank == lp.arrangement.n
                              and l.is_identity_component()))
    assert ident in p.maximal_elements()


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_complete_graph_gives_partition_lattice(n, d):
    a = graphic_arrangement(SimpleGraph.complete(n), d=d, v=1)
    assert find_isomorphism(build_layers(a).poset, classical("partition", n)) is not None


def corank1_layers(lp):
    n = lp.arrangement.n
    return [l for l in lp.layers if l.rank == n - 1 and l.is_identity_component()]


@pytest.mark.parametrize("i", range(len(TORIC_CORPUS)))
def test_sub_quotient_isomorphism(i):
    lp = toric(i)
    a, p = lp.arrangement, lp.poset
    for y in corank1_layers(lp):
        proj = admissible_from_corank1(y.basis(a.n))
        idx, qa = sub_and_quotient(a, proj)
        if not idx:
            continue
        q_atoms = lp.atoms_of_vectors(idx)
        q = ideal_mask_from_atoms(p, q_atoms)
        lq = build_layers(qa)
        images = {x: lq.index_of(quotient_layer(lp.layers[x], proj, a.ambient.d))
                  for x in range(len(p)) if q >> x & 1}
        assert sorted(images.values()) == list(range(len(lq.poset)))
        for x in images:
            for z in images:
                assert p.leq(x, z) == lq.poset.leq(images[x], images[z])
        # TM ideals give exactly one puncture per new atom
        if is_tm_ideal(p, q):
            assert puncture_count(a, proj) == len(p.atoms) - popcount(q_atoms)
        # horizontal set and meet set agree exactly for M-ideals
        assert horizontal_set(p, q_atoms).agree == bool(is_m_ideal(p, q))


def test_worker_count_does_not_change_output():
    a = Arrangement.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, -1, 0)])
    base = build_layers(a).to_json()
    assert build_layers(a, workers=2).to_json() == base
    assert build_layers(a, workers=3).to_json() == base


vec2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any)


@given(st.lists(vec2, min_size=2, max_size=5, unique=True), st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_random_arrangements_are_geometric(vectors, d):
    a = Arrangement.of(vectors, d=d, v=1)
    info = validate(a)
    if not (info["essential"] and info["irredundant"]):
        return
    lp = build_layers(a)
    p = lp.poset
    assert p.is_geometric() and p.is_pure() and p.height == 2
    for lay in lp.layers:
        assert all(Fraction(0) <= x < 1 for row in lay.character for x in row)
    # each atom is one component of one H_alpha
    counts = [len(layers_of_subset(a, [i])) for i in range(len(a))]
    assert sum(counts) == len(p.atoms)
