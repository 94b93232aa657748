import json

import pytest
from hypothesis import given, strategies as st

from hdatopo.homology import compare, homology, pcs_homology
from hdatopo.precubical import euler_characteristic, truncate, validate
from hdatopo.simplicial import (FIXTURES, SimplicialComplex, cubical_subdivision, from_facets,
                                load_fixture, pair_key, parse_pair_key, simplicial_chain_complex)

from oracles import subdivision_counts


@st.composite
def connected_complexes(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    facets = draw(st.lists(st.sets(st.integers(1, n), min_size=1, max_size=4), max_size=6))
    facets += [{i, i + 1} for i in range(1, n)] + [{1}]
    return from_facets(n, facets)


def test_from_facets_examples():
    assert from_facets(2, [(1, 2)]).simplexes == {(1,), (2,), (1, 2)}
    assert len(from_facets(3, [(1, 2), (2, 3), (1, 3)]).simplexes) == 6
    assert len(from_facets(4, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]).simplexes) == 14


def test_rejections():
    with pytest.raises(ValueError, match="connected"):
        from_facets(4, [(1, 2), (3, 4)])
    with pytest.raises(ValueError, match="not used"):
        from_facets(3, [(1, 2)])
    with pytest.raises(ValueError, match="missing"):
        SimplicialComplex(3, frozenset({(1,), (2,), (3,), (1, 2), (2, 3), (1, 2, 3)}))
    with pytest.raises(ValueError):
        from_facets(2, [(0, 1)])


def test_fixtures_load_and_serialize():
    for name in FIXTURES:
        K = load_fixture(name)
        assert SimplicialComplex.from_json(json.loads(json.dumps(K.to_json()))) == K


def test_fig2_square_faces():
    K = from_facets(3, [(1, 2, 3)])
    P = cubical_subdivision(K)
    x = pair_key((1,), (1, 2, 3))
    assert P.d(x, 1, 0) == pair_key((1,), (1, 3))
    assert P.d(x, 2, 0) == pair_key((1,), (1, 2))
    assert P.d(x, 1, 1) == pair_key((1, 2), (1, 2, 3))
    assert P.d(x, 2, 1) == pair_key((1, 3), (1, 2, 3))


def test_pair_key_roundtrip():
    assert parse_pair_key(pair_key((2, 1), (3, 1, 2))) == ((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        parse_pair_key("nonsense")


def test_subdivision_counts(k_edge):
    assert cubical_subdivision(k_edge).counts() == (3, 2)
    expected = {"interval": (3, 2), "circle": (6, 6), "tetra": (14, 24, 12)}
    for name, counts in expected.items():
        assert cubical_subdivision(load_fixture(name)).counts() == counts


def test_triangle_one_skeleton_has_nine_edges():
    # pairs with |sigma - tau| = 1: three edges contribute 2 each, the triangle 3
    P = cubical_subdivision(from_facets(3, [(1, 2, 3)]))
    assert truncate(P, 1).counts() == (7, 9)


@pytest.mark.parametrize("name", ("point",) + FIXTURES)
def test_subdivision_matches_oracle(name):
    K = load_fixture(name)
    P = cubical_subdivision(K)
    assert P.counts() == subdivision_counts(K.simplexes)
    assert validate(P).ok
    assert euler_characteristic(P) == K.euler_characteristic()
    assert compare(pcs_homology(P), homology(simplicial_chain_complex(K)))


@given(connected_complexes())
def test_subdivision_properties(K):
    P = cubical_subdivision(K)
    assert validate(P).ok
    assert P.counts() == subdivision_counts(K.simplexes)
    assert compare(pcs_homology(P), homology(simplicial_chain_complex(K)))


def test_simplicial_homology_examples(k_edge):
    H = homology(simplicial_chain_complex(k_edge)).trimmed()
    assert H.betti == (1,)
    H = homology(simplicial_chain_complex(load_fixture("circle"))).trimmed()
    assert H.betti == (1, 1)
    H = homology(simplicial_chain_complex(load_fixture("tetra"))).trimmed()
    assert H.betti == (1, 0, 1) and not any(H.torsion)


def test_surfaces_are_closed():
    for name in ("torus", "rp2"):
        K = load_fixture(name)
        for e in K.simplices(1):
            assert sum(1 for t in K.simplices(2) if set(e) <= set(t)) == 2
