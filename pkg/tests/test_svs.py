import json
from pathlib import Path

import pytest

from hdatopo.accessibility import make_accessible
from hdatopo.hda import Hda, classify, hda_isomorphism, hda_P
from hdatopo.homology import compare, homology, pcs_homology
from hdatopo.precubical import PrecubicalSet, dumps, euler_characteristic, is_isomorphic
from hdatopo.simplicial import FIXTURES, load_fixture, simplicial_chain_complex
from hdatopo.svs import (Action, ProgramGraph, SharedVariableSystem, VariableSpec, action_name,
                         hda_model_of_svs, realize, state_graph, svs_from_hda, transition_system_model)

DEMOS = Path(__file__).resolve().parents[1] / "demos"


def one_location(name, table, guard):
    return ProgramGraph((0,), (Action(name, table),), ((0, name, 0),), (frozenset(guard),), 0)


def flag_system():
    """Two processes each raising its own boolean once."""
    var = (VariableSpec("x", (0, 1)), VariableSpec("y", (0, 1)))
    evals = [(a, b) for a in (0, 1) for b in (0, 1)]
    gx = ProgramGraph((0, 1), (Action("x:=1", {(a, b): (1, b) for a, b in evals}),),
                      ((0, "x:=1", 1),), (frozenset(evals),), 0)
    gy = ProgramGraph((0, 1), (Action("y:=1", {(a, b): (a, 1) for a, b in evals}),),
                      ((0, "y:=1", 1),), (frozenset(evals),), 0)
    return SharedVariableSystem((gx, gy), var, (0, 0))


@pytest.fixture(scope="module")
def b_edge(k_edge):
    B, _ = make_accessible(hda_P(k_edge))
    return B


def test_type_checks():
    with pytest.raises(ValueError):
        VariableSpec("x", ())
    var = (VariableSpec("x", (0, 1)),)
    partial = Action("f", {(0,): (1,)})
    with pytest.raises(ValueError, match="total"):
        SharedVariableSystem((one_location("f", partial.table, [(0,)]),), var, (0,))
    with pytest.raises(ValueError, match="guard"):
        ProgramGraph((0,), (Action("f", {}),), ((0, "f", 0),), (), 0)
    with pytest.raises(ValueError, match="unknown"):
        ProgramGraph((0,), (Action("f", {}),), ((0, "g", 0),), (frozenset(),), 0)
    ident = {(0,): (0,), (1,): (1,)}
    with pytest.raises(ValueError, match="initial evaluation"):
        SharedVariableSystem((one_location("f", ident, [(0,)]),), var, (5,))


def test_state_graph_identity_loop():
    var = (VariableSpec("x", (0, 1, 2)),)
    ident = {(v,): (v,) for v in (0, 1, 2)}
    S = SharedVariableSystem((one_location("id", ident, [(1,)]),), var, (0,))
    X = state_graph(S)
    assert X.counts() == (3, 1)
    (e,) = X.edges
    assert X.source(e) == X.target(e)


def test_state_graph_counts_guards():
    var = (VariableSpec("x", tuple(range(5))),)
    ident = {(v,): (v,) for v in range(5)}
    S = SharedVariableSystem((one_location("f", ident, [(0,), (1,)]),
                              one_location("g", ident, [(2,), (3,), (4,)])), var, (0,))
    assert len(state_graph(S).edges) == 5


def test_reachable_part_only():
    var = (VariableSpec("x", (0, 1, 2)),)
    step = {(0,): (1,), (1,): (1,), (2,): (0,)}
    S = SharedVariableSystem((one_location("f", step, [(0,), (2,)]),), var, (0,))
    T = transition_system_model(S)
    assert T.pcs.counts() == (2, 1)
    assert all("2" not in json.loads(v)[1] for v in T.pcs.vertices)
    assert T.labels[T.pcs.edges[0]] == (1, "f")


def test_non_extensional_reachable_part_rejected():
    var = (VariableSpec("x", (0, 1)),)
    go = {(0,): (1,), (1,): (1,)}
    g = ProgramGraph((0,), (Action("f", go),), ((0, "f", 0), (0, "f", 0)),
                     (frozenset({(0,)}), frozenset({(0,)})), 0)
    with pytest.raises(ValueError, match="extensional"):
        transition_system_model(SharedVariableSystem((g,), var, (0,)))


def test_single_process_never_fills():
    var = (VariableSpec("x", (0, 1, 2, 3)),)
    nxt = {(v,): ((v + 1) % 4,) for v in range(4)}
    S = SharedVariableSystem((one_location("inc", nxt, [(v,) for v in range(4)]),), var, (0,))
    assert hda_model_of_svs(S).pcs.max_dim == 1


def test_two_independent_processes_fill_one_square():
    A = hda_model_of_svs(flag_system())
    assert A.pcs.counts() == (4, 4, 1)
    (x,) = A.pcs.cubes(2)
    a, b = A.labels[A.pcs.d(x, 2, 0)], A.labels[A.pcs.d(x, 1, 0)]
    assert a[0] < b[0]


def test_edges_follow_action_tables():
    S = SharedVariableSystem.from_json(json.loads((DEMOS / "peterson.json").read_text()))
    T = transition_system_model(S)
    for e in T.pcs.edges:
        i, a = T.labels[e]
        (l0, g0), (l1, g1) = (json.loads(T.source(e)), json.loads(T.target(e)))
        assert S.graphs[i - 1].action(a)(tuple(g0)) == tuple(g1)
        assert [x for j, x in enumerate(l0) if j != i - 1] == [x for j, x in enumerate(l1) if j != i - 1]


FIGURE_EDGES = ("p0 q4;q0 q1;q1 q2;q2 q3;q4 q3;q0 q5;q1 q6;q2 q7;q3 q8;q5 q6;q6 q7;q7 q8;q7 q9;"
                "q10 q8;q11 q3;q12 q4;q10 q9;q11 q10;q12 q11;q5 q13;q6 q14;q14 q9;q15 q10;q16 q11;"
                "q17 q12;q13 q14;q15 q14;q16 q15;q17 q16;p1 q13;q3 q0;q14 q17;q8 p1;q9 p0")


def test_peterson_matches_drawn_figure():
    S = SharedVariableSystem.from_json(json.loads((DEMOS / "peterson.json").read_text()))
    T = transition_system_model(S)
    # the drawing has 18 nodes q_0..q_17 plus the two states p_0, p_1 entered by the long arcs
    edges = [e.split() for e in FIGURE_EDGES.split(";")]
    cells = {v: [] for e in edges for v in e}
    cells.update({f"e{i}": [tuple(e)] for i, e in enumerate(edges)})
    drawn = PrecubicalSet(cells)
    assert T.pcs.counts() == drawn.counts() == (20, 34)
    blank = {e: 0 for e in T.pcs.edges}
    assert is_isomorphic(T.pcs, drawn, blank, {e: 0 for e in drawn.edges}, T.initial, "q1") is not None
    A = hda_model_of_svs(S)
    assert A.pcs.counts() == (20, 34, 10)  # ten shaded squares


def test_svs_from_edge_hda():
    B = Hda(PrecubicalSet({"I": [], "w": [], "y": [("I", "w")]}), "I", {"y": "a"}, ("a",))
    S = svs_from_hda(B)
    (g,) = S.graphs
    act = g.actions[0]
    assert act(("I",)) == ("w",) and act(("w",)) == ("w",)
    assert g.guards == (frozenset({("I",)}),)


def test_svs_from_b_edge(b_edge):
    S = svs_from_hda(b_edge)
    assert len(S.graphs) == 3 and len(S.variables[0].domain) == 7
    ones = [e for e in b_edge.pcs.edges if b_edge.labels[e] == 1]
    assert len(ones) == 3
    assert S.graphs[0].guards[0] == frozenset((b_edge.source(e),) for e in ones)
    X = state_graph(S)
    assert X.counts() == (7, 9)
    T = transition_system_model(S)
    label_map = {(i + 1, action_name(a)): a for i, a in enumerate(b_edge.order)}
    assert hda_isomorphism(T, b_edge.truncate(1), label_map) is not None
    A = hda_model_of_svs(S)
    assert A.pcs.counts() == (7, 9, 3)
    assert hda_isomorphism(A, b_edge, label_map) is not None


def test_guards_are_bijective_images(b_edge):
    S = svs_from_hda(b_edge)
    for a, g in zip(b_edge.order, S.graphs):
        srcs = [b_edge.source(e) for e in b_edge.pcs.edges if b_edge.labels[e] == a]
        assert len(srcs) == len(set(srcs)) == len(g.guards[0])


def test_svs_from_hda_rejections(k_edge):
    with pytest.raises(ValueError, match="accessible"):
        svs_from_hda(hda_P(k_edge))
    X = PrecubicalSet({"a": [], "b": [], "c": [], "x": [("a", "b")], "y": [("a", "c")]})
    with pytest.raises(ValueError, match="deterministic"):
        svs_from_hda(Hda(X, "a", {"x": "l", "y": "l"}, ("l",)))
    with pytest.raises(ValueError, match="order"):
        svs_from_hda(Hda(X, "a", {"x": "l", "y": "m"}, ("l", "m")), order=("l",))


def test_json_roundtrip(b_edge):
    S = svs_from_hda(b_edge)
    text = dumps(S.to_json())
    S2 = SharedVariableSystem.from_json(json.loads(text))
    assert dumps(S2.to_json()) == text
    assert hda_isomorphism(hda_model_of_svs(S2), hda_model_of_svs(S)) is not None


@pytest.mark.parametrize("name", ("point",) + FIXTURES)
def test_realize(name):
    K = load_fixture(name)
    r = realize(K)
    c = r.certificate
    assert c["isomorphic"] and c["homology_match"] and c["surgery_ok"]
    assert c["model_connected"] and c["model_accessible"]
    assert classify(r.model).deterministic
    HK = homology(simplicial_chain_complex(K))
    assert compare(pcs_homology(r.model.pcs), HK)
    assert euler_characteristic(r.model.pcs) == K.euler_characteristic()
    # (P_B)_0 ~ Q_0 and (P_B)_1 ~ Q_1
    assert state_graph(r.svs).counts() == r.accessible.pcs.counts()[:2]
    X = r.model.pcs
    for x in X.cubes(2):
        assert r.model.labels[X.d(x, 2, 0)][0] != r.model.labels[X.d(x, 1, 0)][0]


def test_realize_examples(k_edge):
    c = realize(k_edge).certificate
    assert c["model_euler"] == 1 and c["homology_model"] == {"degrees": [{"n": 0, "betti": 1, "torsion": []}]}
    betti = lambda name: [d["betti"] for d in realize(load_fixture(name)).certificate["homology_model"]["degrees"]]
    assert betti("circle") == [1, 1]
    assert betti("tetra") == [1, 0, 1]
