import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosscov.errors import (
    GraphError,
    GraphTooLarge,
    NonDisjointSets,
    NotAncestral,
    UnknownVertex,
    VertexSetMismatch,
)
from crosscov.graphs import (
    Figure4Spec,
    MixedGraph,
    SeparationQuery,
    ancestors,
    figure4,
    implied_separations,
    is_ancestral,
    is_maximal,
    m_separated,
    m_separated_by_paths,
    markov_equivalent,
    parse_query,
    random_mixed_graph,
    rename_separations,
    rename_vertices,
)


def f4(variant, condition, p=2, q=2):
    return figure4(Figure4Spec(variant, condition, p, q))


def all_pair_queries(g):
    verts = list(g.vertices)
    for a, b in itertools.combinations(verts, 2):
        others = [v for v in verts if v not in (a, b)]
        for k in range(len(others) + 1):
            for Z in itertools.combinations(others, k):
                yield a, b, Z


# --- construction ------------------------------------------------------------


def test_figure4_a_I_counts():
    g = f4("a", "I")
    assert len(g.vertices) == 6
    assert g.directed == {("xi", "X1"), ("xi", "X2"), ("omega", "Y1"), ("omega", "Y2")}
    assert g.bidirected == {("xi", "omega"), ("X1", "X2"), ("Y1", "Y2")}
    assert g.latent == {"xi", "omega"}


def test_figure4_d_II_smallest():
    g = f4("d", "II", 1, 1)
    assert g.vertices == ("X1", "Y1", "eta")
    assert g.directed == {("eta", "X1"), ("eta", "Y1")}
    assert not g.bidirected


def test_figure4_c_II_structure():
    g = f4("c", "II", 3, 2)
    assert g.directed == {("X1", "xi"), ("X2", "xi"), ("X3", "xi"), ("xi", "omega"), ("omega", "Y1"), ("omega", "Y2")}


@pytest.mark.parametrize("bad", [("f", "I", 1, 1), ("a", "III", 1, 1), ("a", "I", 0, 1)])
def test_figure4_spec_validation(bad):
    with pytest.raises(GraphError):
        Figure4Spec(*bad)


def test_graph_invariants():
    with pytest.raises(GraphError):
        MixedGraph("xy", [("x", "y")], [("x", "y")])
    with pytest.raises(GraphError):
        MixedGraph("xy", [("x", "x")])
    with pytest.raises(GraphError):
        MixedGraph("xx")
    with pytest.raises(UnknownVertex):
        MixedGraph("xy", [("x", "z")])


def test_json_round_trip():
    g = f4("c", "I", 3, 2)
    assert MixedGraph.from_json(g.to_json()) == g


# --- ancestors and ancestrality ----------------------------------------------


def test_ancestors():
    assert ancestors(f4("e", "II", 3, 2), "Y1") == {"Y1", "eta", "X1", "X2", "X3"}
    assert ancestors(f4("d", "II", 3, 2), "X1") == {"X1", "eta"}
    assert ancestors(MixedGraph(["v"]), "v") == {"v"}
    with pytest.raises(UnknownVertex):
        ancestors(MixedGraph(["v"]), "w")


def test_all_figure4_graphs_are_ancestral():
    for v, c in itertools.product("abcde", ("I", "II")):
        assert is_ancestral(f4(v, c, 3, 2))


def test_non_ancestral_graphs():
    # a 2-cycle already breaks the one-edge-per-pair rule
    with pytest.raises(GraphError):
        MixedGraph("xy", [("x", "y"), ("y", "x")])
    assert not is_ancestral(MixedGraph("xyz", [("x", "y"), ("y", "z"), ("z", "x")]))
    assert not is_ancestral(MixedGraph("xzy", [("x", "z"), ("z", "y")], [("x", "y")]))


# --- m-separation ------------------------------------------------------------


def test_m_separation_cases():
    assert m_separated(f4("a", "I"), ["X1"], ["Y1"], ["xi"])
    assert not m_separated(f4("a", "II"), ["X1"], ["X2"], [])
    assert m_separated(f4("c", "II"), ["X1"], ["X2"], [])
    assert m_separated(f4("a", "II"), ["X1"], ["X2"], ["xi"])


def test_collider_opened_by_descendant():
    # x -> c <- y, c -> d: conditioning on the descendant d opens the collider
    g = MixedGraph("xycd", [("x", "c"), ("y", "c"), ("c", "d")])
    assert m_separated(g, "x", "y")
    assert not m_separated(g, "x", "y", "d")
    h = MixedGraph("xyc", [], [("x", "c"), ("c", "y")])
    assert m_separated(h, "x", "y") and not m_separated(h, "x", "y", "c")


def test_query_validation():
    g = f4("a", "II")
    with pytest.raises(NonDisjointSets):
        m_separated(g, ["X1"], ["X1"], [])
    with pytest.raises(NonDisjointSets):
        m_separated(g, ["X1"], ["Y1"], ["X1"])
    with pytest.raises(UnknownVertex):
        m_separated(g, ["X9"], ["Y1"])
    with pytest.raises(GraphError):
        SeparationQuery(frozenset(), {"Y1"})


def test_parse_query():
    q = parse_query("X1,X2 | Y1 | xi, omega")
    assert q == SeparationQuery({"X1", "X2"}, {"Y1"}, {"xi", "omega"})
    assert parse_query("X1 | Y1 | ").Z == frozenset()
    assert parse_query("X1 | Y1 | ∅").Z == frozenset()
    with pytest.raises(GraphError):
        parse_query("X1")


def test_set_separation_reduces_to_pairs():
    g = f4("a", "II", 3, 2)
    assert m_separated(g, ["X1", "X2"], ["Y1", "Y2"], ["omega"])
    assert not m_separated(g, ["X1", "xi"], ["X2"], ["omega"])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
def test_reachability_agrees_with_path_enumeration(seed, n):
    rng = np.random.default_rng(seed)
    g = random_mixed_graph(n, rng, p_directed=rng.uniform(0.1, 0.6), p_bidirected=rng.uniform(0.0, 0.4))
    for a, b, Z in all_pair_queries(g):
        fast = m_separated(g, [a], [b], Z)
        assert fast == m_separated_by_paths(g, [a], [b], Z)
        assert fast == m_separated(g, [b], [a], Z)


# --- maximality --------------------------------------------------------------


def test_maximality():
    assert is_maximal(f4("a", "I"))
    assert is_maximal(MixedGraph("abc", [("a", "b"), ("a", "c"), ("b", "c")]))
    with pytest.raises(NotAncestral):
        is_maximal(MixedGraph("xyz", [("x", "y"), ("y", "z"), ("z", "x")]))


def test_non_maximal_ancestral_graph():
    # found by exhaustive search over 4-vertex mixed graphs
    g = MixedGraph("abcd", [("a", "b"), ("c", "d")], [("a", "c"), ("a", "d"), ("b", "c")])
    assert is_ancestral(g)
    assert not g.adjacent("b", "d")
    assert not is_maximal(g)
    # brute force: no subset of {a, c} separates b and d
    assert not any(m_separated_by_paths(g, "b", "d", Z) for Z in ([], ["a"], ["c"], ["a", "c"]))


# --- implied separations and equivalence -------------------------------------


def test_implied_separations_chain():
    seps = implied_separations(f4("d", "II", 1, 1))
    assert ("X1", "Y1", frozenset({"eta"})) in seps
    assert not [s for s in seps if not s[2]]


def test_implied_separations_edgeless():
    assert implied_separations(MixedGraph("xy")) == [("x", "y", frozenset())]


def test_implied_separations_b_I_are_latent_mediated():
    seps = implied_separations(f4("b", "I"))
    latents = {"xi", "omega"}
    for a, b, Z in seps:
        pair = {a, b}
        if pair <= {"X1", "X2", "Y1", "Y2"}:
            assert a[0] != b[0] and Z & latents
        elif "omega" in pair:
            assert (pair - {"omega"}).pop()[0] == "X" and "xi" in Z
        else:
            assert (pair - {"xi"}).pop()[0] == "Y" and "omega" in Z
    # and each listed relation actually appears
    for x, y in itertools.product(["X1", "X2"], ["Y1", "Y2"]):
        for Z in ({"xi"}, {"omega"}, {"xi", "omega"}):
            assert (x, y, frozenset(Z)) in seps
    assert ("X1", "omega", frozenset({"xi"})) in seps
    assert ("Y2", "xi", frozenset({"omega"})) in seps


def test_markov_equivalence():
    assert markov_equivalent(f4("a", "I", 3, 2), f4("b", "I", 3, 2))
    res = markov_equivalent(f4("a", "II"), f4("c", "II"))
    assert not res.equivalent
    assert res.witness == ("X1", "X2", frozenset())
    assert res.holds_in == 2
    g = f4("e", "I")
    assert markov_equivalent(g, g)
    with pytest.raises(VertexSetMismatch):
        markov_equivalent(f4("a", "II"), f4("d", "II"))


def test_renaming_eta_for_omega():
    c = f4("c", "II", 2, 2)
    e = rename_vertices(f4("e", "II", 2, 2), {"eta": "omega"})
    over = [v for v in c.vertices if v != "xi"]
    assert markov_equivalent(c, e, over)
    seps = rename_separations(implied_separations(f4("e", "II")), {"eta": "omega"})
    assert ("Y1", "Y2", frozenset({"omega"})) in seps


def test_graph_too_large():
    g = MixedGraph([f"v{i}" for i in range(17)])
    with pytest.raises(GraphTooLarge):
        implied_separations(g)
    with pytest.raises(GraphTooLarge):
        markov_equivalent(g, g)
