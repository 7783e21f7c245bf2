import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_curvature.data_models import (
    BALL_TYPE_IDS,
    PRUNE_RULES,
    CompletedGraph,
    SearchOptions,
    SearchOutcome,
)
from quartic_curvature.exceptions import InvalidParametersError, VerificationError
from quartic_curvature.graph_core import (
    NAMED_GRAPHS,
    complete_graph,
    cycle_graph,
    from_edge_list,
    hypercube,
    named_graph,
)
from quartic_curvature.search import (
    PartialGraph,
    admissible_balls,
    are_isomorphic,
    canonical_form_of,
    canonical_graph,
    canonical_label,
    canonical_relabeling,
    identify_named,
    s3_budget_check,
    search_all,
    search_from_seed,
    verify_outcome,
)
from quartic_curvature.tests import table3_types
from quartic_curvature.tests.util import random_graph, shuffled
from quartic_curvature.util.fingerprint import graph_fingerprint


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 12), p=st.floats(0.1, 0.9), seed=st.integers(0, 10**6), perm_seed=st.integers(0, 10**6))
def test_canonical_form_is_invariant(n, p, seed, perm_seed):
    g = random_graph(n, p, seed)
    h = shuffled(g, perm_seed)
    assert canonical_form_of(g) == canonical_form_of(h)
    assert canonical_label(g) == canonical_label(h)
    assert are_isomorphic(g, h)
    assert g.relabel(canonical_relabeling(g)) == canonical_graph(g)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 10), p=st.floats(0.2, 0.8), seed=st.integers(0, 10**6), other=st.integers(0, 10**6))
def test_isomorphism_agrees_with_networkx(n, p, seed, other):
    g, h = random_graph(n, p, seed), random_graph(n, p, other)
    expected = nx.is_isomorphic(g.to_networkx(), h.to_networkx())
    assert are_isomorphic(g, h) == expected
    assert (canonical_form_of(g) == canonical_form_of(h)) == expected


def test_canonical_form_separates():
    two_triangles = from_edge_list(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not are_isomorphic(cycle_graph(6), two_triangles)
    assert canonical_form_of(cycle_graph(6)) != canonical_form_of(two_triangles)
    # Regular graphs with equal degree sequences: D14 is bipartite, C_14(1, 2) is not
    c14 = from_edge_list(14, [(i, (i + j) % 14) for i in range(14) for j in (1, 2)])
    assert not are_isomorphic(named_graph("D14"), c14)
    assert canonical_form_of(from_edge_list(0, [])) == (0, (), ())


def test_canonical_form_with_colors():
    path = from_edge_list(3, [(0, 1), (1, 2)])
    assert canonical_form_of(path, colors=[1, 0, 0]) == canonical_form_of(path, colors=[0, 0, 1])
    assert canonical_form_of(path, colors=[1, 0, 0]) != canonical_form_of(path, colors=[0, 1, 0])
    q4 = hypercube(4)
    rooted = [v == 0 for v in range(16)]
    rooted_elsewhere = [v == 9 for v in range(16)]
    # Q4 is vertex transitive
    assert canonical_form_of(q4, rooted) == canonical_form_of(q4, rooted_elsewhere)
    with pytest.raises(InvalidParametersError):
        canonical_form_of(path, colors=[0, 1])


def test_identify_named():
    for name in NAMED_GRAPHS:
        assert identify_named(shuffled(named_graph(name), seed=7)) == name
    assert identify_named(cycle_graph(6)) is None


def test_partial_graph_from_seed():
    pg = PartialGraph.from_seed("4.5")
    assert pg.n == 11
    assert pg.ball_types == {0: "4.5"}
    assert pg.status(0) == "verified"
    assert pg.status(1) == "saturated"
    assert pg.status(5) == "open"
    assert pg.frontier() == list(range(1, 11))
    assert pg.first_open() == 5
    assert pg.to_graph().number_of_edges() == 4 + 12


def test_partial_graph_growth():
    pg = PartialGraph.from_seed("4.5")
    child = pg.copy()
    new = child.add_vertex(5)
    assert new == 11
    assert child.degree(5) == 3
    child.add_edge(new, 6)
    assert child.to_graph().has_edge(6, 11)
    # The parent is untouched
    assert pg.n == 11
    assert pg.degree(5) == 2
    assert bin(child.open_mask()).count("1") == 7


def test_complete_seeds_saturate_immediately():
    for seed in ("1.1", "2.1", "4.10"):
        pg = PartialGraph.from_seed(seed)
        assert pg.first_open() is None
        assert pg.frontier() == []


def test_admissible_balls():
    assert admissible_balls(3) == ((0b111111, ()),)
    # Type 4.5 looks the same under every order of S1
    assert (0, (3, 5, 6, 9, 10, 12)) in admissible_balls(0)
    for c1 in range(4):
        for s1_mask, _ in admissible_balls(c1):
            assert bin(s1_mask).count("1") == 2 * c1


def test_s3_budget_check():
    all_45 = {v: "4.5" for v in range(16)}
    q4 = hypercube(4)
    assert s3_budget_check(PartialGraph(list(q4.adjacency), all_45), 0)
    d14 = named_graph("D14")
    assert s3_budget_check(PartialGraph(list(d14.adjacency), {v: "4.5" for v in range(14)}), 0)
    # 7 = 0b0111 keeps only two neighbors in the second sphere of 0
    cut = from_edge_list(16, [e for e in q4.edges() if e != (3, 7)])
    assert not s3_budget_check(PartialGraph(list(cut.adjacency), all_45), 0)
    # Does not apply unless the neighborhood is typed 4.5
    assert s3_budget_check(PartialGraph(list(cut.adjacency), {0: "4.5"}), 0)


def test_search_option_errors():
    with pytest.raises(InvalidParametersError):
        search_from_seed("5.1")
    with pytest.raises(InvalidParametersError):
        search_from_seed("4.5", max_vertices=16)


@pytest.mark.parametrize("seed,name", [("1.1", "K5"), ("2.1", "O"), ("4.10", "K44")])
def test_search_from_saturated_seeds(seed, name):
    outcome = search_from_seed(seed)
    assert outcome.seed == seed
    assert outcome.graph_names() == [name]
    assert not outcome.truncated
    assert list(outcome.pruned_by) == list(PRUNE_RULES)
    assert outcome.nodes_explored >= 1
    assert verify_outcome(outcome)
    parallel = search_from_seed(seed, options=SearchOptions(seed=seed, jobs=2))
    assert parallel.completed_graphs == outcome.completed_graphs


def test_verify_outcome():
    k5 = canonical_graph(complete_graph(5))
    good = CompletedGraph(n=5, edges=k5.edges(), fingerprint=graph_fingerprint(5, k5.edges()), diameter=1, name="K5")
    outcome = SearchOutcome(seed="1.1", max_vertices=40, rigidity_prune=True, completed_graphs=[good])
    assert verify_outcome(outcome)

    wrong_diameter = good.copy(update={"diameter": 2})
    with pytest.raises(VerificationError) as err:
        verify_outcome(outcome.copy(update={"completed_graphs": [wrong_diameter]}))
    assert err.value.field == "diameter"

    wrong_fingerprint = good.copy(update={"fingerprint": good.fingerprint + 1})
    with pytest.raises(VerificationError) as err:
        verify_outcome(outcome.copy(update={"completed_graphs": [wrong_fingerprint]}))
    assert err.value.field == "fingerprint"

    c6 = cycle_graph(6)
    not_quartic = CompletedGraph(n=6, edges=c6.edges(), fingerprint=graph_fingerprint(6, c6.edges()), diameter=3)
    with pytest.raises(VerificationError):
        verify_outcome(outcome.copy(update={"completed_graphs": [not_quartic]}))


@pytest.mark.slow
@pytest.mark.parametrize("seed", [t for t in BALL_TYPE_IDS if t not in ("1.1", "2.1", "4.10")])
def test_search_from_seed(seed):
    outcome = search_from_seed(seed)
    assert outcome.graph_names() == table3_types.get(seed, [])
    assert not outcome.truncated
    assert verify_outcome(outcome)


@pytest.mark.slow
def test_search_without_rigidity_prune():
    outcome = search_from_seed("4.5", options=SearchOptions(seed="4.5", rigidity_prune=False))
    assert outcome.graph_names() == ["D14", "Q4"]
    assert outcome.pruned_by["rigidity"] == 0


@pytest.mark.slow
def test_search_all():
    total, outcomes = search_all(SearchOptions(jobs=2))
    assert list(outcomes) == list(BALL_TYPE_IDS)
    assert sorted(total.graph_names()) == sorted(NAMED_GRAPHS)
    assert total.seed == "all"
    assert total.nodes_explored == sum(o.nodes_explored for o in outcomes.values())
    assert [g.n for g in total.completed_graphs] == sorted(g.n for g in total.completed_graphs)
    assert verify_outcome(total)
