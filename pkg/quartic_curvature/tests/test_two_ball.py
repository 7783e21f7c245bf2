from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_curvature.data_models import BALL_TYPE_IDS
from quartic_curvature.exceptions import DomainError, InvalidParametersError
from quartic_curvature.graph_core import complete_bipartite, complete_graph, cycle_graph, hypercube
from quartic_curvature.tests import sample_ball, table1_out_regular, table1_totals
from quartic_curvature.tests.util import sample_graph, sample_two_ball, relabel_ball
from quartic_curvature.two_ball import (
    STANDARD_S1_STRUCTURES,
    IncompleteTwoBall,
    ball_type_class,
    canonical_form,
    classify_sharp,
    enumerate_quartic,
    extract,
    lookup_ball_type,
    sharp_ball,
)


def test_extract_sample_ball():
    ball = extract(sample_graph(), 0)
    assert list(ball.s1) == sample_ball["s1"]
    assert [list(p) for p in ball.s1s2] == sample_ball["s1s2"]
    assert ball.to_model().dict() == sample_ball


def test_extract_named():
    k5 = extract(complete_graph(5), 2)
    assert k5.s1 == (1, 1, 1, 1, 1, 1)
    assert k5.s1s2 == ()
    k44 = extract(complete_bipartite(4, 4), 0)
    assert k44.s1 == (0,) * 6
    assert k44.s1s2 == ((1, 2, 3, 4),) * 3


def test_extract_non_quartic():
    with pytest.raises(DomainError):
        extract(cycle_graph(6), 0)
    c6 = extract(cycle_graph(6), 0, require_quartic=False)
    assert c6.degree == 2
    assert c6.s1 == (0,)
    assert c6.s1s2 == ((1,), (2,))


def test_ball_validation():
    with pytest.raises(InvalidParametersError):
        IncompleteTwoBall([0, 1, 0, 0], [])
    with pytest.raises(InvalidParametersError):
        IncompleteTwoBall([0] * 6, [[]])
    with pytest.raises(InvalidParametersError):
        IncompleteTwoBall([0] * 6, [[1, 5]])
    with pytest.raises(InvalidParametersError):
        IncompleteTwoBall([0, 2, 0, 0, 0, 0], [])


def test_ball_degrees():
    ball = sample_two_ball()
    assert ball.is_quartic()
    assert ball.spherical_degrees() == [1, 1, 1, 1]
    assert ball.s1_out_degrees() == [2, 2, 2, 2]
    assert ball.in_degrees_s2() == [2, 2, 2, 1, 1]
    assert ball.triangles_at_center() == 2
    assert ball.to_graph().n == ball.n_vertices == 10
    assert extract(ball.to_graph(), 0) == ball


def test_canonical_form_invariance():
    ball = sample_two_ball()
    canonical = canonical_form(ball)
    assert canonical_form(canonical) == canonical
    assert canonical.s1 in STANDARD_S1_STRUCTURES
    for perm in permutations(range(1, 5)):
        assert canonical_form(relabel_ball(ball, perm)) == canonical
    # v1 <-> v2
    assert canonical_form(relabel_ball(ball, (2, 1, 3, 4))) == canonical


@settings(max_examples=200, deadline=None)
@given(index=st.integers(0, 364), perm=st.permutations([1, 2, 3, 4]))
def test_canonical_form_random_relabeling(index, perm):
    ball = _all_balls()[index]
    assert canonical_form(relabel_ball(ball, perm)) == ball


_cache = {}


def _all_balls():
    if "balls" not in _cache:
        _cache["balls"] = enumerate_quartic()
    return _cache["balls"]


def test_enumeration_counts():
    balls = _all_balls()
    assert len(balls) == 365
    assert len(set(balls)) == 365
    counts = Counter(b.s1 for b in balls)
    assert [counts[s1] for s1 in STANDARD_S1_STRUCTURES] == table1_totals


def test_enumerated_balls_are_quartic_and_canonical():
    for ball in _all_balls():
        assert ball.is_quartic()
        assert canonical_form(ball) == ball
        out = ball.s1_out_degrees()
        for i, sph in enumerate(ball.spherical_degrees()):
            assert out[i] == 3 - sph


def test_s1_out_regular_structures():
    regular = [len(set(IncompleteTwoBall(s1, ()).spherical_degrees())) == 1 for s1 in STANDARD_S1_STRUCTURES]
    assert regular == table1_out_regular


def test_sharp_table_lookup():
    assert len({canonical_form(sharp_ball(t)) for t in BALL_TYPE_IDS}) == 22
    for ball_type in BALL_TYPE_IDS:
        ball = sharp_ball(ball_type)
        assert ball.is_quartic(), ball_type
        assert lookup_ball_type(ball) == ball_type
        assert lookup_ball_type(relabel_ball(ball, (4, 3, 1, 2))) == ball_type
    assert lookup_ball_type(sample_two_ball()) is None
    assert lookup_ball_type(extract(hypercube(4), 0)) == "4.5"


def test_ball_type_class():
    assert ball_type_class("1.1") == 3
    assert ball_type_class("2.7") == 2
    assert ball_type_class("3.4") == 1
    assert ball_type_class("4.10") == 0
    with pytest.raises(InvalidParametersError):
        ball_type_class("5.1")


def test_classify_sharp():
    assert classify_sharp(IncompleteTwoBall([1, 1, 0, 0, 1, 1], [[1, 2, 3, 4]])) == "2.1"
    four_five = IncompleteTwoBall([0] * 6, [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]])
    assert classify_sharp(four_five) == "4.5"
    assert classify_sharp(sample_two_ball()) is None


@pytest.mark.slow
def test_exactly_22_sharp_balls():
    types = [classify_sharp(b) for b in _all_balls()]
    found = [t for t in types if t is not None]
    assert sorted(found, key=BALL_TYPE_IDS.index) == list(BALL_TYPE_IDS)
