import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expanderlab import graphs, linalg, matching, mixing
from expanderlab.errors import (PerfectMatchingFailed, PreconditionViolated,
                                UnbalancedSides)
from expanderlab.rng import generator


def _brute_max_matching(edges, left):
    """Largest matching by exhaustive search over edge subsets."""
    best = 0
    edges = list(edges)
    for r in range(len(left), 0, -1):
        for combo in itertools.combinations(edges, r):
            us = {u for u, _ in combo}
            vs = {v for _, v in combo}
            if len(us) == r and len(vs) == r:
                return r
    return best


def _view_from_edges(n, edges, left, right):
    g = graphs.Graph(n, edges)
    return graphs.BipartiteView(parent=g, left=left, right=right)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_max_matching_matches_brute_force(data):
    nl = data.draw(st.integers(1, 5))
    nr = data.draw(st.integers(1, 5))
    left = list(range(nl))
    right = list(range(nl, nl + nr))
    possible = [(u, v) for u in left for v in right]
    edges = data.draw(st.sets(st.sampled_from(possible),
                              max_size=len(possible)))
    view = _view_from_edges(nl + nr, sorted(edges), left, right)
    m = matching.max_matching(view)
    assert matching.verify_matching(m, view.parent, left, right)
    assert m.size == _brute_max_matching(edges, left)


def test_verify_matching_rejects_frauds(paley13):
    good = matching.Matching.from_edges([(0, 1)])
    assert matching.verify_matching(good, paley13, [0], [1])
    non_edge = matching.Matching.from_edges([(0, 6)])   # 6 is a non-residue
    assert not matching.verify_matching(non_edge, paley13, [0], [6])
    repeated = matching.Matching.from_edges([(0, 1), (0, 3)])
    assert not matching.verify_matching(repeated, paley13, [0], [1, 3])
    outside = matching.Matching.from_edges([(0, 1)])
    assert not matching.verify_matching(outside, paley13, [2], [1])


def test_hall_violator_is_genuine():
    # left vertices {0,1,2} all point at the single right vertex {3}
    view = _view_from_edges(5, [(0, 3), (1, 3), (2, 3)],
                            left=[0, 1, 2], right=[3, 4])
    violator = matching.hall_violator(view, side="left")
    assert violator is not None
    nbrs = set()
    for u in violator:
        nbrs.update(v for v in view.parent.adjacency[u] if v in view.right)
    assert len(nbrs) < len(violator)


def test_hall_violator_none_when_perfect():
    view = _view_from_edges(4, [(0, 2), (1, 3)], left=[0, 1], right=[2, 3])
    assert matching.hall_violator(view) is None


def test_perfect_matching_expander_on_paley(paley1009, cert1009):
    rng = generator(0, "pm-test")
    perm = rng.permutation(1009)
    left, right = perm[:150], perm[150:300]
    view = graphs.BipartiteView(parent=paley1009, left=left, right=right)
    union, _ = paley1009.induced(list(left) + list(right))
    lam = linalg.singular_values_array(union.spectral_matrix(), 2,
                                       seed=0).values[1]
    m = matching.perfect_matching_expander(view, d=cert1009.d, gamma=0.5,
                                           lam=lam, gamma_cap=1.2,
                                           ratio_cap=0.2)
    assert m.size == 150
    assert matching.verify_matching(m, paley1009, left, right)


def test_perfect_matching_preconditions(paley13):
    view = graphs.BipartiteView(parent=paley13, left=(0, 1), right=(2, 3, 4))
    with pytest.raises(UnbalancedSides):
        matching.perfect_matching_expander(view, d=6, gamma=0.1, lam=0.01)
    balanced = graphs.BipartiteView(parent=paley13, left=(0, 1), right=(2, 3))
    with pytest.raises(PreconditionViolated) as exc:
        matching.perfect_matching_expander(balanced, d=6, gamma=0.5, lam=0.01)
    assert exc.value.hypothesis == "gamma_cap"
    with pytest.raises(PreconditionViolated) as exc:
        matching.perfect_matching_expander(balanced, d=6, gamma=0.1, lam=5.0)
    assert exc.value.hypothesis == "lambda_cap"


def test_perfect_matching_failure_carries_violator():
    view = _view_from_edges(6, [(0, 3), (1, 3), (2, 3)],
                            left=[0, 1, 2], right=[3, 4, 5])
    with pytest.raises(PerfectMatchingFailed) as exc:
        matching.perfect_matching_expander(view, d=1000, gamma=0.01, lam=0.1)
    assert exc.value.violator


def test_greedy_matching_complete_graph(k4):
    cert = graphs.certify_expander(k4, seed=0)
    m = matching.greedy_matching_avoiding(k4, cert, [0, 1], [2, 3])
    assert m.size == 2


def test_greedy_matching_floor_paley(paley101, cert101):
    theta = mixing.one_edge_threshold(cert101)
    rng = generator(1, "greedy-test")
    for trial in range(20):
        perm = rng.permutation(101)
        v1, v2 = perm[:40], perm[40:80]
        s1, s2 = v1[:5], v2[:5]
        m = matching.greedy_matching_avoiding(paley101, cert101, v1, v2,
                                              s1, s2)
        floor = min(35, 35) - theta
        assert m.size >= floor
        assert not (m.left_cover & set(int(x) for x in s1))
        assert not (m.right_cover & set(int(x) for x in s2))


def test_greedy_matching_preconditions(paley101, cert101):
    with pytest.raises(PreconditionViolated) as exc:
        matching.greedy_matching_avoiding(paley101, cert101,
                                          [0, 1, 2], [2, 3, 4])
    assert exc.value.hypothesis == "disjoint_sides"
    with pytest.raises(PreconditionViolated) as exc:
        matching.greedy_matching_avoiding(paley101, cert101,
                                          [0, 1], [2, 3], s1=[5])
    assert exc.value.hypothesis == "avoid_subset"


def test_matching_json_roundtrip():
    m = matching.Matching.from_edges([(3, 9), (1, 7)])
    assert m.edges == ((1, 7), (3, 9))
    import json
    assert json.loads(m.to_json()) == [[1, 7], [3, 9]]
