import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from expanderlab import graphs, linalg, mixing
from expanderlab.errors import (DegenerateGamma, EmptySubset,
                                PreconditionViolated)

nonneg = st.floats(min_value=0, max_value=5, allow_nan=False,
                   allow_infinity=False, width=32)


def test_matrix_audit_complete_graph_tight():
    a = linalg.DenseMatrix.from_array(
        np.ones((4, 4)) - np.eye(4))
    audit = mixing.eml_matrix_audit(a, [0, 1], [2, 3])
    # s2 of the normalized K4 adjacency is 1/3; deviation hits the bound.
    assert abs(audit.s2_used - 1 / 3) < 1e-8
    assert audit.holds
    assert abs(audit.lhs_deviation - audit.rhs_bound) < 1e-8


def test_matrix_audit_precomputed_s2_matches_fresh():
    rng = np.random.default_rng(0)
    a = linalg.DenseMatrix.from_array(rng.random((12, 12)) + 0.1)
    fresh = mixing.eml_matrix_audit(a, [0, 1, 2], [5, 6])
    reused = mixing.eml_matrix_audit(a, [0, 1, 2], [5, 6],
                                     s2_bar=fresh.s2_used)
    assert reused.lhs_deviation == fresh.lhs_deviation
    assert reused.rhs_bound == fresh.rhs_bound


def test_matrix_audit_empty_subset():
    a = linalg.DenseMatrix.from_array(np.ones((3, 3)))
    with pytest.raises(EmptySubset):
        mixing.eml_matrix_audit(a, [], [0])


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (8, 8), elements=nonneg), st.data())
def test_matrix_audit_never_violated_fuzz(a, data):
    a = a + 0.05          # keep all line sums positive
    s = data.draw(st.sets(st.integers(0, 7), min_size=1, max_size=4))
    t = data.draw(st.sets(st.integers(0, 7), min_size=1, max_size=4))
    audit = mixing.eml_matrix_audit(linalg.DenseMatrix.from_array(a), s, t)
    assert audit.holds


def test_graph_audit_counts_and_window(petersen):
    cert = graphs.certify_expander(petersen, seed=0)
    audit = mixing.eml_graph_audit(cert, petersen, [0, 1, 2], [1, 2, 3])
    # edge (1,2) sits inside the overlap, so the ordered (entry-sum)
    # count exceeds the unordered edge count by exactly one
    assert not audit.disjoint
    assert audit.ordered_count == audit.unordered_count + 1
    assert audit.holds
    disjoint = mixing.eml_graph_audit(cert, petersen, [0, 1], [5, 6])
    assert disjoint.disjoint
    assert disjoint.ordered_count == disjoint.unordered_count


def test_graph_audit_sweep_paley(paley101, cert101):
    rng = np.random.default_rng(1)
    for _ in range(50):
        perm = rng.permutation(101)
        a, b = rng.integers(1, 50, size=2)
        audit = mixing.eml_graph_audit(cert101, paley101,
                                       perm[:a], perm[a:a + b])
        assert audit.holds and audit.unordered_holds


def test_regular_graph_bound_symmetry():
    assert mixing.regular_graph_bound(2.0, 10, 3, 4) == \
        mixing.regular_graph_bound(2.0, 10, 4, 3)
    assert mixing.regular_graph_bound(2.0, 10, 10, 4) == 0


def test_one_edge_threshold(cert101):
    theta = mixing.one_edge_threshold(cert101)
    assert abs(theta - cert101.lambda_hat * 101 / 50) < 1e-9
    bad = graphs.SpectralCertificate(n=10, d=5.0, gamma_hat=1.0,
                                     lambda_hat=1.0, residual=0.0, seed=0)
    with pytest.raises(DegenerateGamma):
        mixing.one_edge_threshold(bad)


def test_expansion_audit_preconditions(paley1009, cert1009):
    consts = mixing.ExpansionConstants(divisor=25)
    s = list(range(200))
    t = list(range(200, 1009))
    x = s[:5]
    audit = mixing.expansion_audit(cert1009, paley1009, s, t, x,
                                   constants=consts)
    assert audit.holds and audit.actual >= audit.required

    with pytest.raises(PreconditionViolated) as exc:
        mixing.expansion_audit(cert1009, paley1009, s, t, [500],
                               constants=consts)
    assert exc.value.hypothesis == "x_subset_of_s"

    with pytest.raises(PreconditionViolated) as exc:
        mixing.expansion_audit(cert1009, paley1009, s, t, s,
                               constants=consts)
    assert exc.value.hypothesis == "x_size_cap"

    with pytest.raises(PreconditionViolated) as exc:
        mixing.expansion_audit(cert1009, paley1009, s, t, x)
    assert exc.value.hypothesis == "lambda_cap"


def test_joinedness_certify(paley101, cert101):
    jc = mixing.joinedness_certify(cert101, paley101, trials=500, seed=0)
    assert not jc.degenerate
    assert jc.m == int(np.floor(mixing.one_edge_threshold(cert101))) + 1
    assert jc.trials_run == 500


def test_joinedness_degenerate_on_sparse_graph():
    c12 = graphs.gen_named("cycle", 12)
    cert = graphs.certify_expander(c12, seed=0)
    jc = mixing.joinedness_certify(cert, c12, trials=10, seed=0)
    assert jc.degenerate and jc.trials_run == 0
