import json

import pytest

from expanderlab import graphs, hamilton
from expanderlab.errors import ConfigError


def test_config_validation():
    with pytest.raises(ConfigError):
        hamilton.PipelineConfig(reserve_fraction=0.7)
    with pytest.raises(ConfigError):
        hamilton.PipelineConfig(k=1)
    with pytest.raises(ConfigError):
        hamilton.PipelineConfig(gamma_caps={"P9": 0.5})
    with pytest.raises(ConfigError):
        hamilton.PipelineConfig(constant_overrides={"bogus": 1.0})


def test_config_roundtrip_and_unknown_keys():
    cfg = hamilton.PipelineConfig(seed=5, gamma_caps={"P1": 0.25},
                                  constant_overrides={"theta_scale": 1.5})
    back = hamilton.PipelineConfig.from_dict(cfg.to_dict())
    assert back == cfg
    with pytest.raises(ConfigError):
        hamilton.PipelineConfig.from_dict({"seed": 1, "extra": 2})


def test_config_gamma_and_constant_lookup():
    cfg = hamilton.PipelineConfig(gamma_caps={"P1": 0.25})
    assert cfg.gamma("P1") == 0.25
    assert cfg.gamma("Q4") == hamilton.GAMMA_DEFAULTS["Q4"]
    assert cfg.constant("lambda_ratio_cap") == 0.2


def test_plan_sizes_partition_exactly():
    for n in (401, 1009, 2029):
        cfg = hamilton.PipelineConfig()
        plan = hamilton.plan_sizes(n, cfg)
        assert plan.t * plan.k + plan.reserve_size == n
        assert plan.reserve_size >= cfg.min_reserve_ratio * plan.k
        assert plan.reserve_size <= plan.k * (cfg.l_max - 1)
        assert 1 <= plan.k5 <= plan.k


def test_plan_sizes_rejects_tiny_graphs():
    with pytest.raises(ConfigError):
        hamilton.plan_sizes(10, hamilton.PipelineConfig())


def test_cycle_line_roundtrip():
    c = hamilton.HamiltonCycle(order=(3, 1, 4, 1 + 1, 5))
    assert hamilton.HamiltonCycle.from_line(c.to_line()) == c


def test_verify_cycle_reasons(k4):
    ok = hamilton.verify_hamilton_cycle(
        k4, hamilton.HamiltonCycle((0, 1, 2, 3)))
    assert ok and ok.reason == "ok"
    short = hamilton.verify_hamilton_cycle(
        k4, hamilton.HamiltonCycle((0, 1, 2)))
    assert not short and "length" in short.reason
    repeated = hamilton.verify_hamilton_cycle(
        k4, hamilton.HamiltonCycle((0, 1, 2, 2)))
    assert not repeated and "repeated" in repeated.reason
    c4 = graphs.gen_named("cycle", 4)
    chord = hamilton.verify_hamilton_cycle(
        c4, hamilton.HamiltonCycle((0, 2, 1, 3)))
    assert not chord and "missing edge" in chord.reason


def test_path_cover_uneven_blocks_surplus_matchings():
    # X larger than the middle blocks forces surplus matchings M_i that
    # retire paths early into Y: sizes (6, 4, 3) give |M_i| = (2, 1)
    g = graphs.gen_named("complete", 25)
    cert = graphs.certify_expander(g, seed=0)
    cfg = hamilton.PipelineConfig(seed=0)
    parts = hamilton.Parts(x1=(0, 1), x2=(2, 3, 4, 5),
                           y1=(6, 7), y2=(8, 9, 10, 11),
                           r1=(), r2=())
    blocks = [tuple(range(12, 16)), tuple(range(16, 19))]
    trace = hamilton.PipelineTrace(g.n, cfg)
    system = hamilton.path_cover_phase(g, cert, parts, blocks, cfg, trace)
    assert trace.data["m_sizes"] == [2, 1]
    assert trace.data["n_sizes"] == [4, 3, 3]
    assert len(system.paths) == 6
    xset, yset = set(parts.x), set(parts.y)
    covered = set()
    for p in system.paths:
        assert p[0] in xset and p[-1] in yset
        covered.update(p)
    assert covered == xset | yset | set(range(12, 19))


def test_pipeline_success_and_trace(paley13):
    g = graphs.gen_paley(401)
    result = hamilton.hamilton_pipeline(g, hamilton.PipelineConfig(seed=0))
    assert result.trace.outcome == "success"
    assert result.cycle is not None
    assert hamilton.verify_hamilton_cycle(g, result.cycle)
    data = result.trace.data
    assert data["schema_version"] == hamilton.SCHEMA_VERSION
    assert data["n"] == 401
    assert data["plan"] is not None
    assert data["connector"]["reserve"] >= 0
    assert all(set(c) == {"phase", "check", "holds", "detail"}
               for c in data["checks"])
    # every recorded check on the success path holds
    assert all(c["holds"] for c in data["checks"])


def test_pipeline_deterministic_trace():
    g = graphs.gen_paley(401)
    a = hamilton.hamilton_pipeline(g, hamilton.PipelineConfig(seed=3))
    b = hamilton.hamilton_pipeline(g, hamilton.PipelineConfig(seed=3))
    assert a.trace.to_json() == b.trace.to_json()
    assert a.cycle == b.cycle


def test_pipeline_rejects_weak_expander_cleanly():
    # two disjoint cliques: d-regular but lambda = d, so certification
    # gates the run before any construction starts
    k = 30
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(i + k, j + k) for i, j in edges]
    g = graphs.Graph(2 * k, edges)
    result = hamilton.hamilton_pipeline(g, hamilton.PipelineConfig())
    assert result.cycle is None
    assert result.trace.outcome.startswith("failed:certification")


def test_pipeline_never_raises_on_sparse_graph():
    c = graphs.gen_named("cycle", 150)
    result = hamilton.hamilton_pipeline(c, hamilton.PipelineConfig())
    assert result.cycle is None
    assert result.trace.outcome.startswith("failed:")


def test_trace_json_is_valid(paley13):
    g = graphs.gen_paley(401)
    result = hamilton.hamilton_pipeline(g, hamilton.PipelineConfig(seed=1))
    parsed = json.loads(result.trace.to_json())
    assert parsed["outcome"] == result.trace.outcome
