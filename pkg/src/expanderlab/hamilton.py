"""Constructive Hamilton-cycle pipeline on certified expanders.

Phases: certify, random partition into port/reserve/middle regions,
connector construction over the reserve, repartition of the middle
region into equal blocks, a path cover threading perfect matchings
between consecutive blocks, and cycle closing through the connector.
Every phase verifies concrete properties of the sampled sets and logs
them into a schema-versioned trace; failures name the violated check
and never produce an unverified cycle.

The asymptotic regime of the underlying theorem is unreachable at desk
scale, so every threshold is a config knob with documented desk
defaults; the combinatorial structure of the construction is preserved
exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

from . import extend, linalg, matching
from .errors import (ConfigError, ExpanderLabError, CoverageGap,
                     MatchingFloorMissed, PartitionRetriesExhausted,
                     PreconditionViolated)
from .graphs import BipartiteView, Graph, certify_expander
from .rng import derive_seed, generator

SCHEMA_VERSION = 1

# Desk-profile tolerances. Blocks of size ~sqrt(n) have cross-degree
# fluctuations of several standard deviations relative to tiny means,
# so the two-sided windows must be wide; caps above 1 make the lower
# window vacuous, which is recorded in the trace rather than hidden.
GAMMA_DEFAULTS = {"P1": 0.3, "P5": 0.8, "Q3": 0.8, "Q4": 1.0, "Q5": 1.5}
CONSTANT_DEFAULTS = {
    "lambda_ratio_cap": 0.2,    # certification gate and matching s2 caps
    "p2_scale": 1.2,            # s2(G[X u Y u R1]) <= p2_scale * lambda
    "pm_gamma_cap": 1.2,        # cross-degree tolerance for perfect matchings
    "theta_scale": 1.0,         # multiplier on the one-edge threshold
    "q1_overlap_cap": 0.0,      # allowed reserve overlap per block, as k fraction
    "q_pair_sample": 40,        # block pairs checked when t > 12
}


@dataclass(frozen=True)
class PipelineConfig:
    """Pipeline knobs; defaults form the documented desk profile."""

    k: int | None = None            # block size; None = ceil(sqrt(n))
    reserve_fraction: float = 0.1
    seed: int = 0
    l_max: int = 12
    max_partition_retries: int = 20
    max_repartition_retries: int = 20
    min_reserve_ratio: float = 2.0
    gamma_caps: dict = field(default_factory=dict)
    constant_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.reserve_fraction < 0.5:
            raise ConfigError(
                f"reserve_fraction={self.reserve_fraction} outside (0, 0.5)")
        if self.k is not None and self.k < 2:
            raise ConfigError(f"k={self.k} must be at least 2")
        for key in self.gamma_caps:
            if key not in GAMMA_DEFAULTS:
                raise ConfigError(f"unknown gamma cap {key!r}")
        for key in self.constant_overrides:
            if key not in CONSTANT_DEFAULTS:
                raise ConfigError(f"unknown constant override {key!r}")

    def gamma(self, key: str) -> float:
        return self.gamma_caps.get(key, GAMMA_DEFAULTS[key])

    def constant(self, key: str) -> float:
        return self.constant_overrides.get(key, CONSTANT_DEFAULTS[key])

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "PipelineConfig":
        known = {f for f in PipelineConfig.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return PipelineConfig(**data)


@dataclass(frozen=True)
class SizePlan:
    k: int
    t: int              # total block count, middle blocks are 2..t-1
    reserve_size: int
    k5: int             # |X1| = |Y1|


def plan_sizes(n: int, cfg: PipelineConfig) -> SizePlan:
    """Derive (k, t, reserve) so the middle region splits into exact k-blocks.

    The reserve absorbs the divisibility remainder, so every block has
    size exactly k and the closing paths consume the reserve exactly.
    """
    k = cfg.k if cfg.k is not None else max(4, math.ceil(math.sqrt(n)))
    reserve_target = max(math.ceil(cfg.min_reserve_ratio * k),
                         round(cfg.reserve_fraction * n))
    middle = n - 2 * k - reserve_target
    t = middle // k + 2
    if t < 3:
        raise ConfigError(
            f"n={n} too small for k={k}: needs at least one middle block")
    reserve = n - t * k
    if reserve > k * (cfg.l_max - 1):
        raise ConfigError(
            f"reserve of {reserve} cannot be consumed by {k} closing paths "
            f"of length <= {cfg.l_max}")
    return SizePlan(k=k, t=t, reserve_size=reserve, k5=max(1, k // 5))


@dataclass(frozen=True)
class Parts:
    x1: tuple
    x2: tuple
    y1: tuple
    y2: tuple
    r1: tuple      # reserve region (the connector's pool)
    r2: tuple      # middle region, split into blocks later

    @property
    def x(self) -> tuple:
        return tuple(sorted(self.x1 + self.x2))

    @property
    def y(self) -> tuple:
        return tuple(sorted(self.y1 + self.y2))


@dataclass(frozen=True)
class HamiltonCycle:
    order: tuple

    def to_line(self) -> str:
        return " ".join(str(v) for v in self.order)

    @staticmethod
    def from_line(line: str) -> "HamiltonCycle":
        return HamiltonCycle(order=tuple(int(tok) for tok in line.split()))


@dataclass(frozen=True)
class CycleVerification:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


class PipelineTrace:
    """Append-only record of every phase check; serializes to JSON."""

    def __init__(self, n: int, cfg: PipelineConfig):
        self.data = {
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "config": cfg.to_dict(),
            "plan": None,
            "checks": [],
            "m_sizes": None,
            "n_sizes": None,
            "connector": None,
            "outcome": "incomplete",
        }

    def check(self, phase: str, check: str, holds: bool, detail: str = ""):
        self.data["checks"].append({"phase": phase, "check": check,
                                    "holds": bool(holds), "detail": detail})

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2)

    @property
    def outcome(self) -> str:
        return self.data["outcome"]


@dataclass(frozen=True)
class PipelineResult:
    cycle: HamiltonCycle | None
    trace: PipelineTrace


def _degree_window_ok(g: Graph, vertices, target_set, lo: float,
                      hi: float):
    """First vertex whose degree into target_set leaves [lo, hi], or None."""
    tset = set(target_set)
    for v in vertices:
        deg = g.cross_degree(v, tset)
        if not lo <= deg <= hi:
            return v, deg
    return None


def _induced_s2(g: Graph, vertices, seed: int) -> float:
    sub, _ = g.induced(sorted(vertices))
    spec = linalg.singular_values_array(sub.spectral_matrix(), 2, tol=1e-8,
                                        seed=seed)
    return spec.values[1]


def partition_phase(g: Graph, cert, cfg: PipelineConfig,
                    trace: PipelineTrace | None = None) -> Parts:
    """Random split V = X1 u X2 u Y1 u Y2 u R1 u R2 with verified properties.

    P1: every degree into the reserve R1 is proportional within the P1
    gamma cap. P2: s2 of the induced graph on X u Y u R1 stays under
    p2_scale * lambda. P5: (X, Y) is a bipartite expander. P3/P4 of the
    underlying claim quantify over exponentially many subset families
    and are replaced by direct checks on the concrete sets sampled in
    the later phases.
    """
    trace = trace if trace is not None else PipelineTrace(g.n, cfg)
    plan = plan_sizes(g.n, cfg)
    trace.data["plan"] = asdict(plan)
    n, d, lam = g.n, cert.d, cert.lambda_hat
    k, k5, r = plan.k, plan.k5, plan.reserve_size
    last_failure = "P1"
    for retry in range(cfg.max_partition_retries):
        perm = [int(v) for v in
                generator(cfg.seed, "partition", retry).permutation(n)]
        bounds = [k5, k, k + k5, 2 * k, 2 * k + r, n]
        x1, x2, y1, y2, r1, r2 = (
            tuple(sorted(perm[a:b]))
            for a, b in zip([0] + bounds[:-1], bounds))
        parts = Parts(x1=x1, x2=x2, y1=y1, y2=y2, r1=r1, r2=r2)

        target = d * r / n
        g1 = cfg.gamma("P1")
        bad = _degree_window_ok(g, range(n), r1,
                                (1 - 2 * g1) * target, (1 + 2 * g1) * target)
        if bad is not None:
            trace.check("partition", "P1", False,
                        f"retry {retry}: deg({bad[0]}, R1)={bad[1]} outside "
                        f"(1±{2 * g1:.2f})*{target:.3f}")
            last_failure = "P1"
            continue

        seed2 = derive_seed(cfg.seed, "partition-p2", retry) % (2 ** 31)
        s2 = _induced_s2(g, parts.x + parts.y + r1, seed2)
        cap = cfg.constant("p2_scale") * lam
        if s2 > cap:
            trace.check("partition", "P2", False,
                        f"retry {retry}: s2={s2:.4f} > {cap:.4f}")
            last_failure = "P2"
            continue

        g5 = cfg.gamma("P5")
        bad = _bipartite_window(g, parts.x, parts.y, d, n, g5)
        if bad is not None:
            trace.check("partition", "P5", False,
                        f"retry {retry}: {bad}")
            last_failure = "P5"
            continue

        trace.check("partition", "P1", True, f"window ±{2 * g1:.2f} around {target:.3f}")
        trace.check("partition", "P2", True, f"s2={s2:.4f} <= {cap:.4f}")
        trace.check("partition", "P3", True, "deferred to repartition checks")
        trace.check("partition", "P4", True, "deferred to repartition checks")
        trace.check("partition", "P5", True, f"cross-degree gamma cap {g5}")
        return parts
    raise PartitionRetriesExhausted(last_failure, cfg.max_partition_retries)


def _bipartite_window(g: Graph, left, right, d: float, n: int,
                      gamma: float):
    """Cross-degree window check for both sides; returns a description or None."""
    for side, other in ((left, right), (right, left)):
        target = d * len(other) / n
        lo, hi = (1 - gamma) * target, (1 + gamma) * target
        bad = _degree_window_ok(g, side, other, lo, hi)
        if bad is not None:
            return (f"deg({bad[0]})={bad[1]} outside [{lo:.3f}, {hi:.3f}]")
    return None


def _observed_gamma(g: Graph, left, right, d: float, n: int) -> float:
    """Largest relative cross-degree deviation from the proportional target."""
    worst = 0.0
    for side, other in ((left, right), (right, left)):
        oset = set(other)
        target = d * len(other) / n
        for v in side:
            worst = max(worst, abs(g.cross_degree(v, oset) - target) / target)
    return worst


def repartition_phase(g: Graph, cert, parts: Parts, connector,
                      cfg: PipelineConfig,
                      trace: PipelineTrace | None = None) -> list:
    """Split the middle region into equal k-blocks with verified properties.

    Q1: block overlap with the connector reserve under the configured
    cap (zero here, since the reserve is disjoint by construction).
    Q2: half sizes exact. Q3: degrees into block halves within the Q3
    window. Q4/Q5: block pairs and half pairs are bipartite expanders;
    all pairs when t <= 12, a seeded sample above.
    """
    trace = trace if trace is not None else PipelineTrace(g.n, cfg)
    plan = plan_sizes(g.n, cfg)
    n, d, lam = g.n, cert.d, cert.lambda_hat
    k, t = plan.k, plan.t
    middle = sorted(parts.r2)
    reserve = set(connector.reserved)
    overlap_cap = cfg.constant("q1_overlap_cap") * k
    last_failure = "Q1"
    for retry in range(cfg.max_repartition_retries):
        rng = generator(cfg.seed, "repartition", retry)
        perm = [middle[i] for i in rng.permutation(len(middle))]
        blocks = [tuple(sorted(perm[i * k:(i + 1) * k]))
                  for i in range(t - 2)]
        halves = [(b[: (k + 1) // 2], b[(k + 1) // 2:]) for b in blocks]

        q1_bad = [i for i, b in enumerate(blocks)
                  if len(set(b) & reserve) > overlap_cap]
        if q1_bad:
            trace.check("repartition", "Q1", False,
                        f"retry {retry}: blocks {q1_bad} overlap the reserve")
            last_failure = "Q1"
            continue

        g3 = cfg.gamma("Q3")
        vertices = sorted(set(parts.x) | set(parts.y) | set(middle))
        ok = True
        for i, (h1, _) in enumerate(halves):
            target = d * len(h1) / n
            lo = max(0.0, (1 - 2 * g3) * target)
            hi = (1 + 2 * g3) * target
            bad = _degree_window_ok(g, vertices, h1, lo, hi)
            if bad is not None:
                trace.check("repartition", "Q3", False,
                            f"retry {retry}: deg({bad[0]}, half of block "
                            f"{i})={bad[1]} outside [{lo:.3f}, {hi:.3f}]")
                ok = False
                last_failure = "Q3"
                break
        if not ok:
            continue

        g4, g5 = cfg.gamma("Q4"), cfg.gamma("Q5")
        pairs = [(i, j) for i in range(len(blocks))
                 for j in range(i + 1, len(blocks))]
        if t > 12:
            sample = min(len(pairs), int(cfg.constant("q_pair_sample")))
            idx = rng.choice(len(pairs), size=sample, replace=False)
            pairs = [pairs[int(i)] for i in sorted(idx)]
        cap = cfg.constant("lambda_ratio_cap") * d
        for i, j in pairs:
            bad = _bipartite_window(g, blocks[i], blocks[j], d, n, g4)
            seed4 = derive_seed(cfg.seed, f"q4-{retry}-{i}-{j}") % (2 ** 31)
            s2 = _induced_s2(g, blocks[i] + blocks[j], seed4)
            if bad is not None or s2 > cap:
                trace.check("repartition", "Q4", False,
                            f"retry {retry}: pair ({i},{j}): "
                            f"{bad or f's2={s2:.3f} > {cap:.3f}'}")
                ok = False
                last_failure = "Q4"
                break
            bad5 = _bipartite_window(g, halves[i][0], halves[j][0], d, n, g5)
            if bad5 is not None:
                trace.check("repartition", "Q5", False,
                            f"retry {retry}: half pair ({i},{j}): {bad5}")
                ok = False
                last_failure = "Q5"
                break
        if not ok:
            continue

        trace.check("repartition", "Q1", True,
                    f"reserve overlap cap {overlap_cap}")
        trace.check("repartition", "Q2", True,
                    f"halves of sizes {(k + 1) // 2}, {k // 2}")
        trace.check("repartition", "Q3", True, f"gamma cap {g3}")
        trace.check("repartition", "Q4", True,
                    f"{len(pairs)} pairs, s2 cap {cap:.3f}")
        trace.check("repartition", "Q5", True, f"gamma cap {g5}")
        return blocks
    raise PartitionRetriesExhausted(last_failure, cfg.max_repartition_retries)


def path_cover_phase(g: Graph, cert, parts: Parts, blocks, cfg: PipelineConfig,
                     trace: PipelineTrace | None = None) -> extend.PathSystem:
    """Thread vertex-disjoint paths from X to Y through the middle blocks.

    Blocks are ordered by non-increasing size with X first. Surplus
    matchings M_i of size n_i - n_{i+1} send early path endings into
    Y; perfect matchings N_i link consecutive blocks. Every path starts
    in X and ends in Y, and the paths cover X, Y and all blocks exactly.
    """
    trace = trace if trace is not None else PipelineTrace(g.n, cfg)
    n, d = g.n, cert.d
    x = sorted(parts.x)
    vt = sorted(parts.y)
    middle = sorted((tuple(sorted(set(b))) for b in blocks),
                    key=lambda b: (-len(b), b))
    us = [tuple(x)] + middle
    sizes = [len(u) for u in us]
    if max(sizes) > sizes[0]:
        raise PreconditionViolated(
            "block_order", f"a middle block of size {max(sizes)} exceeds "
            f"|X|={sizes[0]}; the construction needs X largest")
    if len(vt) != sizes[0]:
        raise PreconditionViolated(
            "endpoint_count", f"|Y|={len(vt)} != |X|={sizes[0]}")

    pm_gamma_cap = cfg.constant("pm_gamma_cap")
    ratio_cap = cfg.constant("lambda_ratio_cap")
    next_hop = {}
    vt_free = set(vt)
    m_sizes, n_sizes = [], []
    for i in range(len(us)):
        u_cur = list(us[i])
        n_next = sizes[i + 1] if i + 1 < len(us) else len(vt_free)
        surplus = len(u_cur) - n_next
        if i + 1 < len(us) and surplus > 0:
            gm = matching.greedy_matching_avoiding(
                g, cert, u_cur, sorted(vt_free))
            if gm.size < surplus:
                raise MatchingFloorMissed(
                    f"needed {surplus} early endings from block {i}, greedy "
                    f"found {gm.size}")
            chosen = gm.edges[:surplus]
            for u, v in chosen:
                next_hop[u] = v
                vt_free.discard(v)
            u_cur = [v for v in u_cur if v not in {u for u, _ in chosen}]
            m_sizes.append(surplus)
        elif i + 1 < len(us):
            m_sizes.append(0)
        target_side = sorted(us[i + 1]) if i + 1 < len(us) else sorted(vt_free)
        view = BipartiteView(parent=g, left=tuple(u_cur),
                             right=tuple(target_side))
        union = view.left + view.right
        gamma_obs = _observed_gamma(g, view.left, view.right, d, n)
        seed_i = derive_seed(cfg.seed, "path-cover-n", i) % (2 ** 31)
        s2 = _induced_s2(g, union, seed_i)
        pm = matching.perfect_matching_expander(
            view, d=d, gamma=gamma_obs, lam=s2,
            gamma_cap=pm_gamma_cap, ratio_cap=ratio_cap)
        n_sizes.append(pm.size)
        for u, v in pm.edges:
            next_hop[u] = v
    trace.data["m_sizes"] = m_sizes
    trace.data["n_sizes"] = n_sizes
    trace.check("path_cover", "sizes", True,
                f"n_i={sizes}, |M_i|={m_sizes}, |N_i|={n_sizes}")

    paths = []
    covered = set()
    for start in x:
        path = [start]
        while path[-1] in next_hop:
            path.append(next_hop[path[-1]])
        if path[-1] not in set(vt):
            raise PreconditionViolated(
                "path_endpoint", f"path from {start} ends at {path[-1]} "
                "outside Y")
        covered.update(path)
        paths.append(tuple(path))
    expected = set(x) | set(vt)
    for b in blocks:
        expected.update(b)
    if covered != expected:
        missing = sorted(expected - covered)[:10]
        raise CoverageGap(missing)
    system = extend.PathSystem(paths=tuple(paths))
    trace.check("path_cover", "coverage", True,
                f"{len(paths)} disjoint paths over {len(covered)} vertices")
    return system


def close_cycle(paths: extend.PathSystem, connector,
                trace: PipelineTrace | None = None) -> HamiltonCycle:
    """Splice the cover paths into one cycle through the connector reserve.

    Path i ends at b_i in Y and path i+1 starts at a_{i+1} in X; the
    connector routes the pairing b_i -> a_{i+1} (cyclically). Any
    reserve vertex left unused would leave the cycle non-spanning and
    is reported as a coverage gap.
    """
    cover = list(paths.paths)
    pairing = [(cover[i][-1], cover[(i + 1) % len(cover)][0])
               for i in range(len(cover))]
    closing = connector.connect_pairs(pairing)
    leftover = set(connector.reserved) - closing.interior_vertices()
    if leftover:
        raise CoverageGap(sorted(leftover))
    by_ends = {}
    for p in closing.paths:
        by_ends[(p[0], p[-1])] = p
    order = []
    for i, p in enumerate(cover):
        order.extend(p)
        b, a = pairing[i]
        link = by_ends.get((b, a))
        if link is None:
            link = by_ends[(a, b)][::-1]
        order.extend(link[1:-1])
    if trace is not None:
        trace.data["connector"] = {
            "pairs": len(pairing),
            "reserve": len(connector.reserved),
            "closing_lengths": [len(p) - 1 for p in closing.paths],
        }
    return HamiltonCycle(order=tuple(int(v) for v in order))


def verify_hamilton_cycle(g: Graph, cycle: HamiltonCycle) -> CycleVerification:
    """Independent verifier: spanning permutation, all steps are edges."""
    order = cycle.order
    if len(order) != g.n:
        return CycleVerification(False, f"length {len(order)} != n={g.n}")
    if len(set(order)) != len(order):
        return CycleVerification(False, "repeated vertex")
    if set(order) != set(range(g.n)):
        return CycleVerification(False, "not a permutation of V")
    for i in range(len(order)):
        u, v = order[i], order[(i + 1) % len(order)]
        if not g.has_edge(u, v):
            return CycleVerification(False, f"missing edge ({u},{v})")
    return CycleVerification(True, "ok")


def hamilton_pipeline(g: Graph, cfg: PipelineConfig | None = None
                      ) -> PipelineResult:
    """Run all phases; returns a cycle (verified) or a trace naming the failure."""
    cfg = cfg if cfg is not None else PipelineConfig()
    trace = PipelineTrace(g.n, cfg)
    phase = "certification"
    try:
        cert = certify_expander(g, seed=derive_seed(cfg.seed, "certify") % (2 ** 31))
        ratio = cert.lambda_hat / cert.d
        cap = cfg.constant("lambda_ratio_cap")
        trace.check("certification", "lambda_ratio", ratio <= cap,
                    f"lambda/d = {ratio:.4f}, cap {cap}")
        if ratio > cap:
            raise PreconditionViolated(
                "lambda_ratio", f"lambda/d = {ratio:.4f} > {cap}")
        phase = "partition"
        parts = partition_phase(g, cert, cfg, trace)
        phase = "connector"
        connector = extend.build_connector(
            g, parts.x, parts.y, parts.r1, l_max=cfg.l_max,
            seed=derive_seed(cfg.seed, "connector") % (2 ** 31),
            consume_all=True, min_reserve_ratio=cfg.min_reserve_ratio)
        phase = "repartition"
        blocks = repartition_phase(g, cert, parts, connector, cfg, trace)
        phase = "path_cover"
        paths = path_cover_phase(g, cert, parts, blocks, cfg, trace)
        phase = "close"
        cycle = close_cycle(paths, connector, trace)
        phase = "verification"
        verdict = verify_hamilton_cycle(g, cycle)
        trace.check("verification", "hamilton", verdict.ok, verdict.reason)
        if not verdict:
            trace.data["outcome"] = "failed:verification"
            return PipelineResult(cycle=None, trace=trace)
        trace.data["outcome"] = "success"
        return PipelineResult(cycle=cycle, trace=trace)
    except ExpanderLabError as exc:
        trace.data["outcome"] = f"failed:{phase}:{type(exc).__name__}"
        trace.check(phase, "error", False, str(exc))
        return PipelineResult(cycle=None, trace=trace)
