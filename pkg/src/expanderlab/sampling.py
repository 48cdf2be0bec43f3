"""Random subset models and Monte Carlo norm experiments.

Two subset models (independent Bernoulli and uniform fixed size) feed
the random-submatrix norm experiments and the induced-subgraph spectral
experiments. Hypergeometric Chernoff bounds come with an exact-tail
oracle so the inequalities can be tested against ground truth at small
sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (AsymmetricInput, BadParameter, BadRange,
                     CertificateMismatch)
from .graphs import Graph, SpectralCertificate
from .rng import derive_seed, generator

DENSE_NORM_CAP = 600      # side length up to which full SVD is used per trial
BATCHES = 10              # batch-means groups for standard errors


@dataclass(frozen=True)
class SubsetSample:
    model: str                 # "bernoulli" or "uniform"
    param: float               # sigma or m
    universe: int
    members: tuple
    seed: int


@dataclass(frozen=True)
class MomentEstimate:
    p: float
    trials: int
    empirical_lp: float
    std_error: float
    theoretical_bound: float
    seed: int

    @property
    def holds(self) -> bool:
        return self.empirical_lp <= self.theoretical_bound


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    s2: float
    degrees_ok: bool
    success: bool


@dataclass(frozen=True)
class SubgraphExperiment:
    sigma: float
    trials: int
    gamma_used: float
    lambda_bound: float
    success_fraction: float
    hypotheses_hold: bool
    per_trial: tuple

    def csv_rows(self):
        return [{"trial": r.trial, "seed": r.seed, "s2": r.s2,
                 "degrees_ok": r.degrees_ok, "success": r.success}
                for r in self.per_trial]

    def summary(self, floor: float) -> dict:
        return {"params": {"sigma": self.sigma, "trials": self.trials,
                           "gamma_used": self.gamma_used,
                           "lambda_bound": self.lambda_bound,
                           "hypotheses_hold": self.hypotheses_hold},
                "success_fraction": self.success_fraction,
                "floor": floor,
                "pass": self.success_fraction >= floor}


def sample_subset(n: int, model: str, param, seed: int) -> SubsetSample:
    """Draw a random subset of [0, n) in the given model, deterministically per seed."""
    rng = generator(seed, f"subset-{model}")
    if model == "bernoulli":
        sigma = float(param)
        if not 0 < sigma < 1:
            raise BadParameter(f"sigma={sigma} outside (0,1)")
        members = np.flatnonzero(rng.random(n) < sigma)
    elif model == "uniform":
        m = int(param)
        if not 1 <= m <= n:
            raise BadParameter(f"m={m} outside [1, {n}]")
        members = rng.permutation(n)[:m]
    else:
        raise BadParameter(f"unknown subset model {model!r}")
    return SubsetSample(model=model, param=float(param), universe=n,
                        members=tuple(sorted(int(v) for v in members)),
                        seed=seed)


def hypergeometric_tail(big_n: int, k: int, n: int, a: float,
                        side: str) -> float:
    """Chernoff bound on a hypergeometric tail with mean mu = n*k/N.

    lower: Pr[X < (1-a) mu] < exp(-a^2 mu / 2), valid for a > 0;
    upper: Pr[X > (1+a) mu] < exp(-a^2 mu / 3), valid for 0 < a < 3/2.
    """
    if not (0 <= k <= big_n and 0 <= n <= big_n):
        raise BadRange(f"need 0 <= K <= N and 0 <= n <= N, got N={big_n}, K={k}, n={n}")
    mu = n * k / big_n if big_n else 0.0
    if side == "lower":
        if a <= 0:
            raise BadRange(f"lower tail needs a > 0, got {a}")
        return math.exp(-a * a * mu / 2)
    if side == "upper":
        if not 0 < a < 1.5:
            raise BadRange(f"upper tail needs 0 < a < 3/2, got {a}")
        return math.exp(-a * a * mu / 3)
    raise BadRange(f"side must be 'lower' or 'upper', got {side!r}")


def exact_hypergeometric_tail(big_n: int, k: int, n: int, a: float,
                              side: str) -> float:
    """Exact tail probability by integer pmf summation (the oracle)."""
    if not (0 <= k <= big_n and 0 <= n <= big_n):
        raise BadRange(f"need 0 <= K <= N and 0 <= n <= N, got N={big_n}, K={k}, n={n}")
    mu = n * k / big_n if big_n else 0.0
    denom = math.comb(big_n, n)
    lo = max(0, n - (big_n - k))
    hi = min(n, k)
    total = 0
    for x in range(lo, hi + 1):
        if (side == "lower" and x < (1 - a) * mu) or \
           (side == "upper" and x > (1 + a) * mu):
            total += math.comb(k, x) * math.comb(big_n - k, n - x)
    return total / denom


def _submatrix_norm(arr: np.ndarray, rows, cols, seed: int) -> float:
    if len(rows) == 0 or len(cols) == 0:
        return 0.0
    sub = arr[np.ix_(rows, cols)]
    if max(sub.shape) <= DENSE_NORM_CAP:
        return float(np.linalg.norm(sub, 2))
    return linalg.operator_norm(sub, seed=seed)


def _batch_lp(values: np.ndarray, p: float):
    """Lp mean and batch-means standard error."""
    lp = float(np.mean(np.abs(values) ** p) ** (1 / p))
    per_batch = [float(np.mean(np.abs(chunk) ** p) ** (1 / p))
                 for chunk in np.array_split(values, BATCHES) if chunk.size]
    se = float(np.std(per_batch, ddof=1) / np.sqrt(len(per_batch))) \
        if len(per_batch) > 1 else 0.0
    return lp, se


def submatrix_norm_experiment(b: linalg.DenseMatrix, mode: str,
                              sigma: float | None = None,
                              m: int | None = None,
                              p: float = 2.0, trials: int = 200,
                              seed: int = 0) -> MomentEstimate:
    """Empirical L_p norm of random principal/two-sided submatrices vs bound.

    two_sided_bernoulli: rows I ~ Subset(sigma), cols I' ~ Subset(sigma)
    independent; bound sigma*||B|| + 3 sqrt(q sigma)(||B||_{1->2} +
    ||B^T||_{1->2}) + 8 q ||B||_inf. symmetric_uniform: J a uniform
    m-subset, P_J B P_J; bound 4 sigma*||B|| + 24 sqrt(q sigma)
    ||B||_{1->2} + 35 q ||B||_inf with sigma = m/n. q = max(p, 2 ln n).
    """
    if p < 2:
        raise BadParameter(f"p={p} must be >= 2")
    arr = b.array()
    nrows, ncols = arr.shape
    n = max(nrows, ncols)
    q = max(p, 2 * math.log(n))
    bundle = linalg.norm_bundle_array(arr, seed=seed)
    if mode == "two_sided_bernoulli":
        if sigma is None or not 0 < sigma < 1:
            raise BadParameter(f"two_sided_bernoulli needs sigma in (0,1), got {sigma}")
        bound = (sigma * bundle.operator
                 + 3 * math.sqrt(q * sigma) * (bundle.one_to_two
                                               + bundle.one_to_two_transpose)
                 + 8 * q * bundle.max_abs)
    elif mode == "symmetric_uniform":
        if not np.array_equal(arr, arr.T):
            raise AsymmetricInput("symmetric_uniform mode requires B symmetric")
        if m is None or not 1 <= m <= n:
            raise BadParameter(f"symmetric_uniform needs 1 <= m <= n, got {m}")
        sigma = m / n
        bound = (4 * sigma * bundle.operator
                 + 24 * math.sqrt(q * sigma) * bundle.one_to_two
                 + 35 * q * bundle.max_abs)
    else:
        raise BadParameter(f"unknown mode {mode!r}")

    norms = np.empty(trials)
    for t in range(trials):
        trial_seed = derive_seed(seed, f"submatrix-{mode}", t)
        rng = generator(seed, f"submatrix-{mode}", t)
        if mode == "two_sided_bernoulli":
            rows = np.flatnonzero(rng.random(nrows) < sigma)
            cols = np.flatnonzero(rng.random(ncols) < sigma)
        else:
            rows = cols = rng.permutation(n)[:m]
        norms[t] = _submatrix_norm(arr, rows, cols, seed=trial_seed % (2**31))
    lp, se = _batch_lp(norms, p)
    return MomentEstimate(p=p, trials=trials, empirical_lp=lp, std_error=se,
                          theoretical_bound=float(bound), seed=seed)


def _subgraph_s2(arr: np.ndarray, seed: int) -> float:
    if arr.shape[0] < 2:
        return 0.0
    spec = linalg.singular_values_array(arr, 2, tol=1e-8, seed=seed)
    return spec.values[1]


def induced_subgraph_experiment(g: Graph, cert: SpectralCertificate,
                                sigma: float, trials: int = 200,
                                seed: int = 0, gamma_target: float = 0.05,
                                constant_c: float = 1.0
                                ) -> SubgraphExperiment:
    """Spot-check that uniform sigma*n-subsets induce (sigma*n, (1±2gamma)sigma*d, 6 sigma lambda)-graphs.

    gamma defaults to the certificate's gamma_hat; for exactly regular
    inputs (gamma_hat = 0) the window would be a single point, so
    `gamma_target` is substituted. Hypothesis satisfaction (sigma*d >=
    C gamma^-2 ln n and sigma*lambda >= C sqrt(sigma*d ln n)) is
    reported separately from the conclusion.
    """
    if cert.n != g.n:
        raise CertificateMismatch("certificate does not match the graph")
    n, d, lam = g.n, cert.d, cert.lambda_hat
    m = int(round(sigma * n))
    if m < 1:
        raise BadParameter(f"sigma*n = {sigma * n} < 1")
    if m > n:
        raise BadParameter(f"sigma*n = {sigma * n} > n")
    gamma = cert.gamma_hat if cert.gamma_hat > 0 else gamma_target
    lo = (1 - 2 * gamma) * sigma * d
    hi = (1 + 2 * gamma) * sigma * d
    lam_bound = 6 * sigma * lam
    log_n = math.log(n)
    hyp = (sigma * d >= constant_c * gamma ** -2 * log_n
           and sigma * lam >= constant_c * math.sqrt(sigma * d * log_n))
    adj = g.adjacency_sparse()
    records = []
    successes = 0
    for t in range(trials):
        trial_seed = derive_seed(seed, "induced-subgraph", t)
        rng = generator(seed, "induced-subgraph", t)
        members = np.sort(rng.permutation(n)[:m])
        sub = adj[np.ix_(members, members)].toarray().astype(float)
        degs = sub.sum(axis=1)
        degrees_ok = bool(degs.min() >= lo and degs.max() <= hi)
        s2 = _subgraph_s2(sub, seed=trial_seed % (2**31))
        success = degrees_ok and s2 <= lam_bound
        successes += success
        records.append(TrialRecord(trial=t, seed=trial_seed, s2=s2,
                                   degrees_ok=degrees_ok, success=success))
    return SubgraphExperiment(sigma=sigma, trials=trials, gamma_used=gamma,
                              lambda_bound=lam_bound,
                              success_fraction=successes / trials,
                              hypotheses_hold=hyp, per_trial=tuple(records))


def bipartite_induced_experiment(g: Graph, cert: SpectralCertificate,
                                 sigma1: float, sigma2: float,
                                 trials: int = 200, seed: int = 0,
                                 gamma_target: float = 0.05
                                 ) -> SubgraphExperiment:
    """Bipartite variant: disjoint X (sigma1*n) and Y (sigma2*n), cross-degree windows.

    Per trial, deg(v, Y) for v in X must lie in (1±2gamma) sigma2 d,
    deg(v, X) for v in Y in (1±2gamma) sigma1 d, and s2(G[X u Y]) <=
    6 (sigma1+sigma2) lambda.
    """
    if cert.n != g.n:
        raise CertificateMismatch("certificate does not match the graph")
    n, d, lam = g.n, cert.d, cert.lambda_hat
    m1, m2 = int(round(sigma1 * n)), int(round(sigma2 * n))
    if m1 < 1 or m2 < 1:
        raise BadParameter("both sigma_i * n must be at least 1")
    if sigma1 + sigma2 > 1:
        raise BadParameter(f"sigma1 + sigma2 = {sigma1 + sigma2} > 1")
    gamma = cert.gamma_hat if cert.gamma_hat > 0 else gamma_target
    sigma = sigma1 + sigma2
    lam_bound = 6 * sigma * lam
    adj = g.adjacency_sparse()
    records = []
    successes = 0
    for t in range(trials):
        trial_seed = derive_seed(seed, "bipartite-induced", t)
        rng = generator(seed, "bipartite-induced", t)
        perm = rng.permutation(n)
        x, y = perm[:m1], perm[m1:m1 + m2]
        cross = adj[np.ix_(x, y)].toarray().astype(float)
        deg_x = cross.sum(axis=1)   # deg(v, Y) for v in X
        deg_y = cross.sum(axis=0)   # deg(v, X) for v in Y
        degrees_ok = bool(
            deg_x.min() >= (1 - 2 * gamma) * sigma2 * d
            and deg_x.max() <= (1 + 2 * gamma) * sigma2 * d
            and deg_y.min() >= (1 - 2 * gamma) * sigma1 * d
            and deg_y.max() <= (1 + 2 * gamma) * sigma1 * d)
        union = np.sort(np.concatenate([x, y]))
        sub = adj[np.ix_(union, union)].toarray().astype(float)
        s2 = _subgraph_s2(sub, seed=trial_seed % (2**31))
        success = degrees_ok and s2 <= lam_bound
        successes += success
        records.append(TrialRecord(trial=t, seed=trial_seed, s2=s2,
                                   degrees_ok=degrees_ok, success=success))
    return SubgraphExperiment(sigma=sigma, trials=trials, gamma_used=gamma,
                              lambda_bound=lam_bound,
                              success_fraction=successes / trials,
                              hypotheses_hold=False, per_trial=tuple(records))
