"""Numerical exploration of the maximal-mean-width conjecture.

The conjecture: for every centered unit-variance Gaussian vector
(xi_1, ..., xi_n),

    E max(xi_1, ..., xi_n) <= sqrt(n/(n-1)) E max(eta_1, ..., eta_n),

with equality exactly at the regular-simplex correlation structure
(all off-diagonals -1/(n-1)).  This module checks the bound on sampled
correlation matrices, searches for counterexamples by projected stochastic
ascent over sphere configurations, and reproduces the interpolated
covariance family whose E-max curve is non-increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .extremes import DEFAULT_QUAD, QuadratureConfig, expected_max
from .sampling import McConfig, chunk_rng, sample_correlated_max, symmetric_sqrt

__all__ = [
    "GramConfiguration",
    "BoundCheck",
    "SearchResult",
    "regular_simplex_gram",
    "random_unit_diagonal_gram",
    "conjecture_bound_check",
    "optimize_configuration",
    "interpolation_covariance",
    "interpolation_emax_curve",
    "softmax_bound",
    "gram_fingerprint_distance",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_EIG_CLIP = -1e-10


@dataclass(frozen=True)
class GramConfiguration:
    """Unit-diagonal PSD correlation matrix of a sphere point configuration."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix, got shape {m.shape}")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("Gram matrix must be symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-12):
            raise ValueError("Gram matrix must have unit diagonal")
        if np.any(np.abs(m) > 1.0 + 1e-12):
            raise ValueError("correlations must lie in [-1, 1]")
        if np.linalg.eigvalsh(m).min() < _EIG_CLIP:
            raise ValueError("Gram matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class BoundCheck:
    n: int
    estimate: float
    stderr: float
    bound: float
    ok: bool
    near_regular: bool


@dataclass(frozen=True)
class SearchResult:
    best_gram: GramConfiguration
    best_value: float  # sqrt(2 pi) * E max estimate = V1 of the best hull
    best_stderr: float
    regular_value: float
    gap: float  # best_value - regular_value
    restarts_used: int


def regular_simplex_gram(n: int) -> GramConfiguration:
    """Correlation matrix of the regular simplex: off-diagonals -1/(n-1)."""
    if n < 2:
        raise ValueError(f"regular simplex Gram needs n >= 2, got {n}")
    m = np.full((n, n), -1.0 / (n - 1))
    np.fill_diagonal(m, 1.0)
    return GramConfiguration(n=n, matrix=m)


def random_unit_diagonal_gram(n: int, rng: np.random.Generator) -> GramConfiguration:
    """Random PSD unit-diagonal matrix: an orthogonal conjugation of a random
    nonnegative spectrum, renormalized to unit diagonal."""
    spectrum = rng.uniform(0.05, 1.0, size=n)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    a = (q * spectrum) @ q.T
    d = 1.0 / np.sqrt(np.diag(a))
    m = a * np.outer(d, d)
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 1.0)
    return GramConfiguration(n=n, matrix=np.clip(m, -1.0, 1.0))


def conjecture_bound_check(g: GramConfiguration, cfg: McConfig,
                           quad: QuadratureConfig = DEFAULT_QUAD, threads: int = 1) -> BoundCheck:
    """Compare E max under g against the sqrt(n/(n-1)) * E max(iid) bound."""
    n = g.n
    estimate, stderr = sample_correlated_max(g.matrix, cfg, threads)
    bound = math.sqrt(n / (n - 1)) * expected_max(n, quad).value
    ok = estimate <= bound + 4.0 * stderr
    near_regular = gram_frobenius_distance(g, regular_simplex_gram(n)) < 1e-9
    return BoundCheck(n=n, estimate=estimate, stderr=stderr, bound=bound, ok=bool(ok),
                      near_regular=bool(near_regular))


def gram_frobenius_distance(a: GramConfiguration, b: GramConfiguration) -> float:
    return float(np.linalg.norm(a.matrix - b.matrix))


def gram_fingerprint_distance(a: GramConfiguration, b: GramConfiguration) -> float:
    """Relabeling-invariant distance: sup-norm between the sorted off-diagonal
    entries plus sorted eigenvalues of the two Gram matrices."""
    def fingerprint(g):
        m = g.matrix
        off = np.sort(m[~np.eye(g.n, dtype=bool)])
        return off, np.sort(np.linalg.eigvalsh(m))

    off_a, eig_a = fingerprint(a)
    off_b, eig_b = fingerprint(b)
    return float(max(np.max(np.abs(off_a - off_b)), np.max(np.abs(eig_a - eig_b))))


def _common_normals(n: int, cfg: McConfig) -> np.ndarray:
    """The common-random-numbers batch: all chunks concatenated in order."""
    blocks = [chunk_rng(cfg.seed, i).standard_normal((c, n)) for i, c in cfg.chunks()]
    return np.concatenate(blocks, axis=0)


def optimize_configuration(n: int, restarts: int, cfg: McConfig, iterations: int = 400) -> SearchResult:
    """Maximize E max <eta, y_i> over n unit vectors y_1..y_n in R^n.

    Projected stochastic subgradient ascent on the common-random-numbers
    objective: for each draw z the subgradient places z on the argmax row
    (lowest index on ties), rows are renormalized to the sphere after every
    step, step size 0.5/sqrt(iter).  The CRN batch is shared by all restarts
    so restart objectives are directly comparable.
    """
    if n < 2:
        raise ValueError(f"search needs n >= 2, got {n}")
    if n > 12:
        raise ValueError(f"search is capped at n = 12, got {n}")
    if restarts < 1:
        raise ValueError(f"restarts must be positive, got {restarts}")

    z = _common_normals(n, cfg)
    samples = z.shape[0]

    def objective(points):
        return z @ points.T

    def project(points):
        norms = np.linalg.norm(points, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return points / norms

    best_points = None
    best_mean = -math.inf
    init_rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(1,)))
    for _ in range(restarts):
        points = project(init_rng.standard_normal((n, n)))
        for it in range(1, iterations + 1):
            scores = objective(points)
            winners = scores.argmax(axis=1)
            grad = np.zeros_like(points)
            np.add.at(grad, winners, z)
            grad /= samples
            points = project(points + (0.5 / math.sqrt(it)) * grad)
        mean = objective(points).max(axis=1).mean()
        if mean > best_mean:
            best_mean = mean
            best_points = points

    maxima = objective(best_points).max(axis=1)
    stderr = float(maxima.std(ddof=1) / math.sqrt(samples))
    gram_m = np.clip(best_points @ best_points.T, -1.0, 1.0)
    np.fill_diagonal(gram_m, 1.0)
    best_gram = GramConfiguration(n=n, matrix=0.5 * (gram_m + gram_m.T))
    regular_value = _SQRT_2PI * math.sqrt(n / (n - 1)) * expected_max(n).value
    best_value = _SQRT_2PI * float(best_mean)
    return SearchResult(
        best_gram=best_gram,
        best_value=best_value,
        best_stderr=_SQRT_2PI * stderr,
        regular_value=regular_value,
        gap=best_value - regular_value,
        restarts_used=restarts,
    )


def interpolation_covariance(n: int, t: float) -> np.ndarray:
    """Covariance of the 2n-dimensional interpolation family: variances
    2n/(t+2n-1), correlation -2nt/(t+2n-1) inside pairs (2i-1, 2i)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    m = 2 * n
    var = 2.0 * n / (t + 2.0 * n - 1.0)
    cov = np.zeros((m, m))
    np.fill_diagonal(cov, var)
    pair = -2.0 * n * t / (t + 2.0 * n - 1.0)
    for i in range(n):
        cov[2 * i, 2 * i + 1] = pair
        cov[2 * i + 1, 2 * i] = pair
    return cov


def interpolation_emax_curve(n: int, t_grid, cfg: McConfig) -> list[tuple[float, float, float]]:
    """Common-random-numbers estimate of phi(t) = E max xi(t) on a t grid.

    Returns (t, mean, stderr) per node; the shared draws make adjacent
    differences far less noisy than the individual values.
    """
    t_grid = [float(t) for t in t_grid]
    if any(t1 > t2 for t1, t2 in zip(t_grid, t_grid[1:])):
        raise ValueError("t grid must be sorted ascending")
    z = _common_normals(2 * n, cfg)
    samples = z.shape[0]
    out = []
    for t in t_grid:
        root = symmetric_sqrt(interpolation_covariance(n, t))
        maxima = (z @ root).max(axis=1)
        mean = float(maxima.mean())
        stderr = float(maxima.std(ddof=1) / math.sqrt(samples))
        out.append((t, mean, stderr))
    return out


def softmax_bound(x, beta: float) -> tuple[float, float]:
    """(smoothed max, true max) where the smoothed max is
    (1/beta) log sum exp(beta x_i), computed with max-shift."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("softmax_bound needs a nonempty input")
    soft = float(logsumexp(beta * x) / beta)
    return soft, float(x.max())
