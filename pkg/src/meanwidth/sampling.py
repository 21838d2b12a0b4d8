"""Reproducible Monte Carlo sampling of random widths and correlated maxima.

Reproducibility contract: an McConfig (seed, samples, chunk_size) fully
determines every estimate, bit for bit, regardless of how many worker
threads evaluate the chunks.  Each chunk owns a private PCG64 substream
spawned from the seed, and chunk results are reduced in chunk-index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .polytopes import MomentEstimate, PolytopeKind, RegularPolytope

__all__ = [
    "McConfig",
    "chunk_rng",
    "sample_direction",
    "sample_width",
    "width_samples",
    "estimate_moment",
    "estimate_moments",
    "symmetric_sqrt",
    "sample_correlated_max",
]


@dataclass(frozen=True)
class McConfig:
    seed: int
    samples: int
    # keep chunk buffers modest: a chunk materializes chunk_size x dim doubles
    chunk_size: int = 8_192

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be positive, got {self.samples}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be positive, got {self.chunk_size}")

    def chunks(self):
        """Yield (chunk_index, chunk_sample_count)."""
        full, rem = divmod(self.samples, self.chunk_size)
        for i in range(full):
            yield i, self.chunk_size
        if rem:
            yield full, rem


def chunk_rng(seed: int, chunk_index: int, stream: int = 0) -> np.random.Generator:
    """Independent substream for one chunk of one logical random stream."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream, chunk_index)))


def _map_chunks(fn, cfg: McConfig, threads: int = 1):
    """Apply fn(chunk_index, count) to every chunk; results in chunk order."""
    plan = list(cfg.chunks())
    if threads <= 1 or len(plan) <= 1:
        return [fn(i, c) for i, c in plan]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, i, c) for i, c in plan]
        return [f.result() for f in futures]


def sample_direction(dim: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform point on the unit sphere of R^dim."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    while True:
        g = rng.standard_normal(dim)
        norm = float(np.linalg.norm(g))
        if norm > 0.0:
            return g / norm


def width_samples(p: RegularPolytope, rng: np.random.Generator, count: int) -> np.ndarray:
    """Vectorized draws of the random projection width W for one polytope.

    Cube: sum|eta| / |eta|.  Crosspolytope: 2 max|eta| / |eta|.
    S_{n-1}: (max eta - min eta) / |eta|.  T_{n-1}: the same range of the
    centered coordinates, scaled by sqrt(n/(n-1)) and normalized by the
    centered norm (the direction is uniform inside the hyperplane).
    """
    n = p.n
    g = rng.standard_normal((count, n))
    if p.kind is PolytopeKind.CUBE:
        return np.abs(g).sum(axis=1) / np.linalg.norm(g, axis=1)
    if p.kind is PolytopeKind.CROSS:
        return 2.0 * np.abs(g).max(axis=1) / np.linalg.norm(g, axis=1)
    rng_vals = g.max(axis=1) - g.min(axis=1)
    if p.kind is PolytopeKind.SIMPLEX_S:
        return rng_vals / np.linalg.norm(g, axis=1)
    centered = g - g.mean(axis=1, keepdims=True)
    return math.sqrt(n / (n - 1)) * rng_vals / np.linalg.norm(centered, axis=1)


def sample_width(p: RegularPolytope, rng: np.random.Generator) -> float:
    """A single width draw; see width_samples."""
    return float(width_samples(p, rng, 1)[0])


def _moment_sums(values: np.ndarray, ks: tuple[int, ...]) -> dict[int, tuple[float, float]]:
    out = {}
    for k in ks:
        wk = values if k == 1 else values**k
        out[k] = (float(wk.sum()), float((wk * wk).sum()))
    return out


def estimate_moments(
    p: RegularPolytope, ks: tuple[int, ...], cfg: McConfig, threads: int = 1
) -> dict[int, MomentEstimate]:
    """Monte Carlo estimates of E[W^k] for several k from one shared sample."""
    ks = tuple(ks)
    if any(k < 1 for k in ks):
        raise ValueError(f"moment orders must be positive, got {ks}")

    def work(i, count):
        rng = chunk_rng(cfg.seed, i)
        return _moment_sums(width_samples(p, rng, count), ks)

    per_chunk = _map_chunks(work, cfg, threads)
    out = {}
    n_tot = cfg.samples
    for k in ks:
        s = math.fsum(c[k][0] for c in per_chunk)
        s2 = math.fsum(c[k][1] for c in per_chunk)
        mean = s / n_tot
        var = max(s2 / n_tot - mean * mean, 0.0)
        if n_tot > 1:
            var *= n_tot / (n_tot - 1)
        stderr = math.sqrt(var / n_tot)
        out[k] = MomentEstimate(polytope=p, k=k, value=mean, route="monte_carlo", error=stderr)
    return out


def estimate_moment(p: RegularPolytope, k: int, cfg: McConfig, threads: int = 1) -> MomentEstimate:
    return estimate_moments(p, (k,), cfg, threads)[k]


def symmetric_sqrt(matrix: np.ndarray, clip: float = -1e-10) -> np.ndarray:
    """Symmetric PSD square root, rejecting matrices with eigenvalues < clip.

    Eigenvalues in [clip, 0) are treated as exact zeros; optimizer iterates
    and the singular regular-simplex Gram sit on the PSD boundary.
    """
    matrix = np.asarray(matrix, dtype=float)
    vals, vecs = np.linalg.eigh(matrix)
    if vals.min() < clip:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {vals.min():.3e})")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def sample_correlated_max(gram: np.ndarray, cfg: McConfig, threads: int = 1) -> tuple[float, float]:
    """Monte Carlo estimate (mean, stderr) of E max of the unit-variance
    centered Gaussian vector with the given correlation matrix."""
    root = symmetric_sqrt(gram)
    n = root.shape[0]

    def work(i, count):
        rng = chunk_rng(cfg.seed, i)
        z = rng.standard_normal((count, n))
        m = (z @ root).max(axis=1)
        return float(m.sum()), float((m * m).sum())

    per_chunk = _map_chunks(work, cfg, threads)
    s = math.fsum(c[0] for c in per_chunk)
    s2 = math.fsum(c[1] for c in per_chunk)
    mean = s / cfg.samples
    var = max(s2 / cfg.samples - mean * mean, 0.0)
    if cfg.samples > 1:
        var *= cfg.samples / (cfg.samples - 1)
    return mean, math.sqrt(var / cfg.samples)
