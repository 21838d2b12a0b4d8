"""Moments of the random projection width of the regular polytope families.

The four families are the unit-volume cube Q_n in R^n, the corner simplex
S_{n-1} = conv(e_1, ..., e_n) in R^n, the regular simplex T_{n-1} with n
vertices inscribed in the unit sphere of R^{n-1}, and the crosspolytope
C_n = conv(+-e_1, ..., +-e_n).

Every moment E[W^k] reduces to a moment of a Gaussian extreme (sum, max of
absolute values, or range) times a gamma-ratio prefactor assembled in log
space.  The cube has closed forms for k <= 4; the other families go through
adaptive quadrature of survival-function integrals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate

from .extremes import (
    DEFAULT_QUAD,
    QuadratureConfig,
    expected_max,
    expected_max_abs,
    solve_t_n,
)
from .special import log_gamma_ratio, normal_tail, normal_tail_inverse

__all__ = [
    "PolytopeKind",
    "RegularPolytope",
    "MomentEstimate",
    "v1_from_mean_width",
    "width_moment_cube",
    "width_moment_cross",
    "width_moment_simplex_s",
    "width_moment_simplex_t",
    "range_cdf",
    "range_moment",
    "max_abs_moment",
    "sudakov_v1",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class PolytopeKind(str, enum.Enum):
    CUBE = "cube"
    SIMPLEX_S = "simplex-s"
    SIMPLEX_T = "simplex-t"
    CROSS = "cross"


@dataclass(frozen=True)
class RegularPolytope:
    kind: PolytopeKind
    n: int  # family parameter: Q_n, S_{n-1}, T_{n-1}, C_n

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"family parameter must be positive, got {self.n}")
        if self.kind in (PolytopeKind.SIMPLEX_S, PolytopeKind.SIMPLEX_T) and self.n < 2:
            raise ValueError(f"a simplex needs at least 2 vertices, got n={self.n}")

    @property
    def ambient_dim(self) -> int:
        # T_{n-1} lives in the hyperplane realization of R^{n-1}; the others
        # sit in R^n.
        return self.n - 1 if self.kind is PolytopeKind.SIMPLEX_T else self.n


@dataclass(frozen=True)
class MomentEstimate:
    polytope: RegularPolytope
    k: int
    value: float
    route: str  # closed_form | quadrature | monte_carlo
    error: float  # deterministic bound for closed_form/quadrature, stderr for MC


def v1_from_mean_width(dim: int, mean_width: float) -> float:
    """First intrinsic volume from the mean width of a body in R^dim:
    V1 = sqrt(pi) Gamma((dim+1)/2) / Gamma(dim/2) * E[W]."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return math.exp(0.5 * math.log(math.pi) + log_gamma_ratio((dim + 1) / 2, dim / 2)) * mean_width


def width_moment_cube(n: int, k: int) -> MomentEstimate:
    """Closed-form E[W_{Q_n}^k] for k = 1..4."""
    p = RegularPolytope(PolytopeKind.CUBE, n)
    if k == 1:
        value = n * math.exp(log_gamma_ratio(n / 2, (n + 1) / 2)) / math.sqrt(math.pi)
    elif k == 2:
        value = 1.0 + 2.0 * (n - 1) / math.pi
    elif k == 3:
        poly = 2.0 * n * n + (3.0 * math.pi - 6.0) * n + 4.0 - math.pi
        value = 0.5 * math.exp(log_gamma_ratio(n / 2, (n + 3) / 2)) * math.pi ** -1.5 * n * poly
    elif k == 4:
        poly = (
            4.0 * n**3
            + (12.0 * math.pi - 24.0) * n**2
            + (44.0 - 20.0 * math.pi + 3.0 * math.pi**2) * n
            + 8.0 * math.pi
            - 24.0
        )
        value = poly / ((n + 2) * math.pi**2)
    else:
        raise ValueError(f"no closed form for cube moment k={k}; use the Monte Carlo route")
    return MomentEstimate(polytope=p, k=k, value=value, route="closed_form", error=8.0 * abs(value) * 2.2e-16)


def max_abs_moment(n: int, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> tuple[float, float]:
    """E[(max |eta_i|)^k] = int_0^inf k t^(k-1) (1 - F_n(t)) dt, with error bound."""
    t_hi = float(normal_tail_inverse(min(cfg.trunc_eps / (2 * n), 0.25)))

    def integrand(t):
        r = float(normal_tail(t))
        surv = 1.0 if r >= 0.5 else -math.expm1(n * math.log1p(-2.0 * r))
        return k * t ** (k - 1) * surv

    peak = solve_t_n(n) if n > 1 else None
    value, err = integrate.quad(
        integrand, 0.0, t_hi, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit,
        points=[peak] if peak else None,
    )
    # tail: 1 - F_n <= 2n normal_tail(t), and t^(k-1) grows polynomially
    tail = 2 * n * k * t_hi ** (k - 1) * float(normal_tail(t_hi)) * 2.0
    return value, err + tail


def width_moment_cross(n: int, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> MomentEstimate:
    """E[W_{C_n}^k] = 2^(k/2) Gamma(n/2)/Gamma((n+k)/2) E[(max |eta_i|)^k]."""
    p = RegularPolytope(PolytopeKind.CROSS, n)
    if k < 1:
        raise ValueError(f"moment order must be positive, got {k}")
    moment, err = max_abs_moment(n, k, cfg)
    pref = math.exp(0.5 * k * math.log(2.0) + log_gamma_ratio(n / 2, (n + k) / 2))
    return MomentEstimate(polytope=p, k=k, value=pref * moment, route="quadrature", error=pref * err)


def range_cdf(n: int, t: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """P[max eta_i - min eta_i <= t] = n int phi(x) (Phi(x+t) - Phi(x))^(n-1) dx."""
    if n < 2:
        raise ValueError(f"range needs n >= 2, got {n}")
    if t <= 0:
        return 0.0

    def integrand(x):
        diff = float(normal_tail(x)) - float(normal_tail(x + t))
        if diff <= 0.0:
            return 0.0
        return math.exp(-0.5 * x * x) / _SQRT_2PI * diff ** (n - 1)

    lo = -t - 9.0
    value, _ = integrate.quad(integrand, lo, 9.0, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit)
    return min(n * value, 1.0)


def range_moment(n: int, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> tuple[float, float]:
    """E[(max eta_i - min eta_i)^k] by nested quadrature of the range CDF."""
    if n < 2:
        raise ValueError(f"range needs n >= 2, got {n}")
    if k < 1:
        raise ValueError(f"moment order must be positive, got {k}")
    # range > t forces max > t/2 or -min > t/2, so the survival function is
    # bounded by 2n normal_tail(t/2)
    t_hi = 2.0 * float(normal_tail_inverse(min(cfg.trunc_eps / (2 * n), 0.25)))
    inner_cfg = QuadratureConfig(epsabs=min(cfg.epsabs, 1e-13), epsrel=cfg.epsrel, limit=cfg.limit)

    def integrand(t):
        return k * t ** (k - 1) * (1.0 - range_cdf(n, t, inner_cfg))

    peak = 2.0 * solve_t_n(n)
    value, err = integrate.quad(
        integrand, 0.0, t_hi, epsabs=cfg.epsabs, epsrel=max(cfg.epsrel, 1e-11),
        limit=cfg.limit, points=[peak],
    )
    tail = 2 * n * k * t_hi ** (k - 1) * float(normal_tail(t_hi / 2.0)) * 4.0
    return value, err + tail


def width_moment_simplex_s(n: int, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> MomentEstimate:
    """E[W_{S_{n-1}}^k] = 2^(-k/2) Gamma(n/2)/Gamma((n+k)/2) E[range^k]."""
    p = RegularPolytope(PolytopeKind.SIMPLEX_S, n)
    moment, err = range_moment(n, k, cfg)
    pref = math.exp(-0.5 * k * math.log(2.0) + log_gamma_ratio(n / 2, (n + k) / 2))
    return MomentEstimate(polytope=p, k=k, value=pref * moment, route="quadrature", error=pref * err)


def width_moment_simplex_t(n: int, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> MomentEstimate:
    """E[W_{T_{n-1}}^k] = 2^(-k/2) Gamma((n-1)/2)/Gamma((n-1+k)/2) (n/(n-1))^(k/2) E[range^k]."""
    p = RegularPolytope(PolytopeKind.SIMPLEX_T, n)
    moment, err = range_moment(n, k, cfg)
    pref = math.exp(
        -0.5 * k * math.log(2.0)
        + log_gamma_ratio((n - 1) / 2, (n - 1 + k) / 2)
        + 0.5 * k * (math.log(n) - math.log(n - 1))
    )
    return MomentEstimate(polytope=p, k=k, value=pref * moment, route="quadrature", error=pref * err)


def width_moment(p: RegularPolytope, k: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> MomentEstimate:
    """Dispatch to the family-specific closed form or quadrature route."""
    if p.kind is PolytopeKind.CUBE:
        return width_moment_cube(p.n, k)
    if p.kind is PolytopeKind.CROSS:
        return width_moment_cross(p.n, k, cfg)
    if p.kind is PolytopeKind.SIMPLEX_S:
        return width_moment_simplex_s(p.n, k, cfg)
    return width_moment_simplex_t(p.n, k, cfg)


def sudakov_v1(p: RegularPolytope, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """First intrinsic volume via the Gaussian supremum representation.

    Cube: exactly n.  T_{n-1}: sqrt(2 pi) sqrt(n/(n-1)) E max(eta_1..eta_n).
    S_{n-1}: sqrt((n-1)/n) V1(T_{n-1}).  C_n: sqrt(2 pi) E max |eta_i|.
    """
    if p.kind is PolytopeKind.CUBE:
        return float(p.n)
    if p.kind is PolytopeKind.SIMPLEX_T:
        return _SQRT_2PI * math.sqrt(p.n / (p.n - 1)) * expected_max(p.n, cfg).value
    if p.kind is PolytopeKind.SIMPLEX_S:
        return math.sqrt((p.n - 1) / p.n) * sudakov_v1(RegularPolytope(PolytopeKind.SIMPLEX_T, p.n), cfg)
    return _SQRT_2PI * expected_max_abs(p.n, cfg).value
