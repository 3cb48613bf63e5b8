"""Schwarzian derivatives, Bloch-type suprema and dilatation bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NumericalError
from .series import DiskFunction, TaylorSeries

# |f'| below this is treated as a critical point
CRITICAL_TOL = 1e-14
AHLFORS_WEILL_LIMIT = 2.0
NEHARI_BOUND = 6.0


def _as_disk_points(z):
    za = np.asarray(z, dtype=complex)
    if np.any(np.abs(za) >= 1):
        raise DomainError("schwarzian evaluated outside the open unit disk")
    return za


def schwarzian_at(f: DiskFunction, z, mode: str = "auto"):
    """S_f(z) = (f''/f')' - (f''/f')**2 / 2.

    ``mode='auto'`` uses ``f.closed_schwarzian`` when present and otherwise
    the pointwise derivative formula; ``mode='series'`` evaluates the
    series-derived Schwarzian instead.
    """
    za = _as_disk_points(z)
    if mode == "series":
        out = schwarzian_series(f)(za)
    elif mode in ("auto", "closed") and f.closed_schwarzian is not None:
        out = np.asarray(f.closed_schwarzian(za), dtype=complex)
    elif mode in ("auto", "derivs"):
        _, f1, f2, f3 = f.derivs(za)
        if np.any(np.abs(f1) <= CRITICAL_TOL):
            raise NumericalError("critical point: f' vanishes")
        p = f2 / f1
        out = f3 / f1 - 1.5 * p * p
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if np.ndim(z) == 0:
        return complex(out)
    return out


@lru_cache(maxsize=128)
def schwarzian_series(f: DiskFunction) -> TaylorSeries:
    """S_f as a truncated series built from f's Taylor coefficients."""
    d1 = f.series.derive(1)
    p = d1.derive(1) / d1
    return p.derive(1) - 0.5 * (p * p)


@dataclass(frozen=True, eq=False)
class SchwarzianField:
    source: DiskFunction
    mode: str = "closed-form"

    def __post_init__(self):
        if self.mode not in ("closed-form", "series-derived"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def eval(self, z):
        return schwarzian_at(self.source, z, mode="series" if self.mode == "series-derived" else "auto")

    __call__ = eval


@dataclass(frozen=True)
class SupEstimate:
    """Grid supremum of a nonnegative function on an annulus r_min <= |z| < 1.

    ``value`` is a lower bound of the true supremum; ``refinement_delta`` is the
    gain the local search made over the raw grid maximum.
    """

    value: float
    argmax: complex
    refinement_delta: float


def annulus_sup(
    g: Callable[[np.ndarray], np.ndarray],
    r_min: float = 0.0,
    depth: int = 10,
    angular_base: int = 32,
    refine: bool = True,
) -> SupEstimate:
    """Supremum of ``g`` over ``r_min <= |z| < 1``.

    Radii are clustered at the boundary, ``1 - r = (1 - r_min) 2**-u`` with
    ``u`` on a quarter-step grid up to ``depth``; each circle carries
    ``angular_base * 2**ceil(u)`` equispaced angles (a multiple of 4, so the
    real and imaginary axes are always sampled).
    """
    if not 0 <= r_min < 1:
        raise DomainError("r_min must lie in [0, 1)")
    us = np.linspace(0.0, depth, 4 * depth + 1)
    radii = 1.0 - (1.0 - r_min) * 2.0 ** (-us)
    best, best_i, best_theta = -np.inf, 0, 0.0
    for i, (u, r) in enumerate(zip(us, radii)):
        m = min(angular_base * 2 ** int(np.ceil(u)), 2**16)
        theta = 2 * np.pi * np.arange(m) / m
        vals = np.asarray(g(r * np.exp(1j * theta)), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NumericalError("non-finite value in supremum sweep")
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_i, best_theta = float(vals[k]), i, float(theta[k])
            best_dtheta = 2 * np.pi / m
    grid_best = best
    r_best = float(radii[best_i])
    if refine and best > 0:
        r_lo = radii[max(best_i - 1, 0)]
        r_hi = radii[min(best_i + 1, len(radii) - 1)]
        r_hi = min(r_hi, 1.0 - 1e-15)
        th_lo, th_hi = best_theta - best_dtheta, best_theta + best_dtheta

        def neg_r(r):
            return -float(g(np.array([r * np.exp(1j * best_theta)]))[0])

        def neg_t(t):
            return -float(g(np.array([r_best * np.exp(1j * t)]))[0])

        for _ in range(3):
            if r_hi > r_lo:
                res = minimize_scalar(neg_r, bounds=(r_lo, r_hi), method="bounded",
                                      options={"xatol": 1e-13})
                if -res.fun > best:
                    best, r_best = -res.fun, float(res.x)
            res = minimize_scalar(neg_t, bounds=(th_lo, th_hi), method="bounded",
                                  options={"xatol": 1e-13})
            if -res.fun > best:
                best, best_theta = -res.fun, float(res.x)
    return SupEstimate(float(best), complex(r_best * np.exp(1j * best_theta)), float(best - grid_best))


def bloch_estimate(f: DiskFunction, grid_depth: int = 10) -> SupEstimate:
    def weighted(z):
        return np.abs(schwarzian_at(f, z)) * (1 - np.abs(z) ** 2) ** 2

    return annulus_sup(weighted, 0.0, grid_depth)


def bloch_norm(f: DiskFunction, grid_depth: int = 10) -> float:
    """sup |S_f(z)| (1 - |z|^2)^2 as a refined grid estimate (a lower bound)."""
    return bloch_estimate(f, grid_depth).value


def ahlfors_weill_k(f: DiskFunction, grid_depth: int = 10) -> Optional[float]:
    """Dilatation bound ||S_f||/2 when the Schwarzian norm is below 2, else None.

    This is an admissible extension bound, not the minimal dilatation.
    """
    norm = bloch_norm(f, grid_depth)
    if norm < AHLFORS_WEILL_LIMIT:
        return norm / 2.0
    return None


@dataclass(frozen=True)
class DilatationSample:
    mu_f: complex
    mu_g_at_fz: complex
    kappa: complex

    def __post_init__(self):
        if not abs(self.mu_f) < 1 or not abs(self.mu_g_at_fz) < 1:
            raise DomainError("dilatation moduli must be strictly below 1")
        if abs(abs(self.kappa) - 1) > 1e-12:
            raise DomainError("kappa must have modulus 1")


def compose_dilatation(d: DilatationSample) -> complex:
    """Complex dilatation of g o f from mu_f, mu_g(f(z)) and kappa = conj(f_z)/f_z."""
    num = d.mu_f + d.mu_g_at_fz * d.kappa
    den = 1 + np.conj(d.mu_f) * d.mu_g_at_fz * d.kappa
    if abs(den) < 1e-14:
        raise NumericalError("degenerate composition")
    return complex(num / den)


def ode_identity_residual(f: DiskFunction, order: int) -> float:
    """Max coefficient gap in -(1/f')''' = (S_f/f')' + S_f (1/f')'.

    Both sides are built as truncated series; the residual measures rounding
    and truncation only.
    """
    d1 = f.series.derive(1)
    g = 1.0 / d1
    s = schwarzian_series(f)
    lhs = -g.derive(3)
    rhs = (s * g).derive(1) + s * g.derive(1)
    usable = min(lhs.order, rhs.order)
    if order > usable:
        raise NumericalError(f"order {order} exceeds usable truncation {usable}")
    return float(np.max(np.abs(lhs.coeffs[: order + 1] - rhs.coeffs[: order + 1])))


def compose_moebius(sigma: tuple, f: DiskFunction) -> DiskFunction:
    """sigma o f for sigma(w) = (a w + b)/(c w + d), derivatives by the chain rule.

    The caller guarantees c f(z) + d has no zero in the disk.
    """
    a, b, c, d = sigma
    det = a * d - b * c

    def derivs(z):
        w, w1, w2, w3 = f.derivs(z)
        den = c * w + d
        s1, s2, s3 = det / den**2, -2 * c * det / den**3, 6 * c**2 * det / den**4
        return (
            (a * w + b) / den,
            s1 * w1,
            s2 * w1**2 + s1 * w2,
            s3 * w1**3 + 3 * s2 * w1 * w2 + s1 * w3,
        )

    num = f.series * a + b
    den = f.series * c + d
    return DiskFunction(
        f"moebius-of-{f.name}", tuple(sigma) + f.params, num / den, derivs,
        univalent=f.univalent, dilatation_bound=f.dilatation_bound,
    )
