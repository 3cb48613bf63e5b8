"""Integral means of |f'|^t, slope estimates of the integral means spectrum,
and the piecewise dilatation bounds at t = -2 together with their thresholds.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, NumericalError
from .series import DiskFunction

MIN_NODES = 2**10
NODES_PER_GAP = 32  # angular nodes per unit of 1/(1-r)
MAX_NODES = 2**24
RESIDUAL_FLAG = 0.05


def integral_means(f: DiskFunction, t: float, r: float, rtol: float = 1e-8) -> float:
    """int_0^{2pi} |f'(r e^{i theta})|^t d theta by the trapezoid rule."""
    if not 0 < r < 1:
        raise DomainError("radius must lie in (0, 1)")
    m = max(MIN_NODES, int(np.ceil(NODES_PER_GAP / (1 - r))))

    def trap(n):
        theta = 2 * np.pi * np.arange(n) / n
        vals = np.abs(f.deriv(r * np.exp(1j * theta), 1)) ** t
        if not np.all(np.isfinite(vals)):
            raise NumericalError("non-finite integral means sample")
        return 2 * np.pi * float(np.mean(vals))

    prev = trap(m)
    while m < MAX_NODES:
        m *= 2
        cur = trap(m)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


@dataclass(frozen=True)
class SpectrumEstimate:
    t: float
    radii: tuple
    means: tuple
    beta_hat: float
    fit_residual: float
    fit_points: int

    @property
    def reliable(self) -> bool:
        return self.fit_residual < RESIDUAL_FLAG

    def to_dict(self) -> dict:
        d = asdict(self)
        d["radii"], d["means"] = list(self.radii), list(self.means)
        d["reliable"] = self.reliable
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "I_t"])
        for r, v in zip(self.radii, self.means):
            w.writerow([f"{r:.15g}", f"{v:.15g}"])
        return buf.getvalue()


def spectrum_estimate(
    f: DiskFunction, t: float, j_min: int = 5, j_max: int = 12, fit_points: int = 5
) -> SpectrumEstimate:
    """Least-squares slope of log I_t(f', r) against -log(1-r) on r_j = 1 - 2^-j.

    The fit uses the last ``fit_points`` radii; ``fit_residual`` is the RMS of
    the fit residuals in log space.
    """
    if j_max > 14:
        raise DomainError("j_max <= 14 (node budget)")
    if j_min < 1 or j_max - j_min + 1 < 2:
        raise DomainError("need at least two radii with j >= 1")
    js = np.arange(j_min, j_max + 1)
    radii = 1.0 - 2.0 ** (-js.astype(float))
    means = np.array([integral_means(f, t, r) for r in radii])
    if np.any(means <= 0):
        raise NumericalError("integral means must be positive")
    npts = min(fit_points, len(js))
    x = js[-npts:] * np.log(2.0)
    y = np.log(means[-npts:])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return SpectrumEstimate(
        t=float(t), radii=tuple(float(r) for r in radii), means=tuple(float(v) for v in means),
        beta_hat=float(slope), fit_residual=float(np.sqrt(np.mean(resid**2))), fit_points=int(npts),
    )


class HedenmalmBound(NamedTuple):
    bound: float
    regime: str


def hedenmalm_switch(k: float) -> float:
    """|t| at which the small- and large-|t| regimes meet: 2 / (k (1+7k)^2)."""
    return 2.0 / (k * (1 + 7 * k) ** 2)


def hedenmalm_bound(k: float, t: float) -> HedenmalmBound:
    """Upper bound on the spectrum for a quasidisk with dilatation bound k."""
    if not 0 < k < 1:
        raise DomainError("k must lie in (0, 1)")
    s = (1 + 7 * k) ** 2
    if abs(t) <= hedenmalm_switch(k):
        return HedenmalmBound(0.25 * k**2 * t**2 * s, "small")
    return HedenmalmBound(k * abs(t) - 1.0 / s, "large")


def hedenmalm_roots(tol: float = 1e-12) -> tuple[float, float]:
    """k0: k (1+7k)^2 = 1 and k1: (2k - 1)(1+7k)^2 = 1, both by bisection on [0, 1]."""
    k0 = bisect(lambda k: k * (1 + 7 * k) ** 2 - 1, 0.0, 1.0, xtol=tol)
    k1 = bisect(lambda k: (2 * k - 1) * (1 + 7 * k) ** 2 - 1, 0.0, 1.0, xtol=tol)
    return float(k0), float(k1)
