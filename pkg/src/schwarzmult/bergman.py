"""Weighted Bergman spaces H_alpha on the unit disk.

Norms follow the literal convention

    ||h||_alpha^2 = (alpha - 1) * \\iint_D |h(z)|^2 (1 - |z|^2)^(alpha - 2) dx dy,

with no 1/pi, so constants have norm sqrt(pi).  ``unit_mass=True`` divides
norms by sqrt(pi).

Disk integrals run in the variable s = |z|^2, where dx dy = ds dtheta / 2 and
the weight becomes (1 - s)^beta.  The s-interval is cut into dyadic panels
[1 - 2^-j, 1 - 2^-(j+1)] with Gauss-Legendre nodes, and the last panel at the
boundary uses Gauss-Jacobi nodes that absorb (1 - s)^beta exactly.  Angles
use the trapezoid rule, doubled per panel until it agrees with its own
half-sampled rule.  Levels add two boundary panels and more radial nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import gammaln, roots_jacobi, roots_legendre

from .errors import DomainError, NormInfinite, NumericalError
from .series import DiskFunction, TaylorSeries

Evaluable = Union[Callable[[np.ndarray], np.ndarray], TaylorSeries, DiskFunction]

MAX_LEVEL = 4  # shells = 6 + 2*level, so at most 14 dyadic panels


def check_alpha(alpha: float, minimum: float = 1.0) -> float:
    alpha = float(alpha)
    if not alpha > minimum:
        raise DomainError(f"alpha must exceed {minimum:g}, got {alpha:g}")
    return alpha


@dataclass(frozen=True)
class Panel:
    s: np.ndarray  # nodes in s = |z|^2
    w: np.ndarray  # radial weights incl. (1-s)^beta and the 1/2 Jacobian
    n_angle: int  # starting angular node count

    def points(self, n_angle: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(n_angle) / n_angle
        return np.sqrt(self.s)[:, None] * np.exp(1j * theta)[None, :]


def _sample(g, z) -> np.ndarray:
    vals = np.asarray(g(z), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("integrand blowup")
    return vals


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor rule for \\iint_D g(z) (1 - |z|^2)^beta dx dy.

    Panel j starts with ``angular_base * 2**j`` angles; :meth:`sample` doubles
    that until the trapezoid sums agree with the half-sampled rule to ``tol``,
    up to ``angular_cap``.
    """

    shells: int = 6
    weight_exponent: float = 0.0
    radial_nodes: int = 16
    final_nodes: int = 24
    angular_base: int = 32
    angular_cap: int = 2**15

    @classmethod
    def at_level(cls, level: int, weight_exponent: float = 0.0, **kw) -> "QuadratureGrid":
        kw.setdefault("radial_nodes", 12 + 4 * level)
        kw.setdefault("final_nodes", 20 + 4 * level)
        return cls(shells=6 + 2 * level, weight_exponent=weight_exponent, **kw)

    @cached_property
    def panels(self) -> tuple:
        beta = self.weight_exponent
        if beta <= -1:
            raise DomainError("weight exponent must exceed -1")
        out = []
        x, wx = roots_legendre(self.radial_nodes)
        for j in range(self.shells):
            hi, lo = 2.0**-j, 2.0 ** -(j + 1)
            half, mid = (hi - lo) / 2, (hi + lo) / 2
            t = mid + half * x
            out.append(Panel(1.0 - t, 0.5 * half * wx * t**beta, self._angles(j)))
        # boundary panel t in [0, T]: Gauss-Jacobi with weight t^beta
        T = 2.0**-self.shells
        xj, wj = roots_jacobi(self.final_nodes, 0.0, beta)
        t = T * (1 + xj) / 2
        out.append(Panel(1.0 - t, 0.5 * (T / 2) ** (beta + 1) * wj, self._angles(self.shells)))
        return tuple(out)

    def _angles(self, j: int) -> int:
        return int(min(self.angular_base * 2**j, self.angular_cap))

    def sample(self, g, panel: Panel, tol: float) -> tuple[np.ndarray, bool]:
        """Values of g on the panel at the first angular count that resolves it.

        The flag is False when the cap was reached without agreement.
        """
        m = panel.n_angle
        vals = _sample(g, panel.points(m))
        while True:
            full = vals.mean(axis=1)
            half = vals[:, ::2].mean(axis=1)
            if np.max(np.abs(full - half)) <= tol * np.max(np.abs(full)):
                return vals, True
            if m >= self.angular_cap:
                return vals, False
            m *= 2
            vals = _sample(g, panel.points(m))

    def angular_integrals(self, g, panel: Panel, tol: float) -> np.ndarray:
        """int_0^{2pi} g(sqrt(s) e^{i theta}) d theta for each radial node.

        Falls back to adaptive Gauss-Kronrod when the trapezoid rule cannot
        resolve the panel, which happens near boundary singularities.
        """
        vals, ok = self.sample(g, panel, tol)
        if ok:
            return 2 * np.pi * vals.mean(axis=1)
        rad = np.sqrt(panel.s)
        res, _ = quad_vec(
            lambda th: _sample(g, rad * np.exp(1j * th)), 0.0, 2 * np.pi,
            epsrel=max(tol, 1e-13), norm="max", points=(np.pi / 2, np.pi, 1.5 * np.pi), limit=4000,
        )
        return np.asarray(res, dtype=float)

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12) -> float:
        return float(sum(p.w @ self.angular_integrals(g, p, tol) for p in self.panels))


class QuadratureResult(NamedTuple):
    value: float
    err_estimate: float
    diverged: bool


def _diverging(increments: list) -> bool:
    if len(increments) < 4:
        return False
    last = increments[-4:]
    if not all(d > 0 for d in last):
        return False
    return all(last[i + 1] >= 0.5 * last[i] for i in range(3))


def disk_integral(
    g: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-10,
    weight_exponent: float = 0.0,
    max_level: int = MAX_LEVEL,
) -> QuadratureResult:
    """Adaptive \\iint_D g(z) (1 - |z|^2)^weight_exponent dx dy.

    Refines until successive levels agree to ``tol`` relative.  A run of four
    positive, non-shrinking increments marks the integral as divergent.
    """
    prev = None
    increments = []
    value = err = 0.0
    for level in range(max_level + 1):
        value = QuadratureGrid.at_level(level, weight_exponent).integrate(g, tol)
        if prev is not None:
            d = value - prev
            increments.append(d)
            err = abs(d)
            if err <= tol * abs(value):
                return QuadratureResult(value, err, False)
            if _diverging(increments):
                return QuadratureResult(value, err, True)
        prev = value
    return QuadratureResult(value, err, False)


def as_function(h: Evaluable) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(h, DiskFunction):
        return h.__call__
    if callable(h):
        return h
    raise TypeError(f"cannot evaluate {type(h).__name__}")


def weighted_norm_sq(h: Evaluable, alpha: float, tol: float = 1e-10) -> QuadratureResult:
    """(alpha - 1) \\iint |h|^2 (1-|z|^2)^(alpha-2), with its error and divergence flag."""
    alpha = check_alpha(alpha)
    fn = as_function(h)
    res = disk_integral(lambda z: np.abs(fn(z)) ** 2, tol, alpha - 2.0)
    return QuadratureResult((alpha - 1) * res.value, (alpha - 1) * res.err_estimate, res.diverged)


def bergman_norm(h: Evaluable, alpha: float, tol: float = 1e-10, unit_mass: bool = False) -> float:
    res = weighted_norm_sq(h, alpha, tol)
    if res.diverged:
        raise NormInfinite("norm infinite")
    norm = float(np.sqrt(res.value))
    return norm / np.sqrt(np.pi) if unit_mass else norm


def monomial_norm_sq(n: int, alpha: float) -> float:
    """Closed form ||z^n||_alpha^2 = pi n! Gamma(alpha) / Gamma(n + alpha)."""
    return float(np.pi * np.exp(gammaln(n + 1) + gammaln(alpha) - gammaln(n + alpha)))


def basis_coefficient(n: int, alpha: float) -> float:
    """sqrt(Gamma(n + alpha) / (n! Gamma(alpha))), via log-Gamma."""
    if n < 0:
        raise DomainError("basis index must be >= 0")
    alpha = check_alpha(alpha)
    return float(np.exp(0.5 * (gammaln(n + alpha) - gammaln(n + 1) - gammaln(alpha))))


def basis_fn(n: int, alpha: float, order: int | None = None) -> TaylorSeries:
    return TaylorSeries.monomial(n, basis_coefficient(n, alpha), order)


@dataclass(frozen=True)
class KernelProbe:
    """psi_a(z) = (1 - |a|^2)^(alpha/2) / (1 - conj(a) z)^alpha."""

    a: complex
    alpha: float

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise DomainError("kernel probe needs |a| < 1")
        check_alpha(self.alpha)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        a = complex(self.a)
        return (1 - abs(a) ** 2) ** (self.alpha / 2) / (1 - np.conj(a) * z) ** self.alpha


def kernel_probe(a: complex, alpha: float) -> KernelProbe:
    return KernelProbe(complex(a), float(alpha))


def derivative_ratio_exact(n: int, alpha):
    """n alpha (alpha + 1) / (n + alpha): ||(z^n)'||^2_{alpha+2} / ||z^n||^2_alpha.

    Exact when ``alpha`` is a Fraction.
    """
    return n * alpha * (alpha + 1) / (n + alpha)


def derivative_ratio(n: int, alpha: float, tol: float = 1e-9) -> float:
    """Monomial derivative-norm ratio, closed form checked against quadrature."""
    if n < 1:
        raise DomainError("derivative_ratio needs n >= 1")
    alpha = check_alpha(alpha)
    closed = float(derivative_ratio_exact(n, alpha))
    num = weighted_norm_sq(lambda z: n * z ** (n - 1), alpha + 2, tol * 1e-2)
    den = weighted_norm_sq(lambda z: z**n, alpha, tol * 1e-2)
    quad = num.value / den.value
    if abs(quad - closed) > tol * closed:
        raise NumericalError(f"derivative ratio mismatch: quadrature {quad!r} vs closed form {closed!r}")
    return closed


def binomial_partial_sum(tau: float, x, terms: int):
    """sum_{n<=terms} Gamma(tau+n)/(n! Gamma(tau)) x^n, a partial sum of (1-x)^-tau."""
    n = np.arange(terms + 1)
    c = np.exp(gammaln(tau + n) - gammaln(n + 1) - gammaln(tau))
    return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)


def gram_matrix(
    w: Callable[[np.ndarray], np.ndarray],
    weight_exponent: float,
    nmax: int,
    tol: float = 1e-10,
    max_level: int = MAX_LEVEL,
) -> np.ndarray:
    """G[m, n] = \\iint w(z) conj(z^m) z^n (1-|z|^2)^beta dx dy for m, n <= nmax.

    Angular moments come from one FFT per radial node, so the whole matrix
    costs a single quadrature sweep per level.
    """
    base = max(32, 1 << int(np.ceil(np.log2(4 * (nmax + 1)))))
    d_index = np.arange(nmax + 1)[None, :] - np.arange(nmax + 1)[:, None]
    prev = None
    for level in range(max_level + 1):
        grid = QuadratureGrid.at_level(level, weight_exponent, angular_base=base)
        G = np.zeros((nmax + 1, nmax + 1), dtype=complex)
        for p in grid.panels:
            vals, _ = grid.sample(w, p, tol)
            # F[:, d] = int_0^{2pi} w e^{i d theta} dtheta
            F = 2 * np.pi * np.fft.ifft(vals, axis=1)
            Fd = F[:, d_index % vals.shape[1]]
            P = np.sqrt(p.s)[:, None] ** np.arange(nmax + 1)[None, :]
            G += np.einsum("k,km,kn,kmn->mn", p.w, P, P, Fd)
        if prev is not None:
            err = np.linalg.norm(G - prev)
            if err <= tol * np.linalg.norm(G):
                break
        prev = G
    return 0.5 * (G + G.conj().T)
