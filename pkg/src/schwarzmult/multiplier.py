"""The multiplier M_f h = S_f h from H_alpha into H_{alpha+4}.

Norm ratios are measured on random polynomials, the monomial basis e_n and
the kernel probes psi_a, and on the top generalized eigenvalue of the Gram
pair over span{z^0..z^N}.  All of these are lower estimates of the operator
norm, to be compared against the upper bound 36 (alpha+1) k^2 / (alpha-1).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigh

from .bergman import (
    Evaluable,
    as_function,
    basis_coefficient,
    check_alpha,
    disk_integral,
    gram_matrix,
    kernel_probe,
    weighted_norm_sq,
)
from .errors import DomainError, NormInfinite, NumericalError
from .schwarzian import schwarzian_at
from .series import DiskFunction

DEFAULT_A_LADDER = (0.0, 0.5, 0.9, 0.99)
TRIAL_DEGREE = 24


def apply_multiplier(f: DiskFunction, h: Evaluable) -> Callable[[np.ndarray], np.ndarray]:
    fn = as_function(h)

    def product(z):
        return schwarzian_at(f, z) * fn(z)

    return product


def image_norm_sq(f: DiskFunction, h: Evaluable, alpha: float, tol: float = 1e-10) -> float:
    """||S_f h||^2_{alpha+4} = (alpha+3) \\iint |S_f h|^2 (1-|z|^2)^(alpha+2)."""
    alpha = check_alpha(alpha)
    mh = apply_multiplier(f, h)
    res = disk_integral(lambda z: np.abs(mh(z)) ** 2, tol, alpha + 2.0)
    if res.diverged:
        raise NormInfinite("norm infinite")
    return (alpha + 3) * res.value


def multiplier_ratio(f: DiskFunction, h: Evaluable, alpha: float, tol: float = 1e-10) -> float:
    den = weighted_norm_sq(h, alpha, tol)
    if den.diverged:
        raise NormInfinite("norm infinite")
    if den.value <= 0:
        raise DomainError("multiplier ratio needs h with nonzero norm")
    return image_norm_sq(f, h, alpha, tol) / den.value


def theorem1_bound(alpha: float, k: float) -> float:
    alpha = check_alpha(alpha)
    return 36 * (alpha + 1) * k**2 / (alpha - 1)


def shimorin_bound(alpha: float) -> float:
    alpha = check_alpha(alpha, 2.0)
    return 36 * (alpha + 1) * (alpha + 3) / (alpha * (alpha + 2))


def gram_pair(f: DiskFunction, alpha: float, nmax: int = TRIAL_DEGREE, tol: float = 1e-10):
    """(A, B) with h^* A h = ||S_f h||^2_{alpha+4}, h^* B h = ||h||^2_alpha on polynomials."""
    alpha = check_alpha(alpha)
    A = (alpha + 3) * gram_matrix(lambda z: np.abs(schwarzian_at(f, z)) ** 2, alpha + 2.0, nmax, tol)
    B = (alpha - 1) * gram_matrix(lambda z: np.ones(z.shape), alpha - 2.0, nmax, tol)
    return A, B


def gram_operator_norm(f: DiskFunction, alpha: float, nmax: int = TRIAL_DEGREE, tol: float = 1e-10) -> float:
    """Largest Rayleigh ratio of M_f over polynomials of degree <= nmax."""
    A, B = gram_pair(f, alpha, nmax, tol)
    return float(eigh(A, B, eigvals_only=True)[-1])


@dataclass(frozen=True)
class MultiplierReport:
    f: str
    alpha: float
    k: float
    trials: int
    max_ratio: float
    theorem1_bound: float
    shimorin_bound: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def theorem1_ratios(
    f: DiskFunction,
    alpha: float,
    trials: int = 100,
    seed: int = 0,
    tol: float = 1e-6,
    a_ladder: Sequence[float] = DEFAULT_A_LADDER,
    degree: int = TRIAL_DEGREE,
) -> dict:
    """Observed ratios ||M_f h||^2 / ||h||^2 grouped by probe family."""
    alpha = check_alpha(alpha)
    qtol = min(tol, 1e-8)
    A, B = gram_pair(f, alpha, max(degree, 16), qtol)
    rng = np.random.default_rng(seed)
    random = []
    for _ in range(trials):
        c = np.zeros(A.shape[0], dtype=complex)
        c[: degree + 1] = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        random.append(float(np.real(c.conj() @ A @ c) / np.real(c.conj() @ B @ c)))
    basis = [float(A[n, n].real / B[n, n].real) for n in range(17)]
    probes = [multiplier_ratio(f, kernel_probe(a, alpha), alpha, qtol) for a in a_ladder]
    gram = float(eigh(A, B, eigvals_only=True)[-1])
    return {"random": random, "basis": basis, "probes": probes, "gram": gram}


def theorem1_check(
    f: DiskFunction,
    k: Optional[float] = None,
    alpha: float = 3.0,
    trials: int = 100,
    seed: int = 0,
    tol: float = 1e-6,
    a_ladder: Sequence[float] = DEFAULT_A_LADDER,
) -> MultiplierReport:
    """Compare the largest observed multiplier ratio with 36 (alpha+1) k^2 / (alpha-1).

    ``k`` defaults to the function's stored dilatation bound.
    """
    if k is None:
        k = f.dilatation_bound
    if k is None:
        raise DomainError("no admissible dilatation bound k for " + f.label)
    if not 0 <= k < 1:
        raise DomainError("k must lie in [0, 1)")
    ratios = theorem1_ratios(f, alpha, trials, seed, tol, a_ladder)
    observed = ratios["random"] + ratios["basis"] + ratios["probes"] + [ratios["gram"]]
    max_ratio = max(0.0, max(observed))
    bound = theorem1_bound(alpha, k)
    shim = shimorin_bound(alpha) if alpha > 2 else None
    return MultiplierReport(
        f=f.label, alpha=float(alpha), k=float(k), trials=int(trials), max_ratio=max_ratio,
        theorem1_bound=bound, shimorin_bound=shim, passed=bool(max_ratio <= bound * (1 + 10 * tol)),
    )


def brennan_objective(alpha: float) -> float:
    return 1.0 - 3.0 / (alpha**2 + 2 * alpha)


@dataclass(frozen=True)
class BrennanThreshold:
    inf_value: float
    k_star: float
    alpha_argmin: float
    note: str = "infimum approached as alpha -> 2+, not attained"


def brennan_threshold(alphas: Optional[Sequence[float]] = None, a_max: float = 100.0) -> BrennanThreshold:
    """inf over alpha > 2 of 1 - 3/(alpha^2 + 2 alpha), and k* = sqrt of it.

    The grid minimum is refined towards the left endpoint by alpha = 2 + 10^-m.
    """
    if alphas is None:
        alphas = np.linspace(2.0, a_max, 981)[1:]
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 2):
        raise DomainError("brennan_threshold grid must lie in alpha > 2")
    vals = np.array([brennan_objective(a) for a in alphas])
    i = int(np.argmin(vals))
    best_a, best = float(alphas[i]), float(vals[i])
    if i == 0:
        gap = best_a - 2.0
        for m in range(1, 13):
            a = 2.0 + min(gap, 10.0**-m)
            v = brennan_objective(a)
            if v < best:
                best_a, best = a, v
    return BrennanThreshold(best, float(np.sqrt(best)), best_a)


def theorem2_gate(alpha, k) -> tuple[bool, bool]:
    """Both sides of the equivalence, evaluated in exact rational arithmetic.

    Returns ([36(alpha+1)k^2/(alpha-1) <= shimorin_bound(alpha)], [k^2 <= 1 - 3/(alpha^2+2alpha)]).
    """
    a, kk = Fraction(alpha), Fraction(k)
    if a <= 2:
        raise DomainError("gate needs alpha > 2")
    lhs = 36 * (a + 1) * kk**2 / (a - 1) <= 36 * (a + 1) * (a + 3) / (a * (a + 2))
    rhs = kk**2 <= 1 - Fraction(3) / (a**2 + 2 * a)
    return lhs, rhs


def inverse_deriv_norm(f: DiskFunction, alpha: float, r: float, tol: float = 1e-10) -> float:
    """||1/f_r'||_alpha for the dilation f_r(z) = f(r z), f_r' = r f'(r z)."""
    alpha = check_alpha(alpha, 2.0)
    if not 0 < r < 1:
        raise DomainError("dilation radius must lie in (0, 1)")

    def inv(z):
        d = r * f.deriv(r * z, 1)
        if np.any(d == 0):
            raise NumericalError("critical point: f' vanishes")
        return 1.0 / d

    res = weighted_norm_sq(inv, alpha, tol)
    if res.diverged:
        raise NormInfinite("norm infinite")
    return float(np.sqrt(res.value))


def basis_image_norms_sq(f: DiskFunction, alpha: float, nmax: int, tol: float = 1e-10) -> np.ndarray:
    """||M_f e_n||^2_{alpha+4} for n = 0..nmax from one Gram sweep."""
    alpha = check_alpha(alpha)
    moments = gram_matrix(lambda z: np.abs(schwarzian_at(f, z)) ** 2, alpha + 2.0, nmax, tol)
    c2 = np.array([basis_coefficient(n, alpha) ** 2 for n in range(nmax + 1)])
    return (alpha + 3) * c2 * np.real(np.diag(moments))
