"""Grunsky coefficients and the (strengthened) Grunsky inequality.

Convention: gamma_mn = -[z^m w^n] log((f(z) - f(w)) / (z - w)) for m, n >= 1,
so that the scaled Koebe function z/(1-qz)^2 has gamma_mn = delta_mn q^(2m)/m.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .series import DiskFunction, TaylorSeries

CONVENTION = "gamma_mn = -[z^m w^n] log((f(z)-f(w))/(z-w)); scaled-koebe(q): q^(2m)/m on the diagonal"


@dataclass(frozen=True, eq=False)
class GrunskyMatrix:
    gamma: np.ndarray  # gamma[m-1, n-1]
    source: str
    convention_note: str = CONVENTION

    @property
    def size(self) -> int:
        return self.gamma.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "re", "im"])
        for (i, j), v in np.ndenumerate(self.gamma):
            w.writerow([i + 1, j + 1, f"{v.real:.15g}", f"{v.imag:.15g}"])
        return buf.getvalue()


def grunsky_coefficients(f: DiskFunction, N: int) -> GrunskyMatrix:
    """gamma_mn for 1 <= m, n <= N.

    (f(z)-f(w))/(z-w) = sum_j Q_j(z) w^j with Q_j(z) = sum_i c_{i+j+1} z^i; the
    logarithm L = sum_j L_j(z) w^j follows from Q L' = Q' (prime in w):
    n Q_0 L_n = n Q_n - sum_{k<n} k L_k Q_{n-k}.
    """
    c = f.series.coeffs
    if abs(c[0]) > 1e-14:
        raise DomainError("unnormalized: f(0) must be 0")
    if c[1] == 0:
        raise DomainError("unnormalized: f'(0) must be nonzero")
    if N < 1 or 2 * N + 1 > f.series.order:
        raise DomainError(f"N={N} needs series order >= {2 * N + 1} (have {f.series.order})")
    Q = [TaylorSeries(c[j + 1 : j + 2 + N]) for j in range(N + 1)]
    L = [None] * (N + 1)
    for n in range(1, N + 1):
        acc = Q[n]
        for k in range(1, n):
            acc = acc - (k / n) * (L[k] * Q[n - k])
        L[n] = acc / Q[0]
    gamma = np.array([[-L[n].coeffs[m] for n in range(1, N + 1)] for m in range(1, N + 1)])
    if not np.all(np.isfinite(gamma)):
        raise NumericalError("non-finite Grunsky coefficient")
    gamma.setflags(write=False)
    return GrunskyMatrix(gamma, f.label)


class GrunskyForm(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def grunsky_form(G: GrunskyMatrix, lam: Sequence[complex], k: float = 1.0) -> GrunskyForm:
    """lhs = sum_m m |sum_n gamma_mn lam_n|^2, rhs = k^2 sum_n |lam_n|^2 / n."""
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (G.size,):
        raise DomainError(f"lambda must have length {G.size}")
    if not 0 <= k <= 1:
        raise DomainError("k must lie in [0, 1]")
    idx = np.arange(1, G.size + 1)
    lhs = float(np.sum(idx * np.abs(G.gamma @ lam) ** 2))
    rhs = float(k**2 * np.sum(np.abs(lam) ** 2 / idx))
    return GrunskyForm(lhs, rhs, lhs <= rhs * (1 + 1e-10))


def grunsky_norm(G: GrunskyMatrix) -> float:
    """Smallest k making the strengthened inequality hold for every lambda.

    Equals the spectral norm of sqrt(m) gamma_mn sqrt(n).
    """
    idx = np.sqrt(np.arange(1, G.size + 1))
    return float(np.linalg.norm(idx[:, None] * G.gamma * idx[None, :], 2))
