"""Boundary-curve diagnostics from the Schwarzian of the Riemann map.

Every condition here is a limit (r -> 1, |a| -> 1, |I| -> 0); the functions
return finite ladders and the labels are trend readings, never proofs.
Thresholds: decay by a factor >= 10 across a ladder reads as "consistent",
a profile flat to within 5% reads as "inconsistent", anything else is
"inconclusive".
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import betaln, gammaln, roots_legendre

from .bergman import Evaluable, as_function, check_alpha, disk_integral, kernel_probe
from .errors import DomainError, NumericalError
from .multiplier import basis_image_norms_sq
from .schwarzian import annulus_sup, schwarzian_at
from .series import DiskFunction

DECAY_FACTOR = 10.0
FLAT_TOL = 0.05
DEFAULT_RADII = (0.5, 0.9, 0.99, 0.999)
DEFAULT_A_LADDER = (0.0, 0.9, 0.99, 0.999)


def trend_label(values: Sequence[float]) -> str:
    v = np.asarray(values, dtype=float)
    first, last = v[0], v[-1]
    if first == 0 and np.all(v == 0):
        return "consistent"
    if last * DECAY_FACTOR <= first:
        return "consistent"
    if np.all(np.abs(v - first) <= FLAT_TOL * abs(first)):
        return "inconsistent"
    return "inconclusive"


def weighted_schwarzian(f: DiskFunction) -> Callable[[np.ndarray], np.ndarray]:
    def g(z):
        return np.abs(schwarzian_at(f, z)) * (1 - np.abs(z) ** 2) ** 2

    return g


def asymptotic_probe(f: DiskFunction, radii: Sequence[float] = DEFAULT_RADII, depth: int = 10) -> list:
    """[(r, sup_{|z| >= r} |S_f| (1-|z|^2)^2)] on a boundary-clustered grid."""
    g = weighted_schwarzian(f)
    return [(float(r), annulus_sup(g, float(r), depth).value) for r in radii]


def bloch_dilation_gap(f: DiskFunction, r: float, depth: int = 10) -> float:
    """sup |S_f(r z) - S_f(z)| (1-|z|^2)^2."""
    if not 0 < r <= 1:
        raise DomainError("dilation radius must lie in (0, 1]")

    def g(z):
        return np.abs(schwarzian_at(f, r * z) - schwarzian_at(f, z)) * (1 - np.abs(z) ** 2) ** 2

    return annulus_sup(g, 0.0, depth).value


def wp_energy(f: DiskFunction, tol: float = 1e-8) -> float:
    """\\iint |S_f|^2 (1-|z|^2)^2 dx dy, or inf when the quadrature diverges."""
    res = disk_integral(lambda z: np.abs(schwarzian_at(f, z)) ** 2, tol, 2.0)
    return math.inf if res.diverged else res.value


class HSSum(NamedTuple):
    partial_sum: float
    integral_value: float
    rel_gap: float
    status: str
    partial_sums: tuple


def hs_sum(
    f: DiskFunction, alpha: float = 3.0, N: int = 48, tol: float = 1e-10, energy: Optional[float] = None
) -> HSSum:
    """sum_{n<=N} ||M_f e_n||^2_{alpha+4} against (alpha+3) \\iint |S_f|^2 (1-|z|^2)^2.

    ``energy`` reuses an already computed :func:`wp_energy`.
    """
    alpha = check_alpha(alpha)
    if not 0 <= N <= 64:
        raise DomainError("N must lie in 0..64")
    terms = basis_image_norms_sq(f, alpha, N, tol)
    partial = np.cumsum(terms)
    if energy is None:
        energy = wp_energy(f, tol)
    total = float(partial[-1])
    if math.isinf(energy):
        growing = bool(np.all(np.diff(partial) > 0))
        status = "both divergent" if growing else "integral divergent"
        return HSSum(total, math.inf, math.inf, status, tuple(map(float, partial)))
    integral = (alpha + 3) * energy
    gap = abs(total - integral) / max(integral, np.finfo(float).tiny)
    if integral == 0 and total == 0:
        gap = 0.0
    return HSSum(total, integral, float(gap), "finite", tuple(map(float, partial)))


def hs_tail_estimate(alpha: float, N: int, samples: int = 4000) -> float:
    """Relative Hilbert-Schmidt gap at N when |S_f| is constant.

    sum_{n>N} c_n^2 B(n+1, alpha+3) / B(1, 3), with c_n^2 = Gamma(n+alpha)/(n! Gamma(alpha)).
    """
    n = np.arange(N + 1, N + 1 + samples)
    logc = gammaln(n + alpha) - gammaln(n + 1) - gammaln(alpha)
    return float(3.0 * np.sum(np.exp(logc + betaln(n + 1, alpha + 3))))


def compact_probe(
    f: DiskFunction,
    alpha: float = 3.0,
    a_ladder: Sequence[float] = DEFAULT_A_LADDER,
    direction: float = 0.0,
    tol: float = 1e-8,
) -> list:
    """[(|a|, ||M_f psi_a||_{alpha+4})] with a = |a| e^{i direction}."""
    alpha = check_alpha(alpha)
    ladder = [float(a) for a in a_ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])) or not all(0 <= a < 1 for a in ladder):
        raise DomainError("a ladder must increase strictly inside [0, 1)")
    out = []
    for a in ladder:
        psi = kernel_probe(a * np.exp(1j * direction), alpha)
        res = disk_integral(lambda z: np.abs(schwarzian_at(f, z) * psi(z)) ** 2, tol, alpha + 2.0)
        if res.diverged:
            raise NumericalError("compact probe quadrature diverged")
        out.append((a, float(np.sqrt((alpha + 3) * res.value))))
    return out


@dataclass(frozen=True)
class CarlesonStats:
    sup_ratio: float
    per_depth_max: tuple
    center_ratio: tuple  # box centred at theta = 0, per depth
    argmax_center: tuple  # centre angle of the worst box, per depth

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["depth", "max_ratio", "center_ratio"])
        for d, (m, c) in enumerate(zip(self.per_depth_max, self.center_ratio), 1):
            w.writerow([d, f"{m:.15g}", f"{c:.15g}"])
        return buf.getvalue()


def carleson_sup(f: DiskFunction, max_depth: int = 8, nodes: int = 8) -> CarlesonStats:
    """nu(S(I)) / |I| over dyadic arcs, nu = |S_f|^2 (1-|z|^2)^3 dx dy.

    Depth d has 2^d arcs of length 2 pi 2^-d centred at 2 pi k 2^-d, so one box
    per depth sits on theta = 0.  Box S(I) = {1 - |I| <= r < 1, arg z in I}.
    The measure is integrated once on a polar grid of Gauss-Legendre panels:
    radial panels in 1 - r are dyadic multiples of 2 pi, angular panels are
    dyadic and at least twice as fine as the deepest arc, and finer where
    1 - r is small.  Panel masses are then binned into boxes.
    """
    if not 1 <= max_depth <= 10:
        raise DomainError("max_depth must lie in 1..10")
    x, wx = roots_legendre(nodes)
    # radial panels in u = 1 - r: [2pi 2^-(j+1), 2pi 2^-j] for j >= 3, plus the core
    j_last = max_depth + 5
    bands = [(2 * np.pi / 8, 1.0, 2)]  # (u_lo, u_hi, first box-depth containing it)
    for j in range(3, j_last + 1):
        bands.append((2 * np.pi * 2.0 ** -(j + 1), 2 * np.pi * 2.0**-j, j))
    bands.append((0.0, 2 * np.pi * 2.0 ** -(j_last + 1), j_last + 1))
    per_depth = [np.zeros(2**d) for d in range(1, max_depth + 1)]
    for u_lo, u_hi, j in bands:
        half, mid = (u_hi - u_lo) / 2, (u_hi + u_lo) / 2
        u = mid + half * x
        r = 1 - u
        D = max(max_depth + 1, j + 3)
        npan = 2**D
        th_edges = 2 * np.pi * np.arange(npan) / npan
        th = th_edges[:, None] + (np.pi / npan) * (1 + x)[None, :]  # (npan, nodes)
        z = r[:, None, None] * np.exp(1j * th)[None, :, :]
        dens = np.abs(schwarzian_at(f, z)) ** 2 * (1 - r[:, None, None] ** 2) ** 3
        if not np.all(np.isfinite(dens)):
            raise NumericalError("integrand blowup")
        # weights: radial half*wx, jacobian r, angular (pi/npan)*wx
        mass = np.einsum("i,i,ipq,q->p", half * wx, r, dens, (np.pi / npan) * wx)
        for d in range(1, max_depth + 1):
            if d >= 3 and j < d:
                continue  # band lies below the box floor 1 - |I|
            shift = 2 ** (D - d - 1)
            per_depth[d - 1] += np.roll(mass, shift).reshape(2**d, -1).sum(axis=1)
    maxes, centers, args = [], [], []
    for d, masses in enumerate(per_depth, 1):
        ratio = masses / (2 * np.pi * 2.0**-d)
        k = int(np.argmax(ratio))
        maxes.append(float(ratio[k]))
        centers.append(float(ratio[0]))
        args.append(float(2 * np.pi * k * 2.0**-d))
    return CarlesonStats(max(maxes), tuple(maxes), tuple(centers), tuple(args))


def hardy_kernel(a: complex) -> Callable[[np.ndarray], np.ndarray]:
    """Unit-norm Hardy kernel sqrt(1-|a|^2) / (1 - conj(a) z)."""
    if not abs(a) < 1:
        raise DomainError("Hardy kernel needs |a| < 1")
    a = complex(a)

    def kappa(z):
        return np.sqrt(1 - abs(a) ** 2) / (1 - np.conj(a) * np.asarray(z, dtype=complex))

    return kappa


def ef_functional(f: DiskFunction, h: Evaluable, tol: float = 1e-8) -> float:
    """\\iint |S_f h|^2 (1-|z|^2)^3 dx dy."""
    fn = as_function(h)
    res = disk_integral(lambda z: np.abs(schwarzian_at(f, z) * fn(z)) ** 2, tol, 3.0)
    return math.inf if res.diverged else res.value


def ef_ladder(f: DiskFunction, a_ladder: Sequence[float] = DEFAULT_A_LADDER, tol: float = 1e-8) -> list:
    return [(float(a), ef_functional(f, hardy_kernel(a), tol)) for a in a_ladder]


def chordarc_constant(f: DiskFunction, M: int = 1024, chunk: int = 512) -> float:
    """max over sample pairs of (shorter polygonal arc) / chord on f(S^1)."""
    if M < 16:
        raise DomainError("chordarc needs M >= 16")
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.asarray(f(np.exp(2j * np.pi * np.arange(M) / M)), dtype=complex)
    if not np.all(np.isfinite(w)):
        raise NumericalError("boundary samples are not finite")
    seg = np.abs(np.diff(np.append(w, w[0])))
    if np.any(seg == 0):
        raise NumericalError("degenerate sampling")
    cum = np.concatenate([[0.0], np.cumsum(seg)[:-1]])
    total = float(seg.sum())
    best = 0.0
    for start in range(0, M, chunk):
        i = np.arange(start, min(start + chunk, M))[:, None]
        j = np.arange(M)[None, :]
        mask = j > i
        arc = np.abs(cum[j] - cum[i])
        arc = np.minimum(arc, total - arc)
        chord = np.abs(w[j] - w[i])
        if np.any(mask & (chord == 0)):
            raise NumericalError("degenerate sampling")
        ratio = np.where(mask, arc / np.where(chord == 0, 1.0, chord), 0.0)
        best = max(best, float(ratio.max()))
    return best


@dataclass(frozen=True)
class ClassificationReport:
    f: str
    alpha: float
    asymptotic_profile: list
    asymptotic_label: str
    wp_energy: Optional[float]
    wp_label: str
    hs_sum: dict
    carleson: dict
    carleson_label: str
    compact_probe: list
    compact_label: str
    ef_ladder: list
    chordarc: Optional[float]
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def profile_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "sup_weighted_schwarzian"])
        for r, v in self.asymptotic_profile:
            w.writerow([f"{r:.15g}", f"{v:.15g}"])
        return buf.getvalue()


def classify(
    f: DiskFunction,
    alpha: float = 3.0,
    radii: Sequence[float] = DEFAULT_RADII,
    a_ladder: Sequence[float] = DEFAULT_A_LADDER,
    hs_terms: int = 48,
    max_depth: int = 8,
    chord_samples: int = 1024,
    tol: float = 1e-8,
) -> ClassificationReport:
    notes = []
    profile = asymptotic_probe(f, radii)
    energy = wp_energy(f, tol)
    hs = hs_sum(f, alpha, hs_terms, tol, energy)
    carl = carleson_sup(f, max_depth)
    probe = compact_probe(f, alpha, a_ladder, tol=tol)
    ef = ef_ladder(f, a_ladder, tol)
    try:
        chord = chordarc_constant(f, chord_samples)
    except NumericalError as exc:
        chord = None
        notes.append(f"chordarc: {exc}")
    wp_label = "consistent" if math.isfinite(energy) else "inconsistent"
    deep = carl.per_depth_max[2:]
    carl_label = trend_label(deep)
    if carl_label == "consistent" and any(deep) and any(b >= a for a, b in zip(deep, deep[1:])):
        carl_label = "inconclusive"
    return ClassificationReport(
        f=f.label,
        alpha=float(alpha),
        asymptotic_profile=[list(p) for p in profile],
        asymptotic_label=trend_label([v for _, v in profile]),
        wp_energy=None if math.isinf(energy) else energy,
        wp_label=wp_label,
        hs_sum={
            "N": hs_terms,
            "partial_sum": hs.partial_sum,
            "integral_value": None if math.isinf(hs.integral_value) else hs.integral_value,
            "rel_gap": None if math.isinf(hs.rel_gap) else hs.rel_gap,
            "status": hs.status,
        },
        carleson={
            "sup_ratio": carl.sup_ratio,
            "per_depth_max": list(carl.per_depth_max),
            "center_ratio": list(carl.center_ratio),
        },
        carleson_label=carl_label,
        compact_probe=[list(p) for p in probe],
        compact_label=trend_label([v for _, v in probe]),
        ef_ladder=[list(p) for p in ef],
        chordarc=chord,
        notes=notes,
    )
