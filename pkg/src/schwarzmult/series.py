"""Truncated complex power series and the registry of univalent test functions.

A :class:`TaylorSeries` holds ``c_0 .. c_N`` (coefficient of ``z**n``) and a
truncation order ``N``.  Products, quotients and sums are truncated at the
smaller operand order; a k-th derivative loses k orders.

The registry builds :class:`DiskFunction` objects: analytic maps on the unit
disk with closed-form derivatives up to order three where available, plus an
optional closed-form Schwarzian and a quasiconformal dilatation bound.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import RegistryError, SeriesError

DEFAULT_ORDER = 64

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value: complex, order: int = 0) -> "TaylorSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def monomial(cls, n: int, coeff: complex = 1.0, order: Optional[int] = None) -> "TaylorSeries":
        order = n if order is None else order
        if order < n:
            raise SeriesError("insufficient order")
        c = np.zeros(order + 1, dtype=complex)
        c[n] = coeff
        return cls(c)

    def __call__(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"TaylorSeries([{head}{tail}], order={self.order})"

    def truncate(self, order: int) -> "TaylorSeries":
        if order > self.order:
            raise SeriesError("insufficient order")
        return TaylorSeries(self.coeffs[: order + 1])

    def allclose(self, other: "TaylorSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order) + 1
        return bool(np.allclose(self.coeffs[:n], other.coeffs[:n], rtol=0.0, atol=atol))

    def derive(self, order: int = 1) -> "TaylorSeries":
        return series_derive(self, order)

    def scale_arg(self, r: float) -> "TaylorSeries":
        return series_scale_arg(self, r)

    def __neg__(self):
        return TaylorSeries(-self.coeffs)

    def __add__(self, other):
        if isinstance(other, TaylorSeries):
            n = min(self.order, other.order) + 1
            return TaylorSeries(self.coeffs[:n] + other.coeffs[:n])
        c = self.coeffs.copy()
        c[0] += other
        return TaylorSeries(c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TaylorSeries):
            return series_mul(self, other)
        return TaylorSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            return series_div(self, other)
        return TaylorSeries(self.coeffs / other)

    def __rtruediv__(self, other):
        return series_div(TaylorSeries.constant(other, self.order), self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise SeriesError("only non-negative integer powers are supported")
        out = TaylorSeries.constant(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out


def series_derive(s: TaylorSeries, order: int = 1) -> TaylorSeries:
    if order < 1:
        raise SeriesError("derivative order must be >= 1")
    if order > s.order:
        raise SeriesError("insufficient order")
    k = np.arange(s.order - order + 1)
    # (k+order)!/k! as a running product, exact in floating point for N <~ 170
    falling = np.ones(k.size)
    for i in range(1, order + 1):
        falling = falling * (k + i)
    return TaylorSeries(falling * s.coeffs[order:])


def series_mul(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    n = min(a.order, b.order) + 1
    return TaylorSeries(np.convolve(a.coeffs[:n], b.coeffs[:n])[:n])


def series_div(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    b0 = b.coeffs[0]
    if b0 == 0:
        raise SeriesError("division by series with zero constant term")
    n = min(a.order, b.order) + 1
    ac, bc = a.coeffs[:n], b.coeffs[:n]
    q = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = ac[k]
        if k:
            acc -= np.dot(bc[1 : k + 1], q[k - 1 :: -1])
        q[k] = acc / b0
    return TaylorSeries(q)


def series_scale_arg(s: TaylorSeries, r: float) -> TaylorSeries:
    """Coefficients of ``z -> s(r z)``."""
    return TaylorSeries(s.coeffs * r ** np.arange(s.order + 1))


def read_series_file(path) -> TaylorSeries:
    """Parse ``n re im`` lines; indices not listed are zero."""
    entries = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise RegistryError(f"invalid parameter: {path}:{lineno}: expected 'n re im'")
        n = int(parts[0])
        if n < 0:
            raise RegistryError(f"invalid parameter: {path}:{lineno}: negative index")
        entries[n] = complex(float(parts[1]), float(parts[2]))
    if not entries:
        raise RegistryError(f"invalid parameter: {path} holds no coefficients")
    c = np.zeros(max(entries) + 1, dtype=complex)
    for n, v in entries.items():
        c[n] = v
    return TaylorSeries(c)


def write_series_file(s: TaylorSeries, path) -> None:
    lines = [f"{n} {c.real:.17g} {c.imag:.17g}" for n, c in enumerate(s.coeffs)]
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True, eq=False)
class DiskFunction:
    """An analytic (asserted univalent) function on the unit disk.

    ``derivs(z)`` returns the tuple ``(f, f', f'', f''')`` evaluated at ``z``.
    ``closed_schwarzian`` is used by :func:`schwarzmult.schwarzian.schwarzian_at`
    in preference to the derivative formula when present.
    """

    name: str
    params: tuple
    series: TaylorSeries
    derivs: Callable[[np.ndarray], tuple]
    closed_schwarzian: Optional[ArrayFn] = None
    univalent: bool = True
    dilatation_bound: Optional[float] = None

    def deriv(self, z, order: int = 0):
        if not 0 <= order <= 3:
            raise ValueError("derivative order must be in 0..3")
        return self.derivs(np.asarray(z, dtype=complex))[order]

    def __call__(self, z):
        return self.deriv(z, 0)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(_fmt_param(p) for p in self.params)

    def with_dilatation_bound(self, k: Optional[float]) -> "DiskFunction":
        return dataclasses.replace(self, dilatation_bound=k)


def _fmt_param(p) -> str:
    if isinstance(p, complex):
        if p.imag == 0:
            return f"{p.real:g}"
        return f"{p.real:g}{p.imag:+g}i"
    return f"{p:g}" if isinstance(p, float) else str(p)


def _poly_derivs(coeffs: np.ndarray) -> Callable[[np.ndarray], tuple]:
    cs = [coeffs]
    for _ in range(3):
        cs.append(npoly.polyder(cs[-1]) if cs[-1].size > 1 else np.zeros(1, dtype=complex))

    def derivs(z):
        return tuple(npoly.polyval(z, c) for c in cs)

    return derivs


def _identity(order):
    def derivs(z):
        zero = np.zeros_like(z)
        return z, np.ones_like(z), zero, zero

    return DiskFunction(
        "identity", (), TaylorSeries.monomial(1, order=order), derivs,
        closed_schwarzian=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
    )


def _moebius(order, a, b, c, d):
    det = a * d - b * c
    if det == 0:
        raise RegistryError("invalid parameter: moebius requires ad - bc != 0")
    if abs(c) >= abs(d):
        raise RegistryError("invalid parameter: moebius pole must lie outside the closed disk")

    def derivs(z):
        w = c * z + d
        return (a * z + b) / w, det / w**2, -2 * c * det / w**3, 6 * c**2 * det / w**4

    k = np.arange(order + 1)
    geo = (1.0 / d) * (-c / d) ** k
    coeffs = b * geo
    coeffs[1:] += a * geo[:-1]
    return DiskFunction(
        "moebius", (a, b, c, d), TaylorSeries(coeffs), derivs,
        closed_schwarzian=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
    )


def _scaled_koebe(order, q, name="scaled-koebe"):
    def derivs(z):
        u = 1 - q * z
        return (
            z / u**2,
            (1 + q * z) / u**3,
            2 * q * (q * z + 2) / u**4,
            6 * q**2 * (q * z + 3) / u**5,
        )

    n = np.arange(order + 1, dtype=float)
    coeffs = n * q ** np.maximum(n - 1, 0)
    params = () if name == "koebe" else (q,)
    return DiskFunction(
        name, params, TaylorSeries(coeffs), derivs,
        closed_schwarzian=lambda z: -6 * q**2 / (1 - q**2 * np.asarray(z, dtype=complex) ** 2) ** 2,
    )


def _quad(order, eps):
    def derivs(z):
        return z + eps * z**2, 1 + 2 * eps * z, np.full_like(z, 2 * eps), np.zeros_like(z)

    coeffs = np.zeros(max(order, 2) + 1, dtype=complex)
    coeffs[1], coeffs[2] = 1.0, eps
    return DiskFunction(
        "quad", (eps,), TaylorSeries(coeffs), derivs,
        closed_schwarzian=lambda z: -6 * eps**2 / (1 + 2 * eps * np.asarray(z, dtype=complex)) ** 2,
    )


def _from_series(name, params, s: TaylorSeries, order):
    c = s.coeffs
    if s.order < order:
        c = np.concatenate([c, np.zeros(order - s.order, dtype=complex)])
    return DiskFunction(name, params, TaylorSeries(c), _poly_derivs(np.asarray(s.coeffs)))


def _real_param(p, what):
    v = complex(p)
    if v.imag != 0:
        raise RegistryError(f"invalid parameter: {what} must be real")
    return v.real


def _complex_param(p):
    v = complex(p)
    return v.real if v.imag == 0 else v


REGISTRY_NAMES = ("identity", "moebius", "koebe", "scaled-koebe", "quad", "poly", "series-file")


def registry_build(
    name: str,
    params: Sequence = (),
    order: int = DEFAULT_ORDER,
    with_dilatation: bool = True,
) -> DiskFunction:
    """Build a registry function by name.

    ``with_dilatation`` attaches the Ahlfors-Weill dilatation bound (when the
    Schwarzian norm is below 2); set it False to skip the grid sweep.
    """
    params = tuple(params)

    def nparams(expected):
        if len(params) != expected:
            raise RegistryError(f"invalid parameter: {name} takes {expected} parameter(s)")

    if name == "identity":
        nparams(0)
        f = _identity(order)
        # Schwarzian vanishes identically: k = 0 without a sweep
        return f.with_dilatation_bound(0.0) if with_dilatation else f
    if name == "moebius":
        nparams(4)
        f = _moebius(order, *(_complex_param(p) for p in params))
        return f.with_dilatation_bound(0.0) if with_dilatation else f
    if name == "koebe":
        nparams(0)
        f = _scaled_koebe(order, 1.0, name="koebe")
    elif name == "scaled-koebe":
        nparams(1)
        q = _real_param(params[0], "q")
        if not 0 < q < 1:
            raise RegistryError("invalid parameter: scaled-koebe needs 0 < q < 1")
        f = _scaled_koebe(order, q)
    elif name == "quad":
        nparams(1)
        eps = _complex_param(params[0])
        if abs(eps) > 0.5:
            raise RegistryError("invalid parameter: quad needs |eps| <= 1/2")
        f = _quad(order, eps)
    elif name == "poly":
        if not params:
            raise RegistryError("invalid parameter: poly needs at least one coefficient")
        cs = [0.0] + [_complex_param(p) for p in params]
        if cs[1] == 0:
            raise RegistryError("invalid parameter: poly needs c1 != 0")
        f = _from_series("poly", tuple(cs[1:]), TaylorSeries(cs), max(order, len(cs) - 1))
    elif name == "series-file":
        nparams(1)
        s = read_series_file(params[0])
        f = _from_series("series-file", (str(params[0]),), s, max(order, s.order))
    else:
        raise RegistryError(f"unknown function: {name!r}")

    if with_dilatation:
        from .schwarzian import ahlfors_weill_k

        f = f.with_dilatation_bound(ahlfors_weill_k(f))
    return f


def parse_fn_spec(spec: str) -> tuple[str, tuple]:
    """Split ``name:p1,p2`` into the name and parameter tuple.

    Parameters parse as floats, or complex with an ``i``/``j`` suffix.
    ``series-file:PATH`` keeps the path verbatim.
    """
    name, _, rest = spec.partition(":")
    name = name.strip()
    if not rest:
        return name, ()
    if name == "series-file":
        return name, (rest,)
    return name, tuple(parse_number(p) for p in rest.split(","))


def parse_number(text: str):
    t = text.strip().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    try:
        v = complex(t.replace("i", "j"))
    except ValueError:
        raise RegistryError(f"invalid parameter: cannot parse {text!r}") from None
    return v.real if v.imag == 0 else v


def build_from_spec(spec: str, order: int = DEFAULT_ORDER, with_dilatation: bool = True) -> DiskFunction:
    name, params = parse_fn_spec(spec)
    return registry_build(name, params, order=order, with_dilatation=with_dilatation)


__all__ = [
    "DEFAULT_ORDER",
    "DiskFunction",
    "REGISTRY_NAMES",
    "TaylorSeries",
    "build_from_spec",
    "parse_fn_spec",
    "parse_number",
    "read_series_file",
    "registry_build",
    "series_derive",
    "series_div",
    "series_mul",
    "series_scale_arg",
    "write_series_file",
]
