import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sympy_expr, Z
from schwarzmult.errors import RegistryError, SeriesError
from schwarzmult.series import (
    REGISTRY_NAMES,
    TaylorSeries,
    build_from_spec,
    parse_fn_spec,
    read_series_file,
    registry_build,
    series_div,
    series_mul,
    write_series_file,
)

finite = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def series_st(min_order=0, max_order=12, nonzero_const=False):
    def make(cs):
        if nonzero_const and abs(cs[0]) < 0.1:
            cs = [cs[0] + 1.0] + cs[1:]
        return TaylorSeries(cs)

    return st.lists(cplx, min_size=min_order + 1, max_size=max_order + 1).map(make)


@given(series_st(), series_st())
def test_mul_commutes(a, b):
    assert (a * b).allclose(b * a, atol=1e-12)


@given(series_st(), series_st(), series_st())
def test_mul_associates(a, b, c):
    lhs, rhs = (a * b) * c, a * (b * c)
    scale = 1 + max(np.abs(lhs.coeffs).max(), np.abs(rhs.coeffs).max())
    assert lhs.allclose(rhs, atol=1e-11 * scale)


@given(series_st(max_order=8), series_st(max_order=8, nonzero_const=True))
def test_div_roundtrip(a, b):
    q = series_div(a, b)
    back = series_mul(q, b)
    n = min(a.order, b.order)
    scale = 1 + np.abs(q.coeffs).max() * np.abs(b.coeffs).max() * (n + 1)
    assert back.truncate(n).allclose(a.truncate(n), atol=1e-10 * scale)


@given(series_st(max_order=10), st.floats(0.05, 1.0), st.builds(complex, st.floats(-0.8, 0.8), st.floats(-0.8, 0.8)))
def test_scale_arg_matches_evaluation(s, r, z):
    assert np.isclose(s.scale_arg(r)(z), s(r * z), atol=1e-10)


@given(series_st(min_order=3, max_order=10))
def test_derive_matches_polyder(s):
    d = s.derive(2)
    assert np.allclose(d.coeffs, np.polynomial.polynomial.polyder(s.coeffs, 2))


def test_derive_insufficient_order():
    with pytest.raises(SeriesError, match="insufficient order"):
        TaylorSeries([1.0]).derive(2)


def test_div_by_zero_constant():
    with pytest.raises(SeriesError, match="zero constant term"):
        TaylorSeries([1, 2]) / TaylorSeries([0, 1])


def test_pow_and_reciprocal():
    s = TaylorSeries([1.0, -1.0] + [0.0] * 8)
    inv = 1.0 / s  # geometric series
    assert np.allclose(inv.coeffs, np.ones(10))
    assert np.allclose((s**3).coeffs[:4], [1, -3, 3, -1])


def test_series_file_roundtrip(tmp_path):
    s = TaylorSeries([0, 1, 0.25 - 0.5j, 0, 1e-3])
    path = tmp_path / "f.txt"
    write_series_file(s, path)
    assert np.array_equal(read_series_file(path).coeffs, s.coeffs)
    f = build_from_spec(f"series-file:{path}", order=16, with_dilatation=False)
    z = np.array([0.1, -0.3 + 0.2j])
    assert np.allclose(f(z), s(z))
    assert f.series.order == 16


@pytest.mark.parametrize("spec", ["koebe", "scaled-koebe:0.4", "quad:0.3"])
def test_registry_derivatives_match_sympy(spec):
    name, params = parse_fn_spec(spec)
    f = registry_build(name, params, with_dilatation=False)
    expr = sympy_expr(name, params[0] if params else None)
    z = np.array([0.2 + 0.1j, -0.5j, 0.7])
    for k in range(4):
        ref = sp.lambdify(Z, sp.diff(expr, Z, k), "numpy")(z)
        assert np.allclose(f.deriv(z, k), ref, rtol=1e-12)


@pytest.mark.parametrize("spec", ["koebe", "scaled-koebe:0.4", "quad:0.3", "moebius:1,0.5,0.2,2", "poly:1,0.1,0.02"])
def test_series_agrees_with_closed_form(spec):
    f = build_from_spec(spec, order=128, with_dilatation=False)
    z = np.array([0.1, 0.3 - 0.2j, -0.4j])
    assert np.allclose(f.series(z), f(z), rtol=1e-12)


def test_registry_names_and_errors():
    assert set(REGISTRY_NAMES) >= {"identity", "koebe", "scaled-koebe", "quad", "moebius", "poly"}
    with pytest.raises(RegistryError, match="unknown function"):
        build_from_spec("nosuch")
    for bad in ("scaled-koebe:1.5", "quad:0.7", "poly:0,1", "moebius:1,0,2,1", "moebius:1,2,0.5,1", "koebe:1"):
        with pytest.raises(RegistryError, match="invalid parameter"):
            build_from_spec(bad)


def test_parse_complex_param():
    assert parse_fn_spec("quad:0.1+0.2i") == ("quad", (0.1 + 0.2j,))
    assert build_from_spec("quad:0.1+0.2i", with_dilatation=False).label == "quad:0.1+0.2i"


def test_identity_and_moebius_carry_zero_dilatation():
    assert build_from_spec("identity").dilatation_bound == 0.0
    assert build_from_spec("moebius:1,0,0.5,1").dilatation_bound == 0.0


@settings(max_examples=25)
@given(st.floats(0.01, 0.5))
def test_quad_series_coefficients(eps):
    f = build_from_spec(f"quad:{eps!r}", with_dilatation=False)
    assert np.allclose(f.series.coeffs[:4], [0, 1, eps, 0])
