import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from oracles import hs_terms, schwarzian_coeffs, weighted_moment, wp_energy_series
from schwarzmult.curveclass import (
    asymptotic_probe,
    bloch_dilation_gap,
    carleson_sup,
    chordarc_constant,
    classify,
    compact_probe,
    ef_functional,
    ef_ladder,
    hardy_kernel,
    hs_sum,
    hs_tail_estimate,
    trend_label,
    wp_energy,
)
from schwarzmult.errors import DomainError, NumericalError


def test_trend_label():
    assert trend_label([1.0, 0.5, 0.01]) == "consistent"
    assert trend_label([6.0, 6.0, 6.0]) == "inconsistent"
    assert trend_label([1.0, 0.5, 0.3]) == "inconclusive"
    assert trend_label([0.0, 0.0]) == "consistent"


def test_profiles(get_fn):
    koebe = asymptotic_probe(get_fn("koebe"))
    assert all(abs(v - 6) < 1e-6 for _, v in koebe)
    quad = [v for _, v in asymptotic_probe(get_fn("quad:0.3"))]
    assert all(b < a for a, b in zip(quad, quad[1:]))
    # sup over |z| >= r of 0.54 (1-|z|^2)^2 / |1 + 0.6 z|^2 is attained at z = -r
    r = 0.99
    assert quad[2] == pytest.approx(0.54 * (1 - r**2) ** 2 / (1 - 0.6 * r) ** 2, rel=1e-9)


def test_dilation_gap(get_fn):
    f = get_fn("quad:0.3")
    assert bloch_dilation_gap(f, 1.0) == 0.0
    gaps = [bloch_dilation_gap(f, r) for r in (0.5, 0.9, 0.99)]
    assert gaps[0] > gaps[1] > gaps[2] > 0


@pytest.mark.parametrize("spec,name,param", [("quad:0.3", "quad", 0.3), ("scaled-koebe:0.4", "scaled-koebe", 0.4)])
def test_wp_energy_series_oracle(get_fn, spec, name, param):
    assert wp_energy(get_fn(spec), 1e-10) == pytest.approx(wp_energy_series(name, param), rel=1e-8)


def test_wp_energy_koebe_divergent(get_fn):
    assert math.isinf(wp_energy(get_fn("koebe")))


def test_hs_sum_two_routes(get_fn):
    hs = hs_sum(get_fn("quad:0.2"), 3.0, 24)
    ref = hs_terms("quad", 0.2, 3.0, 24, nterms=400)
    assert np.allclose(hs.partial_sums, np.cumsum(ref), rtol=1e-9)
    assert hs.integral_value == pytest.approx(6 * wp_energy_series("quad", 0.2), rel=1e-8)
    assert hs.status == "finite" and hs.partial_sum < hs.integral_value


def test_hs_tail_matches_small_eps_limit():
    # as eps -> 0 the Schwarzian of quad(eps) is nearly constant
    terms = hs_terms("quad", 1e-4, 3.0, 48, nterms=60)
    total = 6 * wp_energy_series("quad", 1e-4, 60)
    assert (total - terms.sum()) / total == pytest.approx(hs_tail_estimate(3.0, 48), rel=1e-3)


def test_hs_sum_koebe(get_fn):
    hs = hs_sum(get_fn("koebe"), 3.0, 16, 1e-8)
    assert hs.status == "both divergent" and math.isinf(hs.integral_value)


def test_compact_probe_against_oracle(get_fn):
    f = get_fn("quad:0.3")
    s = schwarzian_coeffs("quad", 0.3, 400)
    ladder = compact_probe(f, 3.0, (0.0, 0.5))
    # psi_0 = 1
    assert ladder[0][1] == pytest.approx(math.sqrt(6 * weighted_moment(s, 0, 5.0)), rel=1e-9)
    with pytest.raises(DomainError):
        compact_probe(f, 3.0, (0.5, 0.2))


def test_ef_functional(get_fn):
    f = get_fn("quad:0.3")
    s = schwarzian_coeffs("quad", 0.3, 400)
    assert ef_functional(f, hardy_kernel(0.0)) == pytest.approx(weighted_moment(s, 0, 3.0), rel=1e-8)
    # E_f is finite for the Koebe function
    koebe = ef_ladder(get_fn("koebe"), (0.0, 0.9))
    assert all(math.isfinite(v) for _, v in koebe)
    # the series converges like 1/n, so 10^6 terms leave a relative tail near 1e-6
    ref = weighted_moment(schwarzian_coeffs("koebe", None, 10**6), 0, 3.0)
    assert koebe[0][1] == pytest.approx(ref, rel=1e-4)


def test_carleson_box_against_dblquad(get_fn):
    f = get_fn("quad:0.3")
    stats = carleson_sup(f, 4)
    S = lambda r, t: abs(-0.54 / (1 + 0.6 * r * np.exp(1j * t)) ** 2) ** 2  # noqa: E731
    for d in (3, 4):
        L = 2 * np.pi * 2.0**-d
        mass, _ = dblquad(lambda r, t: S(r, t) * (1 - r * r) ** 3 * r, -L / 2, L / 2, 1 - L, 1, epsabs=1e-13, epsrel=1e-10)
        assert stats.center_ratio[d - 1] == pytest.approx(mass / L, rel=1e-7)
    assert stats.to_csv().splitlines()[0] == "depth,max_ratio,center_ratio"


def test_carleson_koebe_does_not_decay(get_fn):
    stats = carleson_sup(get_fn("koebe"), 6)
    assert stats.center_ratio[-1] > stats.center_ratio[2] > 1


def test_chordarc(get_fn):
    assert chordarc_constant(get_fn("identity")) == pytest.approx(math.pi / 2, abs=0.01)
    assert chordarc_constant(get_fn("quad:0.3")) > math.pi / 2
    with pytest.raises(NumericalError):
        chordarc_constant(get_fn("koebe"))


def test_classify_identity(get_fn):
    rep = classify(get_fn("identity"))
    d = rep.to_dict()
    assert d["wp_energy"] == 0.0 and d["hs_sum"]["rel_gap"] == 0.0
    assert d["carleson_label"] == "consistent"
    assert rep.profile_csv().splitlines()[0] == "r,sup_weighted_schwarzian"
