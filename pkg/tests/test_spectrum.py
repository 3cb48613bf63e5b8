import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import deriv_taylor_scaled_koebe, means_from_coeffs
from schwarzmult.errors import DomainError
from schwarzmult.spectrum import (
    hedenmalm_bound,
    hedenmalm_roots,
    hedenmalm_switch,
    integral_means,
    spectrum_estimate,
)


def test_identity_means(get_fn):
    assert integral_means(get_fn("identity"), -2.0, 0.9) == pytest.approx(2 * np.pi)


@pytest.mark.parametrize("q,r", [(0.5, 0.9), (0.9, 0.99), (1.0, 0.9)])
def test_means_parseval_oracle(get_fn, q, r):
    f = get_fn("koebe" if q == 1 else f"scaled-koebe:{q}")
    a = deriv_taylor_scaled_koebe(q, 20000)
    assert integral_means(f, 2.0, r) == pytest.approx(means_from_coeffs(a, r), rel=1e-8)


def test_koebe_negative_two_parseval(get_fn):
    # 1/f' = (1-z)^3/(1+z); its coefficients have modulus 8 from n = 3 on
    n = 200000
    b = np.convolve([1, -3, 3, -1], (-1.0) ** np.arange(n))[:n]
    assert np.allclose(np.abs(b[:6]), [1, 4, 7, 8, 8, 8])
    f = get_fn("koebe")
    i99, i9 = integral_means(f, -2.0, 0.99), integral_means(f, -2.0, 0.9)
    assert i99 == pytest.approx(means_from_coeffs(b, 0.99), rel=1e-8)
    assert i99 / i9 == pytest.approx(means_from_coeffs(b, 0.99) / means_from_coeffs(b, 0.9), rel=1e-8)


def test_spectrum_estimates(get_fn):
    ident = spectrum_estimate(get_fn("identity"), -2.0)
    assert abs(ident.beta_hat) < 1e-8
    koebe = spectrum_estimate(get_fn("koebe"), -2.0)
    assert koebe.beta_hat == pytest.approx(1.0, abs=0.1) and koebe.reliable
    d = koebe.to_dict()
    assert len(d["radii"]) == 8 and d["reliable"]
    assert koebe.to_csv().splitlines()[0] == "r,I_t"


def test_spectrum_guards(get_fn):
    with pytest.raises(DomainError):
        spectrum_estimate(get_fn("identity"), 1.0, j_max=15)
    with pytest.raises(DomainError):
        integral_means(get_fn("identity"), 1.0, 1.0)


def test_hedenmalm_roots():
    k0, k1 = hedenmalm_roots()
    assert k0 * (1 + 7 * k0) ** 2 == pytest.approx(1, abs=1e-10)
    assert (2 * k1 - 1) * (1 + 7 * k1) ** 2 == pytest.approx(1, abs=1e-10)
    assert k0 == pytest.approx(0.18726, abs=1e-5)
    assert k1 == pytest.approx(0.52301, abs=1e-5)


@given(st.floats(0.01, 0.99))
def test_bound_continuous_at_switch(k):
    t = hedenmalm_switch(k)
    lo = hedenmalm_bound(k, t * (1 - 1e-12))
    hi = hedenmalm_bound(k, t * (1 + 1e-12))
    assert lo.regime == "small" and hi.regime == "large"
    assert lo.bound == pytest.approx(hi.bound, rel=1e-9, abs=1e-12)


@given(st.floats(0.01, 0.99), st.floats(-20, 20))
def test_bound_even_in_t(k, t):
    assert hedenmalm_bound(k, t).bound == pytest.approx(hedenmalm_bound(k, -t).bound)


def test_switch_at_minus_two_is_k0():
    k0, _ = hedenmalm_roots()
    assert hedenmalm_switch(k0) == pytest.approx(2.0)
    # below k0 the small-|t| formula governs t = -2
    assert hedenmalm_bound(0.1, -2).regime == "small"
    assert hedenmalm_bound(0.3, -2).regime == "large"
    with pytest.raises(DomainError):
        hedenmalm_bound(1.0, -2)
