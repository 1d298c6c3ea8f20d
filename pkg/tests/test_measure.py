import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from osc_circle import ConfigError, DomainError
from osc_circle.algebra import CurvatureContext, log_rho
from osc_circle.measure import (
    _log_bessel_k,
    identity_resolution_check,
    log_measure_density,
    measure_density_canonical,
    measure_density_flat,
    moment_ratio,
    verify_moments,
)


@pytest.mark.parametrize("order,y", [(2.5, 0.3), (3.2, 7.0), (12.0, 1e-3), (40.0, 40.0), (400.0, 3.0), (2000.0, 2000.0)])
def test_log_bessel_k_against_mpmath(order, y):
    mp.mp.dps = 30
    ref = float(mp.log(mp.besselk(order, y)))
    assert _log_bessel_k(order, y) == pytest.approx(ref, rel=1e-7, abs=1e-9)


def test_density_at_origin():
    ctx = CurvatureContext(1.0)
    c, b = 0.5, ctx.beta_canonical
    assert measure_density_canonical(ctx, 0.0) == pytest.approx(1.0 / (c * (b - 1.0)), rel=1e-14)
    # continuity into the origin
    assert measure_density_canonical(ctx, 1e-10) == pytest.approx(1.0 / (c * (b - 1.0)), rel=1e-6)


@pytest.mark.parametrize("lam", [0.2, 1.0, 4.0])
def test_density_is_product_of_gammas(lam):
    """Independent route: w is the density of c X Y with X ~ Gamma(1), Y ~ Gamma(b)."""
    ctx = CurvatureContext(lam)
    mp.mp.dps = 30
    c, b = mp.mpf(lam) / 2, mp.mpf(ctx.beta_canonical)
    for x in (0.05, 0.7, 3.0):
        conv = mp.quad(lambda y: mp.exp(-x / (c * y) - y) * y ** (b - 2) / (c * mp.gamma(b)), [0, 1, mp.inf])
        assert measure_density_canonical(ctx, x) == pytest.approx(float(conv), rel=1e-13)


def test_density_domain():
    with pytest.raises(DomainError):
        log_measure_density(CurvatureContext(1.0), -1.0)
    with pytest.raises(DomainError):
        log_measure_density(CurvatureContext(0.0), 1.0)
    with pytest.raises(DomainError):
        measure_density_flat(-0.5)


def test_flat_measure_moments():
    r = verify_moments(CurvatureContext(0.0), n_max=8)
    assert r.passed, r.failures
    assert np.allclose(measure_density_flat([0, 1]), [1, math.exp(-1)])


@pytest.mark.parametrize("lam", [1e-3, 0.1, 1.0, 5.0, 20.0])
def test_moments_match_rho(lam):
    r = verify_moments(CurvatureContext(lam), n_max=12, tol=1e-10)
    assert r.passed, r.failures
    assert max(r.relative_errors) < 1e-10


def test_zeroth_moment_is_normalization():
    ctx = CurvatureContext(0.8)
    total, _ = integrate.quad(lambda x: measure_density_canonical(ctx, x), 0, np.inf, epsrel=1e-12, limit=200)
    assert total == pytest.approx(1.0, rel=1e-9)
    assert moment_ratio(ctx, 0)[0] == pytest.approx(1.0, rel=1e-11)


def test_paper_mode_is_skipped():
    r = verify_moments(CurvatureContext(1.0), "paper")
    assert r.skipped and not r.passed and r.failures


def test_order_limit():
    with pytest.raises(ConfigError):
        verify_moments(CurvatureContext(1.0), n_max=13)
    with pytest.raises(ConfigError):
        verify_moments(CurvatureContext(1.0), tol=0.0)


def test_identity_resolution_weights():
    res = identity_resolution_check(CurvatureContext(0.5), n_max=6)
    assert res.passed
    assert np.allclose(res.weights, 1.0, atol=1e-10)
    assert res.report.as_dict()["quadrature_spec"]


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 30.0), st.integers(0, 12))
def test_moment_property(lam, n):
    ratio, _ = moment_ratio(CurvatureContext(lam), n)
    assert abs(ratio - 1.0) < 1e-9
    assert math.isfinite(log_rho(CurvatureContext(lam), n))


def test_third_moment_at_unit_curvature():
    ctx = CurvatureContext(1.0)
    g = ctx.gamma_tilde
    rho3 = 6 * g * (g + 0.5) * (g + 1.0)
    assert rho3 == pytest.approx(53.83281572999748, rel=1e-14)  # mpmath
    assert math.exp(log_rho(ctx, 3)) == pytest.approx(rho3, rel=1e-14)
    assert moment_ratio(ctx, 3)[0] == pytest.approx(1.0, abs=1e-10)
