import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osc_circle import ConfigError, DomainError
from osc_circle.algebra import CurvatureContext, RhoMode
from osc_circle.states import (
    StateVector,
    build_state,
    eigen_residual,
    normalization,
    standard_coherent_state,
)

from . import oracles


def test_normalization_examples():
    ctx = CurvatureContext(1.0)
    assert normalization(ctx, 0.0).value == 1.0
    assert normalization(ctx, 1.0, n_max=200).value == pytest.approx(1.7840832249321356, rel=1e-14)
    assert normalization(ctx, 3.0, n_max=500).value == pytest.approx(48.950347938400305, rel=1e-13)


def test_normalization_flat_is_exponential():
    assert normalization(CurvatureContext(0.0), 2.0, n_max=100).value == pytest.approx(math.exp(4.0), rel=1e-14)


def test_normalization_partial_sums_increase():
    ctx = CurvatureContext(0.5)
    sums = [normalization(ctx, 2.0, n_max=k).value for k in range(40)]
    assert all(b > a for a, b in zip(sums[:10], sums[1:11]))
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_known_coefficients():
    st_ = build_state(CurvatureContext(1.0), 3.0)
    ref = [0.14292957700888084, 0.3370928516634522, 0.49134816377772253, 0.52597163581601221]
    assert np.allclose(st_.coeffs[:4], ref, rtol=1e-13, atol=0)


@pytest.mark.parametrize("lam,z", [(0.3, 0.7), (1.0, 2.0), (4.0, 5.0)])
def test_coefficients_against_mpmath(lam, z):
    st_ = build_state(CurvatureContext(lam), z)
    ref = oracles.amplitudes(lam, z, st_.n_max + 200)
    assert np.allclose(st_.coeffs, [float(c) for c in ref[: st_.n_max + 1]], rtol=1e-12, atol=1e-300)


def test_vacuum():
    s = build_state(CurvatureContext(2.0), 0.0)
    assert s.n_max == 0 and s.coeffs.tolist() == [1.0] and s.tail_mass == 0.0
    assert eigen_residual(s).residual == 0.0


def test_flat_limit_matches_glauber():
    s = build_state(CurvatureContext(0.0), 1.7)
    assert np.allclose(s.coeffs, standard_coherent_state(1.7, s.n_max), rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf])
def test_bad_z(bad):
    with pytest.raises(DomainError):
        build_state(CurvatureContext(1.0), bad)


@pytest.mark.parametrize("eps", [0.0, 1.0, -1e-3, 2.0])
def test_bad_epsilon(eps):
    with pytest.raises(ConfigError):
        build_state(CurvatureContext(1.0), 1.0, epsilon=eps)


def test_paper_mode_needs_curvature():
    with pytest.raises(DomainError):
        build_state(CurvatureContext(0.0), 1.0, RhoMode.PAPER)


def test_paper_mode_differs_from_canonical():
    ctx = CurvatureContext(1.0)
    a = build_state(ctx, 2.0, "canonical")
    b = build_state(ctx, 2.0, "paper")
    assert a.n_max != b.n_max or not np.allclose(a.coeffs, b.coeffs)
    assert math.fsum(b.probabilities) == pytest.approx(1.0, abs=1e-14)


def test_large_z_stays_finite():
    s = build_state(CurvatureContext(0.01), 40.0)
    assert np.all(np.isfinite(s.coeffs))
    assert math.fsum(s.probabilities) == pytest.approx(1.0, abs=1e-13)


def test_json_round_trip():
    s = build_state(CurvatureContext(0.5), 1.25, epsilon=1e-12)
    back = StateVector.from_json(s.to_json())
    assert np.array_equal(back.coeffs, s.coeffs)
    assert (back.n_max, back.tail_mass, back.lam, back.z, back.mode, back.epsilon, back.log_norm) == \
        (s.n_max, s.tail_mass, s.lam, s.z, s.mode, s.epsilon, s.log_norm)


def test_eigen_residual_reports_truncation():
    s = build_state(CurvatureContext(1.0), 2.0)
    r = eigen_residual(s)
    assert r.residual < 1e-13
    assert r.top_truncation == pytest.approx(2.0 * s.coeffs[-1])


lam_st = st.sampled_from([0.0, 1e-4, 0.1, 0.5, 1.0, 2.0, 5.0])
z_st = st.floats(0.0, 6.0)
eps_st = st.sampled_from([1e-6, 1e-10, 1e-14])


@settings(max_examples=60, deadline=None)
@given(lam_st, z_st, eps_st)
def test_state_invariants(lam, z, eps):
    s = build_state(CurvatureContext(lam), z, epsilon=eps)
    assert s.coeffs.size == s.n_max + 1
    assert np.all(s.coeffs >= 0)
    assert abs(math.fsum(s.probabilities) - 1.0) < 1e-13
    assert s.tail_mass <= eps
    assert eigen_residual(s).residual < 1e-12


@settings(max_examples=30, deadline=None)
@given(lam_st, st.floats(0.05, 4.0))
def test_tail_bound_is_honest(lam, z):
    """The reported tail bound dominates the actual discarded mass."""
    ctx = CurvatureContext(lam)
    s = build_state(ctx, z, epsilon=1e-8)
    total = normalization(ctx, z, n_max=s.n_max + 400).value
    kept = normalization(ctx, z, n_max=s.n_max).value
    assert (total - kept) / kept <= s.tail_mass * (1 + 1e-9) + 1e-15


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 4.0))
def test_epsilon_monotone_cutoff(z):
    ctx = CurvatureContext(0.5)
    sizes = [build_state(ctx, z, epsilon=e).n_max for e in (1e-4, 1e-8, 1e-12)]
    assert sizes == sorted(sizes)
