"""Kernel construction: bump profile, autocorrelation, kernel table, psi."""

import numpy as np
import pytest
from scipy.integrate import quad, simpson
from scipy.special import j0

from discrepancy_forge.kernel import (
    DecayProfile,
    KernelTable,
    autocorrelate,
    autocorrelation_values,
    build_bump,
    build_kernel_table,
    bump_raw,
    load_kernel,
    psi,
    save_kernel,
)

EXP_MINUS_2PI = np.exp(-2 * np.pi)

# frozen from the nested-interval adaptive quadrature oracle below
C2_EXPECTED = 193.1249033588253


def test_bump_vanishes_at_support_boundary():
    bump = build_bump(1, 1.0 / 256)
    assert bump(0.5) == 0.0
    assert bump.samples[-1] == 0.0


def test_bump_square_integral_is_one(bump2):
    # independent check of the normalization with adaptive quadrature
    c = bump2.normalization
    val, _ = quad(lambda r: (c * bump_raw(r)) ** 2 * r, 0.0, 0.5,
                  epsabs=1e-16, epsrel=1e-13)
    assert abs(2 * np.pi * val - 1.0) < 1e-8


def test_bump_normalization_matches_adaptive_oracle(bump2):
    val, _ = quad(lambda r: bump_raw(r) ** 2 * r, 0.0, 0.5, epsabs=1e-16, epsrel=1e-13)
    c2_oracle = 1.0 / np.sqrt(2 * np.pi * val)
    assert abs(bump2.normalization - c2_oracle) / c2_oracle < 1e-6
    assert abs(bump2.normalization - C2_EXPECTED) / C2_EXPECTED < 1e-9


def test_bump_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_bump(4, 1.0 / 256)
    with pytest.raises(ValueError):
        build_bump(2, 1.0 / 32)


def test_autocorrelation_normalization_and_support(bump2):
    grid, values, err = autocorrelate(bump2)
    assert abs(values[0] - 1.0) < 1e-6
    assert values[-1] == pytest.approx(0.0, abs=1e-12)
    assert err < 1e-8


def test_autocorrelation_matches_monte_carlo(bump2):
    # Monte Carlo convolution over the support disk, 1e7 samples, 3 sigma
    rng = np.random.default_rng(20240817)
    n = 10 ** 7
    r = 0.5 * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    eta = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    vals = bump2(np.hypot(eta[:, 0], eta[:, 1])) * bump2(np.hypot(0.5 - eta[:, 0], eta[:, 1]))
    area = np.pi * 0.25
    est = area * vals.mean()
    se = area * vals.std(ddof=1) / np.sqrt(n)
    direct, _ = autocorrelation_values(bump2, np.array([0.5]))
    assert abs(est - direct[0]) < 3 * se


def test_tail_integral_normalized(kernel2):
    assert abs(kernel2.tail_integral(0.0) - 1.0) < 1e-6


def test_tail_ratio_claim(kernel2):
    # I(t+1) >= exp(-2 pi) I(t) on the whole table, slack 1e-9
    step = kernel2.tail_grid[1] - kernel2.tail_grid[0]
    shift = int(round(1.0 / step))
    lhs = kernel2.tail[shift:]
    rhs = EXP_MINUS_2PI * kernel2.tail[:-shift]
    assert np.all(lhs >= rhs - 1e-9)
    assert abs(EXP_MINUS_2PI - 1.867442e-3) < 1e-9


def test_kernel_positivity_and_mean(kernel2):
    assert kernel2.kvals.min() >= -kernel2.quadrature_tolerance
    s = kernel2.kvals_grid
    mean = 2 * np.pi * np.trapezoid(kernel2.kvals * s, s)
    assert abs(mean - 1.0) < 1e-5


def test_gamma_matches_monte_carlo_ball_integral(kernel2):
    # gamma^{-1} = exp(-2 pi) * integral of K over the unit ball
    rng = np.random.default_rng(7)
    n = 10 ** 6
    radii = np.sqrt(rng.random(n))  # uniform on the unit disk
    vals = kernel2.kernel_value(radii)
    est = np.pi * vals.mean()
    se = np.pi * vals.std(ddof=1) / np.sqrt(n)
    assert abs(est - kernel2.ball_mass) < 3 * se
    assert kernel2.gamma == pytest.approx(np.exp(2 * np.pi) / kernel2.ball_mass)


def test_transform_round_trip(kernel2):
    # forward radial transform of tabulated K recovers khat within 1e-4 sup norm
    s = kernel2.kvals_grid
    rr = np.linspace(0.0, 1.0, 101)
    fwd = np.array([2 * np.pi * simpson(kernel2.kvals * j0(2 * np.pi * r * s) * s, x=s)
                    for r in rr])
    assert np.max(np.abs(fwd - kernel2.khat_value(rr))) < 1e-4


def test_khat_support_and_normalization(kernel2):
    assert kernel2.khat_value(1.0) == 0.0
    assert kernel2.khat_value(1.7) == 0.0
    assert abs(kernel2.khat_value(0.0) - 1.0) < 1e-6


def test_psi_basics(kernel2):
    assert psi(kernel2, 0.0) == pytest.approx(4 * kernel2.gamma, rel=1e-9)
    t = np.linspace(0.0, 40.0, 1000)
    vals = psi(kernel2, t)
    assert np.all(np.diff(vals) <= 1e-12)
    with pytest.raises(ValueError):
        psi(kernel2, -0.5)


def test_decay_profile_polynomial_fits(kernel2):
    profile = DecayProfile.from_kernel(kernel2)
    c4 = profile.fitted_c(4)
    assert np.isfinite(c4) and c4 < 1e6
    # regression pin for the default d=2 build
    assert c4 == pytest.approx(2.2367e5, rel=2e-3)
    for alpha in (2, 8):
        assert np.isfinite(profile.fitted_c(alpha))


def test_psi_h_identity(kernel2):
    # psi(2t)/4 == gamma * I(t): both routes share the tail table
    t = np.linspace(0.0, 20.0, 200)
    lhs = psi(kernel2, 2 * t) / 4.0
    rhs = kernel2.gamma * kernel2.tail_integral(t)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=0)


def test_build_preconditions(bump2):
    with pytest.raises(ValueError):
        build_kernel_table(2, bump2, x_max=10.0)
    with pytest.raises(ValueError):
        build_kernel_table(2, bump2, x_max=25.0, t_max=20.0)
    with pytest.raises(ValueError):
        build_kernel_table(1, bump2)


def test_serialization_round_trip(tmp_path, kernel2):
    path = tmp_path / "kernel.json"
    save_kernel(kernel2, path)
    loaded = load_kernel(path)
    assert loaded.gamma == kernel2.gamma
    assert np.array_equal(loaded.kvals, kernel2.kvals)
    assert np.array_equal(loaded.tail, kernel2.tail)
    assert loaded.provenance == kernel2.provenance
    # interpolators rebuilt identically
    t = np.linspace(0, 25, 50)
    assert np.array_equal(loaded.tail_integral(t), kernel2.tail_integral(t))
    with pytest.raises(ValueError):
        KernelTable.from_dict({"format": "something-else"})


@pytest.mark.parametrize("d", [1, 3])
def test_other_dimensions_build(d):
    bump = build_bump(d, 1.0 / 128)
    tab = build_kernel_table(d, bump)
    assert abs(tab.tail_integral(0.0) - 1.0) < 1e-6
    assert tab.kvals.min() >= -tab.quadrature_tolerance
    step = tab.tail_grid[1] - tab.tail_grid[0]
    shift = int(round(1.0 / step))
    assert np.all(tab.tail[shift:] >= EXP_MINUS_2PI * tab.tail[:-shift] - 1e-9)
