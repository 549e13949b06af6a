"""Boundary-layer coefficient tables and the empirical decay constant."""

import numpy as np
import pytest

from discrepancy_forge.errors import QuadratureError
from discrepancy_forge.frequencies import integer_ball
from discrepancy_forge.geometry import Ball, Box, minkowski_content
from discrepancy_forge.hfourier import (
    f_constant,
    h_coefficient,
    h_coefficient_table,
    h_zero_by_coarea,
)

BALL = Ball((0.5, 0.5), 0.25)


@pytest.fixture(scope="module")
def table16(kernel2):
    return h_coefficient_table(BALL, kernel2, 16.0, oversample=4)


def test_hermitian_symmetry(table16):
    freqs = integer_ball(10, 2)
    vals = table16.values(freqs)
    conj = table16.values(-freqs)
    assert np.allclose(vals, np.conj(conj), rtol=0, atol=1e-10)


def test_refinement_agreement(kernel2, table16):
    # doubling the grid moves H-hat(1,0) by less than 1e-5
    doubled = h_coefficient_table(BALL, kernel2, 16.0, oversample=8, refine=False)
    k = np.array([[1, 0]])
    assert abs(table16.values(k)[0] - doubled.values(k)[0]) < 1e-5
    assert table16.errors(k)[0] < 1e-5


def test_zero_coefficient_against_coarea(kernel2, table16):
    coarea = h_zero_by_coarea(BALL, kernel2, 16.0)
    assert abs(table16.zero.real - coarea) < 1e-4
    assert abs(table16.zero.imag) < 1e-12


def test_zero_coefficient_remark_inequality(kernel2):
    # H_R-hat(0) <= c M(alpha) R^-alpha with one fitted c across the R grid
    M = minkowski_content(BALL, 1.0).value
    rs = np.array([8.0, 16.0, 32.0, 64.0])
    zeros = np.array([h_coefficient_table(BALL, kernel2, R, oversample=2).zero.real
                      for R in rs])
    c_fit = float(np.max(zeros * rs / M))
    assert np.isfinite(c_fit) and c_fit > 0
    assert np.all(zeros <= c_fit * M / rs + 1e-12)
    # decay is genuinely ~ R^-1: fitted c stable within a factor 2 across R
    ratios = zeros * rs / M
    assert ratios.max() / ratios.min() < 2


def test_single_coefficient_wrapper(kernel2, table16):
    val = h_coefficient(BALL, kernel2, 16.0, (1, 0), oversample=4)
    assert val == pytest.approx(complex(table16.values(np.array([[1, 0]]))[0]), abs=1e-12)


def test_nyquist_guard(kernel2):
    with pytest.raises(QuadratureError):
        h_coefficient_table(BALL, kernel2, 16.0, kmax=200, oversample=1)


def test_f_constant_ball_smooth_decay(kernel2):
    # positive curvature: the (d+1)/2 = 3/2 exponent gives a finite constant
    report = f_constant(BALL, kernel2, alpha=1.5, beta=1.0, k_max=32, r_grid=(8.0, 16.0))
    assert np.isfinite(report.value) and report.value > 0
    assert report.indicator_part <= report.value


def test_f_constant_alpha_zero_is_measure_bound(kernel2):
    report = f_constant(BALL, kernel2, alpha=0.0, beta=0.0, k_max=16, r_grid=(8.0,))
    assert report.indicator_part <= BALL.measure() + 1e-12


def test_f_constant_box_alpha_one_vs_shell_content(kernel2):
    # |chi-hat(k)| |k| <= 2^-2 M(1) from the shell-translation chain
    box = Box((0.1, 0.2), (0.6, 0.55))
    report = f_constant(box, kernel2, alpha=1.0, beta=1.0, k_max=32, r_grid=(8.0,))
    M = minkowski_content(box, 1.0).value
    assert report.indicator_part <= 0.25 * M + 1e-9


def test_f_constant_validates_ranges(kernel2):
    with pytest.raises(ValueError):
        f_constant(BALL, kernel2, alpha=2.0, beta=1.0, k_max=8, r_grid=(8.0,))
    with pytest.raises(ValueError):
        f_constant(BALL, kernel2, alpha=1.0, beta=2.0, k_max=8, r_grid=(8.0,))
