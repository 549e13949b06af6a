"""Fourier coefficients of the boundary-layer majorant H_R on the torus.

H_R(x) = psi(2 R dist(x, boundary Omega)) / 4 = gamma * I(R dist(x, boundary)).
Coefficients are computed by tensor-grid quadrature (an FFT of H sampled on
an n x n grid, n a power of two at least max(8R, 256) times an oversampling
factor), with a per-coefficient error estimate from one grid refinement.
The k = 0 coefficient of balls can be cross-checked through the coarea
disintegration over boundary shells, kept here as `h_zero_by_coarea`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError
from .frequencies import integer_ball
from .geometry import Ball, TorusSet
from .kernel import KernelTable


def _fft_resolution(R: float, oversample: int) -> int:
    base = max(int(np.ceil(8 * R)), 256)
    n = 1 << int(np.ceil(np.log2(base)))
    return n * oversample


def h_function_grid(set_: TorusSet, kernel: KernelTable, R: float, n: int) -> np.ndarray:
    dist = set_.distance_grid(n)
    return kernel.gamma * kernel.tail_integral(R * dist)


def _coefficient_block(set_: TorusSet, kernel: KernelTable, R: float,
                       n: int, kmax: int) -> np.ndarray:
    grid = h_function_grid(set_, kernel, R, n)
    fhat = np.fft.fft2(grid) / (n * n)
    idx = np.arange(-kmax, kmax + 1) % n
    return fhat[np.ix_(idx, idx)]


@dataclass
class HCoefficientTable:
    """Block of H_R coefficients for |k|_inf <= kmax with error estimates."""

    R: float
    kmax: int
    grid_n: int
    block: np.ndarray   # complex, index [k1 + kmax, k2 + kmax]
    err: np.ndarray     # per-coefficient refinement error estimate

    def values(self, freqs: np.ndarray) -> np.ndarray:
        freqs = np.atleast_2d(np.asarray(freqs, dtype=np.int64))
        if np.any(np.abs(freqs) > self.kmax):
            raise ValueError("frequency outside tabulated block")
        return self.block[freqs[:, 0] + self.kmax, freqs[:, 1] + self.kmax]

    def errors(self, freqs: np.ndarray) -> np.ndarray:
        freqs = np.atleast_2d(np.asarray(freqs, dtype=np.int64))
        return self.err[freqs[:, 0] + self.kmax, freqs[:, 1] + self.kmax]

    @property
    def zero(self) -> complex:
        return complex(self.block[self.kmax, self.kmax])

    @property
    def zero_error(self) -> float:
        return float(self.err[self.kmax, self.kmax])


def h_coefficient_table(set_: TorusSet, kernel: KernelTable, R: float, *,
                        kmax: int | None = None, oversample: int = 4,
                        refine: bool = True) -> HCoefficientTable:
    """Tabulate H_R coefficients on |k|_inf <= kmax (default: covers |k| < R)."""
    if R <= 0:
        raise ValueError("R must be positive")
    if set_.dimension != 2:
        raise ValueError("coefficient tables are implemented on T^2")
    if kernel.dimension != 2:
        raise ValueError("kernel dimension must match the torus dimension 2")
    if kmax is None:
        kmax = int(np.ceil(R))
    n = _fft_resolution(R, oversample)
    if kmax > n // 4:
        raise QuadratureError(
            f"kmax {kmax} too close to Nyquist of the n = {n} grid; "
            "raise the oversampling factor")
    fine = _coefficient_block(set_, kernel, R, n, kmax)
    if refine:
        coarse = _coefficient_block(set_, kernel, R, n // 2, kmax)
        err = np.abs(fine - coarse) + 1e-15 * kernel.gamma
    else:
        err = np.full(fine.shape, np.nan)
    return HCoefficientTable(R=float(R), kmax=kmax, grid_n=n, block=fine, err=err)


def h_coefficient(set_: TorusSet, kernel: KernelTable, R: float, k, **kwargs) -> complex:
    """Single coefficient H_R-hat(k); convenience wrapper over the table."""
    k = np.asarray(k, dtype=np.int64)
    table = h_coefficient_table(set_, kernel, R, kmax=int(np.max(np.abs(k))) or 1, **kwargs)
    return complex(table.values(k.reshape(1, -1))[0])


def h_zero_by_coarea(ball: Ball, kernel: KernelTable, R: float, *, n: int = 20001) -> float:
    """H_R-hat(0) for a ball via the coarea (shell) disintegration.

    Stieltjes sum of gamma I(R t) against the exact shell measure mu{dist < t};
    independent of the FFT route, used as a cross-check.
    """
    r = ball.radius
    t_top = max(r, np.sqrt(ball.dimension) / 2.0)
    t = np.linspace(0.0, t_top, n)
    mu = ball.shell_measure(t)
    mid = 0.5 * (t[1:] + t[:-1])
    vals = kernel.gamma * kernel.tail_integral(R * mid)
    return float(np.sum(vals * np.diff(mu)))


@dataclass(frozen=True)
class FConstantReport:
    """Empirical lower bound for the smallest constant in the decay inequalities.

    `indicator_part` covers |chi-hat(k)| <= c |k|^-alpha over 0 < |k| <= k_max;
    `layer_parts` cover the psi(R dist) coefficients, |k|^-alpha off zero and
    R^-beta at zero, per tested R.
    """

    alpha: float
    beta: float
    value: float
    indicator_part: float
    layer_parts: tuple
    k_max: int
    r_grid: tuple


def f_constant(set_: TorusSet, kernel: KernelTable, alpha: float, beta: float,
               k_max: int, r_grid, *, oversample: int = 2) -> FConstantReport:
    d = set_.dimension
    if not 0 <= alpha <= (d + 1) / 2:
        raise ValueError(f"alpha must lie in [0, {(d + 1) / 2}]")
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")

    freqs = integer_ball(k_max, d, include_boundary=True)
    norms = np.sqrt((freqs.astype(float) ** 2).sum(1))
    chi = np.abs(set_.fourier_coefficients(freqs))
    c_chi = float(np.max(chi * norms ** alpha))

    layer_parts = []
    for R in r_grid:
        # psi(R dist) = 4 H_{R/2}
        table = h_coefficient_table(set_, kernel, R / 2.0, kmax=int(np.ceil(R)),
                                    oversample=oversample, refine=False)
        inner = integer_ball(R, d)
        vals = 4.0 * np.abs(table.values(inner))
        inner_norms = np.sqrt((inner.astype(float) ** 2).sum(1))
        c_k = float(np.max(vals * inner_norms ** alpha)) if len(inner) else 0.0
        c_0 = float(4.0 * abs(table.zero) * R ** beta)
        layer_parts.append((float(R), c_k, c_0))

    value = max([c_chi] + [max(ck, c0) for _, ck, c0 in layer_parts])
    return FConstantReport(alpha=float(alpha), beta=float(beta), value=value,
                           indicator_part=c_chi, layer_parts=tuple(layer_parts),
                           k_max=int(k_max), r_grid=tuple(float(R) for R in r_grid))
