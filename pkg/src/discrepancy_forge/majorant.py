"""Periodized trigonometric majorant/minorant pair around an indicator.

For a torus set with coefficients chi-hat and the boundary layer H_R, the
degree-R polynomials

    A, B (x) = sum_{|k| < R} khat(k/R) (chi-hat(k) -/+ H_R-hat(k)) e^{2 pi i k x}

satisfy A <= indicator <= B and B - A <= psi(R dist(x, boundary)) pointwise.
Numerically the inequalities hold up to an explicit budget assembled from the
coefficient error estimates; the budget is computed and reported, never
silently tolerated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .frequencies import integer_ball
from .geometry import TorusSet
from .hfourier import HCoefficientTable, h_coefficient_table
from .kernel import KernelTable, psi

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TrigPolynomial:
    """Sparse real trigonometric polynomial with spectrum inside |k| < degree."""

    dimension: int
    degree: float
    freqs: np.ndarray       # (N, d) integers, includes k = 0
    coeffs: np.ndarray      # (N,) complex, Hermitian across k -> -k

    def __post_init__(self):
        norms2 = (self.freqs.astype(float) ** 2).sum(1)
        if np.any(norms2 >= self.degree ** 2):
            raise ValueError("coefficient outside the degree ball")

    @property
    def mean(self) -> float:
        zero = np.all(self.freqs == 0, axis=1)
        return float(np.real(self.coeffs[zero][0])) if zero.any() else 0.0

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Direct coefficient summation at arbitrary points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        phases = np.exp(TWO_PI * 1j * (pts @ self.freqs.T.astype(float)))
        vals = phases @ self.coeffs
        return np.real(vals)

    def grid_synthesis(self, n: int) -> np.ndarray:
        """Values on the n x n grid (i/n, j/n) by inverse FFT; needs n > 2 degree."""
        if self.dimension != 2:
            raise ValueError("grid synthesis implemented on T^2")
        if n <= 2 * self.degree:
            raise ValueError("synthesis grid must exceed twice the degree")
        spectrum = np.zeros((n, n), dtype=complex)
        idx0 = self.freqs[:, 0] % n
        idx1 = self.freqs[:, 1] % n
        spectrum[idx0, idx1] = self.coeffs
        vals = np.fft.ifft2(spectrum) * (n * n)
        out = np.real(vals)
        if np.max(np.abs(np.imag(vals))) > 1e-8 * max(1.0, np.max(np.abs(out))):
            raise ValueError("synthesis lost realness: coefficients not Hermitian")
        return out

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "freqs": [[int(v) for v in k] for k in self.freqs],
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrigPolynomial":
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
        return cls(dimension=int(data["dimension"]), degree=float(data["degree"]),
                   freqs=np.asarray(data["freqs"], dtype=np.int64), coeffs=coeffs)


@dataclass(frozen=True)
class MajorantPair:
    """Minorant/majorant polynomials with the coefficient error budget."""

    lower: TrigPolynomial
    upper: TrigPolynomial
    h_table: HCoefficientTable
    budget: float

    def __iter__(self):
        return iter((self.lower, self.upper))


def majorant_pair(set_: TorusSet, kernel: KernelTable, R: float, *,
                  h_table: HCoefficientTable | None = None,
                  oversample: int = 4) -> MajorantPair:
    """Assemble the degree-R sandwich polynomials for a torus set."""
    if R < 4:
        raise ValueError("R must be >= 4")
    if set_.dimension != kernel.dimension:
        raise ValueError("set and kernel dimensions differ")
    if h_table is None:
        h_table = h_coefficient_table(set_, kernel, R, oversample=oversample)

    freqs = integer_ball(R, set_.dimension, include_zero=True)
    chi = set_.fourier_coefficients(freqs)
    h_vals = h_table.values(freqs)
    h_errs = h_table.errors(freqs)
    norms = np.sqrt((freqs.astype(float) ** 2).sum(1))
    weights = kernel.khat_value(norms / R)

    lower = TrigPolynomial(set_.dimension, float(R), freqs, weights * (chi - h_vals))
    upper = TrigPolynomial(set_.dimension, float(R), freqs, weights * (chi + h_vals))

    budget = float(np.sum(weights * h_errs)
                   + kernel.khat_accuracy * np.sum(np.abs(chi) + np.abs(h_vals))
                   + 1e-12 * kernel.gamma)
    return MajorantPair(lower=lower, upper=upper, h_table=h_table, budget=budget)


@dataclass(frozen=True)
class SandwichReport:
    """Worst-case violations of the sandwich inequalities on a uniform grid."""

    R: float
    grid_n: int
    budget: float
    lower_violation: float        # max(A - indicator)
    lower_violation_fraction: float
    upper_violation: float        # max(indicator - B)
    upper_violation_fraction: float
    width_violation: float        # max(B - A - psi(R dist))
    width_violation_fraction: float
    max_width: float
    observed_width_ratio: float   # sup (B - A) / psi(R dist), diagnostic only

    @property
    def within_budget(self) -> bool:
        return max(self.lower_violation, self.upper_violation,
                   self.width_violation) <= self.budget


def sandwich_report(pair: MajorantPair, set_: TorusSet, kernel: KernelTable,
                    R: float, grid_n: int) -> SandwichReport:
    """Evaluate A <= chi <= B and B - A <= psi(R dist) on an n x n grid."""
    if grid_n < 4 * R:
        raise ValueError("grid_n must be at least 4 R per axis")
    A = pair.lower.grid_synthesis(grid_n)
    B = pair.upper.grid_synthesis(grid_n)
    chi = set_.indicator_grid(grid_n)
    dist = set_.distance_grid(grid_n)
    bound = psi(kernel, (R * dist).ravel()).reshape(grid_n, grid_n)

    lower = A - chi
    upper = chi - B
    width = (B - A) - bound
    npts = grid_n * grid_n
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.max((B - A) / bound)
    return SandwichReport(
        R=float(R), grid_n=int(grid_n), budget=pair.budget,
        lower_violation=float(lower.max()),
        lower_violation_fraction=float(np.count_nonzero(lower > 0) / npts),
        upper_violation=float(upper.max()),
        upper_violation_fraction=float(np.count_nonzero(upper > 0) / npts),
        width_violation=float(width.max()),
        width_violation_fraction=float(np.count_nonzero(width > 0) / npts),
        max_width=float((B - A).max()),
        observed_width_ratio=float(ratio),
    )


def sandwich_csv(pair: MajorantPair, set_: TorusSet, kernel: KernelTable,
                 R: float, grid_n: int, path) -> None:
    """Per-grid-point dump: x1, x2, chi, A, B, psi bound."""
    A = pair.lower.grid_synthesis(grid_n)
    B = pair.upper.grid_synthesis(grid_n)
    chi = set_.indicator_grid(grid_n)
    dist = set_.distance_grid(grid_n)
    bound = psi(kernel, (R * dist).ravel()).reshape(grid_n, grid_n)
    axis = np.arange(grid_n) / grid_n
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", "chi", "A", "B", "psi_bound"])
        for i in range(grid_n):
            for j in range(grid_n):
                writer.writerow([repr(float(axis[i])), repr(float(axis[j])),
                                 repr(float(chi[i, j])), repr(float(A[i, j])),
                                 repr(float(B[i, j])), repr(float(bound[i, j]))])
