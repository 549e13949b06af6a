"""Radial majorant kernel: bump profile, kernel table, tail integral, decay profile.

Construction chain, all radial and dimension d in {1, 2, 3}:

    m(xi)   = c_d * exp(-1 / (1/4 - |xi|^2))  for |xi| < 1/2, 0 outside,
              normalized so that the d-dimensional integral of m^2 is 1;
    khat    = (1 + |xi|^2)^(-(d+1)/2) * (m * m)(xi),  supported in |xi| <= 1;
    K       = inverse radial Fourier transform of khat (positive, mean 1);
    I(t)    = integral of K over {|x| >= t}, satisfying I(t+1) >= exp(-2*pi) I(t);
    gamma   = (exp(-2*pi) * integral of K over the unit ball)^(-1);
    psi(t)  = 4 * gamma * I(t/2).

K is represented internally as a finite cosine/Bessel sum over a fixed
Gauss-Legendre discretization of khat, so K, I(t) and radial masses are
closed-form sums with no nested quadrature. Tables plus monotone (PCHIP)
interpolants are what downstream modules consume; the tail beyond the table
is replaced by a fitted power envelope that can only over-estimate I, which
is the safe direction for every majorization it feeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.special import j0, j1

from .errors import QuadratureError
from .quadrature import integrate_refined, panel_nodes

SUPPORT_RADIUS = 0.5
SUPPORTED_DIMENSIONS = (1, 2, 3)

# surface measure of the unit sphere S^{d-1}
SPHERE_SURFACE = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}

TWO_PI = 2.0 * np.pi
EXP_MINUS_2PI = float(np.exp(-TWO_PI))


def bump_raw(r):
    """Unnormalized profile exp(-1/(1/4 - r^2)) on r < 1/2, zero outside."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < SUPPORT_RADIUS
    ri = r[inside]
    out[inside] = np.exp(-1.0 / (0.25 - ri * ri))
    return out


@dataclass(frozen=True)
class BumpProfile:
    """Normalized smooth radial profile with compact support in |xi| < 1/2."""

    dimension: int
    support_radius: float
    grid: np.ndarray          # radii in [0, 1/2]
    samples: np.ndarray       # m(r) on grid
    grid_step: float
    normalization: float      # c_d with m = c_d * bump_raw
    normalization_error: float

    def __call__(self, r):
        return self.normalization * bump_raw(r)


def build_bump(d: int, grid_step: float = 1.0 / 256, *, rtol: float = 1e-12) -> BumpProfile:
    """Build the normalized bump profile for dimension d.

    The constant c_d is fixed by the d-dimensional radial quadrature of the
    squared profile; refinement failure raises QuadratureError.
    """
    if d not in SUPPORTED_DIMENSIONS:
        raise ValueError(f"unsupported dimension {d}; supported: {SUPPORTED_DIMENSIONS}")
    if not (0 < grid_step <= 1.0 / 64):
        raise ValueError(f"grid_step must be in (0, 1/64], got {grid_step}")

    omega = SPHERE_SURFACE[d]
    square_mass, err = integrate_refined(
        lambda r: bump_raw(r) ** 2 * r ** (d - 1), 0.0, SUPPORT_RADIUS, rtol=rtol)
    square_mass *= omega
    c = 1.0 / np.sqrt(square_mass)
    grid = np.arange(0.0, SUPPORT_RADIUS + 0.5 * grid_step, grid_step)
    grid = np.minimum(grid, SUPPORT_RADIUS)
    return BumpProfile(
        dimension=d,
        support_radius=SUPPORT_RADIUS,
        grid=grid,
        samples=c * bump_raw(grid),
        grid_step=grid_step,
        normalization=float(c),
        normalization_error=float(err * c),
    )


# ---------------------------------------------------------------------------
# autocorrelation (m * m) on [0, 1]
# ---------------------------------------------------------------------------

def _autocorrelation_1d(bump: BumpProfile, s: np.ndarray, panels: int) -> np.ndarray:
    out = np.empty_like(s)
    for i, si in enumerate(s):
        lo = max(-SUPPORT_RADIUS, si - SUPPORT_RADIUS)
        hi = min(SUPPORT_RADIUS, si + SUPPORT_RADIUS)
        if hi <= lo:
            out[i] = 0.0
            continue
        u, w = panel_nodes(lo, hi, panels)
        out[i] = np.dot(w, bump(np.abs(u)) * bump(np.abs(si - u)))
    return out


def _autocorrelation_2d(bump: BumpProfile, s: np.ndarray,
                        rho_panels: int, n_theta: int) -> np.ndarray:
    rho, w_rho = panel_nodes(0.0, SUPPORT_RADIUS, rho_panels)
    theta = (np.arange(n_theta) + 0.5) * (TWO_PI / n_theta)
    w_theta = TWO_PI / n_theta
    cos_t = np.cos(theta)
    m_rho = bump(rho) * rho * w_rho
    out = np.empty_like(s)
    chunk = 32
    for i0 in range(0, len(s), chunk):
        sc = s[i0:i0 + chunk][:, None, None]
        arg2 = sc * sc + rho[None, :, None] ** 2 - 2.0 * sc * rho[None, :, None] * cos_t[None, None, :]
        vals = bump(np.sqrt(np.maximum(arg2, 0.0)))
        out[i0:i0 + chunk] = w_theta * np.einsum("j,ijk->i", m_rho, vals)
    return out


def _autocorrelation_3d(bump: BumpProfile, s: np.ndarray, rho_panels: int) -> np.ndarray:
    # Mint(x) = int_0^x m(u) u du via a dense spline antiderivative
    u = np.linspace(0.0, SUPPORT_RADIUS, 4097)
    mint = CubicSpline(u, bump(u) * u).antiderivative()

    def mint_clamped(x):
        return mint(np.clip(x, 0.0, SUPPORT_RADIUS))

    rho, w_rho = panel_nodes(0.0, SUPPORT_RADIUS, rho_panels)
    m_rho = bump(rho) * rho * w_rho
    out = np.empty_like(s)
    zero = s == 0.0
    if np.any(zero):
        val0, _ = integrate_refined(lambda r: bump(r) ** 2 * r * r, 0.0, SUPPORT_RADIUS)
        out[zero] = SPHERE_SURFACE[3] * val0
    pos = ~zero
    sp = s[pos][:, None]
    inner = mint_clamped(sp + rho[None, :]) - mint_clamped(np.abs(sp - rho[None, :]))
    out[pos] = (TWO_PI / s[pos]) * (inner @ m_rho)
    return out


def autocorrelation_values(bump: BumpProfile, s, *, refine: bool = True) -> tuple[np.ndarray, float]:
    """(m * m)(s) for radii s in [0, 1], plus a refinement-based error estimate.

    Raises QuadratureError when doubling the quadrature still moves any value
    by more than 1e-8.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    d = bump.dimension
    if d == 1:
        coarse = _autocorrelation_1d(bump, s, panels=16)
        fine = _autocorrelation_1d(bump, s, panels=32) if refine else coarse
    elif d == 2:
        coarse = _autocorrelation_2d(bump, s, rho_panels=8, n_theta=256)
        fine = _autocorrelation_2d(bump, s, rho_panels=16, n_theta=512) if refine else coarse
    else:
        coarse = _autocorrelation_3d(bump, s, rho_panels=16)
        fine = _autocorrelation_3d(bump, s, rho_panels=32) if refine else coarse
    err = float(np.max(np.abs(fine - coarse))) if refine else 0.0
    if refine and err > 1e-8:
        raise QuadratureError(f"autocorrelation quadrature unstable: change {err:.3e}")
    return fine, err


def autocorrelate(bump: BumpProfile, *, n_grid: int = 513):
    """Tabulate (m * m) on a uniform radial grid over [0, 1].

    Returns (grid, values, error_estimate). The value is 1 at 0 and 0 at
    radius >= 1 up to quadrature error.
    """
    grid = np.linspace(0.0, 1.0, n_grid)
    values, err = autocorrelation_values(bump, grid)
    return grid, values, err


# ---------------------------------------------------------------------------
# kernel table
# ---------------------------------------------------------------------------

@dataclass
class KernelTable:
    """Tabulated radial kernel K, transform khat, tail integral I, constants.

    All arrays are immutable by convention; instances are safe to share
    read-only across workers.
    """

    dimension: int
    khat_grid: np.ndarray
    khat: np.ndarray
    kvals_grid: np.ndarray
    kvals: np.ndarray
    tail_grid: np.ndarray
    tail: np.ndarray
    gamma: float
    x_max: float
    t_max: float
    quadrature_tolerance: float
    ball_mass: float              # integral of K over the unit ball
    tail_envelope_coeff: float    # C with |K(s)| <= C s^-(d+2) for s >= x_max
    khat_accuracy: float
    provenance: dict
    _khat_spline: CubicSpline = field(init=False, repr=False)
    _k_interp: PchipInterpolator = field(init=False, repr=False)
    _tail_interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self._khat_spline = CubicSpline(self.khat_grid, self.khat, bc_type="clamped")
        self._k_interp = PchipInterpolator(self.kvals_grid, self.kvals)
        self._tail_interp = PchipInterpolator(self.tail_grid, self.tail)

    # -- evaluators ---------------------------------------------------------

    def khat_value(self, r):
        """khat(r) by cubic interpolation; exactly 0 for r >= 1."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        inside = r < 1.0
        out[inside] = self._khat_spline(r[inside])
        return out if out.ndim else float(out)

    def kernel_value(self, s):
        """K(s) by monotone cubic interpolation; power envelope beyond x_max."""
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        inside = s <= self.x_max
        out[inside] = self._k_interp(s[inside])
        if np.any(~inside):
            out[~inside] = self.tail_envelope_coeff * s[~inside] ** (-(self.dimension + 2))
        return out if out.ndim else float(out)

    def tail_envelope(self, t):
        """One-sided bound for I(t), valid for t >= x_max."""
        t = np.asarray(t, dtype=float)
        omega = SPHERE_SURFACE[self.dimension]
        return 0.5 * omega * self.tail_envelope_coeff * t ** (-2.0)

    def tail_integral(self, t):
        """I(t), monotone interpolation of the table; envelope beyond t_max.

        Never under-estimates the true tail (table values carry the integrated
        envelope remainder), so psi built on it stays a majorant.
        """
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        inside = t <= self.t_max
        out[inside] = self._tail_interp(t[inside])
        if np.any(~inside):
            out[~inside] = self.tail_envelope(t[~inside])
        out = np.maximum(out, 0.0)
        return out if out.ndim else float(out)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": "discrepancy-forge-kernel",
            "version": 1,
            "dimension": self.dimension,
            "khat_grid": self.khat_grid.tolist(),
            "khat": self.khat.tolist(),
            "kvals_grid": self.kvals_grid.tolist(),
            "kvals": self.kvals.tolist(),
            "tail_grid": self.tail_grid.tolist(),
            "tail": self.tail.tolist(),
            "gamma": self.gamma,
            "x_max": self.x_max,
            "t_max": self.t_max,
            "quadrature_tolerance": self.quadrature_tolerance,
            "ball_mass": self.ball_mass,
            "tail_envelope_coeff": self.tail_envelope_coeff,
            "khat_accuracy": self.khat_accuracy,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KernelTable":
        if data.get("format") != "discrepancy-forge-kernel":
            raise ValueError("not a kernel table document")
        if data.get("version") != 1:
            raise ValueError(f"unsupported kernel table version {data.get('version')}")
        return cls(
            dimension=int(data["dimension"]),
            khat_grid=np.asarray(data["khat_grid"], dtype=float),
            khat=np.asarray(data["khat"], dtype=float),
            kvals_grid=np.asarray(data["kvals_grid"], dtype=float),
            kvals=np.asarray(data["kvals"], dtype=float),
            tail_grid=np.asarray(data["tail_grid"], dtype=float),
            tail=np.asarray(data["tail"], dtype=float),
            gamma=float(data["gamma"]),
            x_max=float(data["x_max"]),
            t_max=float(data["t_max"]),
            quadrature_tolerance=float(data["quadrature_tolerance"]),
            ball_mass=float(data["ball_mass"]),
            tail_envelope_coeff=float(data["tail_envelope_coeff"]),
            khat_accuracy=float(data["khat_accuracy"]),
            provenance=dict(data["provenance"]),
        )


def save_kernel(table: KernelTable, path) -> None:
    Path(path).write_text(json.dumps(table.to_dict(), sort_keys=True) + "\n")


def load_kernel(path) -> KernelTable:
    return KernelTable.from_dict(json.loads(Path(path).read_text()))


class _MasterRepresentation:
    """K as a finite cos/J0/sin sum over Gauss-Legendre nodes of khat."""

    def __init__(self, d: int, nodes: np.ndarray, weights: np.ndarray, khat: np.ndarray):
        self.d = d
        self.nodes = nodes
        self.coeff = weights * khat          # w_i * khat(r_i)
        self.a = TWO_PI * nodes              # angular frequencies

    def kernel(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.d == 1:
            return (2.0 * self.coeff) @ np.cos(np.outer(self.a, s))
        if self.d == 2:
            return (TWO_PI * self.coeff * self.nodes) @ j0(np.outer(self.a, s))
        out = np.empty_like(s)
        pos = s > 0
        c3 = 2.0 * self.coeff * self.nodes
        out[pos] = (c3 @ np.sin(np.outer(self.a, s[pos]))) / s[pos]
        if np.any(~pos):
            out[~pos] = SPHERE_SURFACE[3] * np.dot(self.coeff, self.nodes ** 2)
        return out

    def radial_mass(self, lo: float, hi: float) -> float:
        """Integral of K over the annulus lo <= |x| <= hi, in closed form."""
        a = self.a

        if self.d == 1:
            prim = lambda s: np.sin(a * s) / a
            inner = 2.0 * self.coeff
            omega = SPHERE_SURFACE[1]
        elif self.d == 2:
            prim = lambda s: s * j1(a * s) / a
            inner = TWO_PI * self.coeff * self.nodes
            omega = SPHERE_SURFACE[2]
        else:
            prim = lambda s: (np.sin(a * s) - a * s * np.cos(a * s)) / (a * a)
            inner = 2.0 * self.coeff * self.nodes
            omega = SPHERE_SURFACE[3]
        return float(omega * np.dot(inner, prim(hi) - prim(lo)))

    def radial_mass_many(self, t: np.ndarray, hi: float) -> np.ndarray:
        """Integral of K over {t <= |x| <= hi} for a vector of lower bounds."""
        a = self.a
        if self.d == 1:
            prim = np.sin(np.outer(a, t)) / a[:, None]
            prim_hi = np.sin(a * hi) / a
            inner = 2.0 * self.coeff
            omega = SPHERE_SURFACE[1]
        elif self.d == 2:
            prim = t[None, :] * j1(np.outer(a, t)) / a[:, None]
            prim_hi = hi * j1(a * hi) / a
            inner = TWO_PI * self.coeff * self.nodes
            omega = SPHERE_SURFACE[2]
        else:
            at = np.outer(a, t)
            prim = (np.sin(at) - at * np.cos(at)) / (a * a)[:, None]
            ahi = a * hi
            prim_hi = (np.sin(ahi) - ahi * np.cos(ahi)) / (a * a)
            inner = 2.0 * self.coeff * self.nodes
            omega = SPHERE_SURFACE[3]
        return omega * (inner @ (prim_hi[:, None] - prim))


def build_kernel_table(d: int, bump: BumpProfile, x_max: float = 25.0, t_max: float = 30.0, *,
                       kvals_step: float = 0.005, tail_step: float = 0.01,
                       khat_grid_n: int = 1025, master_panels: int = 64,
                       master_order: int = 16, tail_safety: float = 2.0,
                       quadrature_tolerance: float = 1e-6) -> KernelTable:
    """Build the kernel table for dimension d from a bump profile.

    Raises QuadratureError if the tabulated K dips below -quadrature_tolerance
    (K is provably positive) or if the tail ratio I(t+1) >= exp(-2 pi) I(t)
    fails beyond 1e-9 slack anywhere on the table.
    """
    if d != bump.dimension:
        raise ValueError(f"dimension mismatch: {d} vs bump {bump.dimension}")
    if x_max < 20:
        raise ValueError(f"x_max must be >= 20, got {x_max}")
    if t_max < x_max:
        raise ValueError(f"t_max must be >= x_max, got {t_max} < {x_max}")

    decay = (d + 1) / 2.0
    nodes, weights = panel_nodes(0.0, 1.0, master_panels, master_order)
    conv_nodes, conv_err = autocorrelation_values(bump, nodes)
    khat_nodes = (1.0 + nodes ** 2) ** (-decay) * conv_nodes
    master = _MasterRepresentation(d, nodes, weights, khat_nodes)

    khat_grid = np.linspace(0.0, 1.0, khat_grid_n)
    conv_grid, _ = autocorrelation_values(bump, khat_grid)
    khat_tab = (1.0 + khat_grid ** 2) ** (-decay) * conv_grid
    khat_tab[-1] = 0.0  # support constraint is exact
    spline = CubicSpline(khat_grid, khat_tab, bc_type="clamped")
    khat_accuracy = float(np.max(np.abs(spline(nodes) - khat_nodes))) + conv_err

    kvals_grid = np.arange(0.0, x_max + 0.5 * kvals_step, kvals_step)
    kvals = master.kernel(kvals_grid)
    kmin = float(kvals.min())
    if kmin < -quadrature_tolerance:
        raise QuadratureError(
            f"tabulated K reaches {kmin:.3e} < -{quadrature_tolerance:.1e}; "
            "K is provably positive, so the transform quadrature failed")

    omega = SPHERE_SURFACE[d]
    sel = kvals_grid >= 0.9 * x_max
    envelope_c = tail_safety * float(np.max(np.abs(kvals[sel]) * kvals_grid[sel] ** (d + 2)))
    remainder = 0.5 * omega * envelope_c * x_max ** (-2.0)

    tail_grid = np.arange(0.0, t_max + 0.5 * tail_step, tail_step)
    inside = tail_grid <= x_max
    tail = np.empty_like(tail_grid)
    tail[inside] = master.radial_mass_many(tail_grid[inside], x_max) + remainder
    tail[~inside] = 0.5 * omega * envelope_c * tail_grid[~inside] ** (-2.0)
    tail = np.maximum(tail, 0.0)

    # tail ratio claim, slack 1e-9
    n_shift = int(round(1.0 / tail_step))
    ratio_ok = tail[n_shift:] >= EXP_MINUS_2PI * tail[:-n_shift] - 1e-9
    if not np.all(ratio_ok):
        worst = int(np.argmin(tail[n_shift:] - EXP_MINUS_2PI * tail[:-n_shift]))
        raise QuadratureError(
            f"tail ratio I(t+1) >= exp(-2 pi) I(t) violated near t = {tail_grid[worst]:.2f}")

    ball_mass = master.radial_mass(0.0, 1.0)
    gamma = float(np.exp(TWO_PI) / ball_mass)

    provenance = {
        "builder": "discrepancy-forge",
        "dimension": d,
        "bump": {"profile": "exp(-1/(1/4-r^2))", "grid_step": bump.grid_step,
                 "normalization": bump.normalization},
        "x_max": x_max, "t_max": t_max,
        "kvals_step": kvals_step, "tail_step": tail_step,
        "khat_grid_n": khat_grid_n,
        "master_panels": master_panels, "master_order": master_order,
        "tail_safety": tail_safety,
    }

    return KernelTable(
        dimension=d,
        khat_grid=khat_grid, khat=khat_tab,
        kvals_grid=kvals_grid, kvals=kvals,
        tail_grid=tail_grid, tail=tail,
        gamma=gamma, x_max=float(x_max), t_max=float(t_max),
        quadrature_tolerance=quadrature_tolerance,
        ball_mass=float(ball_mass),
        tail_envelope_coeff=envelope_c,
        khat_accuracy=khat_accuracy,
        provenance=provenance,
    )


def psi(kernel: KernelTable, t):
    """Universal decay profile psi(t) = 4 * gamma * I(t/2).

    Monotone nonincreasing; beyond the table it returns the analytic envelope,
    which can only over-estimate, preserving majorization downstream.
    """
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(arr < 0):
        raise ValueError("psi requires t >= 0")
    vals = 4.0 * kernel.gamma * np.atleast_1d(kernel.tail_integral(arr / 2.0))
    if np.ndim(t) == 0:
        return float(vals[0])
    return vals


@dataclass(frozen=True)
class DecayProfile:
    """psi tabulated on a grid, with empirical polynomial-decay fits."""

    kernel: KernelTable
    grid: np.ndarray
    values: np.ndarray

    @classmethod
    def from_kernel(cls, kernel: KernelTable, *, n: int = 2001, t_max: float | None = None):
        t_hi = 2.0 * kernel.t_max if t_max is None else t_max
        grid = np.linspace(0.0, t_hi, n)
        return cls(kernel=kernel, grid=grid, values=psi(kernel, grid))

    def fitted_c(self, alpha: float) -> float:
        """sup over the table of psi(t) * (1 + t)^alpha."""
        return float(np.max(self.values * (1.0 + self.grid) ** alpha))
