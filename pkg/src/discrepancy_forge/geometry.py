"""Measurable set models on the torus: box, ball, convex polygon.

Each set is the periodization Omega* + Z^d of a base body whose translates
are disjoint. All models provide exact measure, exact periodic boundary
distance, exact membership (with a recorded boundary convention), Fourier
coefficients (closed forms for boxes and balls; divergence-theorem recursion
for polygons), and boundary-shell volumes (closed Steiner-type forms where
available, otherwise seeded Monte Carlo through `shell_measure_mc`).

Boundary conventions: boxes are half-open [a, b) per axis; balls and
polygons are closed. Desk-scale discrepancy is sensitive to points landing
exactly on boundaries, so the convention is part of each report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import j1

from .quadrature import gauss_nodes

TWO_PI = 2.0 * np.pi
_SHIFTS2 = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)


class TorusSet:
    """Common surface of the set models; see module docstring."""

    dimension: int

    def measure(self) -> float:
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_distances(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_distance(self, x) -> float:
        return float(self.boundary_distances(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def fourier_coefficients(self, freqs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def fourier_coefficient(self, k) -> complex:
        return complex(self.fourier_coefficients(np.atleast_2d(np.asarray(k)))[0])

    def shell_measure(self, t):
        """mu{dist(x, boundary) < t}, exact closed form, or None if unsupported."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError

    def distance_grid(self, n: int) -> np.ndarray:
        """Boundary distance on the n x n grid (i/n, j/n), d = 2 only."""
        if self.dimension != 2:
            raise ValueError("distance_grid is 2-d only")
        axis = np.arange(n) / n
        X, Y = np.meshgrid(axis, axis, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        return self.boundary_distances(pts).reshape(n, n)

    def indicator_grid(self, n: int) -> np.ndarray:
        if self.dimension != 2:
            raise ValueError("indicator_grid is 2-d only")
        axis = np.arange(n) / n
        X, Y = np.meshgrid(axis, axis, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        return self.contains(pts).reshape(n, n).astype(float)


# ---------------------------------------------------------------------------
# box
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Box(TorusSet):
    """Axis box  prod [a_j, b_j)  with 0 <= a_j < b_j <= 1 and width < 1."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("a and b must be equal-length vectors")
        if np.any(a < 0) or np.any(b > 1) or np.any(a >= b):
            raise ValueError("need 0 <= a_j < b_j <= 1 per axis")
        if np.any(b - a >= 1.0):
            raise ValueError("box must not wrap: width < 1 per axis")
        object.__setattr__(self, "a", tuple(float(x) for x in a))
        object.__setattr__(self, "b", tuple(float(x) for x in b))

    @property
    def dimension(self) -> int:
        return len(self.a)

    @property
    def widths(self) -> np.ndarray:
        return np.asarray(self.b) - np.asarray(self.a)

    def measure(self) -> float:
        return float(np.prod(self.widths))

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.mod(np.asarray(points, dtype=float), 1.0)
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        return np.all((pts >= a) & (pts < b), axis=1)

    def boundary_distances(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        d = self.dimension
        best = np.full(len(pts), np.inf)
        shifts = _SHIFTS2 if d == 2 else np.array(
            np.meshgrid(*([(-1.0, 0.0, 1.0)] * d), indexing="ij")).reshape(d, -1).T
        pts = np.mod(pts, 1.0)
        for s in shifts:
            lo = (a + s) - pts
            hi = pts - (b + s)
            outside = np.maximum(np.maximum(lo, hi), 0.0)
            dist_out = np.sqrt(np.sum(outside ** 2, axis=1))
            inside = np.all((lo < 0) & (hi < 0), axis=1)
            margin = np.min(np.minimum(-lo, -hi), axis=1)
            best = np.minimum(best, np.where(inside, margin, dist_out))
        return best

    def fourier_coefficients(self, freqs: np.ndarray) -> np.ndarray:
        freqs = np.atleast_2d(np.asarray(freqs, dtype=float))
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        out = np.ones(len(freqs), dtype=complex)
        for j in range(self.dimension):
            k = freqs[:, j]
            with np.errstate(divide="ignore", invalid="ignore"):
                factor = (np.exp(-TWO_PI * 1j * k * a[j]) - np.exp(-TWO_PI * 1j * k * b[j])) \
                    / (TWO_PI * 1j * k)
            out *= np.where(k == 0, b[j] - a[j], factor)
        return out

    def shell_measure(self, t):
        t = np.asarray(t, dtype=float)
        w = self.widths
        g = 1.0 - w
        if self.dimension == 1:
            dil = w[0] + 2 * np.minimum(t, g[0] / 2)
            ero = np.maximum(w[0] - 2 * t, 0.0)
        elif self.dimension == 2:
            dil = (w[0] * w[1]
                   + 2 * w[0] * np.minimum(t, g[1] / 2)
                   + 2 * w[1] * np.minimum(t, g[0] / 2)
                   + 4 * _quarter_disk_in_rect(t, g[0] / 2, g[1] / 2))
            ero = np.maximum(w[0] - 2 * t, 0.0) * np.maximum(w[1] - 2 * t, 0.0)
        else:
            return None
        out = np.clip(dil - ero, 0.0, 1.0)
        return out if out.ndim else float(out)

    def to_json(self) -> dict:
        return {"variant": "box", "a": list(self.a), "b": list(self.b)}


def _quarter_disk_in_rect(t, u: float, v: float):
    """Area of {0<=x<=u, 0<=y<=v, x^2+y^2 < t^2}, vectorized over t >= 0."""
    t = np.asarray(t, dtype=float)
    full = np.minimum(t, np.hypot(u, v))
    x_v = np.sqrt(np.maximum(full ** 2 - v ** 2, 0.0))  # below y=v up to here
    x1 = np.minimum(u, x_v)
    x2 = np.minimum(u, full)

    def prim(x, tt):
        # antiderivative of sqrt(tt^2 - x^2)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 0.5 * (x * np.sqrt(np.maximum(tt ** 2 - x ** 2, 0.0))
                         + tt ** 2 * np.arcsin(np.clip(np.divide(x, np.where(tt == 0, 1.0, tt)), -1, 1)))
        return np.where(tt == 0, 0.0, val)

    area = v * x1 + prim(x2, full) - prim(x1, full)
    area = np.where(t ** 2 >= u ** 2 + v ** 2, u * v, area)
    return np.where(t <= 0, 0.0, area)


# ---------------------------------------------------------------------------
# ball
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ball(TorusSet):
    """Closed ball of radius r < 1/2; d = 2 or 3."""

    center: tuple
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if c.ndim != 1 or len(c) not in (2, 3):
            raise ValueError("ball center must be a 2- or 3-vector")
        if not (0 < self.radius < 0.5):
            raise ValueError("ball radius must satisfy 0 < r < 1/2")
        object.__setattr__(self, "center", tuple(float(x) for x in c))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dimension(self) -> int:
        return len(self.center)

    def measure(self) -> float:
        r = self.radius
        return float(np.pi * r * r if self.dimension == 2 else 4.0 / 3.0 * np.pi * r ** 3)

    def _torus_center_distance(self, points: np.ndarray) -> np.ndarray:
        diff = np.asarray(points, dtype=float) - np.asarray(self.center)
        diff = np.mod(diff + 0.5, 1.0) - 0.5
        return np.sqrt(np.sum(diff ** 2, axis=1))

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self._torus_center_distance(points) <= self.radius

    def boundary_distances(self, points: np.ndarray) -> np.ndarray:
        return np.abs(self._torus_center_distance(points) - self.radius)

    def fourier_coefficients(self, freqs: np.ndarray) -> np.ndarray:
        freqs = np.atleast_2d(np.asarray(freqs, dtype=float))
        norm = np.sqrt(np.sum(freqs ** 2, axis=1))
        phase = np.exp(-TWO_PI * 1j * (freqs @ np.asarray(self.center)))
        r = self.radius
        safe = np.where(norm == 0, 1.0, norm)
        if self.dimension == 2:
            radial = r * j1(TWO_PI * r * safe) / safe
        else:
            u = TWO_PI * r * safe
            radial = (np.sin(u) - u * np.cos(u)) / (2 * np.pi ** 2 * safe ** 3)
        return np.where(norm == 0, self.measure(), phase * radial)

    def shell_measure(self, t):
        t = np.asarray(t, dtype=float)
        r = self.radius
        if self.dimension == 2:
            out = _torus_disk_area(r + t) - _torus_disk_area(np.maximum(r - t, 0.0))
        else:
            if np.any(r + t > 0.5):
                return None
            out = 4.0 / 3.0 * np.pi * ((r + t) ** 3 - np.maximum(r - t, 0.0) ** 3)
        out = np.clip(out, 0.0, 1.0)
        return out if out.ndim else float(out)

    def to_json(self) -> dict:
        return {"variant": "ball", "center": list(self.center), "radius": self.radius}


def _torus_disk_area(rho):
    """Volume of a torus ball of radius rho in T^2 (disk clipped by the cell)."""
    rho = np.asarray(rho, dtype=float)
    plain = np.pi * rho ** 2
    r_safe = np.where(rho <= 0.5, 1.0, rho)
    segment = r_safe ** 2 * np.arccos(np.clip(0.5 / r_safe, 0.0, 1.0)) \
        - 0.5 * np.sqrt(np.maximum(r_safe ** 2 - 0.25, 0.0))
    clipped = plain - 4.0 * segment
    out = np.where(rho <= 0.5, plain, np.where(rho >= np.sqrt(0.5), 1.0, clipped))
    return out


# ---------------------------------------------------------------------------
# convex polygon (d = 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexPolytope(TorusSet):
    """Closed convex polygon with recorded translate-separation epsilon.

    Vertices are normalized to counter-clockwise order; diameter must be at
    most 1 - epsilon so that Z^2 translates stay disjoint.
    """

    vertices: tuple
    epsilon: float

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise ValueError("need at least 3 planar vertices")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must be in (0, 1); it is required, not defaulted")
        area2 = _signed_area2(verts)
        if area2 < 0:
            verts = verts[::-1]
            area2 = -area2
        if area2 <= 0:
            raise ValueError("degenerate polygon")
        e = np.roll(verts, -1, axis=0) - verts
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross <= 1e-14):
            raise ValueError("vertices must describe a strictly convex polygon")
        diam = np.max(np.sqrt(((verts[:, None, :] - verts[None, :, :]) ** 2).sum(-1)))
        if diam > 1.0 - self.epsilon:
            raise ValueError(f"diameter {diam:.4f} exceeds 1 - epsilon = {1 - self.epsilon:.4f}")
        object.__setattr__(self, "vertices", tuple(map(tuple, verts.tolist())))
        object.__setattr__(self, "epsilon", float(self.epsilon))

    dimension = 2

    @property
    def vertex_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @property
    def diameter(self) -> float:
        v = self.vertex_array
        return float(np.max(np.sqrt(((v[:, None, :] - v[None, :, :]) ** 2).sum(-1))))

    @property
    def centroid(self) -> np.ndarray:
        return self.vertex_array.mean(axis=0)

    def edges(self):
        v = self.vertex_array
        return v, np.roll(v, -1, axis=0)

    def measure(self) -> float:
        return 0.5 * _signed_area2(self.vertex_array)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        y = np.mod(pts - self.centroid + 0.5, 1.0) - 0.5
        p, q = self.edges()
        rel_p = p - self.centroid
        e = q - p
        hit = np.zeros(len(pts), dtype=bool)
        for s in _SHIFTS2:
            z = y - s
            # closed membership: all edge cross products >= -tol (CCW)
            inside = np.ones(len(pts), dtype=bool)
            for i in range(len(p)):
                d = z - rel_p[i]
                inside &= e[i, 0] * d[:, 1] - e[i, 1] * d[:, 0] >= -1e-12
                if not inside.any():
                    break
            hit |= inside
        return hit

    def boundary_distances(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        p, q = self.edges()
        best = np.full(len(pts), np.inf)
        for i in range(len(p)):
            mid = 0.5 * (p[i] + q[i])
            half = 0.5 * (q[i] - p[i])
            y = np.mod(pts - mid + 0.5, 1.0) - 0.5
            for s in _SHIFTS2:
                z = y - s
                # distance from z to segment [-half, half]
                seg2 = np.dot(half, half)
                tproj = np.clip((z @ half) / seg2, -1.0, 1.0)
                dx = z - tproj[:, None] * half
                best = np.minimum(best, np.sqrt(np.sum(dx ** 2, axis=1)))
        return best

    def fourier_coefficients(self, freqs: np.ndarray) -> np.ndarray:
        """Exact Fourier transform of the polygon via the divergence identity.

        The area integral reduces to edge integrals weighted by
        i (n . xi) / (2 pi |xi|^2); edge integrals are exact sinc forms.
        Below the frequency threshold 2 pi |xi| < 1/diameter the reduction is
        ill-conditioned and a direct quadrature over a fan triangulation is
        used instead.
        """
        freqs = np.atleast_2d(np.asarray(freqs, dtype=float))
        p, q = self.edges()
        e = q - p
        L = np.sqrt((e ** 2).sum(1))
        n_out = np.stack([e[:, 1], -e[:, 0]], axis=1) / L[:, None]
        mid = 0.5 * (p + q)

        norm2 = (freqs ** 2).sum(1)
        out = np.empty(len(freqs), dtype=complex)
        lam = self.diameter
        low = TWO_PI * np.sqrt(norm2) < 1.0 / lam

        hi = ~low
        if np.any(hi):
            F = freqs[hi]
            u = F @ e.T
            phase = np.exp(-TWO_PI * 1j * (F @ mid.T))
            edge_int = L[None, :] * phase * np.sinc(u)
            coef = 1j * (F @ n_out.T) / (TWO_PI * norm2[hi][:, None])
            out[hi] = (coef * edge_int).sum(axis=1)
        if np.any(low):
            out[low] = self._fourier_by_quadrature(freqs[low])
        return out

    def _fourier_by_quadrature(self, freqs: np.ndarray) -> np.ndarray:
        verts = self.vertex_array
        x, w = gauss_nodes(24)
        s = 0.5 * (x + 1.0)
        ws = 0.5 * w
        S, T = np.meshgrid(s, s, indexing="ij")
        WW = np.outer(ws, ws)
        out = np.zeros(len(freqs), dtype=complex)
        for i in range(1, len(verts) - 1):
            v0, v1, v2 = verts[0], verts[i], verts[i + 1]
            det = abs(_cross(v1 - v0, v2 - v1))
            P = v0[None, None, :] + S[..., None] * ((v1 - v0)[None, None, :]
                                                    + T[..., None] * (v2 - v1)[None, None, :])
            jac = S * det
            phases = np.exp(-TWO_PI * 1j * np.tensordot(freqs, P, axes=([1], [2])))
            out += np.sum(phases * (WW * jac)[None, :, :], axis=(1, 2))
        return out

    def to_json(self) -> dict:
        return {"variant": "polytope", "vertices": [list(v) for v in self.vertices],
                "epsilon": self.epsilon}


def _signed_area2(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


# ---------------------------------------------------------------------------
# shells / Minkowski content
# ---------------------------------------------------------------------------

def shell_measure_mc(set_: TorusSet, t, *, samples: int = 10 ** 6, seed: int = 0):
    """Monte Carlo mu{dist < t} with standard errors, for sets without closed forms."""
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, set_.dimension))
    dists = np.sort(set_.boundary_distances(pts))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    mu = np.searchsorted(dists, t, side="left") / samples
    se = np.sqrt(np.maximum(mu * (1 - mu), 0.0) / samples)
    return mu, se


@dataclass(frozen=True)
class MinkowskiContent:
    alpha: float
    value: float
    t_argmax: float
    boundary_attained: bool
    standard_error: float
    method: str


def minkowski_content(set_: TorusSet, alpha: float, t_grid=None, *,
                      mc_samples: int = 10 ** 6, seed: int = 0) -> MinkowskiContent:
    """M(alpha, Omega) = sup_t t^-alpha mu{dist(x, boundary) < t} over a t grid.

    Exact shell volumes where the set provides them, Monte Carlo otherwise
    (standard error of the maximizing ratio reported).
    """
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if t_grid is None:
        t_grid = np.geomspace(1e-4, 1.0, 200)
    t_grid = np.asarray(t_grid, dtype=float)
    mu = set_.shell_measure(t_grid)
    if mu is not None:
        se = np.zeros_like(t_grid)
        method = "exact"
    else:
        mu, se = shell_measure_mc(set_, t_grid, samples=mc_samples, seed=seed)
        method = "monte-carlo"
    ratios = np.minimum(mu, 1.0) * t_grid ** (-alpha)
    idx = int(np.argmax(ratios))
    return MinkowskiContent(
        alpha=float(alpha),
        value=float(ratios[idx]),
        t_argmax=float(t_grid[idx]),
        boundary_attained=idx in (0, len(t_grid) - 1),
        standard_error=float(se[idx] * t_grid[idx] ** (-alpha)),
        method=method,
    )


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------

def set_from_json(data) -> TorusSet:
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    variant = data.get("variant")
    if variant == "box":
        return Box(tuple(data["a"]), tuple(data["b"]))
    if variant == "ball":
        return Ball(tuple(data["center"]), float(data["radius"]))
    if variant == "polytope":
        return ConvexPolytope(tuple(map(tuple, data["vertices"])), float(data["epsilon"]))
    raise ValueError(f"unknown set variant {variant!r}")
