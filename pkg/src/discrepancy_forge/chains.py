"""Decreasing chains of subspaces generated by a hyperplane family.

Given unit normals X = {n_1, ..., n_s}, the admissible subspaces are the
intersections of hyperplanes {x . n = 0}; a chain is a flag
R^d = A(d) > A(d-1) > ... > A(1) with dim A(j) = j, every member admissible.
For the d coordinate hyperplanes the chains are exactly the d! axis orders.

The chain functional

    Phi(xi) = sum over chains  prod_{j=1..d} min{1, (2 pi |P_{A(j)} xi|)^-1}

controls the Fourier decay of the family of polyhedra with facets parallel
to X; the companion per-polytope bound replaces 1 by the diameter lambda and
runs over the polytope's own face chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ConvexPolytope

TWO_PI = 2.0 * np.pi


def _nullspace(mat: np.ndarray, d: int) -> np.ndarray:
    """Orthonormal basis (rows) of the nullspace of mat (may be empty)."""
    if mat.size == 0:
        return np.eye(d)
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    rank = int(np.sum(s > 1e-10))
    return vt[rank:]


def _projector_key(basis: np.ndarray, d: int) -> tuple:
    proj = basis.T @ basis if basis.size else np.zeros((d, d))
    return tuple(np.round(proj, 9).ravel().tolist())


@dataclass(frozen=True)
class ChainSystem:
    """All decreasing chains of admissible subspaces for a normal family."""

    dimension: int
    normals: tuple                 # the generating unit normals, as tuples
    chain_bases: tuple             # chains as tuples of row-basis arrays, dims d..1

    @classmethod
    def from_normals(cls, normals) -> "ChainSystem":
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        norms = np.sqrt((normals ** 2).sum(1))
        if np.any(norms == 0):
            raise ValueError("zero normal vector")
        normals = normals / norms[:, None]
        d = normals.shape[1]
        if d < 1:
            raise ValueError("dimension must be >= 1")

        # admissible subspaces per dimension, deduplicated by projector
        by_dim: dict[int, dict[tuple, np.ndarray]] = {j: {} for j in range(0, d + 1)}
        by_dim[d][_projector_key(np.eye(d), d)] = np.eye(d)
        n = len(normals)
        for mask in range(1, 2 ** n):
            rows = normals[[i for i in range(n) if mask >> i & 1]]
            basis = _nullspace(rows, d)
            dim = len(basis)
            if 1 <= dim < d:
                by_dim[dim].setdefault(_projector_key(basis, d), basis)

        def contained(small: np.ndarray, big: np.ndarray) -> bool:
            # span(small) inside span(big): projecting onto big preserves norms
            proj = small @ big.T
            return np.allclose(proj @ big, small, atol=1e-9)

        chains: list[tuple] = []

        def descend(prefix: list[np.ndarray], dim: int):
            if dim == 1:
                chains.append(tuple(prefix))
                return
            for basis in by_dim[dim - 1].values():
                if contained(basis, prefix[-1]):
                    descend(prefix + [basis], dim - 1)

        if d == 1:
            chains.append((np.eye(1),))
        else:
            descend([np.eye(d)], d)
        if not chains:
            raise ValueError("normal family generates no full chains")
        return cls(dimension=d, normals=tuple(map(tuple, normals.tolist())),
                   chain_bases=tuple(chains))

    @classmethod
    def coordinate(cls, d: int) -> "ChainSystem":
        return cls.from_normals(np.eye(d))

    @classmethod
    def from_polytope(cls, polytope: ConvexPolytope) -> "ChainSystem":
        p, q = polytope.edges()
        e = q - p
        normals = np.stack([e[:, 1], -e[:, 0]], axis=1)
        return cls.from_normals(normals)

    @property
    def chain_count(self) -> int:
        return len(self.chain_bases)


def phi(chains: ChainSystem, xi) -> np.ndarray | float:
    """Chain functional Phi(xi); vectorized over rows of xi."""
    X = np.atleast_2d(np.asarray(xi, dtype=float))
    total = np.zeros(len(X))
    for chain in chains.chain_bases:
        prod = np.ones(len(X))
        for basis in chain:
            norm = np.sqrt(((X @ np.asarray(basis).T) ** 2).sum(1))
            with np.errstate(divide="ignore"):
                prod *= np.minimum(1.0, 1.0 / (TWO_PI * norm))
        total += prod
    if np.ndim(xi) == 1:
        return float(total[0])
    return total


def polytope_ft_bound(polytope: ConvexPolytope, xi) -> np.ndarray | float:
    """Per-polytope Fourier bound 2 sum over face chains of min{lambda, .} products.

    Face chains of a polygon are (polygon, edge) pairs: the top projection is
    the identity, the edge projection is onto the edge direction.
    """
    X = np.atleast_2d(np.asarray(xi, dtype=float))
    lam = polytope.diameter
    p, q = polytope.edges()
    e = q - p
    e_unit = e / np.sqrt((e ** 2).sum(1))[:, None]

    norm = np.sqrt((X ** 2).sum(1))
    with np.errstate(divide="ignore"):
        top = np.minimum(lam, 1.0 / (TWO_PI * norm))
        along = np.minimum(lam, 1.0 / (TWO_PI * np.abs(X @ e_unit.T)))
    total = 2.0 * top * along.sum(axis=1)
    if np.ndim(xi) == 1:
        return float(total[0])
    return total


def chain_sum(chains: ChainSystem, radius: float, *, include_boundary: bool = True) -> float:
    """Sum of Phi over integer frequencies 1 <= |k| <= radius (chunked)."""
    from .frequencies import integer_ball_chunked
    total = 0.0
    for stripe in integer_ball_chunked(radius, chains.dimension,
                                       include_boundary=include_boundary):
        total += float(np.sum(phi(chains, stripe.astype(float))))
    return total


def fourier_sweep_csv(set_, freqs, path) -> None:
    """Frequency sweep CSV: k, Re, Im, modulus, and the chain bound.

    The bound column carries the per-polytope chain product for polygons and
    is empty for boxes and balls (no per-set chain bound applies).
    """
    import csv

    freqs = np.atleast_2d(np.asarray(freqs))
    vals = set_.fourier_coefficients(freqs)
    bounds = polytope_ft_bound(set_, freqs.astype(float)) \
        if isinstance(set_, ConvexPolytope) else None
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k1", "k2", "re", "im", "abs", "bound"])
        for i, (k, v) in enumerate(zip(freqs, vals)):
            bound = repr(float(bounds[i])) if bounds is not None else ""
            writer.writerow([int(k[0]), int(k[1]), repr(float(v.real)),
                             repr(float(v.imag)), repr(float(abs(v))), bound])
