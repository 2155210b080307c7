"""Seeded samplers for point sets and motion sets.

Extremizers of the packing inequalities tend to be structured, so the
randomized verifiers mix uniform subsets with subspaces, spheres, and
Cartesian products.  Every sampler takes an explicit numpy Generator.
"""

from __future__ import annotations

import numpy as np

from .ffield import all_vectors
from .ffourier import PointSet, spheres

__all__ = [
    "random_point_set",
    "random_point_set_of_size",
    "subspace_set",
    "sphere_set",
    "product_set",
    "structured_point_set",
]


def random_point_set_of_size(q: int, d: int, size: int, rng: np.random.Generator) -> PointSet:
    n = q**d
    if not 1 <= size <= n:
        raise ValueError(f"size must be in [1, {n}]")
    idx = rng.choice(n, size=size, replace=False)
    return PointSet.from_indices(q, d, idx)


def random_point_set(q: int, d: int, rng: np.random.Generator) -> PointSet:
    """Uniform subset at a density drawn log-uniformly; never empty."""
    n = q**d
    density = np.exp(rng.uniform(np.log(1.0 / n), 0.0))
    size = max(1, int(round(density * n)))
    return random_point_set_of_size(q, d, size, rng)


def subspace_set(q: int, d: int, rng: np.random.Generator, dim: int | None = None) -> PointSet:
    """Span of `dim` random vectors (an affine shift keeps it varied)."""
    if dim is None:
        dim = int(rng.integers(1, d + 1))
    gens = rng.integers(0, q, size=(dim, d))
    coeffs = all_vectors(q, dim)  # all coefficient tuples
    points = (coeffs @ gens) % q
    shift = rng.integers(0, q, size=d)
    return PointSet.from_points(q, d, (points + shift) % q)


def sphere_set(q: int, d: int, j: int) -> PointSet:
    """The sphere S_j as a point set."""
    idx = spheres(q, d).indices[j % q]
    if len(idx) == 0:
        raise ValueError(f"sphere S_{j} is empty for q={q}, d={d}")
    return PointSet.from_indices(q, d, idx)


def product_set(q: int, d: int, rng: np.random.Generator) -> PointSet:
    """Cartesian product A_1 x ... x A_d of random nonempty 1-D sets."""
    factors = []
    for _ in range(d):
        k = int(rng.integers(1, q + 1))
        factors.append(rng.choice(q, size=k, replace=False))
    mesh = np.meshgrid(*factors, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    return PointSet.from_points(q, d, points)


def structured_point_set(q: int, d: int, rng: np.random.Generator) -> PointSet:
    """Random draw over the structured and uniform families."""
    kind = rng.integers(0, 4)
    if kind == 0:
        return subspace_set(q, d, rng)
    if kind == 1:
        nonempty = [j for j, idx in spheres(q, d).indices.items() if len(idx) > 0]
        return sphere_set(q, d, int(rng.choice(nonempty)))
    if kind == 2:
        return product_set(q, d, rng)
    return random_point_set(q, d, rng)
