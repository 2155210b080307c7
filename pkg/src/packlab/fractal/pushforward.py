"""Pushforward measures under dilation/rotation/similarity actions,
convolution sums, and occupancy-union constructions.

Dilations act about the origin (inputs are expected pre-scaled into
[0,1/2)^d so r <= 2 stays in the box); rotations and similarities act
about the box center.  Leaving the box raises rather than clipping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import GridMeasure, GridSet, RotationSample, ScaleSample, splat

__all__ = [
    "pushforward_dilate",
    "pushforward_rotate",
    "pushforward_similarity",
    "sum_pushforward",
    "kfold_sum",
    "AffineMap",
    "union_construct",
]

_CENTER = 0.5


def pushforward_dilate(mu: GridMeasure, zeta: ScaleSample) -> GridMeasure:
    """Image of mu x zeta under (x, r) -> r x, binned back to the lattice."""
    pos = mu.positions()
    masses = mu.occupied_masses()
    out = np.zeros((mu.n,) * mu.d)
    for r, w in zip(zeta.r, zeta.w):
        splat(pos * r, masses * w, mu.d, mu.n, out=out)
    return GridMeasure(mu.d, mu.n, out, normalize=True)


def pushforward_rotate(mu: GridMeasure, gamma: RotationSample) -> GridMeasure:
    """Image of mu x gamma under (x, g) -> g(x), rotating about the box center."""
    if mu.d != 2:
        raise ValueError("rotation pushforwards are implemented for d=2")
    pos = mu.positions() - _CENTER
    masses = mu.occupied_masses()
    out = np.zeros((mu.n,) * 2)
    for mat, w in zip(gamma.matrices(), gamma.w):
        splat(pos @ mat.T + _CENTER, masses * w, 2, mu.n, out=out)
    return GridMeasure(2, mu.n, out, normalize=True)


def pushforward_similarity(mu: GridMeasure, gamma: RotationSample, zeta: ScaleSample) -> GridMeasure:
    """Image of mu x gamma x zeta under (x, g, r) -> r g(x), about the center."""
    if mu.d != 2:
        raise ValueError("similarity pushforwards are implemented for d=2")
    pos = mu.positions() - _CENTER
    masses = mu.occupied_masses()
    out = np.zeros((mu.n,) * 2)
    for mat, wg in zip(gamma.matrices(), gamma.w):
        rotated = pos @ mat.T
        for r, wr in zip(zeta.r, zeta.w):
            splat(rotated * r + _CENTER, masses * (wg * wr), 2, mu.n, out=out)
    return GridMeasure(2, mu.n, out, normalize=True)


def _support_span(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    idx = np.argwhere(w > 0)
    return idx.min(axis=0), idx.max(axis=0)


def sum_pushforward(mu: GridMeasure, nu: GridMeasure) -> GridMeasure:
    """Distribution of X + Y: the convolution of the weight arrays.

    Computed as an FFT product; supports must sum inside the box, otherwise
    the circular wrap would alias and we raise instead.
    """
    if (mu.d, mu.n) != (nu.d, nu.n):
        raise ValueError("grid mismatch")
    _, hi_a = _support_span(mu.weights)
    _, hi_b = _support_span(nu.weights)
    if ((hi_a + hi_b) > mu.n - 1).any():
        raise ValueError("support of the sum leaves the unit box")
    axes = tuple(range(mu.d))
    conv = np.fft.irfftn(
        np.fft.rfftn(mu.weights, axes=axes) * np.fft.rfftn(nu.weights, axes=axes),
        s=mu.weights.shape, axes=axes,
    )
    return GridMeasure(mu.d, mu.n, np.clip(conv, 0.0, None), normalize=True)


def kfold_sum(mu: GridMeasure, k: int) -> GridMeasure:
    """k-fold convolution power (the k-term sum set of the support)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return mu
    _, hi = _support_span(mu.weights)
    if (hi * k > mu.n - 1).any():
        raise ValueError(f"support of the {k}-fold sum leaves the unit box; rescale by 1/{k} first")
    axes = tuple(range(mu.d))
    conv = np.fft.irfftn(np.fft.rfftn(mu.weights, axes=axes) ** k, s=mu.weights.shape, axes=axes)
    return GridMeasure(mu.d, mu.n, np.clip(conv, 0.0, None), normalize=True)


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b on box coordinates; builders cover the sampled actions."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=np.float64))
        b = np.atleast_1d(np.asarray(self.offset, dtype=np.float64))
        if m.shape[0] != m.shape[1] or m.shape[0] != b.shape[0]:
            raise ValueError("matrix/offset shape mismatch")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", b)

    @property
    def d(self) -> int:
        return self.offset.shape[0]

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.matrix.T + self.offset

    @classmethod
    def translate_dilate(cls, z, r: float = 1.0) -> "AffineMap":
        z = np.atleast_1d(np.asarray(z, dtype=np.float64))
        return cls(np.eye(len(z)) * r, z)

    @classmethod
    def rigid(cls, angle: float, z) -> "AffineMap":
        c, s = np.cos(angle), np.sin(angle)
        return cls(np.array([[c, -s], [s, c]]), z)

    @classmethod
    def similarity(cls, angle: float, z, r: float) -> "AffineMap":
        c, s = np.cos(angle), np.sin(angle)
        return cls(r * np.array([[c, -s], [s, c]]), z)


def union_construct(E: GridSet, transforms) -> GridSet:
    """Occupancy union of the images of E under every sampled transform.

    Each occupied cell is tracked through its corners and center so
    moderate dilations (r <= 2) leave no rasterization holes.
    """
    base = np.argwhere(E.cells).astype(np.float64)
    n = E.n
    offsets = [np.full(E.d, 0.5)]
    offsets += [np.array(c, dtype=np.float64) * (1 - 1e-9) for c in np.ndindex(*(2,) * E.d)]
    out = np.zeros((n,) * E.d, dtype=bool)
    for tr in transforms:
        if not isinstance(tr, AffineMap):
            raise TypeError("transforms must be AffineMap instances")
        if tr.d != E.d:
            raise ValueError("transform dimension mismatch")
        for off in offsets:
            pts = tr.apply((base + off) / n)
            idx = np.floor(pts * n).astype(np.int64)
            if (idx < 0).any() or (idx >= n).any():
                raise ValueError("transformed set leaves the unit box")
            out[tuple(idx.T)] = True
    return GridSet(E.d, n, out)
