"""Grid measures and occupancy sets on dyadic lattices in [0,1)^d.

A GridMeasure is a probability vector over the n^d cells of a power-of-two
lattice; cell i carries its mass at the anchor point i/n.  All constructors
conserve mass exactly up to float rounding, and every binning step uses
multilinear splatting so spectra stay faithful through pushforwards.
"""

from __future__ import annotations

import io
import os
import struct
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridMeasure",
    "GridSet",
    "ScaleSample",
    "RotationSample",
    "splat",
    "uniform_measure",
    "point_mass",
    "cantor_measure",
    "cantor_weights_1d",
    "cantor_intervals",
    "cantor_set_1d",
    "cantor_dust_set",
    "sphere_measure",
    "segment_measure",
    "plane_slice_measure",
    "product_measure",
    "rescale",
    "circle_set",
    "segment_set",
]

MAGIC_MEASURE = b"PLGM"
MAGIC_SET = b"PLGS"
FORMAT_VERSION = 1


def _check_grid(d: int, n: int):
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2, or 3, got {d}")
    if d == 3 and not os.environ.get("PACKLAB_ENABLE_3D"):
        raise ValueError("d=3 grids are disabled; set PACKLAB_ENABLE_3D=1 to opt in")
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"lattice side must be a power of two >= 2, got {n}")


class GridMeasure:
    """Nonnegative weights over {0..n-1}^d summing to 1."""

    __slots__ = ("d", "n", "weights")

    def __init__(self, d: int, n: int, weights: np.ndarray, normalize: bool = False):
        _check_grid(d, n)
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (n,) * d:
            raise ValueError(f"weights must have shape {(n,) * d}")
        if (w < -1e-12).any():
            raise ValueError("weights must be nonnegative")
        w = np.clip(w, 0.0, None)
        total = w.sum()
        if total <= 0:
            raise ValueError("total mass must be positive")
        if normalize:
            w = w / total
        elif abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1 (got {total}); pass normalize=True")
        w.setflags(write=False)
        self.d, self.n, self.weights = d, n, w

    def total(self) -> float:
        return float(self.weights.sum())

    def support(self) -> "GridSet":
        return GridSet(self.d, self.n, self.weights > 0)

    def positions(self) -> np.ndarray:
        """(#occupied, d) anchor coordinates of the cells carrying mass."""
        idx = np.argwhere(self.weights > 0)
        return idx / self.n

    def occupied_masses(self) -> np.ndarray:
        return self.weights[self.weights > 0]

    # -- serialization: magic, version, d, n, then row-major float64 payload
    def to_bytes(self) -> bytes:
        head = MAGIC_MEASURE + struct.pack("<BBI", FORMAT_VERSION, self.d, self.n)
        return head + self.weights.astype("<f8").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GridMeasure":
        if blob[:4] != MAGIC_MEASURE:
            raise ValueError("not a grid-measure blob")
        ver, d, n = struct.unpack("<BBI", blob[4:10])
        if ver != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {ver}")
        w = np.frombuffer(blob[10:], dtype="<f8").reshape((n,) * d)
        return cls(d, n, w.copy())

    def to_csv(self) -> str:
        if self.n > 512:
            raise ValueError("CSV export is for small grids (n <= 512)")
        buf = io.StringIO()
        buf.write(",".join(f"i{k}" for k in range(self.d)) + ",weight\n")
        for idx in np.argwhere(self.weights > 0):
            buf.write(",".join(str(int(v)) for v in idx) + f",{self.weights[tuple(idx)]!r}\n")
        return buf.getvalue()


class GridSet:
    """Boolean occupancy over the same lattice."""

    __slots__ = ("d", "n", "cells")

    def __init__(self, d: int, n: int, cells: np.ndarray):
        _check_grid(d, n)
        c = np.asarray(cells, dtype=bool)
        if c.shape != (n,) * d:
            raise ValueError(f"occupancy must have shape {(n,) * d}")
        c = c.copy()
        c.setflags(write=False)
        self.d, self.n, self.cells = d, n, c

    @property
    def count(self) -> int:
        return int(self.cells.sum())

    def positions(self) -> np.ndarray:
        return np.argwhere(self.cells) / self.n

    def union(self, other: "GridSet") -> "GridSet":
        if (other.d, other.n) != (self.d, self.n):
            raise ValueError("grid mismatch")
        return GridSet(self.d, self.n, self.cells | other.cells)

    def to_bytes(self) -> bytes:
        head = MAGIC_SET + struct.pack("<BBI", FORMAT_VERSION, self.d, self.n)
        return head + np.packbits(self.cells.ravel()).tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "GridSet":
        if blob[:4] != MAGIC_SET:
            raise ValueError("not a grid-set blob")
        ver, d, n = struct.unpack("<BBI", blob[4:10])
        if ver != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {ver}")
        bits = np.unpackbits(np.frombuffer(blob[10:], dtype=np.uint8), count=n**d)
        return cls(d, n, bits.astype(bool).reshape((n,) * d))


@dataclass(frozen=True)
class ScaleSample:
    """Discrete scale distribution; nodes kept inside [1,2] by convention."""

    r: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=np.float64)
        w = np.asarray(self.w, dtype=np.float64)
        if r.ndim != 1 or r.shape != w.shape:
            raise ValueError("r and w must be aligned 1-D arrays")
        if (r <= 0).any():
            raise ValueError("scales must be positive")
        if (w < 0).any() or w.sum() <= 0:
            raise ValueError("weights must be nonnegative with positive total")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "w", w / w.sum())

    @classmethod
    def uniform(cls, count: int = 64, lo: float = 1.0, hi: float = 2.0) -> "ScaleSample":
        # midpoint nodes: equal-weight quadrature of the uniform law on [lo,hi]
        edges = np.linspace(lo, hi, count + 1)
        return cls((edges[:-1] + edges[1:]) / 2, np.full(count, 1.0 / count))

    @classmethod
    def dirac(cls, r: float) -> "ScaleSample":
        return cls(np.array([r]), np.array([1.0]))


@dataclass(frozen=True)
class RotationSample:
    """Discrete distribution on plane rotations (d=2), by angle."""

    angles: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=np.float64)
        w = np.asarray(self.w, dtype=np.float64)
        if a.ndim != 1 or a.shape != w.shape:
            raise ValueError("angles and w must be aligned 1-D arrays")
        if (w < 0).any() or w.sum() <= 0:
            raise ValueError("weights must be nonnegative with positive total")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "w", w / w.sum())

    @classmethod
    def uniform(cls, count: int = 256) -> "RotationSample":
        return cls(np.arange(count) * 2 * np.pi / count, np.full(count, 1.0 / count))

    @classmethod
    def dirac(cls, angle: float) -> "RotationSample":
        return cls(np.array([angle]), np.array([1.0]))

    def matrices(self) -> np.ndarray:
        c, s = np.cos(self.angles), np.sin(self.angles)
        return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def splat(points: np.ndarray, masses: np.ndarray, d: int, n: int, out: np.ndarray | None = None) -> np.ndarray:
    """Multilinear deposit of point masses onto the lattice.

    Raises on any point whose splat support leaves [0,1)^d; callers rely on
    this as the box-overflow check.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    masses = np.broadcast_to(np.asarray(masses, dtype=np.float64), (pts.shape[0],))
    if pts.shape[1] != d:
        raise ValueError("points have wrong dimension")
    scaled = pts * n
    base = np.floor(scaled).astype(np.int64)
    frac = scaled - base
    # top anchor n-1 is fine only when nothing spills onto cell n
    bad = (base < 0) | (base > n - 1) | ((base == n - 1) & (frac > 1e-12))
    if bad.any():
        raise ValueError("mass leaves the unit box")
    if out is None:
        out = np.zeros((n,) * d, dtype=np.float64)
    for corner in np.ndindex(*(2,) * d):
        off = np.array(corner)
        wgt = np.prod(np.where(off == 1, frac, 1.0 - frac), axis=1)
        idx = np.minimum(base + off, n - 1)  # top anchors only reached with weight 0
        np.add.at(out, tuple(idx.T), masses * wgt)
    return out


def uniform_measure(d: int, n: int, lo: float = 0.0, hi: float = 1.0) -> GridMeasure:
    """Uniform mass on the sub-box [lo,hi)^d, exact on cell boundaries."""
    i0, i1 = int(round(lo * n)), int(round(hi * n))
    if not 0 <= i0 < i1 <= n:
        raise ValueError("box out of range")
    w = np.zeros((n,) * d)
    sl = (slice(i0, i1),) * d
    w[sl] = 1.0
    return GridMeasure(d, n, w, normalize=True)


def point_mass(d: int, n: int, x) -> GridMeasure:
    w = splat(np.array([x], dtype=np.float64), np.array([1.0]), d, n)
    return GridMeasure(d, n, w, normalize=True)


def cantor_weights_1d(ratio: float, depth: int, n: int) -> np.ndarray:
    """Exact-overlap binning of the self-similar two-branch construction."""
    if ratio**depth * n < 1.0 - 1e-12:
        raise ValueError(f"depth {depth} exceeds resolution: need ratio^depth >= 1/n")
    lefts, length = cantor_intervals(ratio, depth)
    mass = 1.0 / len(lefts)
    w = np.zeros(n)
    for left in lefts:
        a, b = left * n, (left + length) * n
        i0, i1 = int(np.floor(a)), int(np.ceil(b))
        for i in range(i0, min(i1, n)):
            overlap = min(b, i + 1) - max(a, i)
            if overlap > 0:
                w[i] += mass * overlap / (b - a)
    return w


def cantor_measure(ratio: float, depth: int, n: int) -> GridMeasure:
    """Uniform mass on the 2^depth surviving intervals, binned to cells."""
    return GridMeasure(1, n, cantor_weights_1d(ratio, depth, n), normalize=True)


def sphere_measure(n: int, center=(0.5, 0.5), radius: float = 0.25, samples_per_cell: int = 64) -> GridMeasure:
    """Arc-length-uniform mass on a circle, splatted to the d=2 lattice."""
    if n < 256:
        raise ValueError("circle fixture needs n >= 256")
    m = samples_per_cell * n
    theta = (np.arange(m) + 0.5) * (2 * np.pi / m)
    pts = np.stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)], axis=1)
    w = splat(pts, np.full(m, 1.0 / m), 2, n)
    return GridMeasure(2, n, w, normalize=True)


def segment_measure(n: int, length: float = 0.5, y: float = 0.5) -> GridMeasure:
    """Uniform mass on a horizontal segment centered in the box."""
    w = np.zeros((n, n))
    x0 = int(round((0.5 - length / 2) * n))
    x1 = int(round((0.5 + length / 2) * n))
    w[x0:x1, int(round(y * n))] = 1.0
    return GridMeasure(2, n, w, normalize=True)


def plane_slice_measure(n: int, length: float = 0.5) -> GridMeasure:
    """Smooth bump density on an axis slice: the flat-direction fixture."""
    w = np.zeros((n, n))
    x0 = int(round((0.5 - length / 2) * n))
    x1 = int(round((0.5 + length / 2) * n))
    t = np.linspace(-1, 1, x1 - x0, endpoint=False)
    w[x0:x1, n // 2] = np.cos(np.pi * t / 2) ** 2
    return GridMeasure(2, n, w, normalize=True)


def product_measure(mu: GridMeasure, nu: GridMeasure) -> GridMeasure:
    """Outer product of two 1-D measures as a d=2 measure."""
    if mu.d != 1 or nu.d != 1 or mu.n != nu.n:
        raise ValueError("needs two 1-D measures on the same lattice")
    return GridMeasure(2, mu.n, np.outer(mu.weights, nu.weights))


def rescale(mu: GridMeasure, factor: float, offset=0.0) -> GridMeasure:
    """Pushforward under x -> factor*x + offset (a binning, mass preserved)."""
    pos = mu.positions() * factor + np.atleast_1d(offset)
    w = splat(pos, mu.occupied_masses(), mu.d, mu.n)
    return GridMeasure(mu.d, mu.n, w, normalize=True)


def cantor_intervals(ratio: float, depth: int) -> tuple[np.ndarray, float]:
    """Left endpoints and common length of the surviving intervals."""
    if not 0 < ratio <= 0.5:
        raise ValueError("ratio must be in (0, 1/2]")
    lefts = np.array([0.0])
    length = 1.0
    for _ in range(depth):
        new_len = length * ratio
        lefts = np.concatenate([lefts, lefts + length - new_len])
        length = new_len
    return np.sort(lefts), length


def cantor_set_1d(ratio: float, depth: int, n: int) -> GridSet:
    """Occupancy of the construction's intervals; no resolution floor, so
    depths past the lattice scale are fine (the rasterization saturates)."""
    lefts, length = cantor_intervals(ratio, depth)
    cells = np.zeros(n, dtype=bool)
    for left in lefts:
        i0 = int(np.floor(left * n))
        i1 = max(i0 + 1, int(np.ceil((left + length) * n)))
        cells[i0 : min(i1, n)] = True
    return GridSet(1, n, cells)


def cantor_dust_set(ratio: float, depth: int, n: int) -> GridSet:
    """Planar product of two copies of the 1-D construction."""
    line = cantor_set_1d(ratio, depth, n).cells
    return GridSet(2, n, np.outer(line, line))


def circle_set(n: int, center=(0.5, 0.5), radius: float = 0.25) -> GridSet:
    """Rasterized circle occupancy (cells the curve passes through)."""
    m = 64 * n
    theta = (np.arange(m) + 0.5) * (2 * np.pi / m)
    xi = np.floor((center[0] + radius * np.cos(theta)) * n).astype(int)
    yi = np.floor((center[1] + radius * np.sin(theta)) * n).astype(int)
    ok = (xi >= 0) & (xi < n) & (yi >= 0) & (yi < n)
    if not ok.all():
        raise ValueError("circle leaves the unit box")
    cells = np.zeros((n, n), dtype=bool)
    cells[xi, yi] = True
    return GridSet(2, n, cells)


def segment_set(n: int, length: float = 0.5, y: float = 0.5) -> GridSet:
    cells = np.zeros((n, n), dtype=bool)
    x0 = int(round((0.5 - length / 2) * n))
    x1 = int(round((0.5 + length / 2) * n))
    cells[x0:x1, int(round(y * n))] = True
    return GridSet(2, n, cells)
