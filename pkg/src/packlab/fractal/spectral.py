"""Spectra of grid measures and the averaged-decay quantities built on them.

The spectrum is evaluated at integer frequency vectors k with |k|_inf < n/2;
off-lattice reads use bilinear interpolation and are the documented O(1/n)
error source of every decay fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .measures import GridMeasure, RotationSample, ScaleSample

__all__ = [
    "Spectrum",
    "spectrum",
    "nonuniform_transform",
    "ball_average",
    "spherical_average",
    "sigma_gamma",
    "sigma_zeta",
    "sigma_gamma_zeta",
]


@dataclass(frozen=True)
class Spectrum:
    """FFT table of a grid measure, in numpy frequency layout."""

    d: int
    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.complex128)
        if t.shape != (self.n,) * self.d:
            raise ValueError("table shape mismatch")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def max_frequency(self) -> int:
        return self.n // 2 - 1

    def value(self, k) -> complex:
        """mu_hat at an integer frequency vector."""
        idx = tuple(int(v) % self.n for v in np.atleast_1d(k))
        return complex(self.table[idx])

    @cached_property
    def _power(self) -> np.ndarray:
        p = np.abs(self.table) ** 2
        p.setflags(write=False)
        return p

    @cached_property
    def _mags(self) -> np.ndarray:
        axes = np.meshgrid(*[np.fft.fftfreq(self.n) * self.n] * self.d, indexing="ij")
        m = np.sqrt(sum(a**2 for a in axes))
        m.setflags(write=False)
        return m

    @cached_property
    def _shells(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-shell power sums and point counts, shell s = {floor(|k|) == s}."""
        shell = np.floor(self._mags).astype(np.int64).ravel()
        sums = np.bincount(shell, weights=self._power.ravel())
        counts = np.bincount(shell)
        return sums, counts

    def power_table(self) -> np.ndarray:
        return self._power

    def freq_magnitudes(self) -> np.ndarray:
        return self._mags

    def _interp_real(self, data: np.ndarray, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(np.asarray(xi, dtype=np.float64))
        if xi.shape[1] != self.d:
            raise ValueError("frequency points have wrong dimension")
        if (np.abs(xi) > self.n // 2 - 1).any():
            raise ValueError("frequency out of window")
        base = np.floor(xi).astype(np.int64)
        frac = xi - base
        out = np.zeros(xi.shape[0])
        for corner in np.ndindex(*(2,) * self.d):
            off = np.array(corner)
            wgt = np.prod(np.where(off == 1, frac, 1.0 - frac), axis=1)
            idx = tuple(((base + off) % self.n).T)
            out += wgt * data[idx]
        return out

    def interp(self, xi) -> np.ndarray:
        """Complex bilinear read of mu_hat at real-valued frequencies."""
        xi = np.atleast_2d(xi)
        return self._interp_real(self.table.real, xi) + 1j * self._interp_real(self.table.imag, xi)

    def power_interp(self, xi) -> np.ndarray:
        """Bilinear read of |mu_hat|^2 at real-valued frequencies."""
        return self._interp_real(self.power_table(), xi)


def spectrum(mu: GridMeasure, centered: bool = False) -> Spectrum:
    """mu_hat(k) = sum_cells w exp(-2 pi i k.x); optionally about the box center.

    Centering re-phases by exp(2 pi i k . c) with c = (1/2,...,1/2): a sign
    flip on odd total frequency, exact on the lattice.
    """
    table = np.fft.fftn(mu.weights)
    if centered:
        k = np.fft.fftfreq(mu.n) * mu.n
        parity = k.astype(np.int64)
        for axis in range(mu.d):
            shape = [1] * mu.d
            shape[axis] = mu.n
            table = table * np.where(parity % 2 == 0, 1.0, -1.0).reshape(shape)
    return Spectrum(mu.d, mu.n, table)


def nonuniform_transform(mu: GridMeasure, xi, chunk: int = 256) -> np.ndarray:
    """mu_hat at arbitrary real frequencies by the defining sum over cells.

    Exact up to rounding (no interpolation); cost is #queries x #support
    cells, so it is the oracle path, not the bulk path.
    """
    pos = mu.positions()
    masses = mu.occupied_masses()
    xi = np.atleast_2d(np.asarray(xi, dtype=np.float64))
    out = np.empty(xi.shape[0], dtype=np.complex128)
    for start in range(0, xi.shape[0], chunk):
        block = xi[start : start + chunk]
        phases = np.exp(-2j * np.pi * (block @ pos.T))
        out[start : start + chunk] = phases @ masses
    return out


def _check_radius(spec: Spectrum, r: float):
    if not 1 <= r <= spec.n / 4:
        raise ValueError(f"radius {r} outside the fit window [1, n/4]")


def ball_average(spec: Spectrum, R: float) -> float:
    """Total spectral mass sum_{|k| <= R} |mu_hat(k)|^2."""
    _check_radius(spec, R)
    mags = spec.freq_magnitudes()
    return float(spec.power_table()[mags <= R].sum())


def spherical_average(spec: Spectrum, r: float, width: float = 1.0) -> float:
    """Mean of |mu_hat|^2 over the lattice annulus r-width <= |k| < r+width."""
    if spec.d < 2:
        raise ValueError("spherical averages need d >= 2")
    _check_radius(spec, r)
    if width == 1.0 and float(r).is_integer():
        # the annulus [r-1, r+1) is exactly two integer shells
        sums, counts = spec._shells
        s = int(r)
        c = counts[s - 1 : s + 1].sum()
        if c == 0:
            raise ValueError(f"empty annulus at r={r}, width={width}")
        return float(sums[s - 1 : s + 1].sum() / c)
    mags = spec.freq_magnitudes()
    ring = (mags >= r - width) & (mags < r + width)
    if not ring.any():
        raise ValueError(f"empty annulus at r={r}, width={width}")
    return float(spec.power_table()[ring].mean())


def _check_transformed(spec: Spectrum, pts: np.ndarray):
    # post-transform frequencies must stay inside the reliable window
    if (np.linalg.norm(pts, axis=-1) > spec.n / 4 + 1e-9).any():
        raise ValueError("transformed frequency outside the window |xi| <= n/4")


def sigma_gamma(spec: Spectrum, gamma: RotationSample, xi) -> float:
    """Rotation-averaged power: sum_g w_g |mu_hat(g^{-1} xi)|^2, d=2."""
    if spec.d != 2:
        raise ValueError("rotation averages are implemented for d=2")
    xi = np.asarray(xi, dtype=np.float64)
    mats = gamma.matrices()  # g; apply inverse = transpose
    pts = np.einsum("gij,i->gj", mats, xi)
    _check_transformed(spec, pts)
    vals = spec.power_interp(pts)
    return float((gamma.w * vals).sum())


def sigma_zeta(spec: Spectrum, zeta: ScaleSample, xi) -> float:
    """Scale-averaged power: sum_r w_r |mu_hat(r xi)|^2."""
    xi = np.asarray(xi, dtype=np.float64)
    r = np.clip(zeta.r, 1.0, 2.0)
    pts = r[:, None] * xi[None, :]
    _check_transformed(spec, pts)
    vals = spec.power_interp(pts)
    return float((zeta.w * vals).sum())


def sigma_gamma_zeta(spec: Spectrum, gamma: RotationSample, zeta: ScaleSample, xi) -> float:
    """Joint rotation/scale-averaged power, d=2."""
    if spec.d != 2:
        raise ValueError("rotation averages are implemented for d=2")
    xi = np.asarray(xi, dtype=np.float64)
    r = np.clip(zeta.r, 1.0, 2.0)
    mats = gamma.matrices()
    rotated = np.einsum("gij,i->gj", mats, xi)
    pts = (r[:, None, None] * rotated[None, :, :]).reshape(-1, 2)
    _check_transformed(spec, pts)
    vals = spec.power_interp(pts).reshape(len(r), len(gamma.w))
    return float((zeta.w[:, None] * gamma.w[None, :] * vals).sum())
