"""Log-log regression reports: box counting and spectral decay estimators.

Every dimension claim in the package flows through a DecayReport, which
records the raw radii/values, the fitted slope, and the residual, so a
report can always be re-checked offline.  Default fit windows exclude the
DC end and the aliased tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measures import GridMeasure, GridSet
from .spectral import Spectrum, ball_average, spherical_average

__all__ = [
    "DecayReport",
    "fit_loglog",
    "box_counts",
    "box_dimension",
    "spherical_decay",
    "envelope_decay",
    "ball_growth",
]


@dataclass(frozen=True)
class DecayReport:
    """One fitted power law: values ~ C * radii^slope over the fit window."""

    radii: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float
    residual: float
    fit_window: tuple[float, float]
    kind: str = "decay"
    meta: dict = field(default_factory=dict)

    @property
    def decay_exponent(self) -> float:
        """Exponent b in values ~ r^{-b}."""
        return -self.slope

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "radii": list(self.radii),
            "values": list(self.values),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "fit_window": list(self.fit_window),
            "meta": dict(self.meta),
        }


def fit_loglog(radii, values, kind: str = "decay", meta: dict | None = None) -> DecayReport:
    """Least squares on (log r, log v); nonpositive values are rejected."""
    r = np.asarray(radii, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    keep = v > 0
    if keep.sum() < 2:
        raise ValueError("need at least two positive samples to fit")
    lr, lv = np.log(r[keep]), np.log(v[keep])
    slope, intercept = np.polyfit(lr, lv, 1)
    resid = float(np.sqrt(np.mean((lv - (slope * lr + intercept)) ** 2)))
    if not np.isfinite(slope):
        raise ValueError("non-finite slope")
    return DecayReport(
        radii=tuple(float(x) for x in r),
        values=tuple(float(x) for x in v),
        slope=float(slope),
        intercept=float(intercept),
        residual=resid,
        fit_window=(float(r.min()), float(r.max())),
        kind=kind,
        meta=meta or {},
    )


# ---------------------------------------------------------------------------
# Box counting


def _occupancy(S) -> np.ndarray:
    if isinstance(S, GridSet):
        return S.cells
    if isinstance(S, GridMeasure):
        return S.weights > 0
    raise TypeError("expected GridSet or GridMeasure")


def box_counts(S, sizes) -> list[int]:
    """N(b): occupied b x b cell blocks, for power-of-two b."""
    cells = _occupancy(S)
    n = cells.shape[0]
    counts = []
    for b in sizes:
        if b < 1 or n % b != 0:
            raise ValueError(f"box size {b} must divide n={n}")
        view = cells
        for axis in range(cells.ndim):
            view = view.reshape(view.shape[:axis] + (n // b, b) + view.shape[axis + 1 :]).any(axis=axis + 1)
        counts.append(int(view.sum()))
    return counts


def box_dimension(S, min_box: int = 1, max_box: int | None = None) -> DecayReport:
    """Slope of log N(delta) against log(1/delta) over dyadic block sizes.

    The default window [1, n/16] keeps the coarsest blocks (where counts
    are too small to carry signal) out of the fit.
    """
    cells = _occupancy(S)
    if not cells.any():
        raise ValueError("empty set has no box dimension")
    n = cells.shape[0]
    if max_box is None:
        max_box = n // 16
    sizes = [b for b in (2**k for k in range(0, n.bit_length())) if min_box <= b <= max_box]
    if len(sizes) < 2:
        raise ValueError("fit window too narrow")
    counts = box_counts(S, sizes)
    deltas = [b / n for b in sizes]
    report = fit_loglog([1.0 / dl for dl in deltas], counts, kind="box-dimension", meta={"n": n, "box_sizes": sizes})
    return report


# ---------------------------------------------------------------------------
# Spectral decay reports; default window [8, n/4] per the estimator design


def _window(spec: Spectrum, rmin: float | None, rmax: float | None) -> tuple[float, float]:
    lo = 8.0 if rmin is None else float(rmin)
    hi = spec.n / 4 if rmax is None else float(rmax)
    if not 1 <= lo < hi <= spec.n / 2 - 1:
        raise ValueError(f"bad fit window [{lo}, {hi}] for n={spec.n}")
    return lo, hi


def spherical_decay(spec: Spectrum, rmin: float | None = None, rmax: float | None = None,
                    width: float = 1.0, step: int = 1) -> DecayReport:
    """Fit of the annulus means of |mu_hat|^2 against radius."""
    lo, hi = _window(spec, rmin, rmax)
    radii = np.arange(int(np.ceil(lo)), int(hi) + 1, step)
    vals = [spherical_average(spec, float(r), width) for r in radii]
    return fit_loglog(radii, vals, kind="spherical-decay", meta={"n": spec.n, "width": width})


def envelope_decay(spec: Spectrum, rmin: float | None = None, rmax: float | None = None,
                   window_factor: float = 2.0, direction: int = 0) -> DecayReport:
    """Fit of per-window maxima of |mu_hat|^2 along one frequency axis.

    The max over geometric windows tracks the worst-case (sup) decay, the
    quantity behind Fourier-dimension claims; plain means would hide the
    non-decaying subsequences of lacunary measures.
    """
    lo, hi = _window(spec, rmin, rmax)
    power = spec.power_table()
    ks = np.arange(1, spec.n // 2)
    idx = [0] * spec.d
    line = []
    for k in ks:
        idx[direction] = k
        line.append(power[tuple(idx)])
    line = np.asarray(line)
    radii, vals = [], []
    w0 = lo
    while w0 < hi:
        w1 = min(w0 * window_factor, hi + 1e-9)
        inside = (ks >= w0) & (ks < w1)
        if inside.any():
            radii.append(float(np.sqrt(w0 * w1)))
            vals.append(float(line[inside].max()))
        w0 = w1
    return fit_loglog(radii, vals, kind="envelope-decay",
                      meta={"n": spec.n, "window_factor": window_factor, "direction": direction})


def ball_growth(spec: Spectrum, rmin: float | None = None, rmax: float | None = None) -> DecayReport:
    """Fit of cumulative spectral mass in balls of dyadic radius."""
    lo, hi = _window(spec, rmin, rmax)
    radii = []
    r = lo
    while r <= hi:
        radii.append(r)
        r *= 2
    vals = [ball_average(spec, r) for r in radii]
    return fit_loglog(radii, vals, kind="ball-growth", meta={"n": spec.n})
