"""Discrete Fourier analysis on F_q^d and the spherical restriction quantities.

The transform follows the normalization with q^{-d} on the forward side,
so every counting identity (Plancherel, inversion, sphere masses) matches
its exact statement.  The fast path factorizes axis by axis via numpy's
FFT; a naive definition-level evaluator serves as the cross-check oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .ffield import all_vectors, index_norms, is_odd_prime

__all__ = [
    "PointSet",
    "SpectrumTable",
    "SphereDecomposition",
    "dft",
    "inverse_dft",
    "naive_dft",
    "naive_dft_at",
    "spheres",
    "sphere_masses",
    "m_star",
    "m_max",
    "zero_sphere_mass",
    "restriction_bound",
    "restriction_ratio_report",
]

NAIVE_FULL_LIMIT = 1024  # full q^d x q^d kernel matrices above this are refused


def _check_field(q: int, d: int):
    if not is_odd_prime(q):
        raise ValueError(f"modulus must be an odd prime, got {q}")
    if d < 1:
        raise ValueError("dimension must be >= 1")


class PointSet:
    """Subset of F_q^d held as a dense mask over the little-endian index."""

    __slots__ = ("q", "d", "mask")

    def __init__(self, q: int, d: int, mask: np.ndarray):
        _check_field(q, d)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (q**d,):
            raise ValueError(f"mask must be flat with length q^d={q**d}")
        mask = mask.copy()
        mask.setflags(write=False)
        self.q, self.d, self.mask = q, d, mask

    @classmethod
    def from_indices(cls, q: int, d: int, indices) -> "PointSet":
        mask = np.zeros(q**d, dtype=bool)
        mask[np.asarray(indices, dtype=np.int64)] = True
        return cls(q, d, mask)

    @classmethod
    def from_points(cls, q: int, d: int, points) -> "PointSet":
        weights = q ** np.arange(d)
        idx = [int((np.array(p) % q) @ weights) for p in points]
        return cls.from_indices(q, d, idx)

    @classmethod
    def full(cls, q: int, d: int) -> "PointSet":
        return cls(q, d, np.ones(q**d, dtype=bool))

    @classmethod
    def empty(cls, q: int, d: int) -> "PointSet":
        return cls(q, d, np.zeros(q**d, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def points(self) -> np.ndarray:
        return all_vectors(self.q, self.d)[self.mask]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and other.q == self.q
            and other.d == self.d
            and bool((other.mask == self.mask).all())
        )

    def __repr__(self) -> str:
        return f"PointSet(q={self.q}, d={self.d}, size={self.size})"


@dataclass(frozen=True, slots=True)
class SpectrumTable:
    """Complex values indexed by frequency m in F_q^d (same index layout)."""

    q: int
    d: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.q**self.d,):
            raise ValueError("values must be flat with length q^d")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def power(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def _as_grid(f: np.ndarray, q: int, d: int) -> np.ndarray:
    return np.reshape(np.asarray(f, dtype=np.complex128), (q,) * d, order="F")


def dft(f, q: int | None = None, d: int | None = None) -> SpectrumTable:
    """Forward transform f_hat(m) = q^{-d} sum_x chi(-x.m) f(x), axis-factorized."""
    if isinstance(f, PointSet):
        q, d, f = f.q, f.d, f.mask.astype(np.complex128)
    if q is None or d is None:
        raise ValueError("q and d are required for raw arrays")
    grid = _as_grid(f, q, d)
    out = np.fft.fftn(grid) / q**d
    return SpectrumTable(q, d, out.reshape(-1, order="F"))


def inverse_dft(F: SpectrumTable) -> np.ndarray:
    """Inversion f(x) = sum_m chi(x.m) f_hat(m); exact round trip with dft."""
    grid = _as_grid(F.values, F.q, F.d)
    out = np.fft.ifftn(grid) * F.q**F.d
    return out.reshape(-1, order="F")


def naive_dft(f, q: int | None = None, d: int | None = None) -> SpectrumTable:
    """Definition-level double loop as a dense kernel matrix; oracle path."""
    if isinstance(f, PointSet):
        q, d, f = f.q, f.d, f.mask.astype(np.complex128)
    n = q**d
    if n > NAIVE_FULL_LIMIT:
        raise ValueError(f"naive full transform refused for q^d={n} > {NAIVE_FULL_LIMIT}; use naive_dft_at")
    digits = all_vectors(q, d)
    dots = (digits @ digits.T) % q
    kernel = np.exp(-2j * np.pi * dots / q)
    values = kernel @ np.asarray(f, dtype=np.complex128) / n
    return SpectrumTable(q, d, values)


def naive_dft_at(f, q: int, d: int, m_indices) -> np.ndarray:
    """Evaluate the defining sum at selected output frequencies only."""
    if isinstance(f, PointSet):
        f = f.mask.astype(np.complex128)
    digits = all_vectors(q, d)
    ms = digits[np.asarray(m_indices, dtype=np.int64)]
    dots = (digits @ ms.T) % q
    kernel = np.exp(-2j * np.pi * dots / q)
    return kernel.T @ np.asarray(f, dtype=np.complex128) / q**d


@dataclass(frozen=True)
class SphereDecomposition:
    """Partition of F_q^d into spheres S_j = {m : ||m|| = j}."""

    q: int
    d: int
    norms: np.ndarray = field(repr=False)
    indices: dict[int, np.ndarray] = field(repr=False)

    def sizes(self) -> dict[int, int]:
        return {j: len(v) for j, v in self.indices.items()}


def spheres(q: int, d: int) -> SphereDecomposition:
    _check_field(q, d)
    norms = index_norms(q, d)
    indices = {j: np.flatnonzero(norms == j) for j in range(q)}
    return SphereDecomposition(q, d, norms, indices)


def sphere_masses(E: PointSet) -> np.ndarray:
    """Spherical Fourier mass sum_{m in S_j} |E_hat(m)|^2 for every j."""
    power = dft(E).power()
    norms = index_norms(E.q, E.d)
    return np.bincount(norms, weights=power, minlength=E.q)


def m_star(E: PointSet) -> tuple[float, int]:
    """Max spherical mass over nonzero norms j, with the arg max."""
    if E.size < 1:
        raise ValueError("point set must be nonempty")
    masses = sphere_masses(E)
    j = int(np.argmax(masses[1:])) + 1
    return float(masses[j]), j


def m_max(E: PointSet) -> float:
    """Max spherical mass over all norms, including j=0."""
    if E.size < 1:
        raise ValueError("point set must be nonempty")
    return float(sphere_masses(E).max())


def zero_sphere_mass(E: PointSet) -> float:
    """Fourier mass on the zero sphere S_0 (intended regime d=2 mod 4, q=3 mod 4)."""
    if not (E.d % 4 == 2 and E.q % 4 == 3):
        warnings.warn(
            f"zero-sphere regime expects d=2 mod 4 and q=3 mod 4; got d={E.d}, q={E.q}",
            stacklevel=2,
        )
    return float(sphere_masses(E)[0])


def restriction_bound(q: int, d: int, size: int) -> float:
    """Unit-constant spherical restriction bound for a set of the given size.

    d=2 bounds M*(E); even d>=4 bounds M*(E); odd d>=3 bounds M(E) via the
    min form with both branches.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if d == 2:
        return size**1.5 / q**3
    first = size / q**d
    second = size / q ** (d + 1) + size**2 / q ** ((3 * d + 1) / 2)
    return min(first, second)


def _quantity(E: PointSet) -> tuple[str, float, int]:
    if E.d >= 3 and E.d % 2 == 1:
        masses = sphere_masses(E)
        j = int(np.argmax(masses))
        return "M", float(masses[j]), j
    value, j = m_star(E)
    return "M*", value, j


def restriction_ratio_report(
    q: int,
    d: int,
    sampler=None,
    trials: int = 0,
    seed: int | None = None,
    exhaustive: bool = False,
    threads: int | None = None,
) -> dict:
    """Per-set ratio of the exact restriction quantity to its stated bound.

    Exhaustive mode enumerates every nonempty subset and is capped at a
    512-subset domain (q=3, d=2).  Randomized mode needs a seeded sampler.
    """
    from .parallel import ordered_map, spawn_seeds
    from .reporting import report_envelope
    from .samplers import random_point_set

    _check_field(q, d)
    records: list[dict]
    if exhaustive:
        n = q**d
        if 2**n - 1 > 512:
            raise ValueError(f"exhaustive sweep needs 2^(q^d)-1 <= 512 subsets, got q^d={n}")

        def run_mask(bits: int) -> dict:
            mask = np.array([(bits >> k) & 1 for k in range(n)], dtype=bool)
            E = PointSet(q, d, mask)
            kind, value, j = _quantity(E)
            bound = restriction_bound(q, d, E.size)
            return {
                "set_bits": bits,
                "size": E.size,
                "quantity": kind,
                "value": value,
                "argmax_j": j,
                "bound": bound,
                "ratio": value / bound,
            }

        records = ordered_map(run_mask, range(1, 2**n), threads)
    else:
        if trials < 1:
            raise ValueError("randomized mode needs trials >= 1")
        if seed is None:
            raise ValueError("randomized mode needs a seed")
        if sampler is None:
            sampler = random_point_set
        seeds = spawn_seeds(seed, trials)

        def run_trial(args: tuple[int, int]) -> dict:
            t, s = args
            E = sampler(q, d, np.random.default_rng(s))
            kind, value, j = _quantity(E)
            bound = restriction_bound(q, d, E.size)
            return {
                "trial": t,
                "size": E.size,
                "quantity": kind,
                "value": value,
                "argmax_j": j,
                "bound": bound,
                "ratio": value / bound,
            }

        records = ordered_map(run_trial, list(enumerate(seeds)), threads)

    ratios = sorted(r["ratio"] for r in records)
    summary = {
        "count": len(records),
        "max_ratio": ratios[-1],
        "median_ratio": ratios[len(ratios) // 2],
    }
    config = {"q": q, "d": d, "trials": trials, "seed": seed, "exhaustive": exhaustive}
    return report_envelope("ff-restrict", config, records, summary)
