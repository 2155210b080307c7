"""Arithmetic of odd prime fields, vectors over them, and additive characters.

Everything that can be counted is kept in exact integers; only character
values live in complex floating point.  Vectors carry their modulus, and
mixing moduli (or dimensions) raises instead of coercing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "is_odd_prime",
    "PrimeField",
    "FieldVector",
    "AdditiveCharacter",
    "dot",
    "norm",
    "quadratic_character",
    "vec_to_index",
    "index_to_vec",
    "all_vectors",
    "index_norms",
    "index_add_table",
    "index_neg_table",
]


def is_odd_prime(q: int) -> bool:
    """Trial-division primality test; ample for desk-scale moduli."""
    if q < 3 or q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field F_q for an odd prime q; elements are residues in [0, q)."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not is_odd_prime(q):
            raise ValueError(f"modulus must be an odd prime, got {q}")
        self.q = q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.q - 2, self.q)

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"


@dataclass(frozen=True, slots=True)
class FieldVector:
    """Immutable vector in F_q^d with componentwise arithmetic mod q."""

    coords: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not is_odd_prime(self.q):
            raise ValueError(f"modulus must be an odd prime, got {self.q}")
        if len(self.coords) < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "coords", tuple(c % self.q for c in self.coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    def _check(self, other: "FieldVector"):
        if self.q != other.q:
            raise ValueError(f"modulus mismatch: {self.q} vs {other.q}")
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other: "FieldVector") -> "FieldVector":
        self._check(other)
        return FieldVector(tuple((a + b) % self.q for a, b in zip(self.coords, other.coords)), self.q)

    def __sub__(self, other: "FieldVector") -> "FieldVector":
        self._check(other)
        return FieldVector(tuple((a - b) % self.q for a, b in zip(self.coords, other.coords)), self.q)

    def __neg__(self) -> "FieldVector":
        return FieldVector(tuple(-a % self.q for a in self.coords), self.q)

    def scale(self, c: int) -> "FieldVector":
        return FieldVector(tuple((c * a) % self.q for a in self.coords), self.q)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @staticmethod
    def zero(q: int, d: int) -> "FieldVector":
        return FieldVector((0,) * d, q)


class AdditiveCharacter:
    """The canonical additive character t -> exp(2*pi*i*t/q) on F_q."""

    __slots__ = ("q", "_table")

    def __init__(self, q: int):
        if not is_odd_prime(q):
            raise ValueError(f"modulus must be an odd prime, got {q}")
        self.q = q
        self._table = np.exp(2j * np.pi * np.arange(q) / q)

    def __call__(self, t) -> complex | np.ndarray:
        """Evaluate at an integer or integer array (reduced mod q)."""
        return self._table[np.asarray(t) % self.q]


def dot(x: FieldVector, y: FieldVector) -> int:
    """Bilinear form sum_i x_i y_i mod q."""
    x._check(y)
    return sum(a * b for a, b in zip(x.coords, y.coords)) % x.q


def norm(x: FieldVector) -> int:
    """Quadratic norm sum_i x_i^2 mod q."""
    return sum(a * a for a in x.coords) % x.q


def quadratic_character(q: int, t: int) -> int:
    """0 for t=0, +1 for nonzero squares mod q, -1 for non-squares."""
    if not is_odd_prime(q):
        raise ValueError(f"modulus must be an odd prime, got {q}")
    t %= q
    if t == 0:
        return 0
    e = pow(t, (q - 1) // 2, q)
    return 1 if e == 1 else -1


# ---------------------------------------------------------------------------
# Linear index layout for F_q^d: little-endian mixed radix, coordinate 0 is
# the least significant digit.  All dense tables in the package use it.

def vec_to_index(coords, q: int) -> int:
    idx = 0
    for c in reversed(coords):
        idx = idx * q + (c % q)
    return idx


def index_to_vec(idx: int, q: int, d: int) -> tuple[int, ...]:
    out = []
    for _ in range(d):
        out.append(idx % q)
        idx //= q
    return tuple(out)


@lru_cache(maxsize=None)
def all_vectors(q: int, d: int) -> np.ndarray:
    """(q^d, d) int array; row i holds the digits of index i."""
    idx = np.arange(q**d)
    digits = np.empty((q**d, d), dtype=np.int64)
    for k in range(d):
        digits[:, k] = idx % q
        idx = idx // q
    digits.setflags(write=False)
    return digits


@lru_cache(maxsize=None)
def index_norms(q: int, d: int) -> np.ndarray:
    """Quadratic norm of every index, as an int array of length q^d."""
    digits = all_vectors(q, d)
    norms = (digits**2).sum(axis=1) % q
    norms.setflags(write=False)
    return norms


@lru_cache(maxsize=None)
def index_add_table(q: int, d: int) -> np.ndarray:
    """(q^d, q^d) table: entry [i, j] is the index of vector_i + vector_j."""
    n = q**d
    if n > 4096:
        raise ValueError(f"addition table for q^d={n} exceeds the 4096 budget")
    digits = all_vectors(q, d)
    sums = (digits[:, None, :] + digits[None, :, :]) % q
    weights = q ** np.arange(d)
    table = (sums * weights).sum(axis=2).astype(np.int32)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def index_neg_table(q: int, d: int) -> np.ndarray:
    """Index of -vector_i for every i."""
    digits = (-all_vectors(q, d)) % q
    weights = q ** np.arange(digits.shape[1])
    table = (digits * weights).sum(axis=1).astype(np.int32)
    table.setflags(write=False)
    return table
