"""Enumeration of the orthogonal group O(d, F_q) and stabilizer counts.

d=2 uses the closed-form parametrization by the circle a^2+b^2=1; higher d
falls back to a budgeted brute-force scan, with an independent BFS-closure
path for cross-checking small cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ffield import FieldVector, all_vectors, is_odd_prime, quadratic_character, vec_to_index

__all__ = [
    "OrthMatrix",
    "OrthGroup",
    "enumerate_orthogonal",
    "enumerate_bruteforce",
    "enumerate_closure",
    "stabilizer_size",
    "known_order",
]

DEFAULT_BUDGET = 10**9


def _is_orthogonal(entries: np.ndarray, q: int) -> bool:
    return bool((((entries.T @ entries) % q) == np.eye(len(entries), dtype=np.int64)).all())


@dataclass(frozen=True, slots=True)
class OrthMatrix:
    """d x d matrix over F_q with g^T g = I (checked at construction)."""

    entries: tuple[tuple[int, ...], ...]
    q: int

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.int64) % self.q
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not _is_orthogonal(arr, self.q):
            raise ValueError("matrix is not orthogonal mod q")
        object.__setattr__(self, "entries", tuple(tuple(int(v) for v in row) for row in arr))

    @property
    def d(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def transpose(self) -> "OrthMatrix":
        return OrthMatrix(tuple(zip(*self.entries)), self.q)

    # inverse of an orthogonal matrix is its transpose
    inverse = transpose

    def __matmul__(self, other: "OrthMatrix") -> "OrthMatrix":
        if self.q != other.q:
            raise ValueError("modulus mismatch")
        prod = (self.array() @ other.array()) % self.q
        return OrthMatrix(tuple(tuple(int(v) for v in row) for row in prod), self.q)

    def apply(self, x: FieldVector) -> FieldVector:
        if x.q != self.q or x.d != self.d:
            raise ValueError("vector/matrix mismatch")
        y = (self.array() @ np.array(x.coords)) % self.q
        return FieldVector(tuple(int(v) for v in y), self.q)

    @staticmethod
    def identity(q: int, d: int) -> "OrthMatrix":
        return OrthMatrix(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), q)


class OrthGroup:
    """Immutable, canonically ordered list of all elements of O(d, F_q)."""

    def __init__(self, q: int, d: int, elements: list[OrthMatrix]):
        entries = sorted({g.entries for g in elements})
        if len(entries) != len(elements):
            raise ValueError("duplicate elements")
        self.q = q
        self.d = d
        self.elements = [OrthMatrix(e, q) for e in entries]
        self._index = {g.entries: i for i, g in enumerate(self.elements)}
        self._perms: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> OrthMatrix:
        return self.elements[i]

    def index_of(self, g: OrthMatrix) -> int:
        return self._index[g.entries]

    def inverse_index(self, i: int) -> int:
        return self._index[self.elements[i].transpose().entries]

    def perm_table(self) -> np.ndarray:
        """(|G|, q^d) int32 table: row i sends point index j to index of g_i v_j."""
        if self._perms is None:
            digits = all_vectors(self.q, self.d)
            weights = self.q ** np.arange(self.d)
            perms = np.empty((len(self.elements), self.q**self.d), dtype=np.int32)
            for i, g in enumerate(self.elements):
                imaged = (digits @ g.array().T) % self.q
                perms[i] = (imaged * weights).sum(axis=1)
            perms.setflags(write=False)
            self._perms = perms
        return self._perms


def _closed_form_d2(q: int) -> list[OrthMatrix]:
    mats = []
    for a in range(q):
        for b in range(q):
            if (a * a + b * b) % q == 1:
                mats.append(OrthMatrix(((a, (-b) % q), (b, a)), q))
                mats.append(OrthMatrix(((a, b), (b, (-a) % q)), q))
    return mats


def enumerate_bruteforce(q: int, d: int, budget: int = DEFAULT_BUDGET, chunk: int = 1 << 20) -> list[OrthMatrix]:
    """Scan all q^(d*d) candidate matrices for g^T g = I, in numpy chunks."""
    total = q ** (d * d)
    if total > budget:
        raise ValueError(f"brute force budget exceeded: q^(d^2)={total} > {budget}")
    eye = np.eye(d, dtype=np.int64)
    found = []
    powers = q ** np.arange(d * d, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % q
        mats = digits.reshape(-1, d, d)
        gram = np.einsum("nki,nkj->nij", mats, mats) % q
        ok = (gram == eye).all(axis=(1, 2))
        for m in mats[ok]:
            found.append(OrthMatrix(tuple(tuple(int(v) for v in row) for row in m), q))
    return found


def _signed_permutations(q: int, d: int) -> list[OrthMatrix]:
    mats = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, q - 1), repeat=d):
            entries = [[0] * d for _ in range(d)]
            for i, p in enumerate(perm):
                entries[p][i] = signs[i]
            mats.append(OrthMatrix(tuple(tuple(row) for row in entries), q))
    return mats


def enumerate_closure(q: int, d: int, generators: list[OrthMatrix] | None = None,
                      max_size: int = 10**6) -> list[OrthMatrix]:
    """BFS product closure of signed permutation matrices plus any extra generators.

    Yields the subgroup they generate, which equals O(d, F_q) whenever the
    seeds generate it (true for q=3, d=3; cross-checked against brute force).
    """
    seeds = _signed_permutations(q, d)
    if generators:
        seeds = seeds + list(generators)
    seen = {g.entries: g for g in seeds}
    frontier = list(seeds)
    while frontier:
        fresh = []
        for a in frontier:
            for b in seeds:
                c = a @ b
                if c.entries not in seen:
                    seen[c.entries] = c
                    fresh.append(c)
                    if len(seen) > max_size:
                        raise ValueError("closure exceeded max_size")
        frontier = fresh
    return list(seen.values())


def enumerate_orthogonal(q: int, d: int, budget: int = DEFAULT_BUDGET) -> OrthGroup:
    """Full O(d, F_q): closed form for d<=2, budgeted brute force above."""
    if not is_odd_prime(q):
        raise ValueError(f"modulus must be an odd prime, got {q}")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if d == 1:
        mats = [OrthMatrix(((1,),), q), OrthMatrix(((q - 1,),), q)]
    elif d == 2:
        mats = _closed_form_d2(q)
    else:
        mats = enumerate_bruteforce(q, d, budget=budget)
    return OrthGroup(q, d, mats)


def known_order(q: int, d: int) -> int | None:
    """Tabulated |O(d, F_q)| for the sizes the experiments touch."""
    if d == 1:
        return 2
    if d == 2:
        return 2 * (q + 1) if quadratic_character(q, -1) == -1 else 2 * (q - 1)
    if d == 3:
        return 2 * q * (q * q - 1)
    return None


def stabilizer_size(G: OrthGroup, x: FieldVector) -> int:
    """#{g in G : g x = x}."""
    if x.q != G.q or x.d != G.d:
        raise ValueError("vector does not match the group's field")
    idx = vec_to_index(x.coords, G.q)
    perms = G.perm_table()
    return int((perms[:, idx] == idx).sum())


def stabilizer_sizes_by_norm(G: OrthGroup) -> dict[int, list[int]]:
    """Distinct stabilizer sizes of nonzero vectors, keyed by norm class.

    The higher-dimensional bounds normalize by |O(d-1)| without fixing what
    happens on isotropic vectors, so the verifier reports per-class sizes
    instead of assuming one value.
    """
    from .ffield import index_norms

    norms = index_norms(G.q, G.d)
    perms = G.perm_table()
    fixed = perms == np.arange(G.q**G.d)[None, :]
    counts = fixed.sum(axis=0)
    out: dict[int, set[int]] = {}
    for idx in range(1, G.q**G.d):
        out.setdefault(int(norms[idx]), set()).add(int(counts[idx]))
    return {j: sorted(v) for j, v in sorted(out.items())}
