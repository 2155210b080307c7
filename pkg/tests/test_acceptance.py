"""Acceptance gate: one test per criterion, each printing a PASS line with
the measured numbers once its assertions hold.  Tolerances are fixed here,
not tuned at runtime."""

import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from packlab.ffield import AdditiveCharacter, all_vectors
from packlab.ffourier import (
    PointSet,
    dft,
    inverse_dft,
    naive_dft,
    naive_dft_at,
    restriction_ratio_report,
    spheres,
    zero_sphere_mass,
)
from packlab.orthgroup import enumerate_bruteforce, enumerate_closure
from packlab.parallel import spawn_seeds
from packlab.rigidpack import (
    MotionSet,
    motion_domain,
    multiplicity,
    orbit_union,
    second_moment_constant_report,
    verify_theorem,
)

LOG2_3 = np.log(2) / np.log(3)

EXACT_GRID = [(q, d) for q in (3, 5, 7, 11, 13, 31) for d in (2, 3)]


def _report(criterion: str, detail: str):
    print(f"[criterion {criterion}] PASS - {detail}")


# ---------------------------------------------------------------------------
# 1. exactness suite


def test_criterion_1_exactness_suite():
    t0 = time.time()
    rng = np.random.default_rng(20240811)
    for q, d in EXACT_GRID:
        n = q**d
        chi = AdditiveCharacter(q)
        # character orthogonality: exhaustive over 1-D (whence all d by the
        # kernel factorization), plus sampled multi-d sums evaluated directly
        t = np.arange(q)
        for x in range(q):
            total = chi(x * t).sum()
            assert abs(total - (q if x == 0 else 0.0)) < 1e-10
        digits = all_vectors(q, d)
        xs = [np.zeros(d, dtype=np.int64)] + [rng.integers(0, q, size=d) for _ in range(6)]
        for x in xs:
            total = chi(digits @ x).sum()
            expect = n if (x % q == 0).all() else 0.0
            assert abs(total - expect) < 1e-10

        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        F = dft(f, q, d)
        # Plancherel
        lhs = (np.abs(F.values) ** 2).sum()
        rhs = (np.abs(f) ** 2).sum() / n
        assert abs(lhs - rhs) < 1e-10 * max(1.0, rhs)
        # round trip
        assert np.abs(inverse_dft(F) - f).max() < 1e-10
        # naive vs factorized
        if n <= 1024:
            assert np.abs(naive_dft(f, q, d).values - F.values).max() < 1e-10
        else:
            ms = rng.integers(0, n, size=64)
            assert np.abs(naive_dft_at(f, q, d, ms) - F.values[ms]).max() < 1e-10
    elapsed = time.time() - t0
    assert elapsed < 30.0
    _report("1", f"orthogonality/Plancherel/round-trip/naive-vs-fast on {len(EXACT_GRID)} grids in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 2. proof-chain identities over >= 10^4 randomized instances


def _random_chain_instance(q, d, seed):
    rng = np.random.default_rng(seed)
    group = motion_domain(q, d)
    n = q**d
    total = len(group) * n
    tsize = max(1, int(round(np.exp(rng.uniform(0.0, np.log(total))))))
    flat = rng.choice(total, size=tsize, replace=False)
    theta = MotionSet(group, flat // n, flat % n)
    esize = int(rng.integers(1, n + 1))
    E = PointSet.from_indices(q, d, rng.choice(n, size=esize, replace=False))
    return E, theta


def test_criterion_2_proof_chain_identities():
    t0 = time.time()
    per_pair = 2600
    checked = 0
    for q, d in [(3, 2), (7, 2), (11, 2), (3, 3)]:
        n = q**d
        for seed in spawn_seeds(91000 + q * 10 + d, per_pair):
            E, theta = _random_chain_instance(q, d, seed)
            lam = multiplicity(theta, E)
            union = orbit_union(theta, E)
            assert lam.total() == E.size * theta.size  # exact integers
            assert lam.support() == union
            m2 = lam.second_moment()
            bound = Fraction(E.size**2 * theta.size**2, m2)
            assert bound <= union.size  # exact rational vs integer
            lam_hat0 = dft(lam.values, q, d).values[0]
            assert abs(lam_hat0 - E.size * theta.size / n) < 1e-10
            checked += 1
    assert checked >= 10_000
    _report("2", f"{checked} randomized instances, all four identities exact ({time.time() - t0:.1f}s)")


# ---------------------------------------------------------------------------
# 3. dim-2 union bound at desk scale, margin trend


def test_criterion_3_dim2_union_bound_margins():
    t0 = time.time()
    details = []
    for q in (3, 7, 11):
        mins = []
        for margin in (1.0, 2.0, 4.0):
            rep = verify_theorem("1.11", q, 2, trials=200, seed=777, margin=margin)
            assert all(r["ratio"] > 0 for r in rep["records"])
            assert all(r["hypothesis_margin"] >= margin for r in rep["records"])
            mins.append(rep["summary"]["min_ratio"])
        assert mins[0] <= mins[1] + 1e-12 and mins[1] <= mins[2] + 1e-12, (q, mins)
        details.append(f"q={q} mins={['%.3f' % m for m in mins]}")
    elapsed = time.time() - t0
    assert elapsed < 300.0
    _report("3", f"min ratios positive and non-decreasing with margin; {'; '.join(details)} ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 4. second-moment fitted constant: no growth trend in q


def test_criterion_4_second_moment_constant_stability():
    rep = second_moment_constant_report([3, 7, 11, 19, 23], trials=120, seed=2024)
    slope = rep["summary"]["loglog_slope"]
    assert -0.3 <= slope <= 0.3
    consts = rep["summary"]["constants"]
    _report("4", f"C(q)={ {k: round(v, 3) for k, v in consts.items()} }, log-log slope {slope:.4f}")


# ---------------------------------------------------------------------------
# 5. restriction estimates and the zero sphere


def test_criterion_5_restriction_sweep_and_zero_sphere():
    maxes = {}
    rep3 = restriction_ratio_report(3, 2, exhaustive=True)
    assert rep3["summary"]["count"] == 511
    maxes[3] = rep3["summary"]["max_ratio"]
    for q in (7, 11, 19):
        rep = restriction_ratio_report(q, 2, trials=1000, seed=123)
        maxes[q] = rep["summary"]["max_ratio"]
    assert all(np.isfinite(v) for v in maxes.values())
    qs = sorted(maxes)
    slope = np.polyfit(np.log(qs), np.log([maxes[q] for q in qs]), 1)[0]
    assert slope <= 0.15  # no growth trend

    # zero sphere: S_0 = {origin} when q = 3 mod 4, d = 2, and its mass is
    # exactly the squared density |E|^2/q^4
    rng = np.random.default_rng(5)
    for q in (3, 7, 11, 19):
        assert list(spheres(q, 2).indices[0]) == [0]
        for _ in range(20):
            size = int(rng.integers(1, q * q + 1))
            E = PointSet.from_indices(q, 2, rng.choice(q * q, size=size, replace=False))
            expect = (size / q**2) ** 2
            assert abs(zero_sphere_mass(E) - expect) <= 1e-12 * max(expect, 1e-30)
    _report("5", f"max ratios {maxes} (slope {slope:.3f}); zero-sphere identity exact")


# ---------------------------------------------------------------------------
# 6. general union bound at d=3, q=3 with the doubly-confirmed group order


def test_criterion_6_d3_union_bound():
    brute = {g.entries for g in enumerate_bruteforce(3, 3)}
    closure = {g.entries for g in enumerate_closure(3, 3)}
    assert len(brute) == 48 and brute == closure
    rep = verify_theorem("1.12", 3, 3, trials=300, seed=606)
    assert rep["summary"]["normalizer_order"] == 8
    c = rep["summary"]["min_ratio"]
    assert c > 0
    _report("6", f"|O(3,3)|=48 via two paths; 300 trials, min |Theta(E)|/bound = {c:.3f} > 0")


# ---------------------------------------------------------------------------
# 7. estimator calibration on fixtures with known answers


def test_criterion_7_estimator_calibration():
    from packlab.fractal import (
        GridSet,
        box_dimension,
        cantor_dust_set,
        energy,
        segment_set,
        uniform_measure,
    )

    square = box_dimension(GridSet(2, 2048, np.ones((2048, 2048), dtype=bool))).slope
    assert square == pytest.approx(2.0, abs=0.02)
    segment = box_dimension(segment_set(2048)).slope
    assert segment == pytest.approx(1.0, abs=0.05)
    dust = box_dimension(cantor_dust_set(1 / 3, 8, 4096)).slope
    assert dust == pytest.approx(2 * LOG2_3, abs=0.05)
    e = energy(uniform_measure(1, 4096), 0.5)
    assert e.value == pytest.approx(8 / 3, rel=0.05)
    _report(
        "7",
        f"box dims: square {square:.3f}, segment {segment:.3f}, dust {dust:.3f} "
        f"(target {2 * LOG2_3:.3f}); energy {e.value:.3f} vs 8/3",
    )


# ---------------------------------------------------------------------------
# 8. Euclidean trend suite


def test_criterion_8_euclidean_trends():
    from packlab.fractal import (
        AffineMap,
        ScaleSample,
        box_dimension,
        cantor_intervals,
        cantor_measure,
        circle_set,
        envelope_decay,
        pushforward_dilate,
        rescale,
        spectrum,
        sphere_measure,
        spherical_decay,
        sum_pushforward,
        union_construct,
        uniform_measure,
    )

    t0 = time.time()
    # (a) circle ring decay at n=2048
    circle_exp = spherical_decay(spectrum(sphere_measure(2048))).decay_exponent
    assert 0.85 <= circle_exp <= 1.15

    # (b) scale-averaged pushforward gains decay; the plain construction has none
    mu = rescale(cantor_measure(1 / 3, 7, 4096), 0.5)
    nu = pushforward_dilate(mu, ScaleSample.uniform(64))
    gained = envelope_decay(spectrum(nu)).decay_exponent
    flat = envelope_decay(spectrum(mu)).decay_exponent
    assert gained >= LOG2_3 - 0.15
    assert abs(flat) <= 0.25

    # (c) union of circles over a cantor set of translates
    base = circle_set(4096, center=(0.25, 0.5), radius=0.2)
    lefts, _ = cantor_intervals(1 / 3, 7)
    union = union_construct(base, [AffineMap.translate_dilate([0.5 * t, 0.0]) for t in lefts])
    union_dim = box_dimension(union).slope
    assert union_dim >= 1 + LOG2_3 - 0.1

    # (d) convolution theorem on the grid
    a = rescale(cantor_measure(1 / 3, 6, 4096), 0.4)
    b = rescale(uniform_measure(1, 4096), 0.4, 0.05)
    conv = sum_pushforward(a, b)
    err1 = np.abs(spectrum(conv).table - spectrum(a).table * spectrum(b).table).max()
    c2a = rescale(sphere_measure(1024), 0.5)
    c2b = rescale(sphere_measure(1024), 0.4, 0.05)
    conv2 = sum_pushforward(c2a, c2b)
    err2 = np.abs(spectrum(conv2).table - spectrum(c2a).table * spectrum(c2b).table).max()
    assert max(err1, err2) < 1e-8

    elapsed = time.time() - t0
    assert elapsed < 600.0
    _report(
        "8",
        f"(a) circle exponent {circle_exp:.3f}; (b) dilated {gained:.3f} vs plain {flat:.3f}; "
        f"(c) union dim {union_dim:.3f}; (d) conv err {max(err1, err2):.2e} ({elapsed:.1f}s)",
    )


# ---------------------------------------------------------------------------
# 9. determinism across worker counts


def test_criterion_9_thread_determinism(tmp_path):
    blobs = []
    for threads in ("1", "4", "16"):
        out = tmp_path / f"det{threads}"
        cmd = [
            sys.executable, "-m", "packlab.cli", "ff-verify", "--theorem", "1.11",
            "--q", "11", "--d", "2", "--trials", "32", "--seed", "31337", "--out", str(out),
        ]
        proc = subprocess.run(
            cmd, env={**os.environ, "PACKLAB_THREADS": threads},
            capture_output=True, text=True, timeout=300,
        )
        assert proc.returncode == 0, proc.stderr
        blobs.append(out.with_suffix(".json").read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]
    _report("9", f"byte-identical JSON across 1/4/16 workers ({len(blobs[0])} bytes)")
