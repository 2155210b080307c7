import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packlab.ffield import FieldVector
from packlab.ffourier import PointSet
from packlab.orthgroup import OrthMatrix
from packlab.rigidpack import (
    MotionSet,
    RigidMotion,
    cs_lower_bound,
    lambda_fourier,
    lambda_fourier_factored,
    motion_domain,
    multiplicity,
    orbit_union,
    second_moment,
    second_moment_constant_report,
    verify_theorem,
)


def identity_motion(q, d):
    return RigidMotion(OrthMatrix.identity(q, d), FieldVector.zero(q, d))


def random_instance(q, d, rng, max_motions=300):
    group = motion_domain(q, d)
    n = q**d
    total = len(group) * n
    size = int(rng.integers(1, min(total, max_motions) + 1))
    flat = rng.choice(total, size=size, replace=False)
    theta = MotionSet(group, flat // n, flat % n)
    e_size = int(rng.integers(1, n + 1))
    E = PointSet.from_indices(q, d, rng.choice(n, size=e_size, replace=False))
    return E, theta


def test_motion_action_and_algebra():
    q, d = 7, 2
    g = OrthMatrix(((0, 6), (1, 0)), q)
    m = RigidMotion(g, FieldVector((1, 2), q))
    x = FieldVector((3, 4), q)
    assert m.apply(x).coords == tuple((g.array() @ [3, 4] + [1, 2]) % q)
    assert m.inverse().apply(m.apply(x)) == x
    both = m.compose(m.inverse())
    assert both.apply(x) == x


def test_motionset_rejects_duplicates_and_mismatch():
    group = motion_domain(3, 2)
    with pytest.raises(ValueError):
        MotionSet(group, [0, 0], [1, 1])
    theta = MotionSet(group, [0], [1])
    with pytest.raises(ValueError):
        orbit_union(theta, PointSet.full(5, 2))


def test_orbit_identity_motion():
    E = PointSet.from_points(3, 2, [(0, 0), (1, 2)])
    group = motion_domain(3, 2)
    theta = MotionSet.from_motions(group, [identity_motion(3, 2)])
    assert orbit_union(theta, E) == E


def test_orbit_all_translates_of_point():
    q, d = 3, 2
    group = motion_domain(q, d)
    ident = group.index_of(OrthMatrix.identity(q, d))
    theta = MotionSet.product(group, [ident], np.arange(q**d))
    E = PointSet.from_points(q, d, [(0, 0)])
    assert orbit_union(theta, E) == PointSet.full(q, d)


def test_orbit_rotations_of_two_points():
    # all 8 rotations/reflections x {0} applied to {(0,0),(1,0)}:
    # the unit-norm vectors plus the origin, 5 points
    q = 3
    group = motion_domain(q, 2)
    theta = MotionSet.product(group, np.arange(len(group)), [0])
    E = PointSet.from_points(q, 2, [(0, 0), (1, 0)])
    U = orbit_union(theta, E)
    assert U.size == 5


def test_multiplicity_examples():
    q, d = 3, 2
    group = motion_domain(q, d)
    theta = MotionSet.from_motions(group, [identity_motion(q, d)])
    E = PointSet.from_points(q, d, [(2, 1)])
    lam = multiplicity(theta, E)
    expect = np.zeros(9, dtype=np.int64)
    expect[2 + 3 * 1] = 1
    assert (lam.values == expect).all()
    # one motion over the full space: a bijection, lambda is identically 1
    lam_full = multiplicity(theta, PointSet.full(q, d))
    assert (lam_full.values == 1).all()
    assert second_moment(theta, PointSet.full(q, d)) == q**d


def test_single_pair_second_moment_and_tight_cs():
    q, d = 3, 2
    group = motion_domain(q, d)
    theta = MotionSet.from_motions(group, [identity_motion(q, d)])
    E = PointSet.from_points(q, d, [(1, 1)])
    assert second_moment(theta, E) == 1
    assert cs_lower_bound(theta, E) == 1 == orbit_union(theta, E).size
    full = PointSet.full(q, d)
    assert cs_lower_bound(theta, full) == q**d == orbit_union(theta, full).size


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 2), (7, 2), (3, 3)]), st.integers(0, 2**31 - 1))
def test_counting_chain_identities(qd, seed):
    q, d = qd
    rng = np.random.default_rng(seed)
    E, theta = random_instance(q, d, rng)
    lam = multiplicity(theta, E)
    assert lam.total() == E.size * theta.size
    assert lam.support() == orbit_union(theta, E)
    bound = cs_lower_bound(theta, E)
    assert bound <= orbit_union(theta, E).size
    lam_hat = lambda_fourier(theta, E)
    assert abs(lam_hat.values[0] - E.size * theta.size / q**d) < 1e-10
    # Parseval duality between the moment and the spectrum
    m2 = second_moment(theta, E)
    assert abs(m2 - q**d * (np.abs(lam_hat.values) ** 2).sum()) < 1e-8 * max(1, m2)


def test_lambda_fourier_factored_cross_check():
    rng = np.random.default_rng(12)
    for q, d in [(3, 2), (7, 2), (3, 3)]:
        E, theta = random_instance(q, d, rng, max_motions=60)
        direct = lambda_fourier(theta, E).values
        factored = lambda_fourier_factored(theta, E).values
        assert np.abs(direct - factored).max() < 1e-10


def test_point_mass_lambda_spectrum_is_unimodular():
    q, d = 3, 2
    group = motion_domain(q, d)
    theta = MotionSet.from_motions(group, [identity_motion(q, d)])
    E = PointSet.from_points(q, d, [(0, 0)])
    lam_hat = lambda_fourier(theta, E)
    assert np.allclose(np.abs(lam_hat.values), q**-d, atol=1e-12)


def test_rigid_motion_invariance_of_union_size():
    q, d = 7, 2
    rng = np.random.default_rng(5)
    E, theta = random_instance(q, d, rng, max_motions=50)
    group = theta.group
    pivot = RigidMotion(group[3], FieldVector((2, 5), q))
    # precompose every motion with pivot, transform E by its inverse
    theta2 = theta.precompose(pivot)
    inv = pivot.inverse()
    moved = [inv.apply(FieldVector(tuple(p), q)) for p in E.points()]
    E2 = PointSet.from_points(q, d, [m.coords for m in moved])
    assert orbit_union(theta2, E2) == orbit_union(theta, E)


def test_cs_bound_requires_nonempty():
    group = motion_domain(3, 2)
    theta = MotionSet.from_motions(group, [identity_motion(3, 2)])
    with pytest.raises(ValueError):
        cs_lower_bound(theta, PointSet.empty(3, 2))


def test_verify_theorem_precondition_errors():
    with pytest.raises(ValueError):
        verify_theorem("1.11", 5, 2, trials=1, seed=0)  # q = 1 mod 4
    with pytest.raises(ValueError):
        verify_theorem("1.11", 7, 3, trials=1, seed=0)  # wrong d
    with pytest.raises(ValueError):
        verify_theorem("1.13-1", 5, 2, trials=1, seed=0)  # d=2 not admissible
    with pytest.raises(ValueError):
        verify_theorem("9.99", 3, 2, trials=1, seed=0)


def test_verify_theorem_full_sets_ratio_one():
    # E = everything, Theta = everything: the union is everything
    rep = verify_theorem("1.12", 3, 2, trials=5, seed=3)
    assert rep["summary"]["min_ratio"] > 0
    assert rep["summary"]["trials"] == 5
    assert set(rep["records"][0]) >= {"set_size", "motions", "union_size", "bound", "ratio"}
    # run parameters are surfaced at the top level of the report
    assert rep["theorem"] == "1.12" and rep["q"] == 3 and rep["d"] == 2 and rep["trials"] == 5


def test_verify_theorem_1_11_hypothesis_margin():
    rep = verify_theorem("1.11", 7, 2, trials=20, seed=11, margin=2.0)
    assert all(r["hypothesis_margin"] >= 2.0 for r in rep["records"])
    assert all(r["ratio"] > 0 for r in rep["records"])


def test_verify_theorem_1_13_size_regimes():
    rep1 = verify_theorem("1.13-1", 3, 3, trials=10, seed=4)
    assert all(r["set_size"] < 3 ** ((3 - 1) / 2) for r in rep1["records"])
    rep2 = verify_theorem("1.13-2", 3, 3, trials=10, seed=4)
    assert all(3 <= r["set_size"] <= 9 for r in rep2["records"])


def test_second_moment_constant_report_validation():
    with pytest.raises(ValueError):
        second_moment_constant_report([5], trials=1, seed=0)  # q = 1 mod 4


def test_report_determinism_across_threads():
    from packlab.reporting import to_json

    a = verify_theorem("1.11", 7, 2, trials=16, seed=9, threads=1)
    b = verify_theorem("1.11", 7, 2, trials=16, seed=9, threads=8)
    assert to_json(a) == to_json(b)
