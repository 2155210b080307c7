import numpy as np
import pytest

from packlab.fractal import (
    AffineMap,
    RotationSample,
    ScaleSample,
    cantor_measure,
    circle_set,
    envelope_decay,
    kfold_sum,
    nonuniform_transform,
    point_mass,
    pushforward_dilate,
    pushforward_rotate,
    pushforward_similarity,
    rescale,
    segment_measure,
    segment_set,
    sphere_measure,
    spectrum,
    spherical_decay,
    sum_pushforward,
    uniform_measure,
    union_construct,
)

MASS_TOL = 1e-12


def test_dilate_dirac_is_identity():
    mu = rescale(cantor_measure(1 / 3, 5, 1024), 0.5)
    nu = pushforward_dilate(mu, ScaleSample.dirac(1.0))
    assert np.abs(nu.weights - mu.weights).max() < 1e-15


def test_dilate_point_mass_spreads_along_ray():
    mu = point_mass(1, 1024, [0.25])
    nu = pushforward_dilate(mu, ScaleSample.uniform(128))
    pos = nu.positions().ravel()
    assert pos.min() >= 0.25 - 2 / 1024
    assert pos.max() <= 0.5 + 2 / 1024
    assert nu.total() == pytest.approx(1.0, abs=MASS_TOL)
    # spread covers the segment [x0, 2 x0]
    assert pos.max() - pos.min() > 0.2


def test_dilate_overflow_raises():
    mu = uniform_measure(1, 256)  # mass near 1 would leave the box at r=2
    with pytest.raises(ValueError):
        pushforward_dilate(mu, ScaleSample.uniform(4))


def test_dilate_spectral_identity_exact_reads():
    # the transform of the dilated measure is the scale-average of the
    # original transform; checked against the defining sums
    mu = rescale(cantor_measure(1 / 3, 6, 2048), 0.5)
    zeta = ScaleSample.uniform(32)
    nu = pushforward_dilate(mu, zeta)
    spec_nu = spectrum(nu)
    ks = np.arange(1, 2048 // 8, dtype=float)[:, None]
    lhs = np.array([spec_nu.value([int(k)]) for k in ks.ravel()])
    rhs = np.zeros(len(ks), dtype=complex)
    for r, w in zip(zeta.r, zeta.w):
        rhs += w * nonuniform_transform(mu, ks * r)
    assert np.abs(lhs - rhs).max() < 5e-3  # splat kernel damping only


def test_rotate_dirac_identity_and_quarter_turn():
    mu = segment_measure(512)
    nu = pushforward_rotate(mu, RotationSample.dirac(0.0))
    assert np.abs(nu.weights - mu.weights).max() < 1e-12
    quarter = pushforward_rotate(mu, RotationSample.dirac(np.pi / 2))
    s0, s1 = spectrum(mu), spectrum(quarter)
    for k in [(3, 7), (10, 2), (40, 13)]:
        assert abs(s1.value(k)) == pytest.approx(abs(s0.value((k[1], -k[0]))), abs=1e-10)


def test_rotate_point_mass_gives_circle():
    mu = point_mass(2, 512, [0.5, 0.75])
    ring = pushforward_rotate(mu, RotationSample.uniform(512))
    pos = ring.positions() - 0.5
    radii = np.hypot(pos[:, 0], pos[:, 1])
    assert (np.abs(radii - 0.25) < 2.5 / 512).all()
    assert ring.total() == pytest.approx(1.0, abs=MASS_TOL)


def test_rotate_requires_d2():
    with pytest.raises(ValueError):
        pushforward_rotate(uniform_measure(1, 256), RotationSample.uniform(8))


def test_rotated_segment_ring_decay():
    # uniform rotation of a segment has |nu_hat| ~ r^{-1} pointwise, so the
    # ring average of |nu_hat|^2 fits exponent ~2 (computed oracle value)
    nu = pushforward_rotate(segment_measure(1024), RotationSample.uniform(512))
    rep = spherical_decay(spectrum(nu))
    assert rep.decay_exponent == pytest.approx(2.0, abs=0.3)


def test_similarity_dirac_matches_rotation():
    mu = rescale(sphere_measure(512), 0.5, 0.25)
    a = pushforward_similarity(mu, RotationSample.dirac(0.3), ScaleSample.dirac(1.0))
    b = pushforward_rotate(mu, RotationSample.dirac(0.3))
    assert np.abs(a.weights - b.weights).max() < 1e-12


def test_similarity_scales_about_center():
    mu = point_mass(2, 512, [0.5, 0.625])  # distance 1/8 above center
    nu = pushforward_similarity(mu, RotationSample.dirac(0.0), ScaleSample.dirac(2.0))
    pos = nu.positions() - 0.5
    assert np.hypot(pos[:, 0], pos[:, 1]).max() == pytest.approx(0.25, abs=1 / 256)


def test_sum_pushforward_identity_element():
    mu = uniform_measure(2, 256, 0, 0.4)
    delta = point_mass(2, 256, [0.0, 0.0])
    out = sum_pushforward(mu, delta)
    assert np.abs(out.weights - mu.weights).max() < 1e-12


def test_sum_pushforward_triangle():
    a = uniform_measure(1, 1024, 0, 0.5)
    tri = sum_pushforward(a, a)
    w = tri.weights
    peak = np.argmax(w)
    assert abs(peak - 511) <= 1
    assert w[100] < w[300] < w[500]
    assert w[900] < w[700]


def test_sum_pushforward_overflow():
    a = uniform_measure(1, 256, 0, 0.9)
    with pytest.raises(ValueError):
        sum_pushforward(a, a)


def test_convolution_theorem_on_grid():
    a = rescale(cantor_measure(1 / 3, 5, 1024), 0.4)
    b = rescale(uniform_measure(1, 1024), 0.4, 0.1)
    conv = sum_pushforward(a, b)
    sa, sb, sc = spectrum(a), spectrum(b), spectrum(conv)
    assert np.abs(sc.table - sa.table * sb.table).max() < 1e-8


def test_kfold_sum_basics():
    mu = uniform_measure(1, 1024, 0, 0.5)
    assert kfold_sum(mu, 1) is mu
    two = kfold_sum(mu, 2)
    direct = sum_pushforward(mu, mu)
    assert np.abs(two.weights - direct.weights).max() < 1e-12
    with pytest.raises(ValueError):
        kfold_sum(mu, 3)
    with pytest.raises(ValueError):
        kfold_sum(mu, 0)


def test_kfold_support_growth_for_thick_construction():
    # two branches at ratio 0.45: dim ~0.868 each, sum of two copies fills
    # an interval (support fraction stabilizes as resolution doubles)
    fractions = []
    for n in (1024, 2048, 4096):
        mu = rescale(cantor_measure(0.45, 7, n), 0.49)
        two = kfold_sum(mu, 2)
        support = (two.weights > two.weights.max() * 1e-12).sum() / n
        fractions.append(support)
    assert fractions[-1] > 0.4
    assert abs(fractions[-1] - fractions[-2]) < 0.1


def test_union_construct_identity():
    E = circle_set(512)
    out = union_construct(E, [AffineMap.translate_dilate([0.0, 0.0], 1.0)])
    assert (out.cells & E.cells).sum() == E.count  # contains the original


def test_union_construct_translates():
    E = segment_set(512, length=0.25, y=0.25)
    maps = [AffineMap.translate_dilate([0.0, dz]) for dz in (0.0, 0.25, 0.5)]
    out = union_construct(E, maps)
    assert out.count == pytest.approx(3 * E.count, rel=0.05)


def test_union_construct_overflow():
    E = circle_set(512)
    with pytest.raises(ValueError):
        union_construct(E, [AffineMap.translate_dilate([0.5, 0.0])])
    with pytest.raises(TypeError):
        union_construct(E, [("z", 1.0)])


def test_union_construct_rigid_and_similarity_maps():
    E = segment_set(512, length=0.2, y=0.5)
    rot = union_construct(E, [AffineMap.rigid(np.pi / 4, [0.1, 0.1])])
    assert rot.count > 0
    sim = union_construct(E, [AffineMap.similarity(np.pi / 3, [0.2, 0.05], 0.8)])
    assert sim.count > 0
    # a similarity that pushes the image past the box edge must raise
    with pytest.raises(ValueError):
        union_construct(E, [AffineMap.similarity(np.pi / 3, [0.1, 0.1], 1.5)])


def test_dilated_cantor_gains_fourier_decay():
    # the scale-averaged pushforward acquires spectral decay at the
    # dimension-sum rate, while the plain construction has none
    n = 4096
    mu = rescale(cantor_measure(1 / 3, 7, n), 0.5)
    nu = pushforward_dilate(mu, ScaleSample.uniform(64))
    gained = envelope_decay(spectrum(nu)).decay_exponent
    flat = envelope_decay(spectrum(mu)).decay_exponent
    assert gained >= (np.log(2) / np.log(3)) - 0.15
    assert abs(flat) <= 0.25
