import numpy as np
import pytest

from polarqhr import geometry, lie


@pytest.fixture(params=geometry.SCENARIO_IDS)
def scen(request):
    return geometry.scenario(request.param)


def interior(scen, n=8):
    if scen.section_dim == 1:
        lo, hi = scen.box[0]
        hi = 6.0 if not np.isfinite(hi) else hi
        return [np.array([x]) for x in np.linspace(lo, hi, n + 2)[1:-1]]
    # barycentric samples of the su3 alcove
    verts = np.array([[0.0, 0.0], [2 * np.pi, 2 * np.pi / np.sqrt(3)], [0.0, 4 * np.pi / np.sqrt(3)]])
    w = np.random.default_rng(1).dirichlet(np.ones(3), size=n)
    return list(w @ verts)


def test_killing_field_examples():
    u1 = geometry.scenario("u1-plane")
    np.testing.assert_allclose(geometry.killing_field(u1, [1.0], np.array([1.5, 0.0])), [0.0, 1.5])
    so3 = geometry.scenario("so3-space")
    np.testing.assert_allclose(geometry.killing_field(so3, [0, 0, 1.0], np.array([0, 0, 2.0])), 0.0)
    su2 = geometry.scenario("su2-conj")
    x = 1.1
    g = su2.point([x])
    v = geometry.killing_field(su2, [1.0, 0, 0], g)
    assert su2.metric(g, v, v) == pytest.approx(4 * np.sin(x / 2) ** 2, rel=1e-12)


def test_killing_field_matches_finite_difference(scen):
    y = scen.point(interior(scen)[2])
    for a in range(scen.algebra.dim):
        xi = np.eye(scen.algebra.dim)[a]
        exact = geometry.killing_field(scen, xi, y)
        fd = geometry.killing_field_fd(scen, xi, y, 1e-4)
        assert np.max(np.abs(exact - fd)) < 1e-7


def test_section_metric_is_identity(scen):
    for x in interior(scen, 3):
        np.testing.assert_allclose(geometry.section_metric(scen, x), np.eye(scen.section_dim), atol=1e-13)


def test_polar_sanity_passes(scen):
    report = geometry.polar_sanity(scen, interior(scen))
    assert report.passed, report


def test_wrong_isotropy_fails():
    so3 = geometry.scenario("so3-space")
    bad = so3.with_algebra(so3.algebra.with_subalgebra([0]))
    report = geometry.polar_sanity(bad, interior(so3))
    assert "principal isotropy" in report.failures()


def test_inertia_inverse_and_density(scen):
    dual = lie.dual_bases(scen.algebra)
    for x in interior(scen, 4):
        s = geometry.inertia_matrices(scen, dual, x)
        assert np.max(np.abs(s.b_upper @ s.b_lower - np.eye(dual.dim))) < 1e-10
        np.testing.assert_allclose(s.b_upper, s.b_upper_inverse, atol=1e-10)
        assert s.delta == pytest.approx(scen.closed_forms["delta"](x), rel=1e-12)


def test_density_vanishes_at_ends():
    su2 = geometry.scenario("su2-conj")
    dual = lie.dual_bases(su2.algebra)
    assert geometry.density(su2, dual, [1e-4]) < 1e-7
    assert geometry.density(su2, dual, [2 * np.pi - 1e-4]) < 1e-7
    for sid in ("u1-plane", "so3-space"):
        s = geometry.scenario(sid)
        assert geometry.density(s, lie.dual_bases(s.algebra), [1e-5]) < 1e-4


@pytest.mark.parametrize("x", [0.0, -0.5, 2 * np.pi])
def test_boundary_rejected(x):
    su2 = geometry.scenario("su2-conj")
    with pytest.raises(geometry.SectionBoundaryError):
        geometry.inertia_matrices(su2, lie.dual_bases(su2.algebra), [x])


def test_b_rescaling_covariance(scen):
    """B -> 3B leaves eta, hence b_ab and its inverse b^ab, alone; only the upper dual basis moves."""
    x = interior(scen, 3)[1]
    d1 = lie.dual_bases(scen.algebra)
    s1 = geometry.inertia_matrices(scen, d1, x)
    sc = scen.with_algebra(scen.algebra.rescaled(3.0))
    d3 = lie.dual_bases(sc.algebra)
    s3 = geometry.inertia_matrices(sc, d3, x)
    np.testing.assert_allclose(d3.T_lower, d1.T_lower, atol=1e-15)
    np.testing.assert_allclose(3 * d3.T_upper, d1.T_upper, atol=1e-14)
    np.testing.assert_allclose(s3.b_lower, s1.b_lower, atol=1e-13)
    np.testing.assert_allclose(s3.b_upper, s1.b_upper, rtol=1e-12)


def test_ambient_oracle_examples():
    u1 = geometry.scenario("u1-plane")
    y = np.array([0.6, -0.3])
    r2 = y @ y
    val = geometry.ambient_laplacian_oracle(u1, "gaussian", y)
    assert val[0] == pytest.approx((4 * r2 - 4) * np.exp(-r2))
    assert geometry.ambient_laplacian_oracle(u1, "const", y)[0] == 0
    su2 = geometry.scenario("su2-conj")
    g = lie.group("SU(2)").matrix(np.array([0.3, 1.2, -0.4]))
    block = geometry.building_block(su2, "character:spin:1/2")
    assert block.laplacian(g)[0] == pytest.approx(-0.75 * block.value(g)[0])


def test_gaussian_oracle_against_finite_differences():
    so3 = geometry.scenario("so3-space")
    rep = lie.representation("so3", "spin:1")
    block = geometry.building_block(so3, "equivariant-gaussian", rep)
    y = np.array([0.4, -0.2, 0.7])
    h = 1e-3
    lap = np.zeros(3, dtype=complex)
    for i in range(3):
        e = np.eye(3)[i] * h
        lap += (block.value(y + e) - 2 * block.value(y) + block.value(y - e)) / h ** 2
    np.testing.assert_allclose(lap, block.laplacian(y), atol=1e-5)


def test_unknown_scenario_and_block():
    with pytest.raises(KeyError):
        geometry.scenario("torus")
    with pytest.raises(KeyError):
        geometry.building_block(geometry.scenario("u1-plane"), "character:spin:1")
