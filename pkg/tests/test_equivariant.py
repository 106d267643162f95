import numpy as np
import pytest

from polarqhr import equivariant as eq
from polarqhr import geometry, lie


def test_invariant_vectors_examples():
    su2 = lie.algebra("su2")
    inv = eq.invariant_vectors(lie.representation("su2", "spin:1"), su2)
    assert inv.dim_VK == 1
    # weight-zero line of the ladder basis m = 1, 0, -1
    assert abs(abs(inv.basis[1, 0]) - 1) < 1e-12
    assert eq.invariant_vectors(lie.representation("su2", "spin:1/2"), su2).dim_VK == 0
    assert not eq.invariant_vectors(lie.representation("su2", "spin:3/2"), su2).usable
    triv = eq.invariant_vectors(lie.representation("su2", "trivial"), su2)
    np.testing.assert_allclose(triv.projector, [[1.0]])
    su3 = lie.algebra("su3")
    assert eq.invariant_vectors(lie.representation("su3", "adjoint"), su3).dim_VK == 2
    assert eq.invariant_vectors(lie.representation("su3", "defining"), su3).dim_VK == 0


def test_projector_identities():
    inv = eq.invariant_vectors(lie.representation("su3", "adjoint"), lie.algebra("su3"))
    P = inv.projector
    assert np.max(np.abs(P @ P - P)) < 1e-12
    assert np.max(np.abs(P - P.conj().T)) < 1e-12


def _sample(sid, label, x):
    scen = geometry.scenario(sid)
    rep = geometry.representation_for(scen, label)
    inv = eq.invariant_vectors(rep, scen.algebra)
    dual = lie.dual_bases(scen.algebra)
    return scen, rep, inv, dual, geometry.inertia_matrices(scen, dual, [x])


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_spin_term_u1(m):
    r = 1.7
    _, rep, inv, dual, s = _sample("u1-plane", f"charge:{m}", r)
    S = eq.spin_coupling(rep, inv, s, dual)
    assert S[0, 0] == pytest.approx(-m * m / r ** 2, abs=1e-13)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_spin_term_so3(ell):
    r = 2.3
    _, rep, inv, dual, s = _sample("so3-space", f"spin:{ell}", r)
    S = eq.spin_coupling(rep, inv, s, dual)
    assert S[0, 0] == pytest.approx(-ell * (ell + 1) / r ** 2, rel=1e-12)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_spin_term_su2(j):
    x = 2.1
    _, rep, inv, dual, s = _sample("su2-conj", f"spin:{j}", x)
    S = eq.spin_coupling(rep, inv, s, dual)
    assert S[0, 0] == pytest.approx(-j * (j + 1) / (4 * np.sin(x / 2) ** 2), rel=1e-12)


def test_spin_term_su3_hermitian_and_rescaling_invariant():
    scen = geometry.scenario("su3-conj")
    rep = geometry.representation_for(scen, "adjoint")
    x = np.array([2.0, 2.5])
    out = []
    for c in (1.0, 3.0):
        sc = scen.with_algebra(scen.algebra.rescaled(c))
        dual = lie.dual_bases(sc.algebra)
        inv = eq.invariant_vectors(rep, sc.algebra)
        out.append(eq.spin_coupling(rep, inv, geometry.inertia_matrices(sc, dual, x), dual))
    assert out[0].shape == (2, 2)
    np.testing.assert_array_equal(out[0], out[0].conj().T)
    assert np.max(np.abs(out[0] - out[1])) < 1e-12


def test_non_invariant_subspace_is_inconsistent():
    _, rep, _, dual, s = _sample("su2-conj", "spin:1", 1.0)
    # a line mixing the highest and zero weights is not K-invariant and not preserved by S
    tilt = np.array([[1.0], [1.0], [0.0]], dtype=complex) / np.sqrt(2)
    tilted = eq.InvariantSubspace(tilt, tilt @ tilt.conj().T)
    with pytest.raises(eq.ScenarioInconsistencyError):
        eq.spin_coupling(rep, tilted, s, dual)
    with pytest.raises(eq.ScenarioInconsistencyError):
        eq.spin_coupling(rep, eq.InvariantSubspace(np.zeros((3, 0)), np.zeros((3, 3))), s, dual)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_constant_averages_to_zero(m):
    scen = geometry.scenario("u1-plane")
    rep = geometry.representation_for(scen, f"charge:{m}")
    quad = lie.haar_quadrature("U(1)", 16)
    Y = np.random.default_rng(0).normal(size=(5, 2))
    PF = eq.project(scen, rep, quad, lambda ys: np.full((len(ys), 1), 2.5 + 0j), Y)
    assert np.max(np.abs(PF)) < 1e-14


def test_u1_compatibility_and_idempotence():
    scen = geometry.scenario("u1-plane")
    rep = geometry.representation_for(scen, "charge:2")
    quad = lie.haar_quadrature("U(1)", 16)
    rng = np.random.default_rng(5)
    samples = [eq.polynomial_gaussian_sample(rng, 2, 1) for _ in range(20)]
    Y = rng.normal(size=(6, 2))
    params = scen.group.random_params(rng, 6)
    report = eq.compatibility_check(scen, rep, quad, samples, Y, params)
    assert report.max_defect < 1e-10
    assert report.max_input_defect > 1e-2
    F = samples[0]
    nodes = eq.group_nodes(scen, rep, quad)

    def PF(ys):
        return eq.project(scen, rep, quad, F, ys, nodes)
    once = PF(Y)
    twice = eq.project(scen, rep, quad, PF, Y, nodes)
    assert np.max(np.abs(once - twice)) < 1e-12
    # single-point and stacked versions agree
    np.testing.assert_allclose(eq.average(scen, rep, quad, F, Y[0], nodes), once[0], atol=1e-14)


def test_equivariant_input_is_fixed():
    scen = geometry.scenario("so3-space")
    rep = geometry.representation_for(scen, "spin:1")
    quad = lie.haar_quadrature("SO(3)", 8)
    block = geometry.building_block(scen, "equivariant-gaussian", rep)

    def F(ys):
        return np.array([block.value(y) for y in ys])
    Y = np.random.default_rng(2).normal(size=(4, 3))
    assert np.max(np.abs(eq.project(scen, rep, quad, F, Y) - F(Y))) < 1e-12


def test_su2_matrix_element_compatibility():
    scen = geometry.scenario("su2-conj")
    rep = geometry.representation_for(scen, "spin:1")
    quad = lie.haar_quadrature("SU(2)", 12)
    rng = np.random.default_rng(7)
    sample = eq.matrix_element_sample(rng, "su2", ["spin:1/2", "spin:1"], 3)
    params = scen.group.random_params(rng, 4)
    Y = scen.group.matrix(scen.group.random_params(rng, 3))
    report = eq.compatibility_check(scen, rep, quad, [sample], Y, params)
    assert report.max_defect < 1e-8
    # coefficient-space averaging agrees with nodal averaging and is idempotent
    avg = sample.averaged(scen, rep, quad)
    np.testing.assert_allclose(avg(Y), eq.project(scen, rep, quad, sample, Y), atol=1e-12)
    again = avg.averaged(scen, rep, quad)
    assert max(np.max(np.abs(a - b)) for a, b in zip(again.coefs, avg.coefs)) < 1e-12


def test_schur_inner_product_matches_quadrature():
    scen = geometry.scenario("su2-conj")
    quad = lie.haar_quadrature("SU(2)", 8)
    rng = np.random.default_rng(11)
    F = eq.matrix_element_sample(rng, "su2", ["spin:1/2", "spin:1"], 3)
    G = eq.matrix_element_sample(rng, "su2", ["spin:1/2", "spin:1"], 3)
    assert abs(F.inner(G) - eq.inner_product(scen, F, G, quad)) < 1e-12


def test_averaging_symmetric_euclidean():
    scen = geometry.scenario("u1-plane")
    rep = geometry.representation_for(scen, "charge:1")
    quad = lie.haar_quadrature("U(1)", 16)
    rng = np.random.default_rng(4)
    F = eq.polynomial_gaussian_sample(rng, 2, 1)
    G = eq.polynomial_gaussian_sample(rng, 2, 1)
    nodes = eq.group_nodes(scen, rep, quad)

    def P(H):
        return lambda ys: eq.project(scen, rep, quad, H, ys, nodes)
    lhs = eq.inner_product(scen, P(F), G)
    rhs = eq.inner_product(scen, F, P(G))
    assert abs(lhs - rhs) < 1e-6
