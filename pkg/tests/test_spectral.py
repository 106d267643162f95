import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from scipy import special

from polarqhr import geometry, reduce, spectral


def hand_operator(M, h=1.0):
    """A ReducedOperator around an explicit matrix (no scenario behind it)."""
    M = sp.csr_matrix(M)
    n = M.shape[0]
    x = h * np.arange(1, n + 1)
    return reduce.ReducedOperator("hand", "trivial", [x], x[:, None], (h,), np.eye(1), np.zeros(n), np.ones(n),
                                  np.zeros((n, 1, 1)), M)


def free_laplacian(N, length=np.pi):
    h = length / (N + 1)
    main = np.full(N, -2.0) / h ** 2
    off = np.ones(N - 1) / h ** 2
    return hand_operator(sp.diags([off, main, off], [-1, 0, 1]), h)


def test_free_dirichlet_laplacian():
    rep = spectral.eigen_spectrum(free_laplacian(2000), k=3)
    assert rep.method == "banded"
    np.testing.assert_allclose(rep.eigenvalues, [-1.0, -4.0, -9.0], rtol=1e-5)


def test_one_by_one():
    rep = spectral.eigen_spectrum(hand_operator([[-2.5]]), k=3)
    np.testing.assert_allclose(rep.eigenvalues, [-2.5])
    assert rep.max_residual == 0.0


def test_non_hermitian_rejected():
    with pytest.raises(spectral.NumericalFailure):
        spectral.eigen_spectrum(hand_operator([[1.0, 2.0], [0.0, 1.0]]))


def test_su2_trivial_spectrum():
    scen = geometry.scenario("su2-conj")
    op = reduce.assemble(scen, geometry.representation_for(scen, "trivial"), reduce.GridConfig(0, 2 * np.pi, N=2000))
    rep = spectral.eigen_spectrum(op, k=6)
    oracle = spectral.closed_form_spectrum("su2-conj", "trivial", 6)
    np.testing.assert_allclose(oracle, [0, -0.75, -2, -3.75, -6, -8.75])
    cmp = spectral.compare_oracle(rep, oracle, tol_abs=1e-4, tol_rel=1e-4)
    assert cmp.passed
    assert rep.oracle_comparison is cmp
    assert np.all(np.diff(rep.eigenvalues) < 0)
    assert rep.orthogonality < 1e-10


def test_eigenvectors_unit_norm_in_cell_measure():
    op = free_laplacian(500)
    rep = spectral.eigen_spectrum(op, k=4)
    h = op.cell_volume
    np.testing.assert_allclose(h * np.sum(np.abs(rep.eigenvectors) ** 2, axis=0), 1.0, atol=1e-12)


def test_fourth_order_vectors_by_inverse_iteration():
    scen = geometry.scenario("so3-space")
    op = reduce.assemble(scen, geometry.representation_for(scen, "spin:1"), reduce.GridConfig(0, 20, N=1500, order=4))
    assert op.bandwidth() == 2
    rep = spectral.eigen_spectrum(op, k=5)
    oracle = spectral.closed_form_spectrum("so3-space", "spin:1", 5, R=20)
    assert spectral.compare_oracle(rep, oracle, tol_rel=1e-7).passed
    assert rep.max_residual < 1e-10


def test_shift_invert_matches_dense(monkeypatch):
    scen = geometry.scenario("su3-conj")
    op = reduce.assemble(scen, geometry.representation_for(scen, "adjoint"), reduce.GridConfig(N=24))
    dense = spectral.eigen_spectrum(op, k=4)
    monkeypatch.setattr(spectral, "DENSE_LIMIT", 10)
    sparse = spectral.eigen_spectrum(op, k=4)
    assert (dense.method, sparse.method) == ("dense", "shift-invert")
    np.testing.assert_allclose(sparse.eigenvalues, dense.eigenvalues, rtol=1e-10)


def test_spin_j_monotone():
    scen = geometry.scenario("su2-conj")
    grid = reduce.GridConfig(0, 2 * np.pi, N=800)
    tops = [spectral.eigen_spectrum(reduce.assemble(scen, geometry.representation_for(scen, lab), grid), 3).eigenvalues
            for lab in ("trivial", "spin:1", "spin:2", "spin:3")]
    assert all(np.all(b < a) for a, b in zip(tops, tops[1:]))
    # spin-j oracle: -((j + 1 + n)^2 - 1)/4
    np.testing.assert_allclose(tops[2], spectral.closed_form_spectrum("su2-conj", "spin:2", 3), rtol=1e-4)


def test_convergence_u1_charge_one():
    scen = geometry.scenario("u1-plane")
    rep = geometry.representation_for(scen, "charge:1")
    report = spectral.convergence_study(scen, rep, [500, 1000, 2000], k=5, grid=reduce.GridConfig(0.0, 10.0))
    table = report.convergence_table
    assert np.all(np.abs(table.orders - 2.0) < 0.2), table.orders
    assert table.flagged == []
    assert len(table.records()) == 3


def test_convergence_free_laplacian_order():
    so3 = geometry.scenario("so3-space")
    report = spectral.convergence_study(so3, geometry.representation_for(so3, "trivial"), [200, 400, 800], k=3,
                                        grid=reduce.GridConfig(0.0, np.pi))
    np.testing.assert_allclose(report.convergence_table.orders, 2.0, atol=0.05)
    np.testing.assert_allclose(report.eigenvalues, [-1, -4, -9], rtol=1e-4)


def test_convergence_rejects_bad_lists():
    scen = geometry.scenario("su2-conj")
    rep = geometry.representation_for(scen, "trivial")
    with pytest.raises(ValueError):
        spectral.convergence_study(scen, rep, [100, 200])
    with pytest.raises(ValueError):
        spectral.convergence_study(scen, rep, [100, 300, 200])


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 6.0), st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3), st.floats(1.1, 3.0))
def test_observed_order_recovers_power(p, c, ratio):
    h = np.array([1.0, 1 / ratio, 1 / ratio ** 2]) * 0.1
    assert spectral.observed_order(3.0 + c * h ** p, h) == pytest.approx(p, rel=1e-6)


def test_compare_oracle_edge_cases():
    assert spectral.compare_oracle(np.array([-1.0, -2.0]), []).passed
    assert spectral.compare_oracle(np.array([-1.0]), None).passed
    with pytest.raises(ValueError):
        spectral.compare_oracle(np.array([-1.0]), [-1.0, -2.0])
    assert not spectral.compare_oracle(np.array([1e-9]), [0.0]).passed
    assert spectral.compare_oracle(np.array([1e-9]), [0.0], tol_abs=1e-8).passed
    assert not spectral.compare_oracle(np.array([-1.001]), [-1.0]).passed


@pytest.mark.parametrize("ell", [0, 1, 2, 3])
def test_spherical_bessel_zeros(ell):
    z = spectral.spherical_bessel_zeros(ell, 5)
    assert np.max(np.abs(special.spherical_jn(ell, z))) < 1e-13
    if ell == 0:
        np.testing.assert_allclose(z, np.pi * np.arange(1, 6), rtol=1e-14)
    assert np.all(np.diff(z) > 2.5)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_bessel_zeros(m):
    np.testing.assert_allclose(spectral.bessel_zeros(m, 6), special.jn_zeros(m, 6), rtol=1e-13)


def test_closed_form_absent():
    assert spectral.closed_form_spectrum("su3-conj", "adjoint", 3) is None
    assert spectral.closed_form_spectrum("so3-space", "spin:1", 3) is None
