"""Lie-algebraic substrate: algebras, representations, group elements, Haar rules.

Conventions
-----------
``structure_constants[a, b, c]`` holds f^c_{ab}, i.e. ``[X_a, X_b] = sum_c f[a, b, c] X_c``.
Representation generators are anti-Hermitian matrices ``R_a = rho'(X_a)``.
Group elements are addressed by a parameter vector (Euler-type angles, or
Givens angles for SU(3)); ``Group.matrix`` maps parameters to the faithful
matrix and ``Representation.evaluate`` maps the same parameters to ``rho(g)``.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg
import scipy.special


ALGEBRA_TOL = 1e-12


# ---------------------------------------------------------------------------
# algebras


@dataclass(frozen=True)
class LieAlgebraSpec:
    name: str
    basis_labels: tuple
    structure_constants: np.ndarray
    invariant_form: np.ndarray
    subalgebra_K: tuple = ()
    # faithful matrix realization X_a (used for exp_map and killing fields)
    matrices: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def dim(self):
        return len(self.basis_labels)

    def rescaled(self, c):
        """Same algebra with the invariant form multiplied by ``c``."""
        return LieAlgebraSpec(self.name, self.basis_labels, self.structure_constants,
                              c * self.invariant_form, self.subalgebra_K, self.matrices)

    def with_subalgebra(self, indices):
        return LieAlgebraSpec(self.name, self.basis_labels, self.structure_constants,
                              self.invariant_form, tuple(indices), self.matrices)

    def element(self, coords):
        """Matrix of the algebra element with the given basis coordinates."""
        return np.tensordot(np.asarray(coords), self.matrices, axes=(0, 0))

    def coordinates(self, Z):
        """Basis coordinates of a matrix ``Z`` lying in the span of ``matrices``."""
        X = self.matrices
        gram = np.real(np.einsum("aij,bji->ab", X, X))
        proj = np.real(np.einsum("...ij,aji->...a", Z, X))
        return proj @ np.linalg.inv(gram).T


@dataclass
class ValidationReport:
    residuals: dict
    tol: float

    @property
    def passed(self):
        return all(r < self.tol for r in self.residuals.values())

    def failures(self):
        return [k for k, r in self.residuals.items() if not r < self.tol]


def validate_algebra(spec, tol=ALGEBRA_TOL):
    """Check antisymmetry, Jacobi, form symmetry/definiteness/ad-invariance and K closure."""
    f = np.asarray(spec.structure_constants, dtype=float)
    n = spec.dim
    if f.shape != (n, n, n):
        raise ValueError(f"structure constants have shape {f.shape}, expected {(n, n, n)}")
    B = np.asarray(spec.invariant_form, dtype=float)
    if B.shape != (n, n):
        raise ValueError(f"invariant form has shape {B.shape}, expected {(n, n)}")
    if any(k < 0 or k >= n for k in spec.subalgebra_K):
        raise ValueError("subalgebra index out of range")

    res = {}
    res["antisymmetry"] = float(np.max(np.abs(f + f.transpose(1, 0, 2)), initial=0.0))
    # sum_e f^e_{ab} f^d_{ec} + cyclic(a, b, c)
    jac = np.einsum("abe,ecd->abcd", f, f)
    jac = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
    res["jacobi"] = float(np.max(np.abs(jac), initial=0.0))
    res["form_symmetry"] = float(np.max(np.abs(B - B.T), initial=0.0))
    eig_min = np.linalg.eigvalsh(0.5 * (B + B.T)).min() if n else 1.0
    # reported as a residual: zero when positive definite
    res["form_positivity"] = 0.0 if eig_min > 0 else float(abs(eig_min) + 1.0)
    # sum_e f^e_{ca} B_{eb} + f^e_{cb} B_{ae}
    adinv = np.einsum("cae,eb->cab", f, B) + np.einsum("cbe,ae->cab", f, B)
    res["ad_invariance"] = float(np.max(np.abs(adinv), initial=0.0))
    K = list(spec.subalgebra_K)
    outside = [c for c in range(n) if c not in K]
    if K and outside:
        res["subalgebra_closure"] = float(np.max(np.abs(f[np.ix_(K, K, outside)])))
    else:
        res["subalgebra_closure"] = 0.0
    return ValidationReport(res, tol)


@dataclass(frozen=True)
class DualBasisPair:
    T_lower: np.ndarray  # columns T_alpha, coordinates in the algebra basis
    T_upper: np.ndarray  # columns T^alpha with B(T^alpha, T_beta) = delta

    @property
    def dim(self):
        return self.T_lower.shape[1]


def dual_bases(spec):
    """Dual bases of the B-orthogonal complement of the designated subalgebra.

    ``T_lower`` is the B-orthogonal projection of each non-K basis vector onto
    the complement, so it does not depend on the normalisation of B.
    """
    n = spec.dim
    K = list(spec.subalgebra_K)
    rest = [a for a in range(n) if a not in K]
    if not rest:
        raise ValueError("subalgebra K equals the whole algebra: empty complement")
    B = np.asarray(spec.invariant_form, dtype=float)
    E = np.eye(n)
    Tl = E[:, rest]
    if K:
        Kb = E[:, K]
        Tl = Tl - Kb @ np.linalg.solve(Kb.T @ B @ Kb, Kb.T @ B @ Tl)
    G = Tl.T @ B @ Tl
    Tu = Tl @ np.linalg.inv(G)
    return DualBasisPair(Tl, Tu)


def exp_map(spec, xi):
    """Group element exp(xi) in the faithful realization attached to ``spec``."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (spec.dim,):
        raise ValueError(f"expected {spec.dim} coordinates, got shape {xi.shape}")
    if spec.name == "su2":
        # -(i/2) x.sigma -> cos(|x|/2) - i sin(|x|/2) n.sigma
        t = np.linalg.norm(xi)
        if t == 0.0:
            return np.eye(2, dtype=complex)
        return np.cos(t / 2) * np.eye(2) + (2 * np.sin(t / 2) / t) * spec.element(xi)
    if spec.name == "so3":
        t = np.linalg.norm(xi)
        if t == 0.0:
            return np.eye(3)
        A = spec.element(xi / t)
        return np.eye(3) + np.sin(t) * A + (1 - np.cos(t)) * (A @ A)
    return scipy.linalg.expm(spec.element(xi))


# ---------------------------------------------------------------------------
# catalog algebras


def _levi_civita():
    eps = np.zeros((3, 3, 3))
    for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        eps[a, b, c] = 1.0
        eps[b, a, c] = -1.0
    return eps


PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def gell_mann():
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return lam


def structure_constants_from_matrices(X):
    """f[a, b, c] from an explicit matrix basis, via the trace Gram matrix."""
    n = len(X)
    gram = np.real(np.einsum("aij,bji->ab", X, X))
    f = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            C = X[a] @ X[b] - X[b] @ X[a]
            proj = np.real(np.einsum("ij,cji->c", C, X))
            f[a, b] = np.linalg.solve(gram, proj)
    return f


def trace_form(X):
    """B(X, Y) = -tr(XY) on a matrix basis."""
    return -np.real(np.einsum("aij,bji->ab", X, X))


def _u1():
    T = np.array([[[0.0, -1.0], [1.0, 0.0]]])
    return LieAlgebraSpec("u1", ("T",), np.zeros((1, 1, 1)), trace_form(T), (), T)


def _su2():
    X = -0.5j * PAULI
    return LieAlgebraSpec("su2", ("X1", "X2", "X3"), _levi_civita(), np.eye(3), (2,), X)


def _so3():
    L = -_levi_civita()  # (L_a)_{bc} = -eps_{abc}
    return LieAlgebraSpec("so3", ("L1", "L2", "L3"), _levi_civita(), np.eye(3), (2,), L)


def _su3():
    X = -0.5j * gell_mann()
    labels = tuple(f"X{k}" for k in range(1, 9))
    # B = -2 tr(XY): identity in the Gell-Mann basis
    return LieAlgebraSpec("su3", labels, structure_constants_from_matrices(X),
                          2 * trace_form(X), (2, 7), X)


_ALGEBRAS = {"u1": _u1, "so2": _u1, "su2": _su2, "so3": _so3, "su3": _su3}


def algebra(name):
    try:
        return _ALGEBRAS[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown algebra {name!r}; known: {sorted(_ALGEBRAS)}") from None


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Representation:
    label: str
    generators: np.ndarray  # shape (dim G, dim V, dim V)
    evaluate: Callable = field(compare=False)     # group parameters (..., p) -> rho(g) (..., V, V)
    from_matrix: Callable = field(compare=False)  # faithful matrices (..., m, m) -> rho(g)

    @property
    def dim_V(self):
        return self.generators.shape[1]

    def generator(self, coords):
        """rho'(xi) for xi given in algebra basis coordinates."""
        return np.tensordot(np.asarray(coords), self.generators, axes=(0, 0))


def spin_matrices(j):
    """Hermitian (J_x, J_y, J_z) for spin ``j`` built from ladder operators, basis m = j..-j."""
    d = int(round(2 * j)) + 1
    m = j - np.arange(d)
    Jp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
        Jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    Jm = Jp.conj().T
    return np.array([(Jp + Jm) / 2, (Jp - Jm) / 2j, np.diag(m).astype(complex)])


def bracket_residual(rep, spec):
    R = rep.generators
    comm = np.einsum("aij,bjk->abik", R, R) - np.einsum("bij,ajk->abik", R, R)
    rhs = np.einsum("abc,cik->abik", spec.structure_constants, R)
    return float(np.max(np.abs(comm - rhs), initial=0.0))


def casimir(rep, spec):
    """Return (C, c, off_scalar) with C = sum (B^-1)^{ab} R_a R_b and c = tr(C)/dim V."""
    Binv = np.linalg.inv(spec.invariant_form)
    C = np.einsum("ab,aij,bjk->ik", Binv, rep.generators, rep.generators)
    c = np.trace(C) / rep.dim_V
    off = float(np.max(np.abs(C - c * np.eye(rep.dim_V))))
    return C, complex(c), off


def _euler_evaluator(R, period_check=None):
    """rho(g) = exp(a R3) exp(b R2) exp(c R3) with R3 diagonal (ladder basis)."""
    w3 = np.diag(R[2])  # purely imaginary
    lam, U = np.linalg.eigh(1j * R[1])  # R2 = -i * (i R2)

    def evaluate(params):
        p = np.asarray(params, dtype=float)
        a, b, c = p[..., 0], p[..., 1], p[..., 2]
        Ea = np.exp(a[..., None] * w3)
        Ec = np.exp(c[..., None] * w3)
        mid = np.einsum("ik,...k,jk->...ij", U, np.exp(-1j * b[..., None] * lam), U.conj())
        return Ea[..., :, None] * mid * Ec[..., None, :]

    return evaluate


def _trivial(spec):
    gens = np.zeros((spec.dim, 1, 1), dtype=complex)

    def ones(p, k=1):
        return np.ones(np.shape(p)[:-k] + (1, 1), dtype=complex)

    return Representation("trivial", gens, ones, lambda g: ones(g, 2))


def _parse_spin(text):
    if "/" in text:
        num, den = text.split("/")
        return int(num) / int(den)
    return float(text)


def representation(algebra_name, label):
    """Catalog representation by label: 'trivial', 'spin:j', 'charge:m', 'defining', 'adjoint'."""
    spec = algebra(algebra_name)
    name = spec.name
    if label == "trivial":
        return _trivial(spec)
    kind, _, arg = label.partition(":")
    if name == "u1" and kind == "charge":
        m = int(arg)
        gens = np.array([[[1j * m]]])
        return Representation(
            label, gens,
            lambda p: np.exp(1j * m * np.asarray(p)[..., 0])[..., None, None],
            lambda g: ((g[..., 0, 0] + 1j * g[..., 1, 0]) ** m)[..., None, None])
    if name in ("su2", "so3") and kind == "spin":
        j = _parse_spin(arg)
        if j < 0 or abs(2 * j - round(2 * j)) > 1e-12:
            raise ValueError(f"invalid spin {arg!r}")
        if name == "so3" and abs(j - round(j)) > 1e-12:
            raise ValueError("SO(3) has integer spins only")
        R = -1j * spin_matrices(j)
        evaluate = _euler_evaluator(R)
        grp = GROUPS[GROUP_OF_ALGEBRA[name]]
        return Representation(label, R, evaluate, lambda g: evaluate(grp.params_of(g)))
    grp = GROUPS[GROUP_OF_ALGEBRA[name]]
    if kind == "defining":
        gens = spec.matrices.astype(complex)
        return Representation(label, gens, lambda p: grp.matrix(p).astype(complex),
                              lambda g: np.asarray(g, dtype=complex))
    if kind == "adjoint" and name in ("su2", "so3", "su3"):
        gens = np.transpose(spec.structure_constants, (0, 2, 1)).astype(complex)  # (ad X_a)_{cb} = f[a,b,c]
        return Representation(label, gens,
                              lambda p: adjoint_matrix(spec, grp.matrix(p)).astype(complex),
                              lambda g: adjoint_matrix(spec, g).astype(complex))
    raise KeyError(f"unknown representation {label!r} for algebra {algebra_name!r}")


def adjoint_matrix(spec, g):
    """Ad(g) in the algebra basis, for a (stack of) faithful matrices g."""
    X = spec.matrices
    n, k = X.shape[0], X.shape[1]
    gram = np.real(np.einsum("aij,bji->ab", X, X))
    g = np.asarray(g)
    # vec(g X g^H) = (g kron conj g) vec(X), row-major vec
    kron = np.einsum("...ij,...lk->...iljk", g, np.conj(g)).reshape(g.shape[:-2] + (k * k, k * k))
    cols = X.reshape(n, k * k).T                       # vec(X_b) as columns
    rows = np.swapaxes(X, -1, -2).reshape(n, k * k)    # tr(Z X_c) = vec(Z) . vec(X_c^T)
    return np.linalg.inv(gram) @ np.real(rows @ kron @ cols)


# ---------------------------------------------------------------------------
# groups and Haar quadrature


@dataclass(frozen=True)
class HaarQuadrature:
    group: str
    params: np.ndarray   # (n, p) parameters of the nodes
    nodes: np.ndarray    # (n, m, m) faithful matrices
    weights: np.ndarray  # (n,), non-negative, summing to 1

    def integrate(self, values):
        """Weighted sum over the leading axis (fixed summation order)."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def _periodic_nodes(n, period):
    return period * np.arange(n) / n


def _gauss_unit(n):
    """Gauss-Legendre on [0, 1] with weights summing to 1."""
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1) / 2, w / 2


class Group:
    name = ""
    algebra_name = ""

    def matrix(self, params):
        raise NotImplementedError

    def inverse_params(self, params):
        raise NotImplementedError

    def quadrature(self, order):
        raise NotImplementedError

    def random_params(self, rng, n):
        raise NotImplementedError

    def _rule(self, axes, weights):
        grids = np.meshgrid(*axes, indexing="ij")
        params = np.stack([g.reshape(-1) for g in grids], axis=-1)
        wgrid = np.meshgrid(*weights, indexing="ij")
        w = np.prod(np.stack([g.reshape(-1) for g in wgrid]), axis=0)
        w = w / w.sum()
        return HaarQuadrature(self.name, params, self.matrix(params), w)


class CircleGroup(Group):
    name = "U(1)"
    algebra_name = "u1"

    def matrix(self, params):
        t = np.asarray(params, dtype=float)[..., 0]
        c, s = np.cos(t), np.sin(t)
        return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)

    def quadrature(self, order):
        """``order`` equally spaced angles: exact for e^{i m t}, |m| < order."""
        if order < 1:
            raise ValueError("order must be >= 1")
        t = _periodic_nodes(order, 2 * np.pi)
        return self._rule([t], [np.ones(order)])

    def random_params(self, rng, n):
        return rng.uniform(0, 2 * np.pi, (n, 1))

    def params_of(self, g):
        return np.arctan2(g[..., 1, 0], g[..., 0, 0])[..., None]


class EulerGroup(Group):
    """SU(2) or SO(3) in z-y-z Euler angles g = exp(a X3) exp(b X2) exp(c X3)."""

    def __init__(self, name, algebra_name, period):
        self.name = name
        self.algebra_name = algebra_name
        self.period = period
        spec = algebra(algebra_name)
        self._eval = _euler_evaluator(-1j * spin_matrices(0.5)) if algebra_name == "su2" else None
        self._spec = spec

    def matrix(self, params):
        p = np.asarray(params, dtype=float)
        if self.algebra_name == "su2":
            return self._eval(p)
        a, b, c = p[..., 0], p[..., 1], p[..., 2]
        return _rot_z(a) @ _rot_y(b) @ _rot_z(c)

    def quadrature(self, order):
        """Product rule exact for matrix elements of spins j with 2j <= order.

        Trapezoid rules in the two azimuthal angles and Gauss-Legendre in cos(b).
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        n_phase = order + 1
        n_gauss = order // 2 + 1
        u, wu = _gauss_unit(n_gauss)
        beta = np.arccos(1 - 2 * u)
        a = _periodic_nodes(n_phase, self.period)
        return self._rule([a, beta, a.copy()], [np.ones(n_phase), wu, np.ones(n_phase)])

    def random_params(self, rng, n):
        a = rng.uniform(0, self.period, n)
        c = rng.uniform(0, self.period, n)
        b = np.arccos(rng.uniform(-1, 1, n))
        return np.stack([a, b, c], -1)

    def params_of(self, g):
        """Euler angles reproducing the matrix ``g`` (any valid choice at degenerate points)."""
        g = np.asarray(g)
        if self.algebra_name == "su2":
            # g00 = e^{-i(a+c)/2} cos(b/2), g10 = e^{i(a-c)/2} sin(b/2)
            b = 2 * np.arctan2(np.abs(g[..., 1, 0]), np.abs(g[..., 0, 0]))
            s_plus = -2 * np.angle(g[..., 0, 0])
            s_minus = 2 * np.angle(g[..., 1, 0])
            s_plus = np.where(np.abs(g[..., 0, 0]) > 0, s_plus, 0.0)
            s_minus = np.where(np.abs(g[..., 1, 0]) > 0, s_minus, 0.0)
            return np.stack([(s_plus + s_minus) / 2, b, (s_plus - s_minus) / 2], -1)
        b = np.arccos(np.clip(g[..., 2, 2], -1.0, 1.0))
        sb = np.sin(b)
        regular = sb > 1e-12
        a = np.where(regular, np.arctan2(g[..., 1, 2], g[..., 0, 2]), np.arctan2(g[..., 1, 0], g[..., 0, 0]))
        c = np.where(regular, np.arctan2(g[..., 2, 1], -g[..., 2, 0]), 0.0)
        # at b = pi the z-rotations combine as a - c
        a = np.where(~regular & (g[..., 2, 2] < 0), np.arctan2(-g[..., 1, 0], -g[..., 0, 0]), a)
        return np.stack([a, b, c], -1)


def _rot_z(t):
    c, s, z, o = np.cos(t), np.sin(t), np.zeros_like(t), np.ones_like(t)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def _rot_y(t):
    c, s, z, o = np.cos(t), np.sin(t), np.zeros_like(t), np.ones_like(t)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2)


def _givens(i, j, phi, psi, chi):
    shape = np.shape(phi)
    M = np.zeros(shape + (3, 3), dtype=complex)
    M[..., 0, 0] = M[..., 1, 1] = M[..., 2, 2] = 1
    c, s = np.cos(phi), np.sin(phi)
    M[..., i, i] = c * np.exp(1j * psi)
    M[..., i, j] = s * np.exp(1j * chi)
    M[..., j, i] = -s * np.exp(-1j * chi)
    M[..., j, j] = c * np.exp(-1j * psi)
    return M


class SU3Group(Group):
    """SU(3) as a product of complex Givens rotations E12 E23 E13.

    Parameters (phi12, psi12, chi1, phi23, psi23, chi2, phi13, psi13); phases
    range over [0, 2pi), angles over [0, pi/2].  The Haar density is
    proportional to sin cos(phi12) * sin cos^3(phi23) * sin cos(phi13), i.e.
    uniform in sin^2(phi12), sin^2(phi13) and linear in cos^2(phi23).
    """
    name = "SU(3)"
    algebra_name = "su3"

    def matrix(self, params):
        p = np.asarray(params, dtype=float)
        f12, s12, c1, f23, s23, c2, f13, s13 = np.moveaxis(p, -1, 0)
        zero = np.zeros_like(f13)
        return _givens(0, 1, f12, s12, c1) @ _givens(1, 2, f23, s23, c2) @ _givens(0, 2, f13, s13, zero)

    def quadrature(self, order):
        """Product rule; ``order`` bounds the phase frequencies integrated exactly."""
        if order < 1:
            raise ValueError("order must be >= 1")
        n_phase = order + 1
        n_gauss = order // 2 + 1
        ph = _periodic_nodes(n_phase, 2 * np.pi)
        one = np.ones(n_phase)
        u, wu = _gauss_unit(n_gauss)
        phi_sin2 = np.arcsin(np.sqrt(u))
        # weight v on [0, 1] for v = cos^2(phi23): Gauss-Jacobi(0, 1)
        t, wt = scipy.special.roots_jacobi(n_gauss, 0.0, 1.0)
        v = (t + 1) / 2
        phi23 = np.arccos(np.sqrt(v))
        axes = [phi_sin2, ph, ph, phi23, ph, ph, phi_sin2, ph]
        weights = [wu, one, one, wt, one, one, wu, one]
        return self._rule(axes, weights)

    def random_params(self, rng, n):
        u = rng.uniform(0, 1, (n, 3))
        ph = rng.uniform(0, 2 * np.pi, (n, 5))
        f12 = np.arcsin(np.sqrt(u[:, 0]))
        f13 = np.arcsin(np.sqrt(u[:, 1]))
        f23 = np.arccos(u[:, 2] ** 0.25)  # cos^2 has density 2v
        return np.stack([f12, ph[:, 0], ph[:, 1], f23, ph[:, 2], ph[:, 3], f13, ph[:, 4]], -1)


GROUPS = {
    "U(1)": CircleGroup(),
    "SU(2)": EulerGroup("SU(2)", "su2", 4 * np.pi),
    "SO(3)": EulerGroup("SO(3)", "so3", 2 * np.pi),
    "SU(3)": SU3Group(),
}
GROUPS["SO(2)"] = GROUPS["U(1)"]
GROUP_OF_ALGEBRA = {"u1": "U(1)", "su2": "SU(2)", "so3": "SO(3)", "su3": "SU(3)"}


def group(group_id):
    key = {"u1": "U(1)", "so2": "SO(2)", "su2": "SU(2)", "so3": "SO(3)", "su3": "SU(3)"}.get(group_id, group_id)
    try:
        return GROUPS[key]
    except KeyError:
        raise KeyError(f"unknown group {group_id!r}; known: {sorted(GROUPS)}") from None


def haar_quadrature(group_id, order):
    return group(group_id).quadrature(order)


def character_values(rep, params):
    return np.trace(rep.evaluate(params), axis1=-2, axis2=-1)
