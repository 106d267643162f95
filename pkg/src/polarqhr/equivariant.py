"""K-invariant vectors, the Haar averaging projector, and the spin-coupling term."""
from dataclasses import dataclass

import numpy as np

from . import lie

KERNEL_TOL = 1e-10
COMMUTATOR_TOL = 1e-10


class ScenarioInconsistencyError(RuntimeError):
    """The spin term does not preserve V^K: the designated K is not an isotropy algebra."""


@dataclass(frozen=True)
class InvariantSubspace:
    basis: np.ndarray      # (dim V, dim V^K), orthonormal columns
    projector: np.ndarray  # Hermitian idempotent onto V^K

    @property
    def dim_VK(self):
        return self.basis.shape[1]

    @property
    def usable(self):
        return self.dim_VK > 0


def invariant_vectors(rep, spec, tol=KERNEL_TOL):
    """Orthonormal basis of the common kernel of rho'(k) over the K generators.

    The kernel is cut down one generator at a time with an SVD; singular values
    below ``tol`` (relative to the generator norm, floor 1) count as zero.  A
    zero-dimensional result is legal and marks the pair as unusable.
    """
    basis = np.eye(rep.dim_V, dtype=complex)
    for k in spec.subalgebra_K:
        if basis.shape[1] == 0:
            break
        M = rep.generators[k] @ basis
        _, s, vh = np.linalg.svd(M)
        scale = max(1.0, np.linalg.norm(rep.generators[k], 2))
        rank = int(np.sum(s > tol * scale))
        null = vh[rank:].conj().T
        basis = basis @ null
        # re-orthonormalize to keep the columns exact
        if basis.shape[1]:
            basis, _ = np.linalg.qr(basis)
    P = basis @ basis.conj().T
    return InvariantSubspace(basis, P)


def group_nodes(scenario, rep, quad):
    """Precomputed rho(g_k) and g_k^{-1} for a quadrature rule."""
    rho = rep.evaluate(quad.params)
    ginv = np.conj(np.swapaxes(quad.nodes, -1, -2))
    return rho, ginv


def average(scenario, rep, quad, F, y, nodes=None):
    """(PF)(y) = sum_k w_k rho(g_k) F(g_k^{-1}.y).

    ``F`` must accept a stack of points and return an array of shape (n, dim V).
    """
    rho, ginv = nodes if nodes is not None else group_nodes(scenario, rep, quad)
    pts = scenario.act(ginv, y)
    vals = F(pts)
    return quad.integrate(np.einsum("kij,kj->ki", rho, vals))


def project(scenario, rep, quad, F, Y, nodes=None, chunk=200_000):
    """(PF)(y) for every row of the stack Y, shape (m, dim V).

    Nodes are processed in chunks so that at most ``chunk`` points are handed to
    F at once; chunks are summed in node order so results are reproducible.
    """
    rho, ginv = nodes if nodes is not None else group_nodes(scenario, rep, quad)
    Y = np.asarray(Y)
    m = len(Y)
    step = max(1, chunk // max(m, 1))
    out = np.zeros((m, rep.dim_V), dtype=complex)
    for start in range(0, len(quad.weights), step):
        sl = slice(start, start + step)
        g = ginv[sl]
        pts = scenario.act(g[:, None], Y[None])
        vals = F(pts.reshape((-1,) + Y.shape[1:])).reshape(len(g), m, -1)
        out += np.einsum("k,kij,kmj->mi", quad.weights[sl], rho[sl], vals)
    return out


@dataclass
class CompatibilityReport:
    max_defect: float
    max_input_defect: float
    n_samples: int
    n_pairs: int
    threshold: float

    @property
    def passed(self):
        return self.max_defect < self.threshold


def equivariance_defect(scenario, rep, F, points, params):
    """max ||F(g.y) - rho(g) F(y)|| over all (g, y) pairs."""
    gs = scenario.group.matrix(params)
    rho = rep.evaluate(params)
    Y = np.asarray(points)
    moved = scenario.act(gs[:, None], Y[None])                  # (n_g, n_y, ...)
    lhs = F(moved.reshape((-1,) + Y.shape[1:])).reshape(len(gs), len(Y), -1)
    rhs = np.einsum("gij,yj->gyi", rho, F(Y))
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def compatibility_check(scenario, rep, quad, samples, points, params, quad_tol=1e-9):
    """Equivariance defect of PF for each sample F, over a grid of (g, y) pairs.

    Passing (defect < 10 * quad_tol) witnesses that averaging maps the sample
    space into the equivariant functions.
    """
    nodes = group_nodes(scenario, rep, quad)
    worst = worst_in = 0.0
    for F in samples:
        def PF(ys, F=F):
            return project(scenario, rep, quad, F, ys, nodes)
        worst = max(worst, equivariance_defect(scenario, rep, PF, points, params))
        worst_in = max(worst_in, equivariance_defect(scenario, rep, F, points, params))
    return CompatibilityReport(worst, worst_in, len(samples), len(points) * len(params), 10 * quad_tol)


def spin_coupling(rep, inv, sample, dual, tol=COMMUTATOR_TOL):
    """Matrix of sum_ab b^{ab} rho'(T_a) rho'(T_b) on the V^K basis."""
    if not inv.usable:
        raise ScenarioInconsistencyError("dim V^K = 0")
    R = np.array([rep.generator(dual.T_lower[:, a]) for a in range(dual.dim)])
    S = np.einsum("ab,aij,bjk->ik", sample.b_upper, R, R)
    P = inv.projector
    comm = np.linalg.norm(S @ P - P @ S, 2)
    if comm > tol * max(1.0, np.linalg.norm(S, 2)):
        raise ScenarioInconsistencyError(f"spin term does not commute with the V^K projector ({comm:.3e})")
    Sk = inv.basis.conj().T @ S @ inv.basis
    return 0.5 * (Sk + Sk.conj().T)


# ---------------------------------------------------------------------------
# sample functions (vectorized over a leading axis of points)


def polynomial_gaussian_sample(rng, dim_Y, dim_V, degree=2):
    """Random V-valued polynomial of total degree <= ``degree`` times exp(-|y|^2)."""
    exps = [e for e in np.ndindex(*(degree + 1,) * dim_Y) if sum(e) <= degree]
    exps = np.array(exps)
    coef = rng.normal(size=(len(exps), dim_V)) + 1j * rng.normal(size=(len(exps), dim_V))

    def F(ys):
        ys = np.asarray(ys, dtype=float)
        mono = np.prod(ys[:, None, :] ** exps[None], axis=-1)
        gauss = np.exp(-np.sum(ys * ys, axis=-1))
        return (mono @ coef) * gauss[:, None]

    return F


@dataclass
class MatrixElementSample:
    """F(g) = sum over irreducibles pi of C_pi vec(pi(g)) on a group manifold (row-major vec)."""
    reps: list
    coefs: list            # (dim V, dim pi^2) per irreducible

    def __call__(self, gs):
        gs = np.asarray(gs)
        out = 0.0
        for r, c in zip(self.reps, self.coefs):
            out = out + r.from_matrix(gs).reshape(len(gs), -1) @ c.T
        return out

    def averaged(self, scenario, rep, quad, nodes=None):
        """The sample PF, computed on coefficients: P acts linearly on each C_pi.

        Under conjugation pi(g^-1 y g) = pi(g)^-1 pi(y) pi(g), so each row of C_pi,
        read as an n x n matrix X, moves to pi(g)^-T X pi(g)^T before the rho-weighted sum.
        """
        if scenario.action != "conjugation":
            raise ValueError("coefficient averaging is defined for the conjugation action")
        rho = nodes[0] if nodes is not None else rep.evaluate(quad.params)
        new = []
        for r, c in zip(self.reps, self.coefs):
            n = r.dim_V
            pg = r.evaluate(quad.params)
            pgT = np.swapaxes(pg, -1, -2)
            X = c.reshape(len(c), n, n)
            moved = np.conj(pg)[:, None] @ X[None] @ pgT[:, None]      # pi^-T = conj(pi) for unitary pi
            new.append(np.einsum("k,kij,kjab->iab", quad.weights, rho, moved, optimize=True).reshape(len(c), n * n))
        return MatrixElementSample(self.reps, new)

    def inner(self, other):
        """<F, G> in L^2(G, V) for normalized Haar measure, by Schur orthogonality.

        Assumes the listed irreducibles are pairwise inequivalent and shared by both samples.
        """
        if [r.label for r in self.reps] != [r.label for r in other.reps]:
            raise ValueError("samples built on different irreducibles")
        return complex(sum(np.vdot(a, b) / r.dim_V for r, a, b in zip(self.reps, self.coefs, other.coefs)))


def matrix_element_sample(rng, algebra_name, irreps, dim_V):
    """Random linear combination of matrix elements of the listed irreducibles."""
    reps = [lie.representation(algebra_name, lab) for lab in irreps]
    coefs = [rng.normal(size=(dim_V, r.dim_V ** 2)) + 1j * rng.normal(size=(dim_V, r.dim_V ** 2)) for r in reps]
    return MatrixElementSample(reps, coefs)


def inner_product(scenario, F, G, quad=None, box=4.0, n_nodes=32):
    """<F, G> in L^2(Y, V): Gauss product rule on [-box, box]^n, or a Haar rule on groups."""
    if scenario.manifold == "euclidean":
        n = 2 if scenario.id == "u1-plane" else 3
        t, w = np.polynomial.legendre.leggauss(n_nodes)
        t, w = box * t, box * w
        grids = np.meshgrid(*([t] * n), indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], -1)
        wts = np.prod(np.stack([g.reshape(-1) for g in np.meshgrid(*([w] * n), indexing="ij")]), axis=0)
    else:
        pts, wts = quad.nodes, quad.weights
    return complex(np.sum(wts * np.sum(np.conj(F(pts)) * G(pts), axis=-1)))
