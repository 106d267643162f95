"""Cataloged polar actions: killing fields, section charts, inertia data, ambient oracles."""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import lie


class SectionBoundaryError(ValueError):
    """Raised when a section coordinate lies on or outside the open section domain."""


@dataclass(frozen=True)
class Scenario:
    """A polar action of a catalog group, with a section chart and principal isotropy.

    ``algebra`` carries the invariant form B used for the reduction (it may be
    rescaled); the manifold metric is fixed by ``metric_form`` and never
    follows B.  Section coordinates ``x`` are arrays of shape ``(section_dim,)``.
    """
    id: str
    manifold: str          # "euclidean" or "group"
    group_id: str
    action: str            # "linear_rotation" or "conjugation"
    algebra: lie.LieAlgebraSpec
    metric_form: np.ndarray = field(compare=False)
    section_dim: int = 1
    # open section domain: roots(x) > 0 and < upper, as (gradient, upper) rows
    walls: tuple = ()
    box: tuple = ()        # bounding box per coordinate (lo, hi), hi may be inf
    chart: Callable = field(default=None, compare=False)
    chart_tangents: Callable = field(default=None, compare=False)
    closed_forms: dict = field(default_factory=dict, compare=False)

    @property
    def isotropy_K(self):
        return self.algebra.subalgebra_K

    @property
    def group(self):
        return lie.group(self.group_id)

    def with_algebra(self, spec):
        return replace(self, algebra=spec)

    # -- section ---------------------------------------------------------

    def coords(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.section_dim,):
            raise ValueError(f"section coordinate must have shape ({self.section_dim},)")
        return x

    def distance_to_boundary(self, x):
        """Euclidean distance (in chart coordinates) to the singular boundary of the section."""
        x = self.coords(x)
        d = np.inf
        for grad, upper in self.walls:
            grad = np.asarray(grad, dtype=float)
            val = float(grad @ x)
            norm = np.linalg.norm(grad)
            d = min(d, val / norm)
            if np.isfinite(upper):
                d = min(d, (upper - val) / norm)
        return d

    def distances(self, X):
        """Vectorized :meth:`distance_to_boundary` over the rows of X."""
        X = np.asarray(X, dtype=float).reshape(-1, self.section_dim)
        d = np.full(len(X), np.inf)
        for grad, upper in self.walls:
            grad = np.asarray(grad, dtype=float)
            norm = np.linalg.norm(grad)
            val = X @ grad
            d = np.minimum(d, val / norm)
            if np.isfinite(upper):
                d = np.minimum(d, (upper - val) / norm)
        return d

    def contains(self, x):
        return self.distance_to_boundary(x) > 0

    def point(self, x):
        return self.chart(self.coords(x))

    def tangents(self, x):
        """List of section tangent vectors d q / d x_i at ``x``."""
        return self.chart_tangents(self.coords(x))

    # -- action and metric -------------------------------------------------

    def act(self, g, y):
        """g.y for a faithful group matrix ``g`` (or a stack of them)."""
        if self.action == "linear_rotation":
            return np.real_if_close(np.matmul(g, y[..., None])[..., 0])
        return g @ y @ np.conj(np.swapaxes(g, -1, -2))

    def act_inverse(self, g, y):
        return self.act(np.conj(np.swapaxes(g, -1, -2)), y)

    def metric(self, y, u, v):
        """eta_y(u, v)."""
        if self.manifold == "euclidean":
            return float(np.real(np.vdot(u, v)))
        yi = np.conj(y).T
        spec = self.algebra
        cu = spec.coordinates(yi @ u)
        cv = spec.coordinates(yi @ v)
        return float(cu @ self.metric_form @ cv)

    def metric_spec(self):
        """The algebra with the metric form in place of B (for Casimir/Laplacian oracles)."""
        a = self.algebra
        return lie.LieAlgebraSpec(a.name, a.basis_labels, a.structure_constants,
                                  np.asarray(self.metric_form), a.subalgebra_K, a.matrices)


def killing_field(scenario, xi, y):
    """xi^sharp at y: xi.y for linear actions, xi g - g xi for conjugation."""
    M = scenario.algebra.element(np.asarray(xi, dtype=float))
    if scenario.action == "linear_rotation":
        return np.real_if_close(M @ y)
    return M @ y - y @ M


def killing_field_fd(scenario, xi, y, h):
    """Central difference of t -> exp(t xi).y at t = 0."""
    spec = scenario.algebra
    xi = np.asarray(xi, dtype=float)
    gp = lie.exp_map(spec, h * xi)
    gm = lie.exp_map(spec, -h * xi)
    return (scenario.act(gp, y) - scenario.act(gm, y)) / (2 * h)


@dataclass(frozen=True)
class InertiaSample:
    x: np.ndarray
    b_lower: np.ndarray
    b_upper: np.ndarray
    delta: float
    b_upper_inverse: np.ndarray = None  # inv(b_lower), for the cross-check


def orbit_gram(scenario, dual, X):
    """b_{ab}(x) = eta(T_a#, T_b#) for a stack of section points X of shape (n, section_dim)."""
    X = np.asarray(X, dtype=float).reshape(-1, scenario.section_dim)
    Q = scenario.chart(X)
    Ms = np.stack([scenario.algebra.element(dual.T_lower[:, a]) for a in range(dual.dim)])
    if scenario.action == "linear_rotation":
        F = np.einsum("aij,nj->nai", Ms, Q)
        return np.real(np.einsum("nai,nbi->nab", np.conj(F), F))
    F = Ms[None] @ Q[:, None] - Q[:, None] @ Ms[None]
    C = scenario.algebra.coordinates(np.conj(np.swapaxes(Q, -1, -2))[:, None] @ F)
    return C @ np.asarray(scenario.metric_form, dtype=float) @ np.swapaxes(C, -1, -2)


def inertia_batch(scenario, dual, X):
    """Vectorized inertia data: (b_lower, b_upper, delta) for a stack of section points."""
    X = np.asarray(X, dtype=float).reshape(-1, scenario.section_dim)
    dist = scenario.distances(X)
    if not np.all(dist > 0):
        bad = X[np.argmin(dist)]
        raise SectionBoundaryError(f"x = {bad} is not interior to the section of {scenario.id}")
    b = orbit_gram(scenario, dual, X)
    Tl, Tu = dual.T_lower, dual.T_upper
    B = np.asarray(scenario.algebra.invariant_form, dtype=float)
    # matrix of J on K-perp in the T_lower basis: B(T_a, J T_b) = b_ab
    G = Tl.T @ B @ Tl
    J = np.linalg.solve(G, b)
    upper_coeffs = np.linalg.solve(G, Tl.T @ B @ Tu)  # T^b in the T_lower basis
    Jinv_Tu = Tl @ np.linalg.solve(J, np.broadcast_to(upper_coeffs, J.shape))
    b_up = Tu.T @ B @ Jinv_Tu
    b_up = 0.5 * (b_up + np.swapaxes(b_up, -1, -2))
    delta = np.sqrt(np.abs(np.linalg.det(b)))
    if not np.all(delta > 0):
        raise SectionBoundaryError(f"degenerate orbit at x = {X[np.argmin(delta)]} in {scenario.id}")
    return b, b_up, delta


def inertia_matrices(scenario, dual, x):
    """b_{ab} = eta(T_a#, T_b#), b^{ab} = B(T^a, J^-1 T^b) and delta = sqrt|det b_{ab}|."""
    x = scenario.coords(x)
    b, b_up, delta = inertia_batch(scenario, dual, x[None])
    return InertiaSample(x, b[0], b_up[0], float(delta[0]), np.linalg.inv(b[0]))


def density(scenario, dual, x):
    return inertia_matrices(scenario, dual, x).delta


def densities(scenario, dual, X):
    return inertia_batch(scenario, dual, X)[2]


def section_metric(scenario, x):
    """Gram matrix h_ij = eta(dq/dx_i, dq/dx_j); a 1x1 matrix for one-dimensional sections."""
    x = scenario.coords(x)
    q = scenario.point(x)
    t = scenario.tangents(x)
    d = len(t)
    h = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            h[i, j] = scenario.metric(q, t[i], t[j])
    return h


@dataclass
class PolarSanityReport:
    orthogonality: float  # max |eta(dq/dx, T_a#)|
    isotropy: float       # max ||xi#|| over K generators
    injectivity: float    # min singular value of the orbit Gram matrix b
    tol: float = 1e-12

    @property
    def passed(self):
        return self.orthogonality < self.tol and self.isotropy < self.tol and self.injectivity > self.tol

    def failures(self):
        out = []
        if not self.orthogonality < self.tol:
            out.append("section orthogonality")
        if not self.isotropy < self.tol:
            out.append("principal isotropy")
        if not self.injectivity > self.tol:
            out.append("injectivity on K-perp")
        return out


def polar_sanity(scenario, sample_points, tol=1e-12):
    """Check that the section meets orbits orthogonally and K fixes the section."""
    spec = scenario.algebra
    K = list(spec.subalgebra_K)
    rest = [a for a in range(spec.dim) if a not in K]
    eye = np.eye(spec.dim)
    ortho = iso = 0.0
    inj = np.inf
    for x in sample_points:
        x = scenario.coords(x)
        q = scenario.point(x)
        tang = scenario.tangents(x)
        perp = [killing_field(scenario, eye[a], q) for a in rest]
        for t in tang:
            for v in perp:
                ortho = max(ortho, abs(scenario.metric(q, t, v)))
        for k in K:
            v = killing_field(scenario, eye[k], q)
            iso = max(iso, np.sqrt(abs(scenario.metric(q, v, v))))
        gram = np.array([[scenario.metric(q, u, v) for v in perp] for u in perp])
        if gram.size:
            inj = min(inj, np.linalg.svd(gram, compute_uv=False).min())
    return PolarSanityReport(ortho, iso, inj, tol)


# ---------------------------------------------------------------------------
# catalog


def _diag_stack(d):
    """Diagonal matrices from the last axis of d."""
    out = np.zeros(d.shape + (d.shape[-1],), dtype=d.dtype)
    idx = np.arange(d.shape[-1])
    out[..., idx, idx] = d
    return out


def _u1_plane():
    spec = lie.algebra("u1")
    return Scenario(
        "u1-plane", "euclidean", "U(1)", "linear_rotation", spec, np.eye(2), 1,
        walls=(((1.0,), np.inf),), box=((0.0, np.inf),),
        chart=lambda x: np.stack([x[..., 0], np.zeros_like(x[..., 0])], -1),
        chart_tangents=lambda x: [np.array([1.0, 0.0])],
        closed_forms={
            "delta": lambda x: x[0],
            "v_eff": lambda x: -1.0 / (4 * x[0] ** 2),
        })


def _so3_space():
    spec = lie.algebra("so3")
    return Scenario(
        "so3-space", "euclidean", "SO(3)", "linear_rotation", spec, np.eye(3), 1,
        walls=(((1.0,), np.inf),), box=((0.0, np.inf),),
        chart=lambda x: np.stack([np.zeros_like(x[..., 0]), np.zeros_like(x[..., 0]), x[..., 0]], -1),
        chart_tangents=lambda x: [np.array([0.0, 0.0, 1.0])],
        closed_forms={
            "delta": lambda x: x[0] ** 2,
            "v_eff": lambda x: 0.0,
        })


def _su2_conj():
    spec = lie.algebra("su2")
    X3 = spec.matrices[2]

    def chart(x):
        return _diag_stack(np.stack([np.exp(-0.5j * x[..., 0]), np.exp(0.5j * x[..., 0])], -1))

    return Scenario(
        "su2-conj", "group", "SU(2)", "conjugation", spec, spec.invariant_form.copy(), 1,
        walls=(((1.0,), 2 * np.pi),), box=((0.0, 2 * np.pi),),
        chart=chart,
        chart_tangents=lambda x: [X3 @ chart(x)],
        closed_forms={
            "delta": lambda x: 4 * np.sin(x[0] / 2) ** 2,
            "v_eff": lambda x: -0.25,
        })


SQRT3 = np.sqrt(3.0)
# positive roots of su(3) on the Cartan coordinates (x1 X3 + x2 X8)
SU3_ROOTS = np.array([[1.0, 0.0], [0.5, SQRT3 / 2], [-0.5, SQRT3 / 2]])


def _su3_conj():
    spec = lie.algebra("su3")
    X3, X8 = spec.matrices[2], spec.matrices[7]

    def chart(x):
        theta = 0.5 * np.stack([x[..., 0] + x[..., 1] / SQRT3, -x[..., 0] + x[..., 1] / SQRT3,
                                -2 * x[..., 1] / SQRT3], -1)
        return _diag_stack(np.exp(-1j * theta))

    # fundamental alcove: alpha_12 > 0, alpha_23 > 0, alpha_13 < 2 pi
    walls = ((tuple(SU3_ROOTS[0]), np.inf), (tuple(SU3_ROOTS[2]), np.inf), (tuple(SU3_ROOTS[1]), 2 * np.pi))

    def delta(x):
        return float(np.prod(4 * np.sin(SU3_ROOTS @ x / 2) ** 2))

    return Scenario(
        "su3-conj", "group", "SU(3)", "conjugation", spec, spec.invariant_form.copy(), 2,
        walls=walls, box=((0.0, 2 * np.pi), (0.0, 4 * np.pi / SQRT3)),
        chart=chart,
        chart_tangents=lambda x: [X3 @ chart(x), X8 @ chart(x)],
        closed_forms={"delta": delta})


_SCENARIOS = {
    "u1-plane": _u1_plane,
    "so3-space": _so3_space,
    "su2-conj": _su2_conj,
    "su3-conj": _su3_conj,
}

SCENARIO_IDS = tuple(_SCENARIOS)
SCENARIO_ALGEBRA = {"u1-plane": "u1", "so3-space": "so3", "su2-conj": "su2", "su3-conj": "su3"}


def scenario(scenario_id):
    try:
        return _SCENARIOS[scenario_id]()
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}; known: {list(_SCENARIOS)}") from None


def representation_for(scenario_or_id, label):
    sid = scenario_or_id if isinstance(scenario_or_id, str) else scenario_or_id.id
    return lie.representation(SCENARIO_ALGEBRA[sid], label)


# ---------------------------------------------------------------------------
# building blocks with exact ambient Laplacians


@dataclass(frozen=True)
class BuildingBlock:
    """A V-valued function on Y together with its exact Laplace-Beltrami image."""
    id: str
    value: Callable
    laplacian: Callable
    dim_V: int = 1
    equivariant: bool = False


def intertwiner(source, target):
    """Linear map Phi: End(V_source) -> V_target with Phi(ad_source(X) A) = target'(X) Phi(A).

    Returned as a (dim V_target, dim V_source**2) matrix acting on row-major vec(A);
    the first null vector is used when the multiplicity exceeds one.
    """
    n = source.dim_V
    m = target.dim_V
    I_n = np.eye(n)
    I_m = np.eye(m)
    rows = []
    for Rs, Rt in zip(source.generators, target.generators):
        M = np.kron(Rs, I_n) - np.kron(I_n, Rs.T)  # vec(RA - AR)
        # Phi M - Rt Phi = 0, vec row-major in Phi
        rows.append(np.kron(I_m, M.T) - np.kron(Rt, np.eye(n * n)))
    A = np.concatenate(rows, axis=0)
    _, s, vh = np.linalg.svd(A)
    null = vh[-1].conj()
    if s[-1] > 1e-8 * max(1.0, s[0]):
        raise ValueError(f"{target.label} does not occur in End({source.label})")
    return null.reshape(m, n * n) / np.linalg.norm(null) * np.sqrt(m)


def building_block(scen, test_function_id, rep=None):
    """Test function from the fixed family, with its ambient Laplacian in closed form.

    Euclidean: ``const``, ``gaussian``, ``equivariant-gaussian`` (needs ``rep``).
    Group manifolds: ``const``, ``character:<label>``, ``matrix:<label>`` (needs ``rep``);
    ``<label>`` names an irreducible representation of the same algebra.
    """
    tid = test_function_id
    if tid == "const":
        return BuildingBlock(tid, lambda y: np.ones(1, dtype=complex), lambda y: np.zeros(1, dtype=complex),
                             1, rep is None or rep.label == "trivial")
    if scen.manifold == "euclidean":
        n = 2 if scen.id == "u1-plane" else 3
        if tid == "gaussian":
            def value(y):
                return np.array([np.exp(-np.dot(y, y))], dtype=complex)

            def lap(y):
                r2 = np.dot(y, y)
                return np.array([(4 * r2 - 2 * n) * np.exp(-r2)], dtype=complex)
            return BuildingBlock(tid, value, lap, 1, rep is None or rep.label == "trivial")
        if tid == "equivariant-gaussian":
            if rep is None:
                raise ValueError("equivariant-gaussian needs a representation")
            poly, degree = _harmonic_map(scen, rep)

            def value(y):
                return poly(y) * np.exp(-np.dot(y, y))

            def lap(y):
                # harmonic homogeneous P: Lap(P e^{-r^2}) = (4 r^2 - 2n - 4 deg) P e^{-r^2}
                r2 = np.dot(y, y)
                return (4 * r2 - 2 * n - 4 * degree) * value(y)
            return BuildingBlock(tid, value, lap, rep.dim_V, True)
    else:
        kind, _, label = tid.partition(":")
        if kind in ("character", "matrix"):
            metric = scen.metric_spec()
            pi = lie.representation(scen.algebra.name, label)
            c = lie.casimir(pi, metric)[1]
            if kind == "character":
                def value(g):
                    return np.array([np.trace(pi.from_matrix(g))])
                return BuildingBlock(tid, value, lambda g: c * value(g), 1, rep is None or rep.label == "trivial")
            if rep is None:
                raise ValueError("matrix building blocks need a representation")
            Phi = intertwiner(pi, rep)

            def value(g):
                return Phi @ pi.from_matrix(g).reshape(-1)
            return BuildingBlock(tid, value, lambda g: c * value(g), rep.dim_V, True)
    raise KeyError(f"unknown test function {tid!r} for scenario {scen.id}")


def _harmonic_map(scen, rep):
    """Equivariant harmonic homogeneous polynomial map P: R^n -> V and its degree."""
    if scen.id == "u1-plane":
        m = int(round((rep.generators[0, 0, 0] / 1j).real))
        sign = 1j if m >= 0 else -1j

        def poly(y):
            return np.array([(y[0] + sign * y[1]) ** abs(m)], dtype=complex)
        return poly, abs(m)
    if scen.id == "so3-space":
        ell = (rep.dim_V - 1) // 2
        v0 = np.zeros(rep.dim_V, dtype=complex)
        v0[ell] = 1.0  # weight-zero vector in the ladder basis

        def poly(y):
            r = np.linalg.norm(y)
            if r == 0.0:
                return v0 * (1.0 if ell == 0 else 0.0)
            theta = np.arccos(np.clip(y[2] / r, -1, 1))
            phi = np.arctan2(y[1], y[0])
            return r ** ell * (rep.evaluate(np.array([phi, theta, 0.0])) @ v0)
        return poly, ell
    raise KeyError(scen.id)


def ambient_laplacian_oracle(scen, test_function_id, y, rep=None):
    """Exact Laplace-Beltrami value (div grad) of a catalog test function at y."""
    return building_block(scen, test_function_id, rep).laplacian(y)
