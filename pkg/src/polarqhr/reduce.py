"""Assembly of the reduced operator on a grid over the section.

    Delta_red = Delta_section - delta^{-1/2} Delta_section(delta^{1/2}) + b^{ab} rho'(T_a) rho'(T_b)

acting on V^K-valued grid functions, with Dirichlet closure at the grid ends.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import geometry, lie
from .equivariant import ScenarioInconsistencyError, invariant_vectors, spin_coupling


STEP_FRACTION = 0.06


class UnsupportedConfigError(ValueError):
    pass


class UnusablePairError(ScenarioInconsistencyError):
    """dim V^K = 0: the representation has no K-invariant vectors."""


# ---------------------------------------------------------------------------
# effective potential


_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
_WEIGHTS = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_LEVELS = 3  # steps s, s/2, s/4


def _richardson(table):
    """Combine fourth-order estimates at s, s/2, s/4 (last axis) into one value."""
    table = [table[..., k] for k in range(table.shape[-1])]
    p = 4
    while len(table) > 1:
        fac = 2.0 ** p
        table = [(fac * table[k + 1] - table[k]) / (fac - 1) for k in range(len(table) - 1)]
        p += 2
    return table[0]


def _directions(hinv):
    """Unit directions and Laplacian weights: sum_dir w_dir d^2/du^2 = h^{ij} d_i d_j."""
    d = hinv.shape[0]
    eye = np.eye(d)
    dirs, wts = [], []
    for i in range(d):
        dirs.append(eye[i])
        wts.append(hinv[i, i])
        for j in range(i + 1, d):
            if abs(hinv[i, j]) > 0:
                # d_i d_j = (d_{+}^2 - d_{-}^2)/2 along (e_i +- e_j)/sqrt 2
                dirs += [(eye[i] + eye[j]) / np.sqrt(2), (eye[i] - eye[j]) / np.sqrt(2)]
                wts += [hinv[i, j], -hinv[i, j]]
    return np.array(dirs), np.array(wts)


def effective_potentials(scenario, X, dual=None, delta_scale=1.0, step=None):
    """delta^{-1/2} Delta_section(delta^{1/2}) at each row of X, from numerical derivatives of delta.

    Fourth-order central differences at steps s, s/2, s/4 are combined by
    Richardson extrapolation.  The step is tied to the distance from the
    singular boundary so the stencil (reach 2s) stays inside the open section.
    """
    dual = dual if dual is not None else lie.dual_bases(scenario.algebra)
    X = np.asarray(X, dtype=float).reshape(-1, scenario.section_dim)
    dist = scenario.distances(X)
    if not np.all(dist > 0):
        bad = X[np.argmin(dist)]
        raise geometry.SectionBoundaryError(f"x = {bad} is not interior to the section of {scenario.id}")
    s = np.full(len(X), float(step)) if step is not None else np.minimum(STEP_FRACTION * dist, 0.05)
    if np.any(2 * s >= dist) or np.any(s < 1e-7):
        bad = X[np.argmin(dist - 2 * s)]
        raise geometry.SectionBoundaryError(f"x = {bad} is too close to the boundary for the stencil")

    hinv = np.linalg.inv(geometry.section_metric(scenario, X[len(X) // 2]))
    dirs, wts = _directions(hinv)
    steps = s[:, None] / 2.0 ** np.arange(_LEVELS)                       # (n, L)
    disp = steps[:, None, :, None, None] * _OFFSETS[None, None, None, :, None] * dirs[None, :, None, None, :]
    pts = X[:, None, None, None, :] + disp                                 # (n, dirs, L, 5, dim)
    dens = delta_scale * geometry.densities(scenario, dual, pts.reshape(-1, X.shape[1]))
    dens = dens.reshape(pts.shape[:-1])
    # normalized at x: the constant C in delta = C |det b|^{1/2} drops out before differencing
    f = np.sqrt(dens / dens[..., 2:3])
    d2 = np.einsum("ndlk,k->ndl", f, _WEIGHTS) / steps[:, None, :] ** 2
    return _richardson(d2) @ wts


def effective_potential(scenario, x, dual=None, delta_scale=1.0, step=None):
    """Scalar version of :func:`effective_potentials` at one section point."""
    x = scenario.coords(x)
    return float(effective_potentials(scenario, x[None], dual, delta_scale, step)[0])


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridConfig:
    """Uniform grid of N interior nodes per section coordinate.

    One-dimensional: nodes x_min + i h, i = 1..N, h = (x_max - x_min)/(N + 1).
    Two-dimensional sections use the scenario's bounding box (or ``bounds``) in
    both coordinates and keep the nodes strictly inside the section.
    """
    x_min: float = None
    x_max: float = None
    N: int = 200
    order: int = 2
    bounds: Optional[tuple] = None
    nodes: Optional[np.ndarray] = field(default=None, compare=False)

    def axes(self, scenario):
        if self.order not in (2, 4):
            raise UnsupportedConfigError(f"stencil order {self.order} not in (2, 4)")
        if self.nodes is not None:
            nodes = np.asarray(self.nodes, dtype=float)
            steps = np.diff(nodes)
            if np.any(steps <= 0):
                raise UnsupportedConfigError("grid nodes must be strictly increasing")
            if np.ptp(steps) > 1e-12 * steps.mean():
                raise UnsupportedConfigError("non-uniform grids are not supported")
            return [nodes]
        if scenario.section_dim == 1:
            lo, hi = self.x_min, self.x_max
            if lo is None or hi is None:
                lo, hi = scenario.box[0]
            if not np.isfinite(hi):
                raise UnsupportedConfigError(f"{scenario.id} needs a finite truncation x_max")
            box = [(lo, hi)]
        else:
            box = list(self.bounds) if self.bounds is not None else list(scenario.box)
        out = []
        for lo, hi in box:
            if not lo < hi:
                raise UnsupportedConfigError("empty grid interval")
            h = (hi - lo) / (self.N + 1)
            out.append(lo + h * np.arange(1, self.N + 1))
        return out


# ---------------------------------------------------------------------------
# reduced operator


@dataclass
class ReducedOperator:
    scenario_id: str
    rep_label: str
    grid: list                 # axes of the tensor grid
    points: np.ndarray         # (n_nodes, section_dim) retained nodes
    spacing: tuple
    h_metric: np.ndarray
    v_eff: np.ndarray
    delta: np.ndarray
    spin: np.ndarray           # (n_nodes, d, d)
    matrix: sp.csr_matrix      # (n_nodes d) x (n_nodes d), Hermitian
    order: int = 2
    bc: str = "dirichlet"
    vk_basis: np.ndarray = None

    @property
    def d(self):
        return self.spin.shape[1]

    @property
    def n_nodes(self):
        return len(self.points)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    def dense(self):
        return self.matrix.toarray()

    def potential(self):
        """Pointwise potential -v_eff + S(x) as (n_nodes, d, d)."""
        return -self.v_eff[:, None, None] * np.eye(self.d) + self.spin

    def bandwidth(self):
        A = self.matrix.tocoo()
        return int(np.max(np.abs(A.row - A.col), initial=0))

    def banded(self):
        """Lower banded layout (LAPACK convention) for one-dimensional sections."""
        u = self.bandwidth()
        A = self.matrix.tocsr()
        n = A.shape[0]
        ab = np.zeros((u + 1, n), dtype=A.dtype)
        for k in range(u + 1):
            ab[k, : n - k] = A.diagonal(-k)
        return ab

    def is_hermitian(self):
        diff = self.matrix - self.matrix.conj().T
        return diff.count_nonzero() == 0 or np.max(np.abs(diff.data), initial=0.0) == 0.0


def _second_difference(n, h, order):
    if order == 2:
        main = np.full(n, -2.0)
        off = np.ones(n - 1)
        D = sp.diags([off, main, off], [-1, 0, 1])
        return (D / (h * h)).tocsr()
    if n < 3:
        raise UnsupportedConfigError("fourth-order stencil needs at least 3 nodes")
    main = np.full(n, -30.0)
    # odd reflection across the Dirichlet wall: ghost u_{-1} = -u_1
    main[0] = main[-1] = -29.0
    off1 = np.full(n - 1, 16.0)
    off2 = np.full(n - 2, -1.0)
    D = sp.diags([off2, off1, main, off1, off2], [-2, -1, 0, 1, 2])
    return (D / (12 * h * h)).tocsr()


def assemble(scenario, rep, grid_config, bc="dirichlet", inv=None):
    """Reduced operator D2 (x) Id_d - diag(v_eff) (x) Id_d + blockdiag(S(x_i))."""
    if bc != "dirichlet":
        raise UnsupportedConfigError(f"boundary condition {bc!r} not supported")
    spec = scenario.algebra
    inv = inv if inv is not None else invariant_vectors(rep, spec)
    if not inv.usable:
        raise UnusablePairError("dim V^K = 0")
    dual = lie.dual_bases(spec)
    axes = grid_config.axes(scenario)
    order = grid_config.order
    if scenario.section_dim == 1:
        pts = axes[0][:, None]
        keep = np.arange(len(pts))
        for x in pts:
            if not scenario.contains(x):
                raise geometry.SectionBoundaryError(f"grid node {x[0]} outside the section of {scenario.id}")
    else:
        mesh = np.meshgrid(*axes, indexing="ij")
        allpts = np.stack([m.reshape(-1) for m in mesh], -1)
        spacing0 = min(a[1] - a[0] for a in axes)
        dist = scenario.distances(allpts)
        keep = np.nonzero(dist > 1e-6 * spacing0)[0]
        pts = allpts[keep]
    spacing = tuple(float(a[1] - a[0]) for a in axes)
    h_metric = geometry.section_metric(scenario, pts[len(pts) // 2])
    d = inv.dim_VK

    n = len(pts)
    _, b_up, dens = geometry.inertia_batch(scenario, dual, pts)
    v = effective_potentials(scenario, pts, dual)
    S = np.empty((n, d, d), dtype=complex)
    for i, x in enumerate(pts):
        sample = geometry.InertiaSample(x, None, b_up[i], float(dens[i]))
        S[i] = spin_coupling(rep, inv, sample, dual)

    # kinetic part
    hinv = np.linalg.inv(h_metric)
    if scenario.section_dim == 1:
        L = hinv[0, 0] * _second_difference(n, spacing[0], order)
    else:
        if np.max(np.abs(hinv - np.diag(np.diag(hinv)))) > 1e-12:
            raise UnsupportedConfigError("non-diagonal section metric on a tensor grid")
        sizes = [len(a) for a in axes]
        full = None
        for k, ax in enumerate(axes):
            ops = [sp.identity(m, format="csr") for m in sizes]
            ops[k] = hinv[k, k] * _second_difference(sizes[k], spacing[k], order)
            term = ops[0]
            for o in ops[1:]:
                term = sp.kron(term, o, format="csr")
            full = term if full is None else full + term
        L = full[keep][:, keep]
    L = L.tocsr()

    if np.max(np.abs(S.imag), initial=0.0) == 0.0:
        S = S.real
    blocks = sp.block_diag([S[i] for i in range(n)], format="csr") if d > 1 else sp.diags(S[:, 0, 0])
    M = sp.kron(L, sp.identity(d), format="csr") - sp.kron(sp.diags(v), sp.identity(d), format="csr") + blocks
    M = M.tocsr()
    # exact Hermitian: average with the adjoint (entries already agree up to rounding of S)
    M = ((M + M.conj().T) * 0.5).tocsr()
    M.sum_duplicates()
    M.eliminate_zeros()
    return ReducedOperator(scenario.id, rep.label, axes, pts, spacing, h_metric, v, dens, S, M,
                           order, bc, inv.basis)


# ---------------------------------------------------------------------------
# unitary transfer check


@dataclass
class TransferReport:
    residual: float       # max-norm over nodes beyond the margin
    scale: float          # max-norm of the expected values
    n_nodes: int
    margin: float

    @property
    def relative(self):
        return self.residual / self.scale if self.scale else self.residual


def transfer_samples(op, scenario, rep, block_id):
    """Grid samples of f = delta^{1/2} F|_section and of delta^{1/2} (Delta_Y F)|_section in V^K."""
    block = geometry.building_block(scenario, block_id, rep)
    basis = op.vk_basis
    f = np.empty((op.n_nodes, op.d), dtype=complex)
    g = np.empty_like(f)
    for i, x in enumerate(op.points):
        q = scenario.point(x)
        r = np.sqrt(op.delta[i])
        f[i] = r * (basis.conj().T @ block.value(q))
        g[i] = r * (basis.conj().T @ block.laplacian(q))
    return f, g


def unitary_transfer_check(scenario, rep, block_id, grid_config, margin=0.0, op=None):
    """Compare Delta_red (delta^{1/2} F) with delta^{1/2} Delta_Y F on the grid.

    Nodes closer than ``margin`` to the singular boundary are left out of the
    max-norm (needed only where F|_section is not smooth at the boundary).
    """
    op = op if op is not None else assemble(scenario, rep, grid_config)
    f, g = transfer_samples(op, scenario, rep, block_id)
    lhs = (op.matrix @ f.reshape(-1)).reshape(f.shape)
    dist = scenario.distances(op.points)
    sel = dist > margin
    res = float(np.max(np.abs(lhs - g)[sel], initial=0.0))
    scale = float(np.max(np.abs(g)[sel], initial=0.0))
    return TransferReport(res, scale, int(sel.sum()), margin)
