"""Invariant suites behind ``verify``: one list of named checks per catalog scenario.

Every check records a residual, the tolerance it is held to and its wall time.
Checks are deterministic; random draws come from a generator seeded per scenario.
"""
import logging
import time
from dataclasses import dataclass, replace

import numpy as np

from . import equivariant as eq
from . import geometry, lie, reduce, spectral

log = logging.getLogger("polarqhr.verify")


@dataclass
class Check:
    scenario: str
    name: str
    residual: float
    tol: float
    passed: bool
    kind: str = "max"        # "max": residual < tol; "min": residual >= tol
    detail: str = ""
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        rel = "<" if self.kind == "max" else ">="
        text = f"[{status}] {self.scenario:<10} {self.name:<34} {self.residual:.3e} {rel} {self.tol:.1e}"
        return text + (f"  ({self.detail})" if self.detail else "")


def _check(scen_id, name, residual, tol, kind="max", detail=""):
    residual = float(residual)
    ok = residual < tol if kind == "max" else residual >= tol
    if not np.isfinite(residual):
        ok = False
    return Check(scen_id, name, residual, tol, bool(ok), kind, detail)


# ---------------------------------------------------------------------------
# per-scenario settings


SETTINGS = {
    "u1-plane": dict(rep="charge:2", quad_order=16, R=20.0, N=4000, transfer_R=8.0, transfer_margin=1.0,
                     transfer_blocks=[("charge:1", "equivariant-gaussian"), ("charge:2", "equivariant-gaussian")],
                     potential_reps=["charge:0", "charge:1", "charge:2", "charge:3"]),
    "so3-space": dict(rep="spin:1", quad_order=8, R=20.0, N=4000, transfer_R=8.0, transfer_margin=0.0,
                      transfer_blocks=[("spin:0", "equivariant-gaussian"), ("spin:1", "equivariant-gaussian"),
                                       ("spin:2", "equivariant-gaussian")],
                      spectra=["spin:0", "spin:1", "spin:2"]),
    "su2-conj": dict(rep="spin:1", quad_order=12, N=4000, transfer_margin=0.0,
                     transfer_blocks=[("trivial", "character:spin:1"), ("spin:1", "matrix:spin:1"),
                                      ("spin:1", "matrix:spin:2")],
                     irreps=["spin:1/2", "spin:1"], spectra=["trivial", "spin:1"]),
    "su3-conj": dict(rep="adjoint", quad_order=3, N=40, irreps=["defining", "adjoint"]),
}

TRANSFER_N = (500, 1000, 2000)


def _interior_points(scen, n):
    """n deterministic interior section points, away from the walls."""
    if scen.section_dim == 1:
        lo, hi = scen.box[0]
        hi = hi if np.isfinite(hi) else 4.0
        return np.linspace(lo, hi, n + 2)[1:-1, None]
    # su3 alcove: barycentric combinations of the vertices
    verts = np.array([[0.0, 0.0], [2 * np.pi, 2 * np.pi / np.sqrt(3.0)], [0.0, 4 * np.pi / np.sqrt(3.0)]])
    rng = np.random.default_rng(7)
    w = rng.dirichlet(np.ones(3) * 3, size=n)
    return w @ verts


# ---------------------------------------------------------------------------
# checks


def check_algebra(scen):
    rep = lie.validate_algebra(scen.algebra)
    worst = max(rep.residuals.values())
    return [_check(scen.id, "algebra identities", worst, rep.tol, detail=", ".join(rep.failures()))]


def check_dual_bases(scen):
    spec = scen.algebra
    dual = lie.dual_bases(spec)
    B = spec.invariant_form
    pair = np.max(np.abs(dual.T_lower.T @ B @ dual.T_upper - np.eye(dual.dim)))
    K = np.eye(spec.dim)[:, list(spec.subalgebra_K)]
    perp = np.max(np.abs(K.T @ B @ dual.T_upper), initial=0.0)
    return [_check(scen.id, "dual-basis pairing", max(pair, perp), 1e-12)]


def check_polar(scen, pts):
    rep = geometry.polar_sanity(scen, pts)
    worst = max(rep.orthogonality, rep.isotropy)
    out = [_check(scen.id, "polar sanity", worst, rep.tol, detail=", ".join(rep.failures()))]
    out.append(_check(scen.id, "orbit injectivity on K-perp", rep.injectivity, rep.tol, kind="min"))
    return out


def check_killing_order(scen, pts):
    spec = scen.algebra
    worst = np.inf
    for x in pts[:3]:
        q = scen.point(x)
        for a in range(spec.dim):
            xi = np.eye(spec.dim)[a]
            exact = geometry.killing_field(scen, xi, q)
            if np.max(np.abs(exact)) < 1e-12:
                continue
            e1 = np.max(np.abs(geometry.killing_field_fd(scen, xi, q, 1e-2) - exact))
            e2 = np.max(np.abs(geometry.killing_field_fd(scen, xi, q, 5e-3) - exact))
            worst = min(worst, np.log2(e1 / e2))
    return [_check(scen.id, "killing field FD order", worst, 1.9, kind="min")]


def check_inertia(scen, pts):
    dual = lie.dual_bases(scen.algebra)
    worst_inv = worst_id = 0.0
    for x in pts:
        s = geometry.inertia_matrices(scen, dual, x)
        worst_inv = max(worst_inv, np.max(np.abs(s.b_upper - s.b_upper_inverse)) / np.max(np.abs(s.b_upper)))
        worst_id = max(worst_id, np.max(np.abs(s.b_upper @ s.b_lower - np.eye(dual.dim))))
    return [_check(scen.id, "b^ab b_bc = identity", worst_id, 1e-10),
            _check(scen.id, "b-inverse definitions agree", worst_inv, 1e-10)]


def check_effective_potential(scen, pts):
    dual = lie.dual_bases(scen.algebra)
    out = []
    v = reduce.effective_potentials(scen, pts, dual)
    v2 = reduce.effective_potentials(scen, pts, dual, delta_scale=2.0)
    out.append(_check(scen.id, "v_eff invariant under delta -> 2 delta", np.max(np.abs(v - v2)), 1e-11))
    ref = scen.closed_forms.get("v_eff")
    if ref is not None:
        err = np.max(np.abs(v - np.array([ref(x) for x in pts])))
        out.append(_check(scen.id, "v_eff vs closed form", err, 1e-8))
    return out


def check_potential_on_grid(scen, labels, R, N):
    """Assembled -v_eff + S against -(4 m^2 - 1)/(4 r^2) at nodes beyond 10 h."""
    worst = 0.0
    for label in labels:
        rep = geometry.representation_for(scen, label)
        op = reduce.assemble(scen, rep, reduce.GridConfig(0.0, R, N))
        m = int(label.split(":")[1])
        r = op.points[:, 0]
        sel = r > 10 * op.spacing[0]
        ref = -(4 * m * m - 1) / (4 * r[sel] ** 2)
        worst = max(worst, np.max(np.abs(op.potential()[sel, 0, 0].real - ref)))
    return [_check(scen.id, "assembled potential vs separation", worst, 1e-8)]


def check_invariant_subspace(scen, rep):
    inv = eq.invariant_vectors(rep, scen.algebra)
    P = inv.projector
    idem = np.max(np.abs(P @ P - P))
    herm = np.max(np.abs(P - P.conj().T))
    kill = max((np.max(np.abs(rep.generators[k] @ inv.basis), initial=0.0) for k in scen.algebra.subalgebra_K),
               default=0.0)
    return [_check(scen.id, "projector onto V^K", max(idem, herm, kill), 1e-12, detail=f"dim V^K = {inv.dim_VK}")]


def _samples(scen, rep, rng, n, settings):
    if scen.manifold == "euclidean":
        dim_Y = 2 if scen.id == "u1-plane" else 3
        return [eq.polynomial_gaussian_sample(rng, dim_Y, rep.dim_V, 2) for _ in range(n)]
    return [eq.matrix_element_sample(rng, scen.algebra.name, settings["irreps"], rep.dim_V) for _ in range(n)]


def _manifold_points(scen, rng, n):
    if scen.manifold == "euclidean":
        dim_Y = 2 if scen.id == "u1-plane" else 3
        return 0.7 * rng.normal(size=(n, dim_Y))
    grp = scen.group
    return grp.matrix(grp.random_params(rng, n))


def _equivariant_block(scen, rep):
    if scen.manifold == "euclidean":
        return geometry.building_block(scen, "equivariant-gaussian", rep)
    return geometry.building_block(scen, f"matrix:{rep.label}", rep)


def check_projector(scen, rep, settings, rng, n_samples=20):
    quad = lie.haar_quadrature(scen.group_id, settings["quad_order"])
    nodes = eq.group_nodes(scen, rep, quad)
    samples = _samples(scen, rep, rng, n_samples, settings)
    n_y = 2 if scen.id == "su3-conj" else 3
    Y = _manifold_points(scen, rng, n_y)
    params = scen.group.random_params(rng, 3)
    out = []
    if scen.manifold == "group":
        # P acts linearly on matrix-element coefficients, so P(PF) costs as little as PF
        idem = consistency = 0.0
        for F in samples[:2]:
            PF = F.averaged(scen, rep, quad, nodes)
            PPF = PF.averaged(scen, rep, quad, nodes)
            idem = max(idem, max(np.max(np.abs(a - b)) for a, b in zip(PF.coefs, PPF.coefs)))
            consistency = max(consistency, np.max(np.abs(PF(Y) - eq.project(scen, rep, quad, F, Y, nodes))))
        out.append(_check(scen.id, "averaging idempotent (coefficients)", idem, 2e-9))
        out.append(_check(scen.id, "coefficient vs nodal averaging", consistency, 1e-9))
    else:
        F = samples[0]

        def PF(ys):
            return eq.project(scen, rep, quad, F, ys, nodes)
        once = PF(Y)
        twice = eq.project(scen, rep, quad, PF, Y, nodes)
        out.append(_check(scen.id, "averaging idempotent", np.max(np.abs(twice - once)), 2e-9))
    block = _equivariant_block(scen, rep)

    def Fb(ys):
        return np.array([block.value(y) for y in ys])
    fixed = np.max(np.abs(eq.project(scen, rep, quad, Fb, Y, nodes) - Fb(Y)))
    out.append(_check(scen.id, "averaging fixes equivariant F", fixed, 1e-9))
    t = time.perf_counter()
    comp = eq.compatibility_check(scen, rep, quad, samples, Y, params, quad_tol=1e-9)
    c = _check(scen.id, f"compatibility ({comp.n_samples} samples)", comp.max_defect, 1e-8,
               detail=f"input defect {comp.max_input_defect:.2e}")
    c.seconds = time.perf_counter() - t
    out.append(c)
    return out


def check_projector_symmetry(scen, rep, settings, rng):
    """<PF, F'> = <F, PF'> by spatial quadrature (Euclidean box rule or the Haar rule)."""
    quad = lie.haar_quadrature(scen.group_id, settings["quad_order"])
    nodes = eq.group_nodes(scen, rep, quad)
    F, G = _samples(scen, rep, rng, 2, settings)

    if scen.manifold == "group":
        PF, PG = F.averaged(scen, rep, quad, nodes), G.averaged(scen, rep, quad, nodes)
        lhs, rhs = PF.inner(G), F.inner(PG)
    else:
        def PF(ys):
            return eq.project(scen, rep, quad, F, ys, nodes)

        def PG(ys):
            return eq.project(scen, rep, quad, G, ys, nodes)
        n_nodes = 16 if scen.id == "so3-space" else 32
        lhs = eq.inner_product(scen, PF, G, quad, n_nodes=n_nodes)
        rhs = eq.inner_product(scen, F, PG, quad, n_nodes=n_nodes)
    return [_check(scen.id, "averaging symmetric in L2", abs(lhs - rhs) / max(1.0, abs(lhs)), 1e-6)]


def check_spin(scen, rep, pts):
    spec = scen.algebra
    inv = eq.invariant_vectors(rep, spec)
    dual = lie.dual_bases(spec)
    spec3 = spec.rescaled(3.0)
    scen3 = scen.with_algebra(spec3)
    dual3 = lie.dual_bases(spec3)
    herm = comm = resc = 0.0
    R = np.array([rep.generator(dual.T_lower[:, a]) for a in range(dual.dim)])
    P = inv.projector
    for x in pts:
        sample = geometry.inertia_matrices(scen, dual, x)
        S = eq.spin_coupling(rep, inv, sample, dual)
        full = np.einsum("ab,aij,bjk->ik", sample.b_upper, R, R)
        herm = max(herm, np.max(np.abs(S - S.conj().T)))
        comm = max(comm, np.linalg.norm(full @ P - P @ full, 2) / max(1.0, np.linalg.norm(full, 2)))
        S3 = eq.spin_coupling(rep, inv, geometry.inertia_matrices(scen3, dual3, x), dual3)
        resc = max(resc, np.max(np.abs(S3 - S)) / max(1.0, np.max(np.abs(S))))
    return [_check(scen.id, "spin term Hermitian", herm, 1e-12),
            _check(scen.id, "spin term commutes with projector", comm, 1e-10),
            _check(scen.id, "spin term invariant under B -> 3B", resc, 1e-12)]


def _grid(scen, settings, N=None, order=2, R=None):
    N = N if N is not None else settings["N"]
    if scen.section_dim == 2:
        return reduce.GridConfig(N=N, order=order)
    hi = scen.box[0][1]
    hi = hi if np.isfinite(hi) else (R if R is not None else settings["R"])
    return reduce.GridConfig(0.0, hi, N, order)


def check_operator(scen, rep, settings):
    """Hermiticity, eigen-residuals and B -> 3B invariance of the spectrum."""
    grid = _grid(scen, settings)
    op = reduce.assemble(scen, rep, grid)
    diff = op.matrix - op.matrix.conj().T
    herm = float(np.max(np.abs(diff.data), initial=0.0))
    rep_s = spectral.eigen_spectrum(op, 6, check=False)
    op3 = reduce.assemble(scen.with_algebra(scen.algebra.rescaled(3.0)), rep, grid)
    rep3 = spectral.eigen_spectrum(op3, 6, check=False)
    resc = np.max(np.abs(rep3.eigenvalues - rep_s.eigenvalues))
    out = [_check(scen.id, "assembled matrix Hermitian (exact)", herm, np.finfo(float).tiny, detail=f"n = {op.shape[0]}"),
           _check(scen.id, "eigen-residual / ||M||", rep_s.max_residual, spectral.RESIDUAL_TOL),
           _check(scen.id, "eigenvector orthonormality", rep_s.orthogonality, spectral.ORTHO_TOL),
           _check(scen.id, "spectrum invariant under B -> 3B", resc, 1e-10)]
    if scen.section_dim == 2:
        # general (non-symmetric) eigensolver on a small grid: imaginary parts must vanish
        small = reduce.assemble(scen, rep, replace(grid, N=16)).dense()
        lam = np.linalg.eigvals(small)
        imag = np.max(np.abs(lam.imag)) / np.max(np.abs(lam))
        out.append(_check(scen.id, "spectrum real (general solver)", imag, 1e-10,
                          detail=f"dim V^K = {op.d}, top eigenvalue {rep_s.eigenvalues[0]:.6f}"))
    return out


def check_transfer(scen, settings):
    out = []
    for label, block in settings.get("transfer_blocks", []):
        rep = geometry.representation_for(scen, label)
        res = []
        for N in TRANSFER_N:
            hi = scen.box[0][1] if np.isfinite(scen.box[0][1]) else settings["transfer_R"]
            tr = reduce.unitary_transfer_check(scen, rep, block, reduce.GridConfig(0.0, hi, N),
                                               margin=settings.get("transfer_margin", 0.0))
            res.append(tr.residual)
        h = [1.0 / (N + 1) for N in TRANSFER_N]
        order = min(np.log(res[0] / res[1]) / np.log(h[0] / h[1]), np.log(res[1] / res[2]) / np.log(h[1] / h[2]))
        out.append(_check(scen.id, f"transfer order {label} {block}", order, 1.9, kind="min",
                          detail=f"residual {res[-1]:.2e} at N = {TRANSFER_N[-1]}"))
    return out


def check_spectra(scen, settings):
    out = []
    if scen.id == "su2-conj":
        for label in settings["spectra"]:
            rep = geometry.representation_for(scen, label)
            op = reduce.assemble(scen, rep, _grid(scen, settings))
            k = 6 if label == "trivial" else 5
            report = spectral.eigen_spectrum(op, k)
            cmp = spectral.compare_oracle(report, spectral.closed_form_spectrum(scen.id, label, k), 1e-4, 1e-4)
            out.append(_check(scen.id, f"spectrum {label} vs Casimir", np.max(np.minimum(cmp.rel_err, cmp.abs_err)),
                              1e-4))
        # monotonicity in j of the lowest three modes
        tops = []
        for j in (1, 2, 3):
            rep = geometry.representation_for(scen, f"spin:{j}")
            op = reduce.assemble(scen, rep, _grid(scen, settings, N=1000))
            tops.append(spectral.eigen_spectrum(op, 3).eigenvalues)
        gap = min(np.min(tops[i] - tops[i + 1]) for i in range(2))
        out.append(_check(scen.id, "spin-j spectrum decreasing in j", gap, 1e-3, kind="min"))
    if scen.id == "so3-space":
        for label in settings["spectra"]:
            rep = geometry.representation_for(scen, label)
            dev = []
            for R, N in ((20.0, 4000), (40.0, 8001)):
                op = reduce.assemble(scen, rep, reduce.GridConfig(0.0, R, N, order=4))
                report = spectral.eigen_spectrum(op, 5)
                oracle = spectral.closed_form_spectrum(scen.id, label, 5, R)
                cmp = spectral.compare_oracle(report, oracle, 0.0, 1e-4)
                dev.append(report.eigenvalues - oracle)
                if R == 20.0:
                    out.append(_check(scen.id, f"spectrum {label} vs Bessel zeros", np.max(cmp.rel_err), 1e-4))
            out.append(_check(scen.id, f"R-doubling shift {label}", np.max(np.abs(dev[0] - dev[1])), 1e-6))
    if scen.id == "su3-conj":
        rep = geometry.representation_for(scen, settings["rep"])
        inv = eq.invariant_vectors(rep, scen.algebra)
        out.append(_check(scen.id, "dim V^K = 2", abs(inv.dim_VK - 2), 0.5))
    return out


# ---------------------------------------------------------------------------
# driver


def scenario_checks(scen, seed=0):
    settings = SETTINGS[scen.id]
    rng = np.random.default_rng(seed)
    rep = geometry.representation_for(scen, settings["rep"])
    pts = _interior_points(scen, 12)
    steps = [
        ("algebra", lambda: check_algebra(scen)),
        ("dual bases", lambda: check_dual_bases(scen)),
        ("polar sanity", lambda: check_polar(scen, pts)),
        ("killing fields", lambda: check_killing_order(scen, pts)),
        ("inertia", lambda: check_inertia(scen, pts)),
        ("effective potential", lambda: check_effective_potential(scen, pts)),
        ("invariant subspace", lambda: check_invariant_subspace(scen, rep)),
        ("spin term", lambda: check_spin(scen, rep, pts)),
        ("projector", lambda: check_projector(scen, rep, settings, rng)),
        ("projector symmetry", lambda: check_projector_symmetry(scen, rep, settings, rng)),
        ("operator", lambda: check_operator(scen, rep, settings)),
    ]
    if scen.id == "u1-plane":
        steps.append(("potential on grid",
                      lambda: check_potential_on_grid(scen, settings["potential_reps"], settings["R"], settings["N"])))
    steps.append(("transfer", lambda: check_transfer(scen, settings)))
    steps.append(("spectra", lambda: check_spectra(scen, settings)))
    for group, step in steps:
        t = time.perf_counter()
        try:
            checks = step()
        except Exception as exc:  # a crash inside a suite is a failed check, not an abort
            checks = [Check(scen.id, f"{group} (crashed)", np.nan, 0.0, False, detail=f"{type(exc).__name__}: {exc}")]
        dt = time.perf_counter() - t
        for c in checks:
            c.seconds = c.seconds or dt / max(len(checks), 1)
            log.info(c.line())
            yield c


def run(scenario_ids=None, seed=0):
    ids = list(scenario_ids) if scenario_ids else list(geometry.SCENARIO_IDS)
    out = []
    for sid in ids:
        scen = geometry.scenario(sid)
        out.extend(scenario_checks(scen, seed))
    return out
