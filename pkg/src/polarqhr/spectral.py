"""Eigenvalues of assembled reduced operators, convergence studies and closed-form oracles."""
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sl
import scipy.sparse.linalg as spl
from scipy import special

from . import reduce

DENSE_LIMIT = 4000
RESIDUAL_TOL = 1e-8
ORTHO_TOL = 1e-10


class NumericalFailure(RuntimeError):
    """An eigenpair failed its residual or orthogonality check, or the matrix is not Hermitian."""


@dataclass
class SpectrumReport:
    """Eigenpairs of a reduced operator.

    Eigenvalues are real and sorted descending in the div-grad sign convention,
    so the ground state comes first.  Eigenvectors are columns normalized in the
    discrete inner product sum_i |f_i|^2 (cell volume).
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray        # ||M v - lam v|| / ||M|| per pair (unit-norm v)
    matrix_norm: float
    method: str
    orthogonality: float = 0.0
    grid_config: object = None
    oracle_comparison: object = None
    convergence_table: object = None
    meta: dict = field(default_factory=dict)

    @property
    def max_residual(self):
        return float(np.max(self.residuals, initial=0.0))


def _matrix_norm(M):
    """Max absolute row sum (an upper bound for the 2-norm of a Hermitian matrix)."""
    return float(np.max(np.asarray(abs(M).sum(axis=1)).ravel(), initial=0.0))


def _gershgorin_upper(M):
    diag = np.real(M.diagonal())
    off = np.asarray(abs(M).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.max(diag + off))


def _inverse_iteration(M, lam, iters=3):
    """Eigenvectors of a banded Hermitian M for well-separated eigenvalues lam."""
    n = M.shape[0]
    u = int(np.max(np.abs(M.tocoo().row - M.tocoo().col)))
    full = np.zeros((2 * u + 1, n))
    for k in range(-u, u + 1):
        diag = M.diagonal(k)
        if k >= 0:
            full[u - k, k:] = diag
        else:
            full[u - k, : n + k] = diag
    rng = np.random.default_rng(0)
    vecs = np.empty((n, len(lam)))
    for j, mu in enumerate(lam):
        shifted = full.copy()
        shifted[u] -= mu + 1e-10 * max(1.0, abs(mu))
        v = rng.standard_normal(n)
        for _ in range(iters):
            v = sl.solve_banded((u, u), shifted, v)
            v /= np.linalg.norm(v)
        vecs[:, j] = v
    q, _ = np.linalg.qr(vecs)
    return q * np.sign(np.sum(q * vecs, axis=0))


def eigen_spectrum(op, k=6, check=True):
    """The k eigenvalues of largest value (lowest energy) of a reduced operator.

    One-dimensional scalar problems go through the banded LAPACK solver; small
    problems through a dense Hermitian solver; anything else through ARPACK in
    shift-invert mode about the Gershgorin upper bound.
    """
    if not op.is_hermitian():
        raise NumericalFailure("assembled matrix is not Hermitian")
    M = op.matrix
    n = M.shape[0]
    k = min(k, n)
    if len(op.grid) == 1 and np.isrealobj(M.data):
        ab = op.banded()
        if ab.shape[0] <= 2:
            lam, vec = sl.eig_banded(ab, lower=True, select="i", select_range=(n - k, n - 1))
        else:
            # LAPACK's banded vectors go through a dense tridiagonal reduction; use
            # values only and recover the vectors by inverse iteration
            lam = sl.eig_banded(ab, lower=True, select="i", select_range=(n - k, n - 1), eigvals_only=True)
            vec = _inverse_iteration(M, lam)
        method = "banded"
    elif n <= DENSE_LIMIT:
        lam, vec = sl.eigh(M.toarray(), subset_by_index=(n - k, n - 1))
        method = "dense"
    else:
        sigma = _gershgorin_upper(M) + 1.0
        lam, vec = spl.eigsh(M.tocsc(), k=k, sigma=sigma, which="LM", tol=1e-13)
        method = "shift-invert"
    order = np.argsort(-lam)
    lam, vec = np.real(lam[order]), vec[:, order]
    # normalize in the discrete L^2 inner product (cell volume weight)
    vec = vec / np.sqrt(op.cell_volume)
    norm = _matrix_norm(M)
    res = np.linalg.norm(M @ vec - vec * lam, axis=0) / max(norm, 1e-300) * np.sqrt(op.cell_volume)
    gram = op.cell_volume * (vec.conj().T @ vec)
    ortho = float(np.max(np.abs(gram - np.eye(len(lam))), initial=0.0))
    report = SpectrumReport(lam, vec, res, norm, method, ortho, meta={"n": n, "k": k})
    if check:
        if report.max_residual >= RESIDUAL_TOL:
            raise NumericalFailure(f"eigen-residual {report.max_residual:.3e} above {RESIDUAL_TOL}")
        if ortho > ORTHO_TOL:
            raise NumericalFailure(f"eigenvectors not orthonormal ({ortho:.3e})")
    return report


# ---------------------------------------------------------------------------
# convergence


@dataclass
class ConvergenceTable:
    N: list
    spacing: list
    eigenvalues: np.ndarray      # (len(N), k)
    orders: np.ndarray           # observed order per eigenvalue from the last three grids
    flagged: list                # indices whose order deviates from the stencil order by > 0.5
    stencil_order: int = 2

    def records(self):
        return [{"N": int(n), "h": float(h), "eigenvalues": [float(v) for v in row]}
                for n, h, row in zip(self.N, self.spacing, self.eigenvalues)]


def observed_order(values, spacing):
    """Order p from three successive approximations a(h1), a(h2), a(h3).

    Solves (a1 - a2)/(a2 - a3) = (h1^p - h2^p)/(h2^p - h3^p) for p by bisection,
    which stays exact for non-geometric refinements such as N -> 2N.
    """
    a1, a2, a3 = values
    h1, h2, h3 = spacing
    e1, e2 = a1 - a2, a2 - a3
    if e1 == 0 and e2 == 0:
        return np.inf
    if e1 == 0 or e2 == 0 or e1 * e2 < 0:
        return np.nan
    target = e1 / e2

    def g(p):
        return (h1 ** p - h2 ** p) / (h2 ** p - h3 ** p) - target

    lo, hi = 0.05, 12.0
    if g(lo) * g(hi) > 0:
        return float(np.log(target) / np.log(h1 / h2))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def convergence_study(scenario, rep, N_list, k=5, grid=None):
    """Spectrum on the finest grid, with the eigenvalue-vs-N table and observed order per mode."""
    N_list = list(N_list)
    if len(N_list) < 3:
        raise ValueError("a convergence study needs at least three grids")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    grid = grid if grid is not None else reduce.GridConfig()
    vals, hs = [], []
    report = None
    for N in N_list:
        cfg = replace(grid, N=N)
        op = reduce.assemble(scenario, rep, cfg)
        report = eigen_spectrum(op, k)
        report.grid_config = cfg
        vals.append(report.eigenvalues)
        hs.append(op.spacing[0])
    vals = np.array(vals)
    orders = np.array([observed_order(vals[-3:, j], hs[-3:]) for j in range(vals.shape[1])])
    # an exactly converged mode (infinite order) is not flagged
    flagged = [j for j, p in enumerate(orders) if not np.isinf(p) and not abs(p - grid.order) <= 0.5]
    report.convergence_table = ConvergenceTable(N_list, hs, vals, orders, flagged, grid.order)
    return report


# ---------------------------------------------------------------------------
# oracles


@dataclass
class OracleComparison:
    computed: np.ndarray
    oracle: np.ndarray
    abs_err: np.ndarray
    rel_err: np.ndarray
    passed: bool


def compare_oracle(report, oracle, tol_abs=0.0, tol_rel=1e-4):
    """Entrywise comparison against oracle values (a report or a plain array of eigenvalues).

    A pair passes when its absolute error is below ``tol_abs`` or its relative
    error below ``tol_rel``.  An empty oracle passes vacuously.
    """
    lam = np.asarray(report.eigenvalues if isinstance(report, SpectrumReport) else report, dtype=float)
    ref = np.asarray(oracle if oracle is not None else [], dtype=float).reshape(-1)
    if len(ref) > len(lam):
        raise ValueError("more oracle values than computed eigenvalues")
    lam = lam[: len(ref)]
    err = np.abs(lam - ref)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(ref != 0, err / np.abs(ref), np.where(err == 0, 0.0, np.inf))
    ok = bool(np.all((rel < tol_rel) | (err < tol_abs)))
    out = OracleComparison(lam, ref, err, rel, ok)
    if isinstance(report, SpectrumReport):
        report.oracle_comparison = out
    return out


def bisect_zeros(f, count, start=1e-6, step=0.1, tol=1e-14):
    """First ``count`` sign changes of f on (start, inf), refined by plain bisection."""
    roots = []
    a, fa = start, f(start)
    while len(roots) < count:
        b = a + step
        fb = f(b)
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            lo, hi, flo = a, b, fa
            while hi - lo > tol * max(1.0, hi):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0:
                    lo = hi = mid
                    break
                if flo * fm < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
        a, fa = b, fb
    return np.array(roots[:count])


def spherical_bessel_zeros(ell, count):
    """Positive zeros of j_ell, i.e. of J_{ell + 1/2}."""
    return bisect_zeros(lambda z: special.spherical_jn(ell, z), count, start=0.5)


def bessel_zeros(m, count):
    """Positive zeros of J_|m|."""
    return bisect_zeros(lambda z: special.jv(abs(m), z), count, start=0.5)


def closed_form_spectrum(scenario_id, rep_label, k, R=None):
    """Reference eigenvalues (descending) for the scenarios that have one, else None."""
    kind, _, arg = rep_label.partition(":")
    if scenario_id == "su2-conj":
        if kind not in ("trivial", "spin"):
            return None
        j = float(arg) if kind == "spin" else 0.0
        # Casimir eigenvalues of the spin-(j + n) characters contributing weight zero
        return np.array([-((j + 1 + n) ** 2 - 1) / 4.0 for n in range(k)]) + 0.0  # no negative zero
    if scenario_id == "so3-space" and R is not None:
        ell = 0 if kind == "trivial" else int(float(arg))
        return -(spherical_bessel_zeros(ell, k) / R) ** 2
    if scenario_id == "u1-plane" and R is not None:
        m = 0 if kind == "trivial" else int(arg)
        return -(bessel_zeros(m, k) / R) ** 2
    return None
