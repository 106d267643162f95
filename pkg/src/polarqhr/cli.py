"""Command line front end: ``run <config>``, ``verify [scenario]`` and ``catalog``.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 numerical failure (non-Hermitian matrix, dim V^K = 0, failed eigen-residuals).
"""
import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import equivariant as eq
from . import geometry, lie, reduce, spectral, suite

log = logging.getLogger("polarqhr")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

# representations offered per algebra in the catalog listing (others are accepted by label)
CATALOG_REPS = {
    "u1": ["trivial", "charge:1", "charge:2", "charge:3"],
    "so3": ["trivial", "spin:1", "spin:2"],
    "su2": ["trivial", "spin:1/2", "spin:1", "spin:3/2", "spin:2"],
    "su3": ["trivial", "defining", "adjoint"],
}
ORACLES = {
    "su2-conj": "casimir",
    "so3-space": "spherical-bessel",
    "u1-plane": "bessel",
}


class ConfigError(ValueError):
    pass


def setup_logging():
    level = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("REDUCE_LOG", "quiet").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    scenario_id: str
    representation: str = "trivial"
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    N: int = 200
    order: int = 2
    bc: str = "dirichlet"
    eigenvalues_requested: int = 6
    oracle: str = "auto"
    output_dir: str = "out"
    seed: int = 0

    def grid(self):
        return reduce.GridConfig(self.x_min, self.x_max, self.N, self.order)


_KEYS = {
    "scenario": ("scenario_id", str), "scenario_id": ("scenario_id", str),
    "representation": ("representation", str), "rep": ("representation", str),
    "grid.x_min": ("x_min", float), "grid.x_max": ("x_max", float),
    "grid.N": ("N", int), "grid.order": ("order", int),
    "bc": ("bc", str), "eigenvalues_requested": ("eigenvalues_requested", int), "k": ("eigenvalues_requested", int),
    "oracle": ("oracle", str), "output_dir": ("output_dir", str), "seed": ("seed", int),
}


def parse_config_text(text):
    """Flat ``key = value`` lines; '#' starts a comment.  Unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, conv = _KEYS[key]
        try:
            if conv is int:
                as_float = float(value)
                if as_float != int(as_float):
                    raise ValueError
                values[name] = int(as_float)
            else:
                values[name] = conv(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {value!r} for {key}") from None
    if "scenario_id" not in values:
        raise ConfigError("missing key 'scenario'")
    cfg = RunConfig(**values)
    validate_config(cfg)
    return cfg


def parse_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config_text(text)


def validate_config(cfg):
    if cfg.scenario_id not in geometry.SCENARIO_IDS:
        raise ConfigError(f"unknown scenario {cfg.scenario_id!r}")
    try:
        geometry.representation_for(cfg.scenario_id, cfg.representation)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"representation: {exc}") from None
    if cfg.N < 16:
        raise ConfigError(f"grid.N = {cfg.N} below the minimum 16")
    if cfg.order not in (2, 4):
        raise ConfigError(f"grid.order = {cfg.order} not in (2, 4)")
    if cfg.bc != "dirichlet":
        raise ConfigError(f"bc = {cfg.bc!r} not supported (dirichlet only)")
    if cfg.eigenvalues_requested < 1:
        raise ConfigError("eigenvalues_requested must be positive")
    if cfg.oracle not in ("auto", "none", *ORACLES.values()):
        raise ConfigError(f"unknown oracle {cfg.oracle!r}")
    if cfg.oracle not in ("auto", "none") and ORACLES.get(cfg.scenario_id) != cfg.oracle:
        raise ConfigError(f"oracle {cfg.oracle!r} does not apply to {cfg.scenario_id}")
    scen = geometry.scenario(cfg.scenario_id)
    if scen.section_dim == 2:
        if cfg.x_min is not None or cfg.x_max is not None:
            raise ConfigError(f"{cfg.scenario_id} has a two-dimensional section; grid.x_min/x_max do not apply")
        return
    lo, hi = scen.box[0]
    x_min = lo if cfg.x_min is None else cfg.x_min
    x_max = hi if cfg.x_max is None else cfg.x_max
    if not np.isfinite(x_max):
        raise ConfigError(f"{cfg.scenario_id} needs a finite grid.x_max")
    if not (lo <= x_min < x_max <= hi):
        raise ConfigError(f"grid interval ({x_min}, {x_max}) outside the section ({lo}, {hi})")
    cfg.x_min, cfg.x_max = float(x_min), float(x_max)


# ---------------------------------------------------------------------------
# run


@dataclass
class RunReport:
    config: dict
    inertia: dict
    dim_VK: int
    spectrum: dict
    invariants: dict
    timings: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def oracle_values(cfg, k):
    if cfg.oracle == "none":
        return None
    R = cfg.x_max if cfg.scenario_id in ("so3-space", "u1-plane") else None
    if R is not None and cfg.x_min != 0.0:
        return None
    if cfg.scenario_id == "su2-conj" and (cfg.x_min, cfg.x_max) != (0.0, 2 * np.pi):
        return None
    return spectral.closed_form_spectrum(cfg.scenario_id, cfg.representation, k, R)


def _fix_phase(vec):
    """Deterministic phase: the largest-magnitude entry of each column made real positive."""
    idx = np.argmax(np.abs(vec), axis=0)
    ph = vec[idx, np.arange(vec.shape[1])]
    return vec * (np.abs(ph) / ph)


def _csv_float(v):
    return repr(float(v))


def write_spectrum_csv(path, lam, oracle):
    lines = ["index,eigenvalue,oracle,abs_err"]
    for i, v in enumerate(lam):
        if oracle is not None and i < len(oracle):
            lines.append(f"{i},{_csv_float(v)},{_csv_float(oracle[i])},{_csv_float(abs(v - oracle[i]))}")
        else:
            lines.append(f"{i},{_csv_float(v)},,")
    Path(path).write_text("\n".join(lines) + "\n")


def write_plot_csv(path, op, vec):
    dim = op.points.shape[1]
    d = op.d
    coords = ["x"] if dim == 1 else [f"x{i + 1}" for i in range(dim)]
    cols = []
    for j in range(vec.shape[1]):
        cols += [f"mode{j}"] if d == 1 else [f"mode{j}_{c}" for c in range(d)]
    real = np.all(np.isreal(vec))
    if not real:
        cols = [c for base in cols for c in (base + "_re", base + "_im")]
    lines = [",".join(coords + ["delta", "v_eff"] + cols)]
    V = vec.reshape(op.n_nodes, d, -1)
    for i in range(op.n_nodes):
        row = [_csv_float(c) for c in op.points[i]] + [_csv_float(op.delta[i]), _csv_float(op.v_eff[i])]
        for j in range(vec.shape[1]):
            for c in range(d):
                z = V[i, c, j]
                row += [_csv_float(z.real)] if real else [_csv_float(z.real), _csv_float(z.imag)]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def run_config(cfg):
    """Execute one run; returns (exit code, RunReport or None)."""
    timings = {}
    t0 = time.perf_counter()
    scen = geometry.scenario(cfg.scenario_id)
    rep = geometry.representation_for(scen, cfg.representation)
    inv = eq.invariant_vectors(rep, scen.algebra)
    if not inv.usable:
        log.error("dim V^K = 0")
        print("numerical failure: dim V^K = 0", file=sys.stderr)
        return EXIT_NUMERICAL, None
    try:
        op = reduce.assemble(scen, rep, cfg.grid(), cfg.bc, inv)
    except (reduce.UnsupportedConfigError, geometry.SectionBoundaryError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    except eq.ScenarioInconsistencyError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL, None
    timings["assemble_s"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    k = min(cfg.eigenvalues_requested, op.shape[0])
    try:
        report = spectral.eigen_spectrum(op, k)
    except spectral.NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL, None
    timings["eigen_s"] = time.perf_counter() - t1
    oracle = oracle_values(cfg, k)
    cmp = spectral.compare_oracle(report, oracle, 1e-4, 1e-4) if oracle is not None else None

    # inertia summary over the grid
    dual = lie.dual_bases(scen.algebra)
    b, _, dens = geometry.inertia_batch(scen, dual, op.points)
    conds = np.linalg.cond(b)
    inertia = {"delta_min": float(dens.min()), "delta_max": float(dens.max()),
               "cond_b_max": float(conds.max()), "cond_b_min": float(conds.min())}

    # light invariants for this run
    t2 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    idx = np.unique(np.linspace(0, op.n_nodes - 1, 5).astype(int))
    c_inv = float(np.max(np.abs(reduce.effective_potentials(scen, op.points[idx], dual, delta_scale=2.0)
                                - op.v_eff[idx])))
    herm = float(np.max(np.abs((op.matrix - op.matrix.conj().T).data), initial=0.0))
    invariants = {
        "hermitian_defect": herm,
        "max_eigen_residual": report.max_residual,
        "orthonormality_defect": report.orthogonality,
        "v_eff_delta_doubling": c_inv,
        "oracle_pass": None if cmp is None else cmp.passed,
    }
    # seeded averaging witness: PF equivariant for random samples
    settings = suite.SETTINGS[scen.id]
    quad = lie.haar_quadrature(scen.group_id, settings["quad_order"])
    samples = suite._samples(scen, rep, rng, 5, settings)
    Y = suite._manifold_points(scen, rng, 2)
    comp = eq.compatibility_check(scen, rep, quad, samples, Y, scen.group.random_params(rng, 2))
    invariants["compatibility_defect"] = comp.max_defect
    timings["invariants_s"] = time.perf_counter() - t2

    lam = report.eigenvalues
    vec = _fix_phase(report.eigenvectors)
    if np.max(np.abs(vec.imag), initial=0.0) == 0.0:
        vec = vec.real
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_spectrum_csv(out / "spectrum.csv", lam, oracle)
    write_plot_csv(out / "plot.csv", op, vec)
    spectrum = {
        "ordering": "descending (ground state first, div-grad sign)",
        "eigenvalues": [float(v) for v in lam],
        "method": report.method,
        "residuals": [float(r) for r in report.residuals],
        "oracle": None if oracle is None else [float(v) for v in oracle],
        "abs_err": None if cmp is None else [float(v) for v in cmp.abs_err],
        "rel_err": None if cmp is None else [float(v) for v in cmp.rel_err],
    }
    timings["total_s"] = time.perf_counter() - t0
    cfg_echo = asdict(cfg)
    result = RunReport(cfg_echo, inertia, int(inv.dim_VK), spectrum, invariants, timings)
    (out / "report.json").write_text(result.to_json() + "\n")
    log.info("wrote %s", out)
    return EXIT_OK, result


def cmd_run(path):
    try:
        cfg = parse_config(path)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, result = run_config(cfg)
    if result is not None:
        for i, v in enumerate(result.spectrum["eigenvalues"]):
            print(f"{i:3d}  {v!r}")
    return code


# ---------------------------------------------------------------------------
# verify and catalog


def cmd_verify(scenario_filter=None, seed=0):
    if scenario_filter and scenario_filter not in geometry.SCENARIO_IDS:
        print(f"unknown scenario {scenario_filter!r}; known: {', '.join(geometry.SCENARIO_IDS)}", file=sys.stderr)
        return EXIT_CONFIG
    t0 = time.perf_counter()
    failed = 0
    total = 0
    for check in suite.run([scenario_filter] if scenario_filter else None, seed):
        print(check.line(), flush=True)
        total += 1
        failed += not check.passed
    print(f"{total - failed}/{total} checks passed in {time.perf_counter() - t0:.1f} s")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def catalog_entries():
    rows = []
    for sid in geometry.SCENARIO_IDS:
        scen = geometry.scenario(sid)
        reps = []
        for label in CATALOG_REPS[scen.algebra.name]:
            rep = geometry.representation_for(scen, label)
            reps.append((label, eq.invariant_vectors(rep, scen.algebra).dim_VK))
        rows.append({"id": sid, "group": scen.group_id, "section_dim": scen.section_dim,
                     "interval": scen.box, "representations": reps, "oracle": ORACLES.get(sid)})
    return rows


def cmd_catalog():
    for row in catalog_entries():
        box = " x ".join(f"({lo:.6g}, {hi:.6g})" for lo, hi in row["interval"])
        print(f"{row['id']}: group {row['group']}, section {box}"
              + (" (alcove inside the box)" if row["section_dim"] == 2 else ""))
        for label, d in row["representations"]:
            flag = "" if d else "  [unusable]"
            print(f"    {label:<10} dim V^K = {d}{flag}")
        print(f"    oracle: {row['oracle'] or 'none (property checks only)'}")
    return EXIT_OK


def main(argv=None):
    setup_logging()
    parser = argparse.ArgumentParser(prog="polarqhr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)
    p_run = sub.add_parser("run", help="assemble and diagonalize one configuration")
    p_run.add_argument("config")
    p_ver = sub.add_parser("verify", help="run the invariant suites")
    p_ver.add_argument("scenario", nargs="?")
    p_ver.add_argument("--seed", type=int, default=0)
    sub.add_parser("catalog", help="list scenarios and representations")
    args = parser.parse_args(argv)
    if args.cmd == "run":
        return cmd_run(args.config)
    if args.cmd == "verify":
        return cmd_verify(args.scenario, args.seed)
    return cmd_catalog()


if __name__ == "__main__":
    sys.exit(main())
