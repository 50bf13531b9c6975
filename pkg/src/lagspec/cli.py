"""Batch command line: ``lagspec <command> [options]``.

Exit codes: 0 pass, 1 computation or tolerance failure, 2 usage or
inadmissible pair, 3 eigenvalue too close to the index cutoff to classify.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import AdmissibilityError, AmbiguityError, ConvergenceError, ResolutionError
from .export import dumps, grid_csv, pgm_bytes, spectrum_csv
from .family import derive_params, enumerate_admissible, ode_residual
from . import geometry, nodal, spectral

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_AMBIGUOUS = 0, 1, 2, 3

# declared tolerances of the verify suite
VERIFY_TOLERANCES = {
    "unit_lift": 1e-12,
    "horizontality": 1e-10,
    "lagrangian": 1e-10,
    "wellposedness": 1e-10,
    "conformal_metric": 1e-9,
    "ode_residual": 1e-10,
    "minimality": 2e-3,
    "su3_eigen": 2e-2,
}
ORDER_RATIO = (3.2, 4.8)


@dataclass
class RunConfig:
    command: str
    n: int = None
    m: int = None
    gridN: int = 1024
    Nx: int = 512
    Ny: int = 512
    cutoff: float = 6.0
    format: str = "json"
    output: str = None
    max_n: int = None
    eigenfunction: int = 2
    generator: int = 0


def _emit(cfg, payload):
    if isinstance(payload, bytes):
        if not cfg.output:
            sys.stdout.buffer.write(payload)
            return
        with open(cfg.output, "wb") as fh:
            fh.write(payload)
        return
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _meta(**kw):
    return {"version": __version__, **kw}


def cmd_enumerate(cfg):
    rows = []
    for n, m in enumerate_admissible(cfg.max_n):
        rows.append(derive_params(n, m).to_json())
    if cfg.format == "csv":
        keys = ["n", "m", "b", "q2", "r", "p", "lam2", "mu2", "nu2", "Lx", "Ly"]
        lines = [",".join(keys)] + [",".join(f"{r[k]:.15g}" for k in keys) for r in rows]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, dumps(_meta(maxN=cfg.max_n, pairs=rows)))
    return EXIT_OK


def cmd_params(cfg):
    params = derive_params(cfg.n, cfg.m)
    _emit(cfg, dumps(_meta(params=params.to_json())))
    return EXIT_OK


def _check(name, value, ok=None):
    tol = VERIFY_TOLERANCES[name]
    passed = bool(value <= tol) if ok is None else bool(ok)
    return {"name": name, "value": float(value), "tolerance": tol, "pass": passed}


def _order_check(name, coarse, fine):
    ratio = coarse / fine
    ok = ORDER_RATIO[0] <= ratio <= ORDER_RATIO[1] and fine <= VERIFY_TOLERANCES[name]
    out = _check(name, fine, ok)
    out.update(coarse=float(coarse), ratio=float(ratio), orderRange=list(ORDER_RATIO))
    return out


def run_verification(params, gridN, points=1000, seed=0):
    """All residual suites for one pair; list of check dictionaries."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-params.Lx, 2 * params.Lx, points)
    y = rng.uniform(-params.LyTorus, 2 * params.LyTorus, points)
    hx, hy = geometry.horizontality_residual(params, x, y)
    tr, gl = geometry.projective_wellposedness(params, x, y)
    g = geometry.pullback_metric(params, x, y)
    w = spectral.conformal_factor(params, x)
    metric_err = np.max(np.abs(g - w[:, None, None] * np.eye(2)))
    checks = [
        _check("unit_lift", np.max(geometry.unit_residual(params, x, y))),
        _check("horizontality", max(np.max(np.abs(hx)), np.max(np.abs(hy)))),
        _check("lagrangian", np.max(np.abs(geometry.lagrangian_residual(params, x, y)))),
        _check("wellposedness", max(np.max(np.abs(tr)), np.max(np.abs(gl)))),
        _check("conformal_metric", metric_err),
        _check("ode_residual", np.max(np.abs(ode_residual(params, x)))),
    ]
    half = gridN // 2
    checks.append(_order_check("minimality", geometry.minimality_residual(params, half),
                               geometry.minimality_residual(params, gridN)))
    coarse = geometry.su3_eigen_residuals(params, half)
    fine = geometry.su3_eigen_residuals(params, gridN)
    worst = int(np.argmax(fine))
    checks.append(_order_check("su3_eigen", coarse[worst], fine[worst]))
    rank, _ = geometry.su3_sample_rank(params)
    checks.append({"name": "su3_rank", "value": rank, "tolerance": 7, "pass": rank >= 7})
    return checks


def cmd_verify(cfg):
    params = derive_params(cfg.n, cfg.m)
    if cfg.gridN < 64:
        raise ResolutionError("verify needs --grid >= 64")
    checks = run_verification(params, cfg.gridN)
    ok = all(c["pass"] for c in checks)
    _emit(cfg, dumps(_meta(n=params.n, m=params.m, gridN=cfg.gridN, checks=checks, passed=ok)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(cfg):
    params = derive_params(cfg.n, cfg.m)
    spec = spectral.torus_spectrum(params, cfg.cutoff + spectral.DEFAULT_MARGIN, cfg.gridN)
    if cfg.format == "csv":
        _emit(cfg, spectrum_csv(spec))
    else:
        _emit(cfg, dumps(_meta(**spec.to_json())))
    return EXIT_OK


def cmd_index(cfg):
    params = derive_params(cfg.n, cfg.m)
    report = spectral.index_report(params, cfg.gridN)
    lam1 = spectral.lambda1_bound(params, spectrum=report.spectrum)
    body = report.to_json()
    body.update(lambda1=lam1.lambda1, lambda1ErrorBar=lam1.error_bar,
                lambda1Bound=lam1.bound, rayleigh=lam1.rayleigh,
                nadirashvili=spectral.nadirashvili_check(report.spectrum, report.chi))
    _emit(cfg, dumps(_meta(n=params.n, m=params.m, **body)))
    ok = (body["coverInd0Identity"] and body["coverIndIdentity"] and lam1.holds
          and report.ind0 >= body["ind0LowerBound"] and report.ind >= body["indLowerBound"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_nodal(cfg):
    params = derive_params(cfg.n, cfg.m)
    if cfg.format in ("csv", "pgm"):
        grid = nodal.sample_g(params, cfg.eigenfunction, cfg.Nx, cfg.Ny)
        if cfg.format == "csv":
            _emit(cfg, grid_csv(grid.x, grid.y, grid.values))
        else:
            _emit(cfg, pgm_bytes(nodal.sign_map(grid)))
        return EXIT_OK
    report = nodal.nodal_report(params, cfg.Nx, cfg.Ny)
    _emit(cfg, dumps(_meta(n=params.n, m=params.m, **report.to_json())))
    return EXIT_OK if report.match and report.courant >= 8 else EXIT_FAIL


def cmd_area(cfg):
    params = derive_params(cfg.n, cfg.m)
    a = spectral.area(params)
    ok = a.rel_diff <= 1e-8
    _emit(cfg, dumps(_meta(n=params.n, m=params.m, byFormula=a.byFormula,
                           byQuadrature=a.byQuadrature, relDiff=a.rel_diff,
                           tolerance=1e-8, passed=ok)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_benchmarks(cfg):
    reports = {k: v.to_json() for k, v in spectral.benchmark_reports().items()}
    _emit(cfg, dumps(_meta(benchmarks=reports)))
    return EXIT_OK


def cmd_fa(cfg):
    params = derive_params(cfg.n, cfg.m)
    basis = geometry.su3_basis()
    if not 0 <= cfg.generator < len(basis):
        raise ValueError(f"--generator must be in 0..{len(basis) - 1}")
    X, Y, f = geometry.su3_grid_samples(params, basis[cfg.generator], cfg.gridN)
    _emit(cfg, grid_csv(X, Y, f))
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate, "params": cmd_params, "verify": cmd_verify,
    "spectrum": cmd_spectrum, "index": cmd_index, "nodal": cmd_nodal,
    "area": cmd_area, "benchmarks": cmd_benchmarks, "fa": cmd_fa,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="lagspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)

    def out(p, formats=("json",)):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--output", "-o")

    p = sub.add_parser("enumerate", help="list admissible (n, m) with their constants")
    p.add_argument("--max-n", type=int, required=True, dest="max_n")
    out(p, ("json", "csv"))
    p = sub.add_parser("params", help="derived constants of K_{n,m}")
    pair(p)
    out(p)
    p = sub.add_parser("verify", help="geometric residual suites")
    pair(p)
    p.add_argument("--grid", type=int, default=1024, dest="gridN")
    out(p)
    p = sub.add_parser("spectrum", help="Laplace spectrum of the double cover")
    pair(p)
    p.add_argument("--grid", type=int, default=1024, dest="gridN")
    p.add_argument("--cutoff", type=float, default=6.0)
    out(p, ("json", "csv"))
    p = sub.add_parser("index", help="Ind0, Ind1, Ind of K_{n,m}")
    pair(p)
    p.add_argument("--grid", type=int, default=1024, dest="gridN")
    out(p)
    p = sub.add_parser("nodal", help="nodal domain counts of g_1..g_7")
    pair(p)
    p.add_argument("--nx", type=int, default=512, dest="Nx")
    p.add_argument("--ny", type=int, default=512, dest="Ny")
    p.add_argument("--eigenfunction", type=int, default=2, choices=range(1, 8))
    out(p, ("json", "csv", "pgm"))
    p = sub.add_parser("area", help="area formula against quadrature")
    pair(p)
    out(p)
    p = sub.add_parser("benchmarks", help="RP^2, S^2 and Clifford torus indices")
    out(p)
    p = sub.add_parser("fa", help="CSV samples of an su(3) test function f_A")
    pair(p)
    p.add_argument("--generator", type=int, default=0)
    p.add_argument("--grid", type=int, default=128, dest="gridN")
    p.add_argument("--output", "-o")
    p.set_defaults(format="csv")
    return parser


def parse_config(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**vars(args))
    if cfg.command == "enumerate" and cfg.max_n < 1:
        parser.error("--max-n must be at least 1")
    if cfg.command in ("spectrum", "index", "verify", "fa") and cfg.gridN <= 0:
        parser.error("--grid must be positive")
    if cfg.command == "spectrum" and cfg.cutoff <= 0:
        parser.error("--cutoff must be positive")
    return cfg


def main(argv=None):
    cfg = parse_config(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except AdmissibilityError as exc:
        print(f"lagspec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguityError as exc:
        print(f"lagspec: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (ConvergenceError, ResolutionError, ValueError) as exc:
        print(f"lagspec: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
