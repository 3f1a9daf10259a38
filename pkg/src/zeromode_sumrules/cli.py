"""Command-line front end: ``python -m zeromode_sumrules <command> ...``.

Exit status: 0 on success, 1 on usage errors, 2 on numerical failures or
failed verification checks. ``ZEROMODE_SUMRULES_WORKERS`` sets the default
worker count for sweeps.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict

from . import __version__
from .analysis_fit import polyfit, sweep_results
from .fractional_green import verify_composition
from .neumann_basis import DensityModel
from .records import ResultRecord, RunConfig, finite_or_none, to_csv, to_json_lines
from .rr_spectrum import asymptotic_level, solve, z_numerical
from .sum_rules import renormalization_check, trace_assembly_limit, z1_exact, z_tilde

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
WORKERS_ENV = "ZEROMODE_SUMRULES_WORKERS"
TRACE_ROUTE_MAX_K = 400


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple:
    """``start:stop:count`` (inclusive, evenly spaced) or a comma list."""
    if ":" in text:
        start, stop, count = text.split(":")
        count = int(count)
        if count < 2:
            return (float(start),)
        step = (float(stop) - float(start)) / (count - 1)
        return tuple(round(float(start) + i * step, 12) for i in range(count))
    return tuple(float(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zeromode-sumrules", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", dest="output_path")
    common.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical output)")
    common.add_argument("--n-max", type=int, default=200)
    common.add_argument("--basis-size", type=int, default=2001)
    common.add_argument("--truncation", type=int, default=2000, help="non-zero modes kept in mode sums")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sumrule", parents=[common], help="evaluate Z(s) by one route")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--route", choices=("perturbative", "exact", "numerical", "trace"), default="perturbative")
    p.add_argument("--gamma-sequence", type=_grid, default=(1e-2, 1e-3, 1e-4))
    p.add_argument("--allow-any-s", action="store_true")

    p = sub.add_parser("spectrum", parents=[common], help="Rayleigh-Ritz eigenvalues")
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--levels", type=int, default=10)

    p = sub.add_parser("sweep-fit", parents=[common], help="Z_num over a kappa grid plus polynomial fit")
    p.add_argument("--s", type=float, default=1.5)
    p.add_argument("--kappa-grid", type=_grid, default=_grid("0.01:0.20:20"))
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--workers", type=int, default=int(os.environ.get(WORKERS_ENV, "1")))

    p = sub.add_parser("verify", parents=[common], help="cross-route consistency checks")
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--gamma-sequence", type=_grid, default=(1e-3, 1e-4, 1e-5, 1e-6))
    return parser


def config_from_args(args) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**values)


def _record(cfg: RunConfig, route: str, value, tail, **kw) -> ResultRecord:
    return ResultRecord(config=_jsonable(asdict(cfg)), route=route, value=float(value), tail_estimate=float(tail),
                        version=__version__, **kw)


def _jsonable(d: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def run_sumrule(cfg: RunConfig, allow_any_s: bool = False) -> list[ResultRecord]:
    density = DensityModel.linear(cfg.kappa)
    if cfg.route == "perturbative":
        try:
            r = z_tilde(cfg.s, density, cfg.truncation, allow_any_s=allow_any_s)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif cfg.route == "exact":
        if cfg.s != 1.0:
            raise UsageError("the exact route is only available for s = 1")
        r = z1_exact(density)
    elif cfg.route == "numerical":
        r = z_numerical(cfg.s, cfg.kappa, cfg.n_max, cfg.basis_size)
    else:
        N = round(1.0 / (cfg.s - 1.0)) if cfg.s > 1.0 else 0
        if N not in (2, 3) or abs(1.0 + 1.0 / N - cfg.s) > 1e-12:
            raise UsageError("the trace route needs s = 1 + 1/N with N in {2, 3}")
        r = trace_assembly_limit(N, density, min(cfg.truncation, TRACE_ROUTE_MAX_K), cfg.gamma_sequence)
    orders = list(r.value_by_order) if r.value_by_order else None
    return [_record(cfg, r.route.value, r.total, r.tail_estimate, s=r.s, kappa=cfg.kappa, orders=orders)]


def run_spectrum(cfg: RunConfig) -> list[ResultRecord]:
    spectrum = solve(DensityModel.linear(cfg.kappa), cfg.basis_size, estimate_convergence=True)
    out = []
    for n in range(min(cfg.levels, cfg.basis_size)):
        extra = {"level": n, "asymptotic": asymptotic_level(n, cfg.kappa) if n else 0.0}
        change = finite_or_none(spectrum.residual_metadata[n])
        out.append(_record(cfg, "numerical_spectrum", spectrum.eigenvalues[n],
                           abs(change) if change is not None else float("nan"), kappa=cfg.kappa, extra=extra))
    return out


def run_sweep_fit(cfg: RunConfig) -> list[ResultRecord]:
    results = sweep_results(cfg.s, cfg.kappa_grid, cfg.n_max, cfg.basis_size, workers=cfg.workers)
    out = [_record(cfg, r.route.value, r.total, r.tail_estimate, s=cfg.s, kappa=r.meta["kappa"]) for r in results]
    fit = polyfit([(r.meta["kappa"], r.total) for r in results], cfg.degree)
    for j, c in enumerate(fit.coefficients):
        out.append(_record(cfg, f"fit_c{j}", c, fit.residual_norm, s=cfg.s,
                           extra={"degree": fit.degree, "condition_estimate": fit.condition_estimate}))
    return out


def verification_checks(kappa: float, quick: bool, gammas=(1e-3, 1e-4, 1e-5, 1e-6), truncation: int = 2000,
                        n_max: int = 200, basis_size: int = 2001):
    """Yield ``(name, discrepancy, tolerance)`` for the cross-route checks."""
    density = DensityModel.linear(kappa)
    K = 400 if quick else truncation
    for s in (1.5, 4.0 / 3.0):
        rep = renormalization_check(s, density, K, gammas, tolerance=1e-8)
        mismatch = max(rep.singular_mismatch.values(), default=0.0)
        yield f"renormalization_s={s:.6g}", max(rep.distance, mismatch), 1e-8

    for N, k in ((1, 0), (1, 1), (1, 2), (2, 0)):
        yield f"composition_N={N}_k={k}", verify_composition(N, k, 1e-2, density, 20 if quick else 30), 1e-12

    exact = z1_exact(density).total
    yield "z1_exact_vs_z_tilde", abs(exact - z_tilde(1.0 + 1e-8, density, K, allow_any_s=True).total), 1e-6
    yield "z1_exact_vs_closed_form", abs(exact - (1.0 / 6.0 - kappa**2 / 120.0)), 1e-6

    zt = z_tilde(1.5, density, K).total
    trace = trace_assembly_limit(2, density, 120 if quick else 300).total
    yield "z_tilde_vs_trace_assembly", abs(zt - trace), 1e-7
    if not quick:
        num = z_numerical(1.5, kappa, n_max, basis_size).total
        yield "z_tilde_vs_numerical", abs(zt - num), 1e-7 + 1e-3 * kappa**4


def run_verify(cfg: RunConfig) -> tuple[list[ResultRecord], bool]:
    out, ok = [], True
    for name, value, tol in verification_checks(cfg.kappa, cfg.quick, cfg.gamma_sequence, cfg.truncation,
                                                 cfg.n_max, cfg.basis_size):
        passed = bool(value <= tol)
        ok &= passed
        out.append(_record(cfg, f"verify:{name}", value, tol, kappa=cfg.kappa, extra={"passed": passed}))
    return out, ok


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    allow_any_s = getattr(args, "allow_any_s", False)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")

    started = time.perf_counter()
    status = EXIT_OK
    try:
        if cfg.command == "sumrule":
            records = run_sumrule(cfg, allow_any_s)
        elif cfg.command == "spectrum":
            records = run_spectrum(cfg)
        elif cfg.command == "sweep-fit":
            records = run_sweep_fit(cfg)
        else:
            records, ok = run_verify(cfg)
            status = EXIT_OK if ok else EXIT_NUMERIC
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        records = [_record(cfg, "failure", float("nan"), float("nan"),
                           extra={"stage": cfg.command, "error": f"{type(exc).__name__}: {exc}"})]
        status = EXIT_NUMERIC

    if cfg.timing:
        elapsed = time.perf_counter() - started
        for r in records:
            r.wall_time = elapsed
    text = to_csv(records) if cfg.format == "csv" else to_json_lines(records)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
