"""Command-line front end producing plot-ready CSV or JSON datasets.

Subcommands: ground, dynamics, qfi, swcheck. Exit codes: 0 success,
2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import metadata

import numpy as np

from . import criticality, dynamics, spectrum, squeezing, swmap
from .model import ModelParams, build_central_spin_h, build_lmg_h
from .spinspace import CentralSpinBasis, DickeBasis

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
MAX_SW_BATH = 200


class ValidationError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


# --- parsing ---------------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` with inclusive endpoints, or a single number."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValidationError(f"grid must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse grid {text!r}") from None
    if count < 2:
        raise ValidationError(f"grid {text!r} needs at least two points")
    if not stop > start:
        raise ValidationError(f"grid {text!r} must have stop > start")
    return np.linspace(start, stop, count)


def parse_list(text: str, kind=float) -> list:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise ValidationError("empty list")
    try:
        values = [kind(float(s)) if kind is int else kind(s) for s in items]
    except ValueError:
        raise ValidationError(f"cannot parse list {text!r}") from None
    if kind is int and any(float(s) != int(float(s)) for s in items):
        raise ValidationError(f"expected integers in {text!r}")
    return values


def _scalar_eta(args) -> float:
    try:
        return float(args.eta)
    except ValueError:
        raise ValidationError(f"--eta expects a single number, got {args.eta!r}") from None


def _params(args, n_bath=None, g=None, eta=None) -> ModelParams:
    if eta is None:
        eta = _scalar_eta(args)
    try:
        return ModelParams(
            n_bath=args.N if n_bath is None else n_bath,
            eta=eta,
            g_tilde=args.g_scalar if g is None else g,
            lam=args.lam,
            omega=args.omega,
        )
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("central", "lmg"), default="central")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="anisotropy (default 1 for qfi, 0 otherwise)")
    common.add_argument("--eta", default="1e5", help="frequency ratio; a list for swcheck")
    common.add_argument("--figure", default=None, help="also render a PNG/PDF figure here")

    parser = argparse.ArgumentParser(prog="centralspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", parents=[common], help="ground-state squeezing vs g_tilde")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", required=True, help="grid start:stop:count")

    p = sub.add_parser("dynamics", parents=[common], help="squeezing time series")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=float, default=2.0)
    p.add_argument("--theta0", type=float, default=math.pi / 2)
    p.add_argument("--t", default=None, help="time grid start:stop:count")
    p.add_argument("--method", choices=dynamics.METHODS, default="numeric")

    p = sub.add_parser("qfi", parents=[common], help="ground-state QFI curves and peaks")
    p.add_argument("--N", required=True, help="comma-separated system sizes")
    p.add_argument("--g", default="0.9:1.1:41")
    p.add_argument("--exponent", action="store_true", help="fit F(g_m) ~ N^mu")

    p = sub.add_parser("swcheck", parents=[common], help="Schrieffer-Wolff mapping residuals")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=float, default=1.0)
    return parser


# --- output ------------------------------------------------------------------------

def fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return None if not math.isfinite(v) else v
    return value


def render(dataset: dict, fmt_name: str) -> str:
    meta = _jsonable(dataset["metadata"])
    if fmt_name == "json":
        body = {"metadata": meta, "summary": _jsonable(dataset.get("summary", {})),
                "columns": dataset["columns"],
                "rows": [_jsonable([r[c] for c in dataset["columns"]]) for r in dataset["rows"]]}
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    head = dict(meta, summary=_jsonable(dataset.get("summary", {})))
    lines = ["# " + json.dumps(head, sort_keys=True), ",".join(dataset["columns"])]
    lines += [",".join(fmt(r[c]) for c in dataset["columns"]) for r in dataset["rows"]]
    return "\n".join(lines) + "\n"


def _metadata(args, **extra) -> dict:
    meta = {"artifact": "centralspin", "version": _version(), "command": args.command,
            "model": args.model, "omega": args.omega, "lambda": args.lam}
    meta.update(extra)
    return meta


def _pmap(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --- commands --------------------------------------------------------------------

def _model_h(params: ModelParams, model: str):
    if model == "lmg":
        return build_lmg_h(params), DickeBasis(params.n_bath)
    return build_central_spin_h(params), CentralSpinBasis(params.n_bath)


def _ground_row(params: ModelParams, model: str) -> dict:
    import scipy.linalg as sl

    h, basis = _model_h(params, model)
    gs = spectrum.ground_state_in_sector(h, basis, spectrum.EVEN, check=False)
    rep = squeezing.squeezing_report(gs.state)
    e01 = sl.eigvalsh(h, subset_by_index=[0, 1])
    row = {"g_tilde": params.g_tilde, "xi_s2_numeric": rep.xi_s2, "xi_r2_numeric": rep.xi_r2,
           "xi_s2_analytic": None, "xi_r2_analytic": None,
           "ground_energy": gs.energy, "gap": float(e01[1] - e01[0])}
    if params.lam == 0:
        try:
            row["xi_s2_analytic"], row["xi_r2_analytic"] = squeezing.isotropic_ground_xi(params)
        except squeezing.SqueezingError:
            pass
    else:
        with np.errstate(all="ignore"):
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                row["xi_s2_analytic"] = squeezing.anisotropic_ground_xi_analytic(params).xi_s2
    return row


def cmd_ground(args) -> dict:
    grid = parse_grid(args.g)
    base = _params(args, g=float(grid[0]))
    rows = _pmap(lambda g: _ground_row(base.with_g(float(g)), args.model), list(grid), args.threads)
    cols = ["g_tilde", "xi_s2_numeric", "xi_r2_numeric", "xi_s2_analytic", "xi_r2_analytic",
            "ground_energy", "gap"]
    meta = _metadata(args, N=base.n_bath, eta=base.eta, g=args.g)
    return {"metadata": meta, "columns": cols, "rows": rows, "summary": {}}


def cmd_dynamics(args) -> dict:
    args.g_scalar = args.g
    params = _params(args)
    if args.method in ("analytic", "moments") and params.lam != 0:
        raise ValidationError(f"--method {args.method} requires --lambda 0")
    if args.method == "analytic" and args.model != "central":
        raise ValidationError("--method analytic applies to --model central")
    times = dynamics.default_time_grid(params) if args.t is None else parse_grid(args.t)
    series = dynamics.squeezing_time_series(params, times, args.theta0, args.method, args.model)
    rows = []
    for i, t in enumerate(series.times):
        m = {k: v[i] for k, v in series.moments.items()}
        rows.append({"t": t, "xi_s2": series.xi_s2[i], "xi_r2": series.xi_r2[i],
                     "iz": np.real(m["iz"]), "iz2": np.real(m["iz2"]),
                     "iplus_re": np.real(m["iplus"]), "iplus_im": np.imag(m["iplus"]),
                     "iplus2_re": np.real(m["iplus2"]), "iplus2_im": np.imag(m["iplus2"]),
                     "iplus_2iz1_re": np.real(m["iplus_2iz1"]),
                     "iplus_2iz1_im": np.imag(m["iplus_2iz1"])})
    pred = dynamics.predicted_optimum(params)
    summary = {"t_min": None, "xi_min2": None,
               "predicted_t_min": pred.t_min, "predicted_xi_min2": pred.xi_min2}
    try:
        opt = dynamics.optimal_squeezing(series)
        summary.update(t_min=opt.t_min, xi_min2=opt.xi_min2)
    except dynamics.WindowError as exc:
        print(f"warning: {exc}", file=sys.stderr)
    meta = _metadata(args, N=params.n_bath, eta=params.eta, g_tilde=params.g_tilde,
                     theta0=args.theta0, method=args.method, points=int(series.times.size))
    return {"metadata": meta, "columns": list(rows[0]), "rows": rows, "summary": summary}


def cmd_qfi(args) -> dict:
    sizes = parse_list(args.N, int)
    grid = parse_grid(args.g)
    if any(n < 1 for n in sizes):
        raise ValidationError("system sizes must be positive")
    args.g_scalar = float(grid[0])
    bases = [_params(args, n_bath=n) for n in sizes]
    tasks = [(i, float(g)) for i in range(len(sizes)) for g in grid]
    families = [criticality.ground_family(p, args.model) for p in bases]
    values = _pmap(lambda task: criticality.qfi_of_family(families[task[0]], task[1]),
                   tasks, args.threads)
    rows = [{"N": sizes[i], "g_tilde": g, "qfi": f} for (i, g), f in zip(tasks, values)]
    peaks = []
    for i, n in enumerate(sizes):
        fvals = values[i * grid.size:(i + 1) * grid.size]
        pk = criticality.peak_of(grid, fvals, lambda g, fam=families[i]: criticality.qfi_of_family(fam, g))
        peaks.append({"N": n, "g_m": pk.g_m, "f_max": pk.f_max})
    summary = {"peaks": peaks}
    if args.exponent:
        fit = criticality.loglog_fit([(p["N"], p["f_max"]) for p in peaks])
        summary["scaling_fit"] = {"exponent": fit.exponent, "log_prefactor": fit.log_prefactor,
                                  "r_squared": fit.r_squared, "points": fit.points}
        summary["window_exponents"] = [
            {"n1": a, "n2": b, "exponent": mu}
            for a, b, mu in criticality.pairwise_exponents([(p["N"], p["f_max"]) for p in peaks])]
    meta = _metadata(args, N=sizes, eta=bases[0].eta, g=args.g)
    return {"metadata": meta, "columns": ["N", "g_tilde", "qfi"], "rows": rows, "summary": summary}


def cmd_swcheck(args) -> dict:
    etas = parse_list(args.eta, float)
    if args.N > MAX_SW_BATH:
        raise ValidationError(f"swcheck supports N <= {MAX_SW_BATH}")
    args.g_scalar = args.g
    plist = [_params(args, eta=e) for e in etas]
    reports = _pmap(swmap.mapping_report, plist, args.threads)
    rows = [{"eta": r.eta, "residual_offdiag": r.residual_offdiag, "block_error": r.block_error}
            for r in reports]
    meta = _metadata(args, N=args.N, g_tilde=args.g, eta=etas)
    return {"metadata": meta, "columns": ["eta", "residual_offdiag", "block_error"], "rows": rows,
            "summary": {}}


COMMANDS = {"ground": cmd_ground, "dynamics": cmd_dynamics, "qfi": cmd_qfi, "swcheck": cmd_swcheck}


def _figure(args, dataset):
    from . import plotting

    title = f"{args.command} ({args.model})"
    rows = dataset["rows"]
    if args.command == "ground":
        plotting.plot_ground(rows, args.figure, title)
    elif args.command == "dynamics":
        plotting.plot_dynamics(rows, args.figure, dataset["summary"], title)
    elif args.command == "qfi":
        plotting.plot_qfi(rows, args.figure, title)
    else:
        plotting.plot_swcheck(rows, args.figure, title)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    if args.lam is None:
        args.lam = 1.0 if args.command == "qfi" else 0.0
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        dataset = COMMANDS[args.command](args)
    except (criticality.CriticalityError, dynamics.WindowError, squeezing.SqueezingError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render(dataset, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if args.figure:
        _figure(args, dataset)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
