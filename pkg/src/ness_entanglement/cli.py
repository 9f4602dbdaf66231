"""Command-line front end.

Subcommands: covariance, entangle, critical, sweep, common-bath,
validate-regimes. Parameters come from ``--config file.json``, then
``--fixed k=v,...``, then the individual flags (later sources win).
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import covariance as cov
from . import critical as crit
from .common_bath import common_bath_series, sdr_scan
from .entanglement import report
from .errors import NessError, NumericalError, RegimeWarning, ValidationError
from .io import dumps, to_csv
from .model import ALIASES, FIELDS, SystemParams, parse_float, validate
from .spectral import ELEMENTS

METHODS = {
    "numeric": None,
    "high": cov.high_temperature,
    "zero": cov.zero_temperature,
    "low": cov.low_temperature,
}
ELEMENT_FIELDS = [f"V{i}{j}" for i, j in ELEMENTS]
REPORT_FIELDS = ["zeta_plus", "zeta_minus", "det_C", "eta_less", "eta_greater", "negativity",
                 "log_negativity", "entangled"]
FIELD_GROUPS = {
    "covariance": ELEMENT_FIELDS,
    "zeta": ["zeta_plus", "zeta_minus", "det_C"],
    "eta": ["eta_less", "eta_greater"],
    "measures": ["negativity", "log_negativity", "entangled"],
    "all": ELEMENT_FIELDS + REPORT_FIELDS,
}


class CliError(ValidationError):
    pass


def parse_assignments(text: str) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise CliError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def collect_params(args, defaults=None) -> SystemParams:
    raw = dict(defaults or {})
    if args.config:
        with open(args.config) as fh:
            raw.update(json.load(fh))
    if args.fixed:
        raw.update(parse_assignments(args.fixed))
    for name in ("m", "omega", "sigma", "gamma", "lambda_cutoff", "beta", "beta1", "beta2"):
        v = getattr(args, name, None)
        if v is not None:
            raw[name] = v
    # a plain 'beta' sets both baths unless one is given explicitly
    if "beta" in raw:
        b = raw.pop("beta")
        raw.setdefault("beta1", b)
        raw.setdefault("beta2", b)
    return SystemParams.from_mapping(raw)


def covariance_for(p: SystemParams, method: str, tol: float | None) -> cov.CovarianceMatrix:
    if method == "numeric":
        q = cov.QuadratureOptions(rtol=tol) if tol else None
        return cov.steady_state_numeric(p, q)
    return METHODS[method](p)


def evaluate_point(p: SystemParams, method: str, tol: float | None) -> dict:
    V = covariance_for(p, method, tol)
    rec = V.elements()
    rec.update(report(V).to_dict())
    return rec


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _record_output(args, record: dict, columns: list[str], header: dict):
    if args.format == "json":
        _emit(dumps(record) + "\n", args.out)
    else:
        _emit(to_csv([record], columns, header), args.out)


def _params_record(p: SystemParams) -> dict:
    return {k: getattr(p, k) for k in FIELDS}


def cmd_covariance(args):
    p = collect_params(args)
    V = covariance_for(p, args.method, args.tol)
    rec = {"params": _params_record(p), "method": args.method, **V.to_dict()}
    if args.format == "json":
        _emit(dumps(rec) + "\n", args.out)
    else:
        row = {**_params_record(p), **V.elements()}
        _emit(to_csv([row], list(FIELDS) + ELEMENT_FIELDS, {"command": "covariance", "method": args.method}), args.out)


def cmd_entangle(args):
    p = collect_params(args)
    V = covariance_for(p, args.method, args.tol)
    rec = report(V).to_dict()
    if args.format == "json":
        _emit(dumps({"params": _params_record(p), "method": args.method, **rec}) + "\n", args.out)
    else:
        _emit(to_csv([{**_params_record(p), **rec}], list(FIELDS) + REPORT_FIELDS,
                     {"command": "entangle", "method": args.method}), args.out)


def cmd_critical(args):
    defaults = {"sigma": 0.0} if args.kind == "sigma" else {}
    p = collect_params(args, defaults)
    validate(p)
    q = cov.QuadratureOptions(rtol=args.tol) if args.tol else None
    if args.kind == "sigma":
        res = crit.critical_sigma(p, q).to_dict()
    elif args.kind == "beta":
        r = crit.critical_beta(p, q)
        res = r.to_dict()
        res["quick_estimate"] = crit.beta_c_quick_estimate(p.omega, p.sigma)
    elif args.kind == "beta-lowT":
        v = crit.critical_beta_lowT(p)
        res = {"kind": "beta_lowT", "value": v, "asymptotic": None, "discrepancy": None,
               "residual": None, "iterations": 0}
    else:
        lo = args.bracket_low
        res = crit.critical_cutoff(p, (lo, args.bracket_high), q).to_dict()
    res = {k: res.get(k) for k in ("kind", "value", "asymptotic", "discrepancy", "residual", "iterations",
                                  "bracket", "quick_estimate") if k in res}
    if args.format == "json":
        _emit(dumps({"params": _params_record(p), **res}) + "\n", args.out)
    else:
        cols = ["kind", "value", "asymptotic", "discrepancy", "residual", "iterations"]
        _emit(to_csv([res], cols, {"command": "critical", "params": _params_record(p)}), args.out)


def parse_axis(spec: str):
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise CliError(f"axis must be name:min:max:count[:lin|log], got {spec!r}")
    name = ALIASES.get(parts[0], parts[0])
    if name not in FIELDS and name != "beta":
        raise CliError(f"unknown sweep parameter {parts[0]!r}")
    lo, hi = parse_float(parts[1]), parse_float(parts[2])
    try:
        count = int(parts[3])
    except ValueError:
        raise CliError(f"axis count must be an integer: {parts[3]!r}") from None
    if count < 2:
        raise CliError("axis count must be at least 2")
    scale = parts[4] if len(parts) == 5 else "lin"
    if scale == "log":
        if lo <= 0 or hi <= 0:
            raise CliError("log axis needs positive bounds")
        values = np.geomspace(lo, hi, count)
    elif scale == "lin":
        values = np.linspace(lo, hi, count)
    else:
        raise CliError(f"axis scale must be lin or log, got {scale!r}")
    return name, [float(v) for v in values]


def _sweep_point(task):
    p, method, tol = task
    try:
        validate(p, closed_form=method != "numeric")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            rec = evaluate_point(p, method, tol)
        rec["error"] = ""
    except NessError as e:
        rec = {"error": type(e).__name__}
    return rec


def worker_count() -> int:
    env = os.environ.get("NESS_THREADS")
    n = os.cpu_count() or 1
    if env:
        try:
            n = max(1, min(n, int(env)))
        except ValueError:
            raise CliError(f"NESS_THREADS must be an integer, got {env!r}") from None
    return n


def run_sweep(base: SystemParams, axes, method: str, tol: float | None, workers: int = 1):
    names = [a[0] for a in axes]
    grids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    points = list(zip(*[g.ravel() for g in grids]))
    tasks = [(base.with_(**dict(zip(names, pt))), method, tol) for pt in points]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_sweep_point(t) for t in tasks]
    rows = []
    for (p, _, _), rec in zip(tasks, results):
        rows.append({**_params_record(p), **rec})
    return rows


def _fields(text: str | None) -> list[str]:
    if not text:
        return FIELD_GROUPS["all"]
    out = []
    for f in text.split(","):
        f = f.strip()
        for x in FIELD_GROUPS.get(f, [f]):
            if x not in FIELD_GROUPS["all"]:
                raise CliError(f"unknown output field {x!r}")
            if x not in out:
                out.append(x)
    return out


def cmd_sweep(args):
    axes = [parse_axis(args.x)] + ([parse_axis(args.y)] if args.y else [])
    fill = {}
    for name, values in axes:
        if name == "beta":
            fill["beta1"] = fill["beta2"] = values[0]
        else:
            fill[name] = values[0]
    raw = {}
    if args.config:
        with open(args.config) as fh:
            raw.update(json.load(fh))
    if args.fixed:
        raw.update(parse_assignments(args.fixed))
    for k, v in fill.items():
        raw.setdefault(k, v)
    if "beta" in raw:
        b = raw.pop("beta")
        raw.setdefault("beta1", b)
        raw.setdefault("beta2", b)
    base = SystemParams.from_mapping(raw)
    fields = _fields(args.fields)
    rows = run_sweep(base, axes, args.method, args.tol, worker_count())
    header = {
        "command": "sweep",
        "axes": [{"name": n, "values": v} for n, v in axes],
        "fixed": _params_record(base),
        "method": args.method,
        "tol": args.tol,
        "fields": fields,
    }
    if args.format == "json":
        _emit(dumps({"config": header, "rows": [{k: r.get(k) for k in list(FIELDS) + fields + ["error"]} for r in rows]}) + "\n", args.out)
    else:
        comments = [] if args.no_timestamp else [f"generated: {datetime.datetime.now(datetime.timezone.utc).isoformat()}"]
        _emit(to_csv(rows, list(FIELDS) + fields + ["error"], header, comments), args.out)
    bad = sum(1 for r in rows if r["error"])
    if bad and not args.quiet:
        print(f"{bad} of {len(rows)} grid points rejected", file=sys.stderr)


def cmd_common_bath(args):
    p = collect_params(args)
    if args.sdr:
        scan = sdr_scan(p, (0.0, args.t_max), args.width)
        rec = {"params": _params_record(p), "width": args.width, "sdr": scan.sdr,
               "intervals": [{"start": a, "end": b, "entangled": e} for a, b, e in scan.intervals]}
        _emit(dumps(rec) + "\n", args.out)
        return
    t, intr, ind = common_bath_series(p, args.t_max, args.width)
    idx = np.unique(np.linspace(0, t.size - 1, args.samples).round().astype(int))
    rows = []
    for k in idx:
        V = cov.CovarianceMatrix(intr[k] + ind[k])
        r = report(V)
        rows.append({"t": t[k], **V.elements(), "eta_less": r.pair.eta_less, "entangled": r.entangled})
    cols = ["t"] + ELEMENT_FIELDS + ["eta_less", "entangled"]
    if args.format == "json":
        _emit(dumps({"params": _params_record(p), "width": args.width, "rows": rows}) + "\n", args.out)
    else:
        _emit(to_csv(rows, cols, {"command": "common-bath", "params": _params_record(p), "width": args.width}), args.out)


REGIME_ELEMENTS = [(1, 1), (1, 3), (2, 2), (2, 4)]


def regime_table(p: SystemParams, beta_omegas, tol=None) -> list[dict]:
    rows = []
    for bw in beta_omegas:
        q = p.with_(beta=bw / p.omega)
        V = covariance_for(q, "numeric", tol)
        candidates = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            if q.beta1 * q.lambda_cutoff >= 1:
                candidates.append(("high", cov.high_temperature(q)))
                candidates.append(("high_without_cutoff_term", cov.high_temperature(q, cutoff_term=False)))
            candidates.append(("low", cov.low_temperature(q)))
        for name, C in candidates:
            for ij in REGIME_ELEMENTS:
                if name == "high_without_cutoff_term" and ij not in ((2, 2),):
                    continue
                num, cf = V[ij], C[ij]
                rows.append({"beta_omega": bw, "regime": name, "element": f"V{ij[0]}{ij[1]}",
                             "closed_form": cf, "numeric": num,
                             "relative_discrepancy": (cf - num) / num if num else float("nan")})
    return rows


def cmd_validate_regimes(args):
    p = collect_params(args, {"beta": "inf"})
    validate(p, closed_form=True)
    bws = [parse_float(x) for x in args.beta_omega.split(",")]
    rows = regime_table(p, bws, args.tol)
    cols = ["beta_omega", "regime", "element", "closed_form", "numeric", "relative_discrepancy"]
    if args.format == "json":
        _emit(dumps({"params": _params_record(p), "rows": rows}) + "\n", args.out)
    else:
        _emit(to_csv(rows, cols, {"command": "validate-regimes", "params": _params_record(p)}), args.out)


def _common(sp, fmt_default="json"):
    sp.add_argument("--config", help="JSON file with parameter values")
    sp.add_argument("--fixed", help="comma-separated key=value parameter list")
    sp.add_argument("--out", help="write output to this path instead of stdout")
    sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    sp.add_argument("--tol", type=float, help="relative quadrature tolerance")
    sp.add_argument("--quiet", action="store_true")


def _param_flags(sp):
    sp.add_argument("--m", type=parse_float)
    sp.add_argument("--omega", type=parse_float)
    sp.add_argument("--sigma", type=parse_float)
    sp.add_argument("--gamma", type=parse_float)
    sp.add_argument("--lambda", "--cutoff", dest="lambda_cutoff", type=parse_float)
    sp.add_argument("--beta", type=parse_float, help="inverse temperature of both baths ('inf' for zero)")
    sp.add_argument("--beta1", type=parse_float)
    sp.add_argument("--beta2", type=parse_float)


class _Parser(argparse.ArgumentParser):
    # bad flags are a validation failure: exit 1 with a JSON error like the rest
    def error(self, message):
        print(json.dumps({"error": "UsageError", "message": f"{self.prog}: {message}"}), file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ness-entangle", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, text in (("covariance", cmd_covariance, "steady-state covariance matrix"),
                           ("entangle", cmd_entangle, "separability criteria and entanglement measures")):
        sp = sub.add_parser(name, help=text)
        _common(sp)
        _param_flags(sp)
        sp.add_argument("--method", choices=tuple(METHODS), default="numeric")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("critical", help="critical coupling, temperature or cutoff")
    sp.add_argument("kind", choices=("sigma", "beta", "beta-lowT", "cutoff"))
    _common(sp)
    _param_flags(sp)
    sp.add_argument("--bracket-low", type=parse_float, default=None)
    sp.add_argument("--bracket-high", type=parse_float, default=1e300)
    sp.set_defaults(func=cmd_critical)

    sp = sub.add_parser("sweep", help="evaluate a one- or two-parameter grid")
    _common(sp, "csv")
    sp.add_argument("--x", required=True, help="name:min:max:count[:lin|log]")
    sp.add_argument("--y", help="second axis, same syntax")
    sp.add_argument("--fields", help="output columns or groups (covariance, zeta, eta, measures, all)")
    sp.add_argument("--method", choices=tuple(METHODS), default="numeric")
    sp.add_argument("--no-timestamp", action="store_true", help="omit the generation-time comment line")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("common-bath", help="time evolution with a shared bath")
    _common(sp, "csv")
    _param_flags(sp)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--width", type=float, default=0.3, help="initial packet width")
    sp.add_argument("--samples", type=int, default=201, help="number of output time points")
    sp.add_argument("--sdr", action="store_true", help="report entangled intervals instead of the series")
    sp.set_defaults(func=cmd_common_bath)

    sp = sub.add_parser("validate-regimes", help="closed forms against quadrature")
    _common(sp, "csv")
    _param_flags(sp)
    sp.add_argument("--beta-omega", default="0.05,0.1,1,5,10,20")
    sp.set_defaults(func=cmd_validate_regimes)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        with warnings.catch_warnings():
            if args.quiet:
                warnings.simplefilter("ignore", RegimeWarning)
            args.func(args)
    except NumericalError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 2
    except (ValidationError, ValueError, OSError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
