"""Command-line front end.

    sik index    --config run.json [--out cert.json]
    sik spectrum --config run.json --out eigs.csv
    sik sweep    --config grid.json [--out sweep.csv] [--jobs k]
    sik validate

Configs are single JSON objects; see README for the schema.  Certificate
JSON is deterministic for a fixed config except for the timestamp field.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys

import numpy as np

from .certify import (
    Certificate,
    CertifyOptions,
    STATUS_CERTIFIED,
    STATUS_CONDITION_NOT_MET,
    STATUS_SPECTRA_TOUCH_AXIS,
    certified_index,
    exact_axis_split,
)
from .errors import ConfigError, NearSingularPencil
from .fourier_core import TrigPoly
from .lyapunov import solve_lyapunov_core
from .norms_estimates import estimate_triple_U
from .operator_assembly import (
    OperatorSpec,
    assemble_A,
    benilov_coefficients,
    constant_M,
)
from .oracle import validation_suite

_EXIT_BY_STATUS = {
    STATUS_CERTIFIED: 0,
    STATUS_CONDITION_NOT_MET: 2,
    STATUS_SPECTRA_TOUCH_AXIS: 3,
}

_OPTION_KEYS = {
    "max_N",
    "with_uinv",
    "N",
    "n_min",
    "max_iterations",
    "axis_tol",
    "pencil_tol",
    "residual_tol",
}


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}")


def _require_number(obj, key, positive=False):
    val = obj
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(key, "must be a number")
    if positive and not val > 0:
        raise ConfigError(key, "must be > 0")
    return float(val)


def _coeff_list(entries, key):
    if entries is None:
        return TrigPoly.zero()
    if not isinstance(entries, list):
        raise ConfigError(key, "must be a list of {mode, re, im} or {mode, value}")
    pairs = []
    for i, item in enumerate(entries):
        here = f"{key}[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(here, "must be an object")
        if "mode" not in item:
            raise ConfigError(f"{here}.mode", "missing")
        mode = item["mode"]
        if not isinstance(mode, int) or isinstance(mode, bool) or mode < 0:
            raise ConfigError(f"{here}.mode", "must be an integer >= 0")
        extra = set(item) - {"mode", "re", "im", "value"}
        if extra:
            raise ConfigError(f"{here}.{sorted(extra)[0]}", "unknown key")
        if "value" in item:
            if "re" in item or "im" in item:
                raise ConfigError(here, "give either value or re/im, not both")
            v = complex(_require_number(item["value"], f"{here}.value"))
        else:
            re = _require_number(item.get("re", 0.0), f"{here}.re")
            im = _require_number(item.get("im", 0.0), f"{here}.im")
            v = complex(re, im)
        if mode == 0 and v.imag != 0.0:
            raise ConfigError(f"{here}.im", "mode 0 must be real")
        pairs.append((mode, v))
    try:
        return TrigPoly.from_nonneg_modes(pairs)
    except ValueError as exc:
        raise ConfigError(key, str(exc))


def _spec_from_config(config) -> OperatorSpec:
    coeffs = config.get("coefficients")
    if not isinstance(coeffs, dict):
        raise ConfigError("coefficients", "missing or not an object")
    sources = [k for k in ("benilov", "fourier") if k in coeffs]
    extra = set(coeffs) - {"benilov", "fourier"}
    if extra:
        raise ConfigError(f"coefficients.{sorted(extra)[0]}", "unknown key")
    if len(sources) != 1:
        raise ConfigError(
            "coefficients", "exactly one of 'benilov' or 'fourier' is required"
        )
    if sources[0] == "benilov":
        ben = coeffs["benilov"]
        if not isinstance(ben, dict):
            raise ConfigError("coefficients.benilov", "must be an object")
        extra = set(ben) - {"alpha1", "alpha2", "alpha3"}
        if extra:
            raise ConfigError(
                f"coefficients.benilov.{sorted(extra)[0]}", "unknown key"
            )
        for k in ("alpha1", "alpha2", "alpha3"):
            if k not in ben:
                raise ConfigError(f"coefficients.benilov.{k}", "missing")
        a1 = _require_number(ben["alpha1"], "coefficients.benilov.alpha1")
        a2 = _require_number(ben["alpha2"], "coefficients.benilov.alpha2")
        a3 = _require_number(ben["alpha3"], "coefficients.benilov.alpha3", positive=True)
        return benilov_coefficients(a1, a2, a3)
    four = coeffs["fourier"]
    if not isinstance(four, dict):
        raise ConfigError("coefficients.fourier", "must be an object")
    extra = set(four) - {"a", "b", "c"}
    if extra:
        raise ConfigError(f"coefficients.fourier.{sorted(extra)[0]}", "unknown key")
    return OperatorSpec(
        a=_coeff_list(four.get("a"), "coefficients.fourier.a"),
        b=_coeff_list(four.get("b"), "coefficients.fourier.b"),
        c=_coeff_list(four.get("c"), "coefficients.fourier.c"),
    )


def _options_from_config(config):
    raw = config.get("options", {})
    if not isinstance(raw, dict):
        raise ConfigError("options", "must be an object")
    extra = set(raw) - _OPTION_KEYS
    if extra:
        raise ConfigError(f"options.{sorted(extra)[0]}", "unknown option")
    opts = CertifyOptions()
    if "max_N" in raw:
        opts.max_N = int(_require_number(raw["max_N"], "options.max_N", positive=True))
    if "n_min" in raw:
        opts.n_min = int(_require_number(raw["n_min"], "options.n_min", positive=True))
    if "max_iterations" in raw:
        opts.max_iterations = int(
            _require_number(raw["max_iterations"], "options.max_iterations", positive=True)
        )
    if "with_uinv" in raw:
        if not isinstance(raw["with_uinv"], bool):
            raise ConfigError("options.with_uinv", "must be a boolean")
        opts.with_uinv = raw["with_uinv"]
    if "axis_tol" in raw:
        opts.axis_rel_tol = _require_number(raw["axis_tol"], "options.axis_tol", positive=True)
    if "pencil_tol" in raw:
        opts.pencil_tol = _require_number(raw["pencil_tol"], "options.pencil_tol", positive=True)
    if "residual_tol" in raw:
        opts.residual_tol = _require_number(
            raw["residual_tol"], "options.residual_tol", positive=True
        )
    fixed_N = None
    if "N" in raw:
        fixed_N = int(_require_number(raw["N"], "options.N", positive=True))
    return opts, fixed_N


def _check_top_level(config):
    if not isinstance(config, dict):
        raise ConfigError("config", "top level must be a JSON object")
    extra = set(config) - {"coefficients", "options", "output", "grid"}
    if extra:
        raise ConfigError(sorted(extra)[0], "unknown top-level key")
    out = config.get("output")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output", "must be a string path")


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _certificate_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json_dict(), indent=2, sort_keys=True) + "\n"


def cmd_index(config_path, out_path=None) -> int:
    config = _load_json(config_path)
    _check_top_level(config)
    spec = _spec_from_config(config)
    opts, _ = _options_from_config(config)
    cert = certified_index(spec, opts)
    _write_text(out_path or config.get("output"), _certificate_json(cert))
    return _EXIT_BY_STATUS[cert.status]


def _sidecar_path(csv_path: str) -> str:
    if csv_path.endswith(".csv"):
        return csv_path[: -len(".csv")] + ".json"
    return csv_path + ".json"


def _suggested_cutoff(spec, N, M, opts):
    """Truncation order that condition 2 asks for, from a solve at N."""
    A_N = assemble_A(spec, N)
    keep, axis = exact_axis_split(A_N.entries)
    try:
        U_S, evs, residual, pair_min = solve_lyapunov_core(
            A_N.entries[np.ix_(keep, keep)],
            pencil_tol=opts.pencil_tol,
            residual_tol=opts.residual_tol,
        )
    except NearSingularPencil:
        return None
    from .lyapunov import LyapunovSolution, green_kernel
    from .fourier_core import Kernel2D

    n = 2 * N + 1
    U_full = np.zeros((n, n), dtype=complex)
    U_full[np.ix_(keep, keep)] = U_S
    K = U_full[:, ::-1] / (2.0 * math.pi) - green_kernel(N).as_kernel2d().coeffs
    if axis.size:
        K[axis, :] = 0.0
        K[:, (n - 1) - axis] = 0.0
    sol = LyapunovSolution(
        U=None, K=Kernel2D(K), residual=residual, N=N, eigenvalues=evs, pair_min=pair_min
    )
    try:
        tail = estimate_triple_U(sol, M)
    except Exception:
        return None
    return int(math.ceil(math.sqrt(M * (1.0 + math.sqrt(1.0 + M)) * tail.tripleU_upper)))


def cmd_spectrum(config_path, out_path=None) -> int:
    config = _load_json(config_path)
    _check_top_level(config)
    spec = _spec_from_config(config)
    opts, fixed_N = _options_from_config(config)
    out = out_path or config.get("output")
    if out is None:
        raise ConfigError("output", "spectrum requires an output path")

    exit_code = 0
    if fixed_N is not None:
        N = fixed_N
    else:
        cert = certified_index(spec, opts)
        N = cert.N_final
        exit_code = _EXIT_BY_STATUS[cert.status]

    M = constant_M(spec)
    eigs = np.linalg.eigvals(assemble_A(spec, N).entries)
    order = np.lexsort((eigs.imag, -eigs.real))
    lines = ["re,im"]
    for ev in eigs[order]:
        # plain python floats: numpy scalar repr would leak np.float64(...)
        lines.append(f"{float(ev.real)!r},{float(ev.imag)!r}")
    _write_text(out, "\n".join(lines) + "\n")

    meta = {"N": int(N), "M": M, "suggested_cutoff": _suggested_cutoff(spec, N, M, opts)}
    _write_text(_sidecar_path(out), json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return exit_code


def _grid_rows(config):
    grid = config.get("grid")
    if not isinstance(grid, dict):
        raise ConfigError("grid", "missing or not an object (required for sweep)")
    extra = set(grid) - {"alpha1", "alpha2", "alpha3"}
    if extra:
        raise ConfigError(f"grid.{sorted(extra)[0]}", "unknown key")
    axes = []
    for k in ("alpha1", "alpha2", "alpha3"):
        vals = grid.get(k, [])
        if not isinstance(vals, list):
            raise ConfigError(f"grid.{k}", "must be a list of numbers")
        axes.append([_require_number(v, f"grid.{k}[{i}]") for i, v in enumerate(vals)])
    rows = []
    for a1 in axes[0]:
        for a2 in axes[1]:
            for a3 in axes[2]:
                rows.append((a1, a2, a3))
    return rows


def _sweep_row(alphas, opts):
    a1, a2, a3 = alphas
    if not a3 > 0.0:
        return (a1, a2, a3, None, "config_error", None)
    try:
        cert = certified_index(benilov_coefficients(a1, a2, a3), opts)
        return (a1, a2, a3, cert.kappa_schur, cert.status, cert.N_final)
    except Exception as exc:  # never abort the sweep on one bad row
        return (a1, a2, a3, None, f"error:{type(exc).__name__}", None)


def cmd_sweep(config_path, out_path=None, jobs=1) -> int:
    config = _load_json(config_path)
    _check_top_level(config)
    opts, _ = _options_from_config(config)
    rows = _grid_rows(config)

    results = [None] * len(rows)
    if rows:
        workers = max(1, int(jobs))
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_sweep_row, alphas, opts): i for i, alphas in enumerate(rows)
            }
            for fut in concurrent.futures.as_completed(futures):
                results[futures[fut]] = fut.result()

    lines = ["alpha1,alpha2,alpha3,kappa,status,N_final"]
    for a1, a2, a3, kappa, status, n_final in results:
        kappa_s = "" if kappa is None else str(int(kappa))
        n_s = "" if n_final is None else str(int(n_final))
        lines.append(f"{a1!r},{a2!r},{a3!r},{kappa_s},{status},{n_s}")
    _write_text(out_path or config.get("output"), "\n".join(lines) + "\n")
    return 0


def cmd_validate() -> int:
    results = validation_suite()
    all_ok = True
    for item in results:
        flag = "PASS" if item["passed"] else "FAIL"
        print(f"{item['name']}: {flag} ({item['detail']})")
        all_ok = all_ok and item["passed"]
    return 0 if all_ok else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sik",
        description="Certified instability index of fourth-order periodic operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="run certification, write certificate JSON")
    p_index.add_argument("--config", required=True)
    p_index.add_argument("--out")

    p_spec = sub.add_parser("spectrum", help="dump truncated eigenvalues as CSV")
    p_spec.add_argument("--config", required=True)
    p_spec.add_argument("--out")

    p_sweep = sub.add_parser("sweep", help="certify over a parameter grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out")
    p_sweep.add_argument("--jobs", type=int, default=1)

    sub.add_parser("validate", help="run the built-in oracle cross-checks")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "index":
            return cmd_index(args.config, args.out)
        if args.command == "spectrum":
            return cmd_spectrum(args.config, args.out)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, jobs=args.jobs)
        if args.command == "validate":
            return cmd_validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
