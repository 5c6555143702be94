"""Command-line entry point.

Subcommands
    constants          S/T constants per method, sign facts, cross-agreement
    verify-modulus     representation routes vs the theta-integral oracle
    scan               positivity scan of the represented 2|xi|^2
    coeffs             power-series table with sign/bound checks
    montecarlo         E[cos(t X)] sampling vs quadrature and the closed bound
    autocorr           autocorrelation table and first-zero scan
    reproduce-appendix fixed-truncation reproduction of the published constants
    selftest           reduced-grid invariant suite

Exit codes: 0 all checks pass; 1 a mathematical check failed (evidence in the
report); 2 numerical/convergence failure or indeterminate; 3 usage error.
Reports serialize floats with 17 significant digits so JSON round-trips binary64
exactly, and repeated runs with one seed are byte-identical up to `timestamp`.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .config import DEFAULT_CONFIG, EvalConfig, config_from_mapping, parse_config_text
from .errors import ConvergenceError, DomainError, EvaluationError
from .inequality import (autocorrelation_A, mc_check, mm_bound,
                         orthogonalization_scan, scan_inequality)
from .modulus import (S_T_constants, a_coeff, modulus_rhs, modulus_rhs_via_J,
                      power_series_coeffs)
from .theta import J_tau, theta_G, theta_H
from .quadrature import integrate_finite, integrate_oscillatory_cos
from .xi import xi, xi_mod_sq, xi_mod_sq_via_U, xi_real

_EXIT_PASS, _EXIT_FAIL, _EXIT_NUMERIC, _EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(_EXIT_USAGE)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _to_json(obj, out: list) -> None:
    """Minimal serializer: floats rendered with 17 significant digits."""
    if isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _to_json(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _to_json(v, out)
        out.append("]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, float):
        out.append(_fmt(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif obj is None:
        out.append("null")
    else:
        out.append(json.dumps(str(obj)))


def render_json(obj) -> str:
    out: list = []
    _to_json(obj, out)
    return "".join(out) + "\n"


def render_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) if isinstance(row[c], float) else row[c]
                         for c in columns])
    return buf.getvalue()


def _report(command: str, inputs: dict, outputs: dict, status: str) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "status": status,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S+00:00", time.gmtime()),
        "library_version": __version__,
    }


def _emit(args, report: dict, rows: list, columns: list) -> None:
    text = render_csv(rows, columns) if args.format == "csv" else render_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(text: str) -> list:
    return [float(part) for part in text.split(",") if part.strip()]


def _parallel_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))   # deterministic submission order


def _status_exit(status: str) -> int:
    return {"pass": _EXIT_PASS, "fail": _EXIT_FAIL}.get(status, _EXIT_NUMERIC)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_constants(args, cfg: EvalConfig) -> int:
    sigmas = _floats(args.sigma)
    if args.paper_truncation:
        methods = {"B": ["B_series"], "C": ["C_inversion"]}[args.paper_truncation]
    elif args.method == "all":
        methods = ["A_direct", "B_series", "C_inversion"]
    else:
        methods = [args.method]

    rows = []
    agree_ok = True
    signs_ok = True
    for sigma in sigmas:
        values = {}
        for method in methods:
            rep = S_T_constants(sigma, method, cfg,
                                paper_truncation=bool(args.paper_truncation))
            values[method] = (rep.s_value, rep.t_value)
            rows.append({
                "sigma": sigma, "method": method,
                "paper_truncation": bool(args.paper_truncation),
                "S": rep.s_value, "T": rep.t_value, "err_est": rep.err_est,
                "truncation": json.dumps(rep.truncation),
            })
        if 0.5 < sigma < 1.0 and not args.paper_truncation:
            s_val, t_val = next(iter(values.values()))
            signs_ok &= s_val > 0.0 and t_val < 0.0 and s_val + 0.25 * t_val > 0.0
        if len(values) > 1:
            (s0, t0), *rest = values.values()
            for s1, t1 in rest:
                agree_ok &= abs(s1 - s0) <= 1e-6 * abs(s0)
                agree_ok &= abs(t1 - t0) <= 1e-6 * abs(t0)

    status = "pass" if (agree_ok and signs_ok) else "fail"
    outputs = {"rows": rows, "sign_facts_ok": signs_ok, "methods_agree": agree_ok}
    report = _report("constants", {"sigma": sigmas, "methods": methods,
                                   "paper_truncation": args.paper_truncation}, outputs, status)
    _emit(args, report, rows,
          ["sigma", "method", "paper_truncation", "S", "T", "err_est", "truncation"])
    return _status_exit(status)


def cmd_verify_modulus(args, cfg: EvalConfig) -> int:
    sigmas = _floats(args.sigma)
    ts = _floats(args.t_list)

    def one(cell):
        sigma, t = cell
        oracle = xi_mod_sq(sigma, t, cfg)
        scale = max(xi_real(sigma, cfg) ** 2, oracle)
        rep = modulus_rhs(sigma, t, cfg)
        j_route = 0.5 * modulus_rhs_via_J(sigma - 0.5, t, cfg)
        return {
            "sigma": sigma, "t": t, "oracle": oracle,
            "representation": rep, "J_eta_route": j_route,
            "rel_err": abs(rep - oracle) / scale,
            "rel_err_J": abs(j_route - oracle) / scale,
        }

    cells = [(sigma, t) for sigma in sigmas for t in ts]
    rows = _parallel_map(one, cells, args.threads)
    worst = max(row["rel_err"] for row in rows)
    worst_j = max(row["rel_err_J"] for row in rows)
    status = "pass" if (worst <= 1e-6 and worst_j <= 1e-5) else "fail"
    report = _report("verify-modulus",
                     {"sigma": sigmas, "t": ts},
                     {"rows": rows, "max_rel_err": worst, "max_rel_err_J": worst_j},
                     status)
    _emit(args, report, rows,
          ["sigma", "t", "oracle", "representation", "J_eta_route", "rel_err", "rel_err_J"])
    return _status_exit(status)


def cmd_scan(args, cfg: EvalConfig) -> int:
    sigmas = _floats(args.sigma)
    rows = []
    status = "pass"
    summaries = []
    for sigma in sigmas:
        rep = scan_inequality(sigma, args.t_max, args.step, args.route, cfg)
        for t, v in zip(rep.grid, rep.values):
            rows.append({"sigma": sigma, "t": t, "value": v})
        summaries.append({
            "sigma": sigma, "min_value": rep.min_value, "min_t": rep.min_t,
            "violations": rep.violations, "indeterminate": rep.indeterminate,
            "err_est": rep.err_est,
        })
        if rep.violations:
            status = "fail"          # a certified nonpositive value is major news
        elif rep.indeterminate and status == "pass":
            status = "indeterminate"
    report = _report("scan", {"sigma": sigmas, "t_max": args.t_max,
                              "step": args.step, "route": args.route},
                     {"rows": rows, "summaries": summaries}, status)
    _emit(args, report, rows, ["sigma", "t", "value"])
    return _status_exit(status)


def cmd_coeffs(args, cfg: EvalConfig) -> int:
    sigma = _floats(args.sigma)[0]
    tau = sigma - 0.5
    series = power_series_coeffs(sigma, args.kmax, cfg)
    rows = []
    ok = True
    for k, c in enumerate(series.coeffs):
        sign_ok = (c > 0.0) if k % 2 == 0 else (c < 0.0)
        bound = 48.0 * math.pi ** 8 * (math.exp(15.0) * 3.0 ** (2 * k + 1)
                                       + math.factorial(k)) / math.factorial(2 * k)
        bound_ok = abs(c) <= bound
        a_k = a_coeff(tau, k, cfg)
        ok &= sign_ok and bound_ok and a_k > 0.0
        rows.append({"k": k, "a": a_k, "c": c, "sign_ok": sign_ok,
                     "bound": bound, "bound_ok": bound_ok})
    partial = sum(c * args.t_check ** (2 * k) for k, c in enumerate(series.coeffs))
    oracle = xi_mod_sq(sigma, args.t_check, cfg)
    match = abs(partial - oracle) <= 1e-5 * abs(oracle)
    ok &= match
    status = "pass" if ok else "fail"
    report = _report("coeffs", {"sigma": sigma, "kmax": args.kmax,
                                "t_check": args.t_check},
                     {"rows": rows, "partial_sum_at_t_check": partial,
                      "oracle_at_t_check": oracle, "partial_sum_matches": match},
                     status)
    _emit(args, report, rows, ["k", "a", "c", "sign_ok", "bound", "bound_ok"])
    return _status_exit(status)


def cmd_montecarlo(args, cfg: EvalConfig) -> int:
    sigma = _floats(args.sigma)[0]
    rows = []
    ok = True
    for t in _floats(args.t_list):
        rep = mc_check(sigma, t, args.samples, args.seed, cfg)
        bound = mm_bound(sigma, t, cfg)
        within = abs(rep.estimate - rep.deterministic_value) <= 4.0 * max(rep.std_error, 1e-12)
        holds = rep.estimate > bound
        ok &= within and holds
        rows.append({
            "sigma": sigma, "t": t, "estimate": rep.estimate,
            "std_error": rep.std_error, "deterministic": rep.deterministic_value,
            "bound_rhs": bound, "within_4se": within, "inequality_holds": holds,
            "acceptance_rate": rep.acceptance_rate, "seed": rep.seed,
            "n_samples": rep.n_samples,
        })
    status = "pass" if ok else "fail"
    report = _report("montecarlo", {"sigma": sigma, "t": _floats(args.t_list),
                                    "samples": args.samples, "seed": args.seed},
                     {"rows": rows}, status)
    _emit(args, report, rows,
          ["sigma", "t", "estimate", "std_error", "deterministic", "bound_rhs",
           "within_4se", "inequality_holds", "acceptance_rate", "seed", "n_samples"])
    return _status_exit(status)


def cmd_autocorr(args, cfg: EvalConfig) -> int:
    sigma = _floats(args.sigma)[0]
    n = int(math.floor(args.t_max / args.step + 1e-9))
    grid = [k * args.step for k in range(n + 1)]
    values = _parallel_map(lambda t: autocorrelation_A(sigma, t, cfg), grid,
                           args.threads)
    rows = [{"sigma": sigma, "t": t, "A": v} for t, v in zip(grid, values)]
    scan = orthogonalization_scan(sigma, args.t_max, args.step, cfg)
    a0_ok = abs(values[0] - 1.0) <= 1e-12
    bounded = all(abs(v) <= 1.0 + 1e-9 for v in values)
    status = "pass" if (a0_ok and bounded and scan["iota_found"] is None) else "fail"
    report = _report("autocorr", {"sigma": sigma, "t_max": args.t_max,
                                  "step": args.step},
                     {"rows": rows, "zero_scan": scan, "a0_is_one": a0_ok,
                      "bounded_by_one": bounded}, status)
    _emit(args, report, rows, ["sigma", "t", "A"])
    return _status_exit(status)


_PUBLISHED = {
    "B": {"S": 0.473929, "T": -0.0218449},
    "C": {"S": 0.38952, "T": -0.0232205},
}


def cmd_reproduce_appendix(args, cfg: EvalConfig) -> int:
    rows = []
    ok = True
    for label, method in (("B", "B_series"), ("C", "C_inversion")):
        rep = S_T_constants(0.75, method, cfg, paper_truncation=True)
        for name, got in (("S", rep.s_value), ("T", rep.t_value)):
            want = _PUBLISHED[label][name]
            rel = abs(got - want) / abs(want)
            ok &= rel <= 1e-4
            rows.append({"recipe": label, "constant": name, "computed": got,
                         "published": want, "rel_err": rel,
                         "matches_1e4": rel <= 1e-4,
                         "truncation": json.dumps(rep.truncation)})
    status = "pass" if ok else "fail"
    report = _report("reproduce-appendix", {"sigma": 0.75},
                     {"rows": rows}, status)
    _emit(args, report, rows,
          ["recipe", "constant", "computed", "published", "rel_err",
           "matches_1e4", "truncation"])
    return _status_exit(status)


def cmd_selftest(args, cfg: EvalConfig) -> int:
    checks = []

    def check(name, ok, detail):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    r = integrate_finite(lambda x: x * x, 0.0, 1.0, cfg)
    check("quad_poly", abs(r.value - 1.0 / 3.0) < 1e-13, r.value)
    r = integrate_finite(math.sin, 0.0, math.pi, cfg)
    check("quad_sin", abs(r.value - 2.0) < 1e-12, r.value)
    r = integrate_oscillatory_cos(lambda x: math.exp(-x), 3.0, 0.0, 1.0, cfg)
    check("quad_osc", abs(r.value - 0.1) < 1e-11, r.value)

    for y in (0.3, 2.0):
        lhs, rhs = theta_G(y, cfg), theta_G(1.0 / y, cfg) / y
        check(f"theta_G_inversion_{y}", abs(lhs - rhs) <= 1e-12 * abs(lhs), lhs - rhs)
        lhs, rhs = theta_H(y, cfg), theta_H(1.0 / y, cfg) / y
        check(f"theta_H_inversion_{y}", abs(lhs - rhs) <= 1e-12 * abs(lhs), lhs - rhs)

    d = J_tau(0.25, 1.0, 0, cfg) - J_tau(0.25, 1.0, 0, cfg, naive=True)
    check("J_divisor_vs_naive", abs(d) < 1e-13, d)

    reps = {m: S_T_constants(0.75, m, cfg) for m in ("A_direct", "B_series", "C_inversion")}
    s_vals = [r.s_value for r in reps.values()]
    t_vals = [r.t_value for r in reps.values()]
    agree = (max(s_vals) - min(s_vals) <= 1e-6 * abs(s_vals[0])
             and max(t_vals) - min(t_vals) <= 1e-6 * abs(t_vals[0]))
    check("constants_three_way", agree, {"S": s_vals, "T": t_vals})

    for t in (0.0, 5.0):
        rep, oracle = modulus_rhs(0.75, t, cfg), xi_mod_sq(0.75, t, cfg)
        scale = max(xi_real(0.75, cfg) ** 2, oracle)
        check(f"modulus_identity_t{t}", abs(rep - oracle) <= 1e-6 * scale, rep - oracle)
    u_route = xi_mod_sq_via_U(0.75, 5.0, cfg)
    oracle = xi_mod_sq(0.75, 5.0, cfg)
    check("correlation_route_t5", abs(u_route - oracle) <= 1e-6 * abs(oracle),
          u_route - oracle)

    check("xi_symmetry", abs(xi(complex(0.3, 2.0), cfg) - xi(complex(0.7, -2.0), cfg)) < 1e-12, None)
    a0 = autocorrelation_A(0.75, 0.0, cfg)
    check("autocorr_at_0", abs(a0 - 1.0) < 1e-12, a0)

    ok = all(c["ok"] for c in checks)
    status = "pass" if ok else "fail"
    report = _report("selftest", {}, {"checks": checks}, status)
    _emit(args, report, checks, ["name", "ok", "detail"])
    return _status_exit(status)


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _add_common(sub, **defaults):
    sub.add_argument("--sigma", default=defaults.get("sigma", "0.75"),
                     help="sigma value or comma list")
    sub.add_argument("--tau", type=float, default=None, help="tau (= sigma - 1/2)")
    sub.add_argument("--t-max", dest="t_max", type=float,
                     default=defaults.get("t_max", 20.0))
    sub.add_argument("--step", type=float, default=defaults.get("step", 0.25))
    sub.add_argument("--method", default=defaults.get("method", "all"),
                     choices=["A_direct", "B_series", "C_inversion", "all"])
    sub.add_argument("--seed", type=int, default=12345)
    sub.add_argument("--samples", type=int, default=100_000)
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", default="json", choices=["csv", "json"])
    sub.add_argument("--config", default=None, help="flat key=value config file")
    sub.add_argument("--paper-truncation", dest="paper_truncation", default=None,
                     choices=["B", "C"], help="use a published fixed-truncation recipe")
    sub.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def build_parser() -> _Parser:
    parser = _Parser(prog="xi-ineq", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser("constants", help="S/T constants per method"))
    p = subs.add_parser("verify-modulus", help="representation vs oracle")
    _add_common(p, sigma="0.6,0.75")
    p.add_argument("--t-list", dest="t_list", default="0,1,5,10")
    p = subs.add_parser("scan", help="positivity scan")
    _add_common(p)
    p.add_argument("--route", default="representation",
                   choices=["representation", "J_eta"])
    p = subs.add_parser("coeffs", help="power-series coefficients")
    _add_common(p)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--t-check", dest="t_check", type=float, default=1.0)
    p = subs.add_parser("montecarlo", help="expectation inequality, sampled")
    _add_common(p)
    p.add_argument("--t-list", dest="t_list", default="1,5,10")
    _add_common(subs.add_parser("autocorr", help="autocorrelation + zero scan"),
                t_max=30.0, step=0.5)
    _add_common(subs.add_parser("reproduce-appendix",
                                help="published fixed-truncation constants"))
    _add_common(subs.add_parser("selftest", help="reduced invariant suite"))
    return parser


_COMMANDS = {
    "constants": cmd_constants,
    "verify-modulus": cmd_verify_modulus,
    "scan": cmd_scan,
    "coeffs": cmd_coeffs,
    "montecarlo": cmd_montecarlo,
    "autocorr": cmd_autocorr,
    "reproduce-appendix": cmd_reproduce_appendix,
    "selftest": cmd_selftest,
}


def _load_eval_config(args) -> EvalConfig:
    path = args.config or os.environ.get("XI_INEQ_CONFIG")
    if not path:
        return DEFAULT_CONFIG
    with open(path, "r", encoding="utf-8") as fh:
        mapping = parse_config_text(fh.read())
    return config_from_mapping(mapping)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_eval_config(args)
    except (OSError, ValueError) as exc:
        print(f"xi-ineq: config error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, cfg)
    except (ConvergenceError, EvaluationError) as exc:
        print(f"xi-ineq: numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    except DomainError as exc:
        print(f"xi-ineq: domain error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
