"""Command-line surface: evaluate kernels and solutions, tabulate expansions,
and run the verification suites.

Outputs are machine-readable: CSV with a header row or JSON lines, with
floats serialized at full precision so files round-trip exactly.  Exit
codes: 0 all checks pass, 1 any failure, 2 inconclusive results only,
64 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .data import DATA_REGISTRY, make_data
from .errors import ModPoissonError
from .expansions import (
    AsymptoticExpansion,
    divergence_demo,
    exp_data_neumann_coefficient,
)
from .geometry import BoundaryPoint, HalfSpacePoint
from .kernels import (
    KernelParams,
    kernel_K,
    kernel_KM_direct,
    kernel_KM_second,
)
from .quadrature import (
    QuadratureSpec,
    dirichlet_D,
    dirichlet_DM,
    integral_F,
    integral_F_second,
    neumann_N,
    neumann_NM,
    solution_u,
    solution_v,
)
from .suites import SUITES, run_suite, suite_names

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_data_args(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        if not piece.strip():
            continue
        key, _, value = piece.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            parsed = float(value)
            if parsed.is_integer() and "." not in value and "e" not in value.lower():
                parsed = int(parsed)
        except ValueError:
            parsed = value
        out[key] = parsed
    return out


def _format_value(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit(rows: list[dict], out: str | None, fmt: str):
    if not rows:
        return
    if fmt == "jsonl":
        text = "\n".join(json.dumps(r) for r in rows) + "\n"
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    header = list(rows[0].keys())
    target = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(row[k]) for k in header])
    finally:
        if out:
            target.close()


def _spec_from_args(args) -> QuadratureSpec:
    return QuadratureSpec(
        truncation_radius=args.truncation_radius,
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
    )


def _grid_points(args):
    y_hat = np.asarray(_float_list(args.yhat), dtype=float) if args.yhat else None
    for r in _float_list(args.r):
        for theta in _float_list(args.theta):
            yield HalfSpacePoint(n=args.n, r=r, theta=theta, y_hat=y_hat)


def cmd_eval(args) -> int:
    spec = _spec_from_args(args)
    rows = []
    if args.kernel:
        if args.yprime is None:
            raise ModPoissonError("kernel evaluation needs --yprime")
        yp = BoundaryPoint(np.asarray(_float_list(args.yprime)))
        for x in _grid_points(args):
            if args.kernel == "K":
                value = kernel_K(args.lam, x, yp)
            elif args.kernel == "KM":
                value = kernel_KM_direct(KernelParams(args.lam, args.M), x, yp)
            else:
                value = kernel_KM_second(KernelParams(args.lam, args.M, "second"), x, yp)
            rows.append({
                "n": x.n, "r": x.r, "theta": x.theta, "kernel": args.kernel,
                "lam": args.lam, "M": args.M, "value": value, "error_estimate": 0.0,
            })
    else:
        data = make_data(args.data, args.n, **_parse_data_args(args.data_args))
        ops = {
            "D": lambda x: dirichlet_D(data, x, spec, return_estimate=True),
            "N": lambda x: neumann_N(data, x, spec, return_estimate=True),
            "DM": lambda x: dirichlet_DM(args.M, data, x, spec, return_estimate=True),
            "NM": lambda x: neumann_NM(args.M, data, x, spec, return_estimate=True),
            "u": lambda x: (solution_u(data, args.M, x, spec), spec.abs_tol),
            "v": lambda x: (solution_v(data, args.M, x, spec), spec.abs_tol),
            "F": lambda x: integral_F(KernelParams(args.lam, args.M), data, x, spec,
                                      return_estimate=True),
            "F2": lambda x: integral_F_second(
                KernelParams(args.lam, max(args.M, 1), "second"), data, x, spec,
                return_estimate=True),
        }
        op = ops[args.solution]
        for x in _grid_points(args):
            value, estimate = op(x)
            rows.append({
                "n": x.n, "r": x.r, "theta": x.theta, "target": args.solution,
                "data": data.name, "M": args.M, "value": value,
                "error_estimate": estimate,
            })
    _emit(rows, args.out, args.format)
    return 0


def cmd_expand(args) -> int:
    spec = _spec_from_args(args)
    rows = []
    if args.divergence is not None:
        terms = divergence_demo(args.n, args.radii_single, args.theta_single,
                                args.divergence, problem=args.problem)
        for k, magnitude in enumerate(terms):
            rows.append({"n": args.n, "r": args.radii_single,
                         "theta": args.theta_single, "k": k, "order": 2 * k,
                         "term_magnitude": float(magnitude)})
        _emit(rows, args.out, args.format)
        return 0
    data = make_data(args.data, args.n, **_parse_data_args(args.data_args))
    expansion = AsymptoticExpansion(args.problem, data, args.M, spec)
    thetas = _float_list(args.theta)
    radii = _float_list(args.radii) if args.radii else []
    for theta in thetas:
        for m in range(args.M):
            row = {"kind": "coefficient", "m": m, "theta": theta,
                   "value": expansion.coefficient(m, theta)}
            if args.closed_form and args.problem == "neumann" and args.data == "exp_decay":
                row["closed_form"] = exp_data_neumann_coefficient(args.n, m, theta)
            rows.append(row)
        for r in radii:
            x = HalfSpacePoint(n=args.n, r=r, theta=theta)
            partial = expansion.partial_sum(x)
            direct = expansion.direct(x)
            rows.append({"kind": "evaluation", "m": args.M, "theta": theta, "r": r,
                         "partial_sum": partial, "direct": direct,
                         "remainder": direct - partial})
    _emit(rows, args.out, args.format)
    return 0


def _run_one_suite(task):
    name, seed = task
    return name, [json.loads(r.as_json()) for r in run_suite(name, seed)]


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = dict(pool.map(_run_one_suite, [(n, args.seed) for n in names]))
        records = [rec for n in names for rec in results[n]]
    else:
        records = []
        for n in names:
            records.extend(json.loads(r.as_json()) for r in run_suite(n, args.seed))
    lines = [json.dumps(rec) for rec in records]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    for rec in records:
        status = "PASS" if rec["pass"] else ("INCONCLUSIVE" if rec["inconclusive"] else "FAIL")
        print(f"{status:12s} {rec['name']}  residual={rec['residual']:.3e} "
              f"tol={rec['tolerance']:.3e}")
    failed = [r for r in records if not r["pass"] and not r["inconclusive"]]
    inconclusive = [r for r in records if r["inconclusive"]]
    print(f"{len(records)} checks: {len(records) - len(failed) - len(inconclusive)} passed, "
          f"{len(failed)} failed, {len(inconclusive)} inconclusive")
    if failed:
        return 1
    if inconclusive:
        return 2
    return 0


def _apply_config(argv: list[str]) -> list[str]:
    """Prepend key=value pairs from --config FILE as long options."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        return argv
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            injected += [f"--{key.strip().replace('_', '-')}", value.strip()]
    rest = argv[:idx] + argv[idx + 2:]
    # injected defaults go first so explicit flags win
    return rest[:1] + injected + rest[1:]


def build_parser() -> _Parser:
    parser = _Parser(prog="modpoisson",
                     description="Half-space Poisson integrals: evaluation, "
                                 "expansion, and certification")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=3, help="ambient dimension (2-5)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-9)
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-9)
        p.add_argument("--truncation-radius", dest="truncation_radius",
                       type=float, default=None)
        p.add_argument("--config", default=None, help=argparse.SUPPRESS)

    p_eval = sub.add_parser("eval", help="evaluate kernels or solution integrals on a grid")
    common(p_eval)
    p_eval.add_argument("--kernel", choices=("K", "KM", "KM2"), default=None)
    p_eval.add_argument("--solution", choices=("D", "N", "DM", "NM", "u", "v", "F", "F2"),
                        default=None)
    p_eval.add_argument("--lam", type=float, default=1.5)
    p_eval.add_argument("--M", type=int, default=0)
    p_eval.add_argument("--r", default="1.0", help="comma list of radii")
    p_eval.add_argument("--theta", default="0.0", help="comma list of polar angles")
    p_eval.add_argument("--yhat", default=None, help="projection direction components")
    p_eval.add_argument("--yprime", default=None, help="boundary point components")
    p_eval.add_argument("--data", default=None, choices=sorted(DATA_REGISTRY))
    p_eval.add_argument("--data-args", dest="data_args", default=None,
                        help="comma list key=value for the data factory")

    p_exp = sub.add_parser("expand", help="asymptotic expansion tables")
    common(p_exp)
    p_exp.add_argument("--problem", choices=("dirichlet", "neumann"), default="neumann")
    p_exp.add_argument("--data", default="exp_decay", choices=sorted(DATA_REGISTRY))
    p_exp.add_argument("--data-args", dest="data_args", default=None)
    p_exp.add_argument("--M", type=int, default=2)
    p_exp.add_argument("--theta", default="0.0")
    p_exp.add_argument("--radii", default=None)
    p_exp.add_argument("--closed-form", dest="closed_form", action="store_true")
    p_exp.add_argument("--divergence", type=int, default=None,
                       help="emit term magnitudes up to this index instead")
    p_exp.add_argument("--r", dest="radii_single", type=float, default=10.0)
    p_exp.add_argument("--theta-at", dest="theta_single", type=float, default=0.0)

    p_ver = sub.add_parser("verify", help="run a certification suite")
    common(p_ver)
    p_ver.add_argument("--suite", choices=suite_names(), default="all")
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--jobs", type=int,
                       default=int(os.environ.get("MODPOISSON_JOBS", "1")))
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            if bool(args.kernel) == bool(args.solution):
                parser.error("eval needs exactly one of --kernel or --solution")
            return cmd_eval(args)
        if args.command == "expand":
            return cmd_expand(args)
        return cmd_verify(args)
    except ModPoissonError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
