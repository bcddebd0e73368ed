"""Command-line front end: ``python -m twoslope <subcommand> [flags]``.

Output goes to stdout as JSON (default) or CSV with floats at 17 significant
digits.  Exit status is 0 on success, 2 on invalid input and 3 when the
requested accuracy cannot be certified.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from . import __version__
from .asymptotics import DEFAULT_DELTAS, extremal_limits, mantissa_result, ratio_sweep
from .checks import Check, check_constant_sum, check_oracle_equivalence, check_zero_average
from .energy import CertificationError, energy, energy_breakdown
from .kernel import BRANCH_WINDOW
from .laplacian import frac_laplacian_avg, frac_laplacian_point
from .misfit import MisfitInputs, misfit_solve
from .optimize import DescentOptions, brute_force, minimize_gaps, verify_s0_minimizer
from .oracle import OracleFailure
from .profile import GapConfiguration, ProblemParams, build_canonical, from_gaps
from .serialize import dumps, to_csv

__all__ = ["build_parser", "main", "run"]


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised starts and samples")
    p.add_argument("--tol", type=float, default=1e-10, help="certified absolute accuracy")
    p.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
    return p


def _problem(p: argparse.ArgumentParser, s_required: bool = True):
    p.add_argument("--s", type=float, required=s_required)
    p.add_argument("--lambda", type=float, dest="Lambda", default=None,
                   help="steep slope magnitude (default 1/delta)")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--L", type=int, default=1, help="steep intervals per period")


def _with_gaps(p: argparse.ArgumentParser):
    p.add_argument("--gaps", type=_floats, default=None,
                   help="comma-separated gap lengths summing to L*lambda*delta (default: equal)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="twoslope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"twoslope {__version__} (branch window {BRANCH_WINDOW:g})")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eval", parents=[common], help="energy of a two-slope profile")
    _problem(p)
    _with_gaps(p)
    p.add_argument("--method", choices=("closed_form", "oracle"), default="closed_form")
    p.add_argument("--tail", choices=("zeta", "crude"), default="zeta")

    p = sub.add_parser("breakdown", parents=[common], help="ten interaction blocks of the canonical profile")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)

    p = sub.add_parser("laplacian", parents=[common], help="fractional Laplacian at a point or over an interval")
    _problem(p)
    _with_gaps(p)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--x", type=float)
    where.add_argument("--interval", type=_floats, help="a,b")

    p = sub.add_parser("minimize", parents=[common], help="projected-gradient descent over gaps")
    _problem(p)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=400)
    p.add_argument("--grad-tol", type=float, default=1e-9)

    p = sub.add_parser("brute", parents=[common], help="exhaustive search on a simplex grid")
    _problem(p, s_required=False)
    p.add_argument("--grid-n", type=int, required=True)
    p.add_argument("--functional", choices=("fractional", "s0"), default="fractional",
                   help="s0: the L2 functional with the optimal vertical offset")

    p = sub.add_parser("sweep", parents=[common], help="energy against its growth rate as delta shrinks")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--deltas", type=_floats, default=DEFAULT_DELTAS)

    p = sub.add_parser("mantissa", parents=[common], help="energy of the unit sawtooth x - floor(x)")
    p.add_argument("--s", type=float, required=True)

    p = sub.add_parser("extremal", parents=[common], help="s = 0 and s = 1 limits")
    p.add_argument("--deltas", type=_floats, default=(1e-1, 1e-2, 1e-3))

    p = sub.add_parser("misfit", parents=[common], help="interface energy of a misfit bilayer")
    for name in ("g-plus", "g-minus", "nu-plus", "nu-minus", "c-plus", "c-minus"):
        p.add_argument(f"--{name}", type=float, required=True)

    sub.add_parser("selftest", parents=[common], help="quick invariant checks with a pass/fail table")
    return parser


def _params(a) -> ProblemParams:
    s = a.s if a.s is not None else 0.0
    lam = a.Lambda if a.Lambda is not None else 1.0 / a.delta
    return ProblemParams(s, lam, a.delta, a.L)


def _profile(a):
    pr = _params(a)
    if a.gaps is None:
        return build_canonical(pr)
    return from_gaps(GapConfiguration(a.gaps), pr)


def _selftest(a) -> tuple[list[Check], bool]:
    checks = [
        check_zero_average(deltas=(0.5, 0.1), s_values=(0.25, 0.5, 0.75)),
        check_oracle_equivalence(n_pairs=40, seed=a.seed, threads=a.threads),
        check_constant_sum(),
    ]
    return checks, all(c.passed for c in checks)


def run(a) -> tuple[object, int]:
    """Execute parsed arguments; returns (payload, exit status)."""
    cmd = a.subcommand
    if cmd == "eval":
        return energy(_profile(a), a.s, a.tol, method=a.method, tail=a.tail), 0
    if cmd == "breakdown":
        return energy_breakdown(ProblemParams.normalized(a.s, a.delta)), 0
    if cmd == "laplacian":
        prof = _profile(a)
        if a.x is not None:
            return {"x": a.x, "value": frac_laplacian_point(prof, a.x, a.s, a.tol)}, 0
        if len(a.interval) != 2:
            raise ValueError("--interval takes exactly two numbers a,b")
        return {"interval": list(a.interval), "value": frac_laplacian_avg(prof, a.interval, a.s, a.tol)}, 0
    if cmd == "minimize":
        opts = DescentOptions(max_iters=a.max_iters, grad_tol=a.grad_tol, multistart_count=a.starts,
                              rng_seed=a.seed, energy_tol=min(a.tol, 1e-12))
        return minimize_gaps(_params(a), a.s, opts, a.threads), 0
    if cmd == "brute":
        if a.functional == "s0":
            return verify_s0_minimizer(_params(a), a.grid_n, a.threads), 0
        if a.s is None:
            raise ValueError("--s is required for the fractional functional")
        return brute_force(_params(a), a.s, a.grid_n, a.threads, min(a.tol, 1e-12)), 0
    if cmd == "sweep":
        return ratio_sweep(a.s, a.deltas, a.tol, a.threads), 0
    if cmd == "mantissa":
        return mantissa_result(a.s, a.tol), 0
    if cmd == "extremal":
        return extremal_limits(a.deltas), 0
    if cmd == "misfit":
        inputs = MisfitInputs(a.g_plus, a.g_minus, a.nu_plus, a.nu_minus, a.c_plus, a.c_minus)
        return misfit_solve(inputs, a.tol), 0
    if cmd == "selftest":
        checks, ok = _selftest(a)
        return checks, 0 if ok else 3
    raise ValueError(f"unknown subcommand {cmd!r}")


def _render(payload, a) -> str:
    if a.subcommand == "selftest":
        width = max(len(c.name) for c in payload)
        lines = [f"{c.name:<{width}}  {'pass' if c.passed else 'FAIL'}" for c in payload]
        return "\n".join(lines) + "\n"
    if a.output_format == "csv":
        if a.subcommand == "sweep":
            header = ("delta", "sigma", "energy", "ratio", "tail_bound")
            return to_csv(header, [(r.delta, r.sigma, r.energy, r.ratio, r.tail_bound) for r in payload])
        if a.subcommand == "extremal":
            return to_csv(("delta", "energy_s0", "delta_energy_s1"), payload.rows)
        d = payload.to_dict() if hasattr(payload, "to_dict") else payload
        flat = {k: v for k, v in d.items() if not isinstance(v, (dict, list, tuple))}
        return to_csv(tuple(flat), [tuple(flat.values())])
    if isinstance(payload, list):
        payload = [r.to_dict() for r in payload]
    return dumps(payload) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.threads < 1:
        print("twoslope: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            payload, status = run(a)
    except (CertificationError, OracleFailure) as exc:
        print(f"twoslope: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError) as exc:
        print(f"twoslope: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_render(payload, a))
    return status


if __name__ == "__main__":
    sys.exit(main())
