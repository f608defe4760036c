"""Command-line front end: ``discendo <command> [flags]``.

Every command prints a JSON run report with sorted keys; complex numbers
are written as ``[re, im]``.  Exit status is 0 on pass, 1 on fail or
inconclusive, 2 on usage or input errors.
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
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import corona, fixed_point, geometry, maps, spectrum
from .errors import ConvergenceError, DomainError, MapParseError, RangeError, TestFunctionError
from .parsing import parse_map, parse_points, parse_scalar

MAXITER_ENV = "DISC_ENDO_MAXITER"

#: Which library operations each command exposes.
COMMAND_OPERATIONS = {
    "rho": ("pseudo_distance", "hyperbolic_distance"),
    "mobius": ("moebius_eval", "moebius_derivative", "moebius_inverse"),
    "map": ("evaluate", "derivative", "taylor", "series_multiply", "sup_norm_estimate"),
    "compact": ("compact_range_check",),
    "fixed-point": ("find_fixed_point",),
    "spectrum": ("theoretical_spectrum",),
    "truncate": ("build_truncation", "eigenvalues", "compare_spectra", "conjugate_to_origin"),
    "abba": ("ab_ba_check",),
    "example-a": ("verify_example_a", "psi_limit"),
    "example-b": ("verify_example_b",),
    "interp": ("interpolating_check",),
    "endo": ("lm_surrogate", "psi_stage", "apply_endomorphism", "iterate_endomorphism"),
}


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    status: str = "pass"
    wall_time: float | None = None
    table: list | None = field(default=None, repr=False)

    def to_json(self) -> str:
        payload = asdict(self)
        payload.pop("table")
        return json.dumps(_plain(payload), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        if not self.table:
            raise UsageError(f"command {self.command!r} has no tabular output; use --out json")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(self.table[0]), lineterminator="\n")
        writer.writeheader()
        for row in self.table:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
        return buf.getvalue()


class UsageError(Exception):
    pass


def _plain(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _csv_cell(v):
    if isinstance(v, complex):
        return repr(v)
    return v


def _split(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _max_iter() -> int:
    raw = os.environ.get(MAXITER_ENV)
    if raw is None:
        return 100_000
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{MAXITER_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{MAXITER_ENV} must be positive")
    return value


def _net(text: str) -> corona.BoundaryNet:
    body = text.strip()
    if body.startswith("geometric:"):
        k = body.split(":", 1)[1]
        if not k.isdigit() or int(k) < 1:
            raise UsageError("--net geometric:<K> needs a positive integer K")
        return corona.BoundaryNet.geometric(int(k))
    return corona.BoundaryNet(tuple(p.real for p in parse_points(body)))


# ---------------------------------------------------------------------------
# Commands


def cmd_rho(a, rep):
    z, w = parse_scalar(a.z), parse_scalar(a.w)
    rep.outputs = {
        "pseudo_distance": float(geometry.pseudo_distance(z, w)),
        "hyperbolic_distance": float(geometry.hyperbolic_distance(z, w)),
        "same_part": geometry.same_part(z, w),
    }


def cmd_mobius(a, rep):
    shift = geometry.MoebiusShift(parse_scalar(a.alpha))
    z = parse_scalar(a.z)
    value = geometry.moebius_eval(shift, z).value
    inverse = geometry.moebius_inverse(shift)
    rep.outputs = {
        "value": value,
        "derivative": geometry.moebius_derivative(shift, z),
        "inverse": inverse.to_text(),
        "round_trip": maps.evaluate(inverse, value),
    }


def cmd_map(a, rep):
    m = parse_map(a.map)
    z = parse_scalar(a.z)
    series = maps.taylor(m, a.N)
    lower, upper = maps.sup_norm_estimate(m, a.radius, a.samples)
    rep.outputs = {
        "map": m.to_text(),
        "value": maps.evaluate(m, z),
        "derivative": maps.derivative(m, z),
        "taylor": list(series.coeffs),
        "sup_lower": lower,
        "sup_upper": upper,
    }
    if a.f:
        other = parse_map(a.f)
        rep.outputs["product_taylor"] = list(maps.series_multiply(series, maps.taylor(other, a.N), a.N).coeffs)
    rep.table = [{"k": k, "re": c.real, "im": c.imag} for k, c in enumerate(series.coeffs)]


def cmd_compact(a, rep):
    m = parse_map(a.map)
    r = fixed_point.range_report(m, a.margin, a.samples)
    rep.outputs = {"map": m.to_text(), "verdict": r.verdict.value, "lower": r.lower,
                   "upper": r.upper, "threshold": r.threshold}
    rep.status = {"compact": "pass", "not_compact": "fail"}.get(r.verdict.value, "inconclusive")


def cmd_fixed_point(a, rep):
    m = parse_map(a.map)
    try:
        res = fixed_point.find_fixed_point(m, a.tol, _max_iter())
    except ConvergenceError as exc:
        rep.outputs = {"map": m.to_text(), "error": str(exc)}
        rep.status = "fail"
        return
    rep.outputs = {"map": m.to_text(), "z0": res.z0.value, "multiplier": res.multiplier,
                   "residual": res.residual, "iterations": res.iterations}


def cmd_spectrum(a, rep):
    if (a.mu is None) == (a.map is None):
        raise UsageError("spectrum needs exactly one of --mu or --map")
    if a.map is not None:
        mu = fixed_point.find_fixed_point(parse_map(a.map), max_iter=_max_iter()).multiplier
    else:
        mu = parse_scalar(a.mu)
    s = spectrum.theoretical_spectrum(mu, a.N, a.eps)
    rep.outputs = {"multiplier": s.multiplier, "points": list(s.points)}
    rep.table = [{"index": i, "re": p.real, "im": p.imag} for i, p in enumerate(s.points)]


def cmd_truncate(a, rep):
    m = parse_map(a.map)
    fp = None
    try:
        fp = fixed_point.find_fixed_point(m, max_iter=_max_iter())
    except ConvergenceError as exc:
        if a.compare:
            rep.outputs = {"map": m.to_text(), "error": str(exc)}
            rep.status = "fail"
            return
    symbol = m if a.raw or fp is None else spectrum.conjugate_to_origin(m, fp.z0)
    computed = spectrum.eigenvalues(spectrum.build_truncation(symbol, a.N))
    out = {"N": a.N, "map": m.to_text(), "conjugated": symbol is not m, "computed": list(computed)}
    if fp is not None:
        out["multiplier"] = fp.multiplier
        out["z0"] = fp.z0.value
    rows = [{"index": i, "computed_re": c.real, "computed_im": c.imag} for i, c in enumerate(computed)]
    if a.compare:
        predicted = spectrum.theoretical_spectrum(fp.multiplier, max(a.k, 1))
        cmp_ = spectrum.compare_spectra(computed, predicted, a.k, a.tol)
        out.update(predicted=list(predicted.nonzero[: a.k]), max_distance=cmp_.max_distance,
                   k=a.k, tol=a.tol)
        out["pass"] = cmp_.passed
        rep.status = "pass" if cmp_.passed else "fail"
        for row, (p, _, d) in zip(rows, cmp_.pairs):
            row.update(predicted_re=p.real, predicted_im=p.imag, distance=d)
        for row in rows[len(cmp_.pairs):]:
            row.update(predicted_re="", predicted_im="", distance="")
    rep.outputs = out
    rep.table = rows


def random_pair(rng: np.random.Generator, n: int):
    """Complex Gaussian matrices; every third pair has a rank-deficient factor."""
    def gauss(shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    A, B = gauss((n, n)), gauss((n, n))
    if rng.integers(3) == 0:
        r = int(rng.integers(1, n))
        A = gauss((n, r)) @ gauss((r, n))
    if rng.integers(3) == 0:
        r = int(rng.integers(1, n))
        B = gauss((n, r)) @ gauss((r, n))
    return A, B


def cmd_abba(a, rep):
    rng = np.random.default_rng(a.seed)
    failures = []
    for t in range(a.trials):
        n = int(rng.integers(2, a.N + 1))
        A, B = random_pair(rng, n)
        if not spectrum.ab_ba_check(A, B, a.tol):
            failures.append({"trial": t, "n": n})
    rep.outputs = {"trials": a.trials, "passed": a.trials - len(failures), "failures": failures}
    rep.status = "pass" if not failures else "fail"


def cmd_example_a(a, rep):
    net = _net(a.net)
    stages = corona.verify_example_a(net, a.radius, a.samples)
    logs = [s.log10_upper for s in stages]
    decreasing = all(b < a_ for a_, b in zip(logs, logs[1:]))
    tiny = all(s.upper < 1e-20 for s in stages if s.x >= 0.99)
    limit = corona.psi_limit(maps.Tau(), net, parse_scalar(a.z), a.tol)
    rep.outputs = {
        "stages": [{"x": s.x, "lower": s.lower, "upper": s.upper, "log10_upper": s.log10_upper}
                   for s in stages],
        "strictly_decreasing": decreasing,
        "below_1e-20_beyond_0.99": tiny,
        "limit_converged": limit.converged,
        "limit_value": limit.value,
    }
    ok = decreasing and tiny and limit.converged and abs(limit.value) <= a.tol
    rep.status = "pass" if ok else "fail"
    rep.table = [{"x": s.x, "lower": s.lower, "upper": s.upper, "log10_upper": s.log10_upper}
                 for s in stages]


def cmd_example_b(a, rep):
    r = corona.verify_example_b(parse_points(a.zeros))
    rep.outputs = {"zeros": list(r.zeros), "d": list(r.d), "delta_n": list(r.delta_n), "min_d": r.min_d}
    rep.status = "pass" if r.min_d > 0 else "fail"
    rep.table = [{"n": i + 1, "zero": r.zeros[i].real, "d": r.d[i], "delta": r.delta_n[i]}
                 for i in range(len(r.d))]


def cmd_interp(a, rep):
    seq = corona.interpolating_check(parse_points(a.zeros), a.N)
    rep.outputs = {"points": list(seq.points), "delta_n": list(seq.delta_n), "delta": seq.delta}
    rep.table = [{"n": i + 1, "re": p.real, "im": p.imag, "delta": d}
                 for i, (p, d) in enumerate(zip(seq.points, seq.delta_n))]


def cmd_endo(a, rep):
    net = _net(a.net)
    k = a.stage if a.stage is not None else len(net)
    f = parse_map(a.f)
    z = parse_scalar(a.z)
    out = {"stage": k, "x": net[k], "lm_surrogate": corona.lm_surrogate(net, k, z).value}
    if a.kind == "composition":
        if a.map is None:
            raise UsageError("--kind composition needs --map")
        model = corona.CompositionInDisc(parse_map(a.map))
    elif a.kind == "rank-one":
        model = corona.RankOne(net)
    else:
        if a.map is None:
            raise UsageError("--kind generalized needs --map")
        tau = parse_map(a.map)
        model = corona.GeneralizedComposition(net, tau)
        out["symbol"] = corona.psi_stage(tau, net, k).to_text()
    if a.power == 1:
        out["value"] = corona.apply_endomorphism(model, f, z, k)
    else:
        out["value"] = corona.iterate_endomorphism(model, f, z, a.power, k)
    out["power"] = a.power
    rep.outputs = out


COMMANDS = {
    "rho": cmd_rho,
    "mobius": cmd_mobius,
    "map": cmd_map,
    "compact": cmd_compact,
    "fixed-point": cmd_fixed_point,
    "spectrum": cmd_spectrum,
    "truncate": cmd_truncate,
    "abba": cmd_abba,
    "example-a": cmd_example_a,
    "example-b": cmd_example_b,
    "interp": cmd_interp,
    "endo": cmd_endo,
}


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--save", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="record wall time in the report")

    parser = argparse.ArgumentParser(prog="discendo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("rho", "pseudohyperbolic and hyperbolic distance")
    p.add_argument("--z", default="0")
    p.add_argument("--w", required=True)

    p = add("mobius", "evaluate a Moebius shift, its derivative and inverse")
    p.add_argument("--alpha", required=True)
    p.add_argument("--z", default="0")

    p = add("map", "value, derivative, Taylor series and sup bounds of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--z", default="0")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--f", help="second map; report the truncated product series")

    p = add("compact", "classify the range of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--margin", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=1024)

    p = add("fixed-point", "interior fixed point and multiplier")
    p.add_argument("--map", required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = add("spectrum", "predicted spectrum {mu^n} | {0, 1}")
    p.add_argument("--mu")
    p.add_argument("--map")
    p.add_argument("--N", type=int, default=16, help="largest power n")
    p.add_argument("--eps", type=float, default=0.0)

    p = add("truncate", "finite-section eigenvalues of a composition operator")
    p.add_argument("--map", required=True)
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--compare", action="store_true")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--raw", action="store_true", help="skip conjugating the fixed point to 0")

    p = add("abba", "nonzero spectra of AB and BA on random pairs")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--N", type=int, default=8, help="largest dimension")
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("example-a", "stage sups of tau o a_x along a boundary net")
    p.add_argument("--net", default="geometric:10")
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--z", default="0.3")
    p.add_argument("--tol", type=float, default=1e-6)

    p = add("example-b", "derivatives at the zeros of B/2 versus separation")
    p.add_argument("--zeros", default="geometric:12")

    p = add("interp", "separation products of a point sequence")
    p.add_argument("--zeros", default="geometric:12")
    p.add_argument("--N", type=int, help="use only the first N points")

    p = add("endo", "apply a stagewise endomorphism to a test function")
    p.add_argument("--kind", choices=("composition", "rank-one", "generalized"), default="generalized")
    p.add_argument("--map", help="omega (composition) or tau (generalized)")
    p.add_argument("--net", default="geometric:20")
    p.add_argument("--stage", type=int)
    p.add_argument("--f", default="z")
    p.add_argument("--z", default="0")
    p.add_argument("--power", type=int, default=1)
    return parser


def run(argv: list[str] | None = None) -> tuple[RunReport, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    inputs = {k: v for k, v in vars(args).items() if k not in ("command", "out", "save", "timing")}
    rep = RunReport(args.command, inputs)
    start = time.perf_counter()
    COMMANDS[args.command](args, rep)
    if args.timing:
        rep.wall_time = time.perf_counter() - start
    return rep, args


def main(argv: list[str] | None = None) -> int:
    try:
        rep, args = run(argv)
        text = rep.to_csv() if args.out == "csv" else rep.to_json() + "\n"
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, MapParseError, DomainError, RangeError, TestFunctionError,
            ConvergenceError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    if args.save:
        with open(args.save, "w") as fh:
            fh.write(text)
    return 0 if rep.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
