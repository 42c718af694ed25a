"""Command-line interface.

Subcommands: beta, classify, certify, verify, riesz, region, selftest.
Exit codes: 0 success / Exists, 3 NotExists (or failed verification),
4 Boundary, 1 input or usage error.  Configuration comes from --config JSON,
overridden by CHQ_* environment variables, overridden by explicit flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .beta_spectrum import solve_beta_roots
from .classifier import Outcome, classify
from .construct_verify import Certificate, VerifyGrid, existence_certificate, verify_supersolution
from .errors import ChoquardHardyError
from .model import ComparisonPolicy, ProblemParams, validate_params
from .radial_calculus import RadialProfile
from .riesz import riesz_convolve_radial

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_EXISTS = 3
EXIT_BOUNDARY = 4

_ENV_PREFIX = "CHQ_"


@dataclass(frozen=True)
class RunConfig:
    """Numerical settings shared by the subcommands."""

    boundary_band: float = 1e-9
    riesz_tol: float = 1e-6
    verify_tol: float = 1e-5
    grid_r_min: float = 1.01
    grid_r_max: float = 1e3
    grid_points: int = 64
    threads: int = 1
    seed: int = 20250811
    out: str | None = None

    def __post_init__(self):
        for name in ("boundary_band", "riesz_tol", "verify_tol"):
            if getattr(self, name) < 0 or (name != "boundary_band" and getattr(self, name) == 0):
                raise ValueError(f"{name} must be positive")

    def policy(self) -> ComparisonPolicy:
        return ComparisonPolicy(self.boundary_band)

    def grid(self) -> VerifyGrid:
        return VerifyGrid(self.grid_r_min, self.grid_r_max, self.grid_points)


_CONFIG_FIELDS = {
    "boundary_band": float,
    "riesz_tol": float,
    "verify_tol": float,
    "grid_r_min": float,
    "grid_r_max": float,
    "grid_points": int,
    "threads": int,
    "seed": int,
    "out": str,
}


def load_config(path: str | None, args: argparse.Namespace | None = None) -> RunConfig:
    """Config file values, then CHQ_* environment overrides, then CLI flags."""
    values: dict = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        for key, conv in _CONFIG_FIELDS.items():
            if key in raw:
                values[key] = conv(raw[key])
    for key, conv in _CONFIG_FIELDS.items():
        env = os.environ.get(_ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = conv(env)
    cfg = RunConfig(**values)
    if args is not None:
        if getattr(args, "threads", None) is not None:
            cfg = replace(cfg, threads=args.threads)
        if getattr(args, "seed", None) is not None:
            cfg = replace(cfg, seed=args.seed)
        if getattr(args, "out", None) is not None:
            cfg = replace(cfg, out=args.out)
    return cfg


@dataclass(frozen=True)
class RegionScanSpec:
    """Grid specification for a (p, q) region scan."""

    base: dict  # params mapping without p, q
    p_range: tuple[float, float]
    q_range: tuple[float, float]
    steps: int
    output_format: str = "csv"

    def __post_init__(self):
        if not (self.p_range[0] < self.p_range[1] and self.q_range[0] < self.q_range[1]):
            raise ValueError("min < max required on both axes")
        if self.steps < 2:
            raise ValueError("steps >= 2 required")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


def run_region_scan(
    spec: RegionScanSpec, policy: ComparisonPolicy = ComparisonPolicy(), threads: int = 1
) -> list[tuple[float, float, str, str]]:
    """Classify every grid point; row-major order with p varying fastest.

    Output order is fixed regardless of the worker count.
    """
    ps = np.linspace(spec.p_range[0], spec.p_range[1], spec.steps)
    qs = np.linspace(spec.q_range[0], spec.q_range[1], spec.steps)
    points = [(float(p), float(q)) for q in qs for p in ps]

    def one(point: tuple[float, float]) -> tuple[float, float, str, str]:
        p, q = point
        params = validate_params({**spec.base, "p": p, "q": q})
        verdict = classify(params, policy)
        witness = verdict.witnesses[0].result_id if verdict.witnesses else ""
        return (p, q, verdict.outcome.value, witness)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, points, chunksize=64))
    return [one(pt) for pt in points]


def region_rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "q", "outcome", "witness"])
    for p, q, outcome, witness in rows:
        writer.writerow([repr(p), repr(q), outcome, witness])
    return buf.getvalue()


# ---------------------------------------------------------------------------


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True), out)


def _load_params(args) -> ProblemParams:
    return validate_params(_read_json(args.params))


def cmd_beta(args, cfg: RunConfig) -> int:
    params = _load_params(args)
    roots = solve_beta_roots(params.N, params.m, params.mu, cfg.boundary_band)
    _dump(
        {
            "beta_minus": roots.beta_minus,
            "beta_plus": roots.beta_plus,
            "beta_star": roots.beta_star,
            "degenerate": roots.degenerate,
            "residuals": {"minus": roots.residual_minus, "plus": roots.residual_plus},
        },
        cfg.out,
    )
    return EXIT_OK


def cmd_classify(args, cfg: RunConfig) -> int:
    params = _load_params(args)
    verdict = classify(params, cfg.policy())
    _dump(verdict.as_dict(), cfg.out)
    return {
        Outcome.EXISTS: EXIT_OK,
        Outcome.NOT_EXISTS: EXIT_NOT_EXISTS,
        Outcome.BOUNDARY: EXIT_BOUNDARY,
    }[verdict.outcome]


def cmd_certify(args, cfg: RunConfig) -> int:
    params = _load_params(args)
    verdict = classify(params, cfg.policy())
    if verdict.outcome is not Outcome.EXISTS:
        _dump(verdict.as_dict(), cfg.out)
        return EXIT_NOT_EXISTS if verdict.outcome is Outcome.NOT_EXISTS else EXIT_BOUNDARY
    cert, report = existence_certificate(params, cfg.policy(), cfg.grid(), cfg.verify_tol)
    _dump({"certificate": cert.as_dict(), "report": report.as_dict()}, cfg.out)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    params = _load_params(args)
    payload = _read_json(args.certificate)
    cert = Certificate.from_dict(payload.get("certificate", payload))
    report = verify_supersolution(params, cert, cfg.grid(), cfg.verify_tol)
    _dump({"certificate": cert.as_dict(), "report": report.as_dict()}, cfg.out)
    return EXIT_OK if report.passed else EXIT_NOT_EXISTS


def cmd_riesz(args, cfg: RunConfig) -> int:
    params = _load_params(args)
    profile = RadialProfile.from_dict(_read_json(args.profile))
    radii = [float(tok) for tok in args.radii.split(",") if tok.strip()]
    results = []
    for r in radii:
        value = riesz_convolve_radial(
            profile, params.N, params.alpha, params.p, r, cfg.riesz_tol
        )
        results.append(value.as_dict())
    _dump(results, cfg.out)
    return EXIT_OK


def cmd_region(args, cfg: RunConfig) -> int:
    base = _read_json(args.params)
    base.pop("p", None)
    base.pop("q", None)
    spec = RegionScanSpec(
        base,
        (args.p_min, args.p_max),
        (args.q_min, args.q_max),
        args.steps,
        args.format,
    )
    rows = run_region_scan(spec, cfg.policy(), cfg.threads)
    if spec.output_format == "csv":
        _emit(region_rows_to_csv(rows), cfg.out)
    else:
        _dump(
            [{"p": p, "q": q, "outcome": o, "witness": w} for p, q, o, w in rows],
            cfg.out,
        )
    return EXIT_OK


def cmd_selftest(args, cfg: RunConfig) -> int:
    from . import acceptance

    names = [args.suite] if args.suite else None
    results = acceptance.run_all(seed=cfg.seed, names=names)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({res.elapsed:.2f} s): {res.detail}")
    failing = [res for res in results if not res.passed]
    if failing:
        print(f"first failing criterion: {failing[0].name}", file=sys.stderr)
        return 2
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choquard-hardy",
        description="Existence classification and certified radial supersolutions "
        "for a quasilinear Choquard-Hardy inequality on an exterior domain.",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--threads", type=int, help="worker threads for region scans")
    parser.add_argument("--seed", type=int, help="random seed for the selftest suites")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("beta", help="decay exponents beta-, beta+ for the parameters")
    sp.add_argument("--params", required=True)
    sp.set_defaults(fn=cmd_beta)

    sp = sub.add_parser("classify", help="existence / nonexistence verdict")
    sp.add_argument("--params", required=True)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("certify", help="construct and verify a solution certificate")
    sp.add_argument("--params", required=True)
    sp.set_defaults(fn=cmd_certify)

    sp = sub.add_parser("verify", help="re-verify a stored certificate")
    sp.add_argument("--params", required=True)
    sp.add_argument("--certificate", required=True)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("riesz", help="enclose the Riesz convolution at given radii")
    sp.add_argument("--params", required=True)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--radii", required=True, help="comma-separated radii > 1")
    sp.set_defaults(fn=cmd_riesz)

    sp = sub.add_parser("region", help="(p, q) region scan to CSV or JSON")
    sp.add_argument("--params", required=True, help="base params JSON; p and q ignored")
    sp.add_argument("--p-min", type=float, required=True)
    sp.add_argument("--p-max", type=float, required=True)
    sp.add_argument("--q-min", type=float, required=True)
    sp.add_argument("--q-max", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(fn=cmd_region)

    sp = sub.add_parser("selftest", help="run the acceptance criteria")
    sp.add_argument("--suite", help="run a single named suite")
    sp.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args, cfg)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (ChoquardHardyError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
