"""Command-line surface: evaluate closed-form constants, compute bodies
from descriptor files, and run the verification suites.

Everything here is a thin shell over the library: parse flags into a
:class:`RunConfig`, load descriptors, call one module function, write the
results.  All outputs (stdout and files) are pure functions of the run
configuration — no timestamps, no machine state — so two runs with the
same flags are byte-identical, and every artifact carries the
configuration digest that produced it.

Exit codes: 0 success; 1 at least one verification check failed; 2 usage
or parameter error; 3 unreadable or malformed input file; 4 computation
failed (degenerate geometry, quadrature did not converge).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bodies, verify
from .bodies import Polytope, support
from .constants import FracParams, closed_form_table, radial_mean_ball_ratio
from .descriptors import (
    load_descriptor,
    radial_table_to_csv,
    write_json,
)
from .errors import (
    DomainError,
    FormatError,
    FracGeoError,
    ParameterError,
)
from .fields import IndicatorOfBody, RadialProfile, VoxelGrid, field_dim
from .fractional import polar_projection_body, source_digest
from .quadrature import sphere_grid
from .radialmean import radial_mean_body

__all__ = ["RunConfig", "main", "cmd_constants", "cmd_body", "cmd_verify"]

OUT_ENV = "FRACGEO_OUT"

_EXIT_CODES = """\
exit codes:
  0  success
  1  at least one verification check failed
  2  usage or parameter error (bad flags, values outside their ranges)
  3  input file unreadable or malformed (JSON, CSV, voxel binary)
  4  computation failed (degenerate geometry, integration did not converge)
"""


@dataclass(frozen=True)
class RunConfig:
    """Everything a command's output may depend on.

    The digest of this record is stamped into every artifact, so equal
    digests certify byte-identical outputs.
    """

    command: str
    seed: int = 0
    resolution: int = 256
    samples: int = 200_000
    tolerances: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples <= 0:
            raise ParameterError("--samples must be positive")
        if self.resolution < 2:
            raise ParameterError("--resolution must be at least 2")

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "resolution": self.resolution,
            "samples": self.samples,
            "tolerances": self.tolerances,
            "options": self.options,
        }

    @property
    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _out_dir(args) -> str | None:
    """--out wins; otherwise the environment override; otherwise no files."""
    if args.out is not None:
        out = args.out
    else:
        out = os.environ.get(OUT_ENV)
    if out:
        os.makedirs(out, exist_ok=True)
    return out or None


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise ParameterError(f"expected comma-separated numbers: {exc}")


def _load_tolerances(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON (line {exc.lineno}): "
                          f"{exc.msg}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: tolerance file must map names to "
                          "numbers")
    bad = {k: v for k, v in obj.items()
           if not isinstance(v, (int, float)) or isinstance(v, bool)}
    if bad:
        raise FormatError(f"{path}: non-numeric tolerance(s) {sorted(bad)}")
    # Unknown names are rejected with the library's own message.
    verify.resolve_tolerances(obj)
    return {k: float(v) for k, v in obj.items()}


# ---------------------------------------------------------------------------
# constants


def cmd_constants(args) -> int:
    if (args.s is None) == (args.p is None):
        raise ParameterError("constants: give exactly one of --s or --p")
    rows = []
    if args.s is not None:
        for s in args.s:
            params = FracParams(args.n, s)
            for sv in closed_form_table(params):
                rows.append({"name": sv.name,
                             "args": {"n": args.n, "s": s},
                             "value": sv.value,
                             "abs_error_bound": sv.abs_error_bound})
    else:
        for p in args.p:
            rows.append({"name": "radial_mean_ball_ratio",
                         "args": {"n": args.n, "p": p},
                         "value": radial_mean_ball_ratio(args.n, p),
                         "abs_error_bound": 1e-12})
    config = RunConfig(
        command="constants", seed=args.seed,
        options={"n": args.n, "s": args.s, "p": args.p})
    payload = {"run_config": config.to_dict(), "digest": config.digest,
               "table": rows}
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    out = _out_dir(args)
    if out:
        write_json(payload, os.path.join(out, "constants.json"))
    return 0


# ---------------------------------------------------------------------------
# body


def _grid_for(n: int, resolution: int):
    return sphere_grid(n, 2 if n == 1 else resolution)


def _as_field(obj):
    if isinstance(obj, (IndicatorOfBody, RadialProfile, VoxelGrid)):
        return obj
    return IndicatorOfBody(obj)


def _as_body(obj, what: str):
    if isinstance(obj, IndicatorOfBody):
        return obj.body
    if isinstance(obj, (RadialProfile, VoxelGrid)):
        raise ParameterError(f"{what} needs a convex body descriptor, got a "
                             f"{type(obj).__name__}")
    return obj


def _check_dim(args, n: int):
    if args.n is not None and args.n != n:
        raise ParameterError(f"--n {args.n} contradicts the descriptor "
                             f"(dimension {n})")


def cmd_body(args) -> int:
    obj = load_descriptor(args.descriptor)
    config = RunConfig(
        command="body", seed=args.seed, resolution=args.resolution,
        samples=args.samples,
        options={"op": args.op, "s": args.s, "p": args.p,
                 "input": source_digest(obj)})

    meta = {"op": args.op, "seed": args.seed,
            "run_config": config.to_dict(), "digest": config.digest}
    if args.op == "ppbody":
        if args.s is None:
            raise ParameterError("ppbody needs --s")
        f = _as_field(obj)
        n = field_dim(f)
        _check_dim(args, n)
        grid = _grid_for(n, args.resolution)
        fb = polar_projection_body(f, FracParams(n, args.s), grid,
                                   mc_samples=args.samples, seed=args.seed)
        table, values, value_name = fb.table, None, "radius"
        meta.update({"s": args.s, "n": n, "source": fb.source,
                     "resolution": len(grid),
                     "volume": fb.volume(grid)})
    elif args.op == "rpbody":
        if args.p is None:
            raise ParameterError("rpbody needs --p")
        E = _as_body(obj, "rpbody")
        n = bodies.dim(E)
        _check_dim(args, n)
        grid = _grid_for(n, args.resolution)
        rmb = radial_mean_body(E, args.p, grid, samples=args.samples,
                               seed=args.seed)
        table, values, value_name = rmb.table, None, "radius"
        meta.update({"p": args.p, "n": n, "source": source_digest(E),
                     "resolution": len(grid), "method": rmb.method,
                     "volume": rmb.volume(grid)})
    else:  # projbody
        E = _as_body(obj, "projbody")
        if not isinstance(E, Polytope):
            raise ParameterError("projbody needs a polytope descriptor")
        n = bodies.dim(E)
        _check_dim(args, n)
        grid = _grid_for(n, args.resolution)
        zono = bodies.projection_body_polytope(E)
        table = bodies.RadialTable(grid, np.ones(len(grid)),
                                   origin_symmetric=True)
        values, value_name = support(zono, grid.nodes), "support"
        meta.update({"n": n, "source": source_digest(E),
                     "resolution": len(grid),
                     "volume": bodies.exact_volume(zono.to_polytope())})

    out = _out_dir(args) or "."
    stem = os.path.splitext(os.path.basename(args.descriptor))[0]
    csv_path = os.path.join(out, f"{stem}_{args.op}.csv")
    json_path = os.path.join(out, f"{stem}_{args.op}.json")
    radial_table_to_csv(table, csv_path, value_name=value_name,
                        values=values)
    meta["csv"] = os.path.basename(csv_path)
    write_json(meta, json_path)
    print(csv_path)
    print(json_path)
    return 0


# ---------------------------------------------------------------------------
# verify

# Suites that can run on one body/field descriptor instead of the built-in
# fixture battery.  Each entry maps to the underlying check.
_BODY_SUITES = ("frac_petty", "mean_radial", "classical_petty",
                "affine_sobolev", "symmetrization", "limits", "properties")
_FIELD_SUITES = ("affine_sobolev", "symmetrization", "limits", "properties")

_DEFAULT_P_GRID = (-0.5, 0.5, 1.0, 3.0)


def _single_check(suite: str, obj, args, tolerances: dict):
    n = bodies.dim(obj) if not isinstance(
        obj, (IndicatorOfBody, RadialProfile, VoxelGrid)) else field_dim(obj)
    _check_dim(args, n)
    grid = _grid_for(n, args.resolution)
    s = 0.5 if args.s is None else args.s
    params = FracParams(n, s)
    kw = {"seed": args.seed, "tolerances": tolerances}
    if suite == "frac_petty":
        E = _as_body(obj, suite)
        return verify.check_frac_petty(E, params, grid, **kw)
    if suite == "mean_radial":
        E = _as_body(obj, suite)
        p_grid = _DEFAULT_P_GRID if args.p is None else [args.p]
        return verify.check_mean_radial(E, p_grid, grid,
                                        samples=args.samples, **kw)
    if suite == "classical_petty":
        E = _as_body(obj, suite)
        return [verify.check_classical_petty(E, tolerances=tolerances)]
    if suite == "affine_sobolev":
        return verify.check_affine_frac_sobolev(_as_field(obj), params,
                                                grid, **kw)
    if suite == "symmetrization":
        return [verify.check_symmetrization_monotone(
            _as_field(obj), params, grid, mode="schwarz", **kw)]
    if suite == "limits":
        return verify.check_limits_s_to_1(_as_field(obj), None, grid, **kw)
    if suite == "properties":
        return verify.check_body_properties(_as_field(obj), params, grid,
                                            **kw)
    raise ParameterError(
        f"suite {suite!r} runs only on its built-in fixtures; suites "
        f"accepting --body: {', '.join(_BODY_SUITES)}; accepting --field: "
        f"{', '.join(_FIELD_SUITES)}")


def cmd_verify(args) -> int:
    tolerances = _load_tolerances(args.tolerance_file)
    known = ["all"] + sorted(verify.SUITES)
    if args.suite not in known:
        raise ParameterError(f"unknown suite {args.suite!r}; available: "
                             f"{', '.join(known)}")
    if args.body is not None and args.field is not None:
        raise ParameterError("give at most one of --body / --field")

    options = {"suite": args.suite, "s": args.s, "p": args.p}
    if args.body is not None or args.field is not None:
        path = args.body if args.body is not None else args.field
        obj = load_descriptor(path)
        if args.suite == "all":
            raise ParameterError("--body/--field need a specific --suite")
        if args.body is not None:
            allowed, given = _BODY_SUITES, "--body"
        else:
            allowed, given = _FIELD_SUITES, "--field"
        if args.suite not in allowed:
            raise ParameterError(
                f"suite {args.suite!r} does not accept {given}; choices: "
                f"{', '.join(allowed)}")
        options["input"] = source_digest(obj)
        reports = _single_check(args.suite, obj, args, tolerances)
    else:
        reports = verify.run_suite(args.suite, seed=args.seed,
                                   tolerances=tolerances)

    config = RunConfig(command="verify", seed=args.seed,
                       resolution=args.resolution, samples=args.samples,
                       tolerances=tolerances, options=options)
    for r in reports:
        print(r.to_json())
    npass = sum(r.passed for r in reports)
    print(f"-- {npass}/{len(reports)} checks passed  suite={args.suite} "
          f"seed={args.seed} config={config.digest}")
    out = _out_dir(args)
    if out:
        payload = {"run_config": config.to_dict(), "digest": config.digest,
                   "reports": [r.to_dict() for r in reports],
                   "passed": npass, "total": len(reports)}
        write_json(payload, os.path.join(out, f"verify_{args.suite}.json"))
    return 0 if npass == len(reports) else 1


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, *, resolution_default=256):
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for every stochastic path (default 0)")
    sub.add_argument("--resolution", type=int, default=resolution_default,
                     help="sphere grid resolution (default "
                          f"{resolution_default}; dimension 1 always uses "
                          "the two-point grid)")
    sub.add_argument("--samples", type=int, default=200_000,
                     help="Monte Carlo sample budget (default 200000)")
    sub.add_argument("--out", default=None,
                     help=f"output directory (default: ${OUT_ENV} if set; "
                          "verify prints to stdout, body writes to the "
                          "current directory)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracgeo",
        description="Fractional polar projection bodies, fractional "
                    "perimeters, radial mean bodies, and the inequality "
                    "battery relating them.",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    c = subs.add_parser(
        "constants", help="closed-form special values as a JSON table",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("--n", type=int, required=True, help="dimension")
    c.add_argument("--s", type=_float_list, default=None,
                   help="comma-separated fractional orders in (0,1)")
    c.add_argument("--p", type=_float_list, default=None,
                   help="comma-separated mean exponents in (-1, inf)")
    _add_common(c)
    c.set_defaults(func=cmd_constants)

    b = subs.add_parser(
        "body", help="compute a body from a descriptor, write CSV + JSON",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    b.add_argument("descriptor", help="body or field descriptor JSON "
                                      "(or voxel .bin)")
    b.add_argument("--op", required=True,
                   choices=("ppbody", "rpbody", "projbody"),
                   help="ppbody: polar body of the fractional gauge "
                        "(needs --s); rpbody: radial mean body (needs "
                        "--p); projbody: support of the projection body "
                        "of a polytope")
    b.add_argument("--n", type=int, default=None,
                   help="expected dimension; errors if the descriptor "
                        "disagrees")
    b.add_argument("--s", type=float, default=None,
                   help="fractional order in (0,1)")
    b.add_argument("--p", type=float, default=None,
                   help="mean exponent > -1")
    _add_common(b)
    b.set_defaults(func=cmd_body)

    v = subs.add_parser(
        "verify", help="run verification suites, stream reports as JSON "
                       "lines",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("--suite", default="all",
                   help="suite name or 'all' (default). Known: "
                        + ", ".join(sorted(verify.SUITES)))
    v.add_argument("--body", default=None,
                   help="body descriptor: run the suite's check on this "
                        "body instead of the fixtures")
    v.add_argument("--field", default=None,
                   help="field descriptor: run the suite's check on this "
                        "field instead of the fixtures")
    v.add_argument("--n", type=int, default=None,
                   help="expected dimension of --body/--field; errors on "
                        "disagreement (fixture suites fix their own)")
    v.add_argument("--s", type=float, default=None,
                   help="fractional order for --body/--field checks "
                        "(default 0.5)")
    v.add_argument("--p", type=float, default=None,
                   help="mean exponent for the mean_radial check "
                        "(default grid -0.5,0.5,1,3)")
    v.add_argument("--tolerance-file", default=None,
                   help="JSON file of tolerance overrides by check name")
    _add_common(v, resolution_default=64)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FracGeoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
