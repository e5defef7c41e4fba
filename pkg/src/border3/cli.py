"""Command-line surface for batch classification work.

Every verb reads and writes JSON so runs are scriptable and diffable.  Exit
codes: 0 success, 1 malformed input or arguments, 2 classification came back
unknown, 3 the rank oracle refused a search space.  Tensor JSON is
``{"dims": [...], "entries": ["p/q", ...]}`` with entries in row-major order;
all scalars are exact.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .classifier import UNKNOWN, classify, orbit_dimension, stabilizer_dimension
from .equations import strassen_equations, strassen_jacobian_rank
from .limits import chart_limit_plane
from .normal_forms import (
    ORBIT_IDS, grassmann_model, lagrangian_model, orbit_representative,
    segre_model, segre_tensor_from_ambient, sigma2_point, sigma3_point,
    spinor_model,
)
from .rank_oracle import GreaterThan, SearchSpaceError, rank_over_field
from .tensor import loads_tensor, parse_scalar, scalar_str, tensor_to_json


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_tensor_arg(path):
    try:
        return loads_tensor(_read_text(path))
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise _UsageError(f"could not read tensor from {path!r}: {exc}")


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _seed_rng():
    return random.Random(int(os.environ.get("BORDER3_SEED", "0")))


# -- verb implementations -----------------------------------------------------

def _cmd_classify(args):
    t = _load_tensor_arg(args.tensor)
    report = classify(t)
    _emit(report.as_dict())
    return 2 if report.border_rank_class == UNKNOWN else 0


def _parse_dims(text):
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise _UsageError(f"bad dims {text!r}; expected d,d,...")
    if not dims or any(d < 1 for d in dims):
        raise _UsageError(f"bad dims {text!r}; entries must be >= 1")
    return dims


def _cmd_generate(args):
    kind = args.type
    if kind != "orbit" and args.orbit is not None:
        raise _UsageError("--orbit applies only to --type orbit")
    if kind != "iv" and args.factor is not None:
        raise _UsageError("--factor applies only to --type iv")
    dims = _parse_dims(args.dims) if args.dims else None
    n = args.n
    if n is not None and dims is not None and len(dims) != n:
        raise _UsageError("--n and --dims disagree on the number of factors")
    if n is None:
        n = len(dims) if dims is not None else 3
    try:
        if kind == "orbit":
            if args.orbit is None:
                raise _UsageError("--type orbit requires --orbit 34..39")
            if dims is not None and dims != (3, 3, 3):
                raise _UsageError("orbit representatives live at dims 3,3,3")
            t = orbit_representative(args.orbit)
        elif kind == "sigma2":
            t = sigma2_point(n, dims=dims)
        else:
            factor = args.factor if args.factor is not None else 1
            t = sigma3_point(kind, n, dims=dims, factor=factor)
    except ValueError as exc:
        raise _UsageError(str(exc))
    _emit(tensor_to_json(t))
    return 0


def _cmd_strassen(args):
    t = _load_tensor_arg(args.tensor)
    try:
        values = strassen_equations(t)
        out = {
            "dims": list(t.dims),
            "values": [scalar_str(v) for v in values],
            "all_zero": not any(values),
        }
        if args.jacobian:
            out["jacobian_rank"] = strassen_jacobian_rank(t)
    except ValueError as exc:
        raise _UsageError(str(exc))
    _emit(out)
    return 0


def _model_from_json(obj):
    if not isinstance(obj, dict):
        raise ValueError("model must be an object with a 'kind'")
    kind = obj.get("kind")
    if kind == "segre":
        return segre_model(tuple(int(d) for d in obj["dims"]))
    if kind == "grassmann":
        return grassmann_model(int(obj["k"]), int(obj["n"]))
    if kind == "lagrangian":
        return lagrangian_model(int(obj["k"]))
    if kind == "spinor":
        return spinor_model(int(obj["k"]))
    raise ValueError(f"unknown model kind {kind!r}")


def _curve_from_json(obj):
    if not isinstance(obj, list) or not obj:
        raise ValueError("a curve is a nonempty list of coefficient vectors")
    return [tuple(parse_scalar(x) for x in vec) for vec in obj]


def _cmd_limit(args):
    try:
        cfg = json.loads(_read_text(args.config))
        model = _model_from_json(cfg["model"])
        curves = [_curve_from_json(c) for c in cfg["curves"]]
        prec = int(cfg.get("prec", 8))
        max_prec = int(cfg.get("max_prec", 64))
        result = chart_limit_plane(model, curves, prec=prec, max_prec=max_prec)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise _UsageError(f"bad limit config: {exc}")
    out = {
        "degenerate": result.degenerate,
        "orders": list(result.orders),
        "leading_order": result.leading_order,
        "plane": [[scalar_str(x) for x in row] for row in result.plane],
        "sample": None,
    }
    code = 0
    if not result.degenerate:
        rng = _seed_rng()
        coeffs = [rng.randint(1, 97) for _ in result.plane]
        vec = result.sample(coeffs)
        sample = {
            "coefficients": [scalar_str(c) for c in coeffs],
            "vector": [scalar_str(x) for x in vec],
            "classification": None,
        }
        if model.kind == "segre" and len(model.dims) == 3:
            report = classify(segre_tensor_from_ambient(model, vec))
            sample["classification"] = report.as_dict()
            if report.border_rank_class == UNKNOWN:
                code = 2
        out["sample"] = sample
    _emit(out)
    return code


def _cmd_rank(args):
    t = _load_tensor_arg(args.tensor)
    try:
        out = rank_over_field(t, args.field, r_max=args.rmax, jobs=args.jobs)
    except SearchSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        raise _UsageError(str(exc))
    payload = {"field": args.field, "r_max": args.rmax}
    if isinstance(out, GreaterThan):
        payload.update(rank=None, greater_than=out.bound)
    else:
        payload.update(rank=out, greater_than=None)
    _emit(payload)
    return 0


def _cmd_stabilizer(args):
    t = _load_tensor_arg(args.tensor)
    try:
        out = {
            "dims": list(t.dims),
            "stabilizer_dim": stabilizer_dimension(t),
            "orbit_dim": orbit_dimension(t),
        }
    except ValueError as exc:
        raise _UsageError(str(exc))
    _emit(out)
    return 0


# -- argument wiring -----------------------------------------------------------

def _build_parser():
    parser = _Parser(
        prog="border3",
        description="Exact classification of tensors of border rank at most three.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("classify", help="classify a tensor from JSON")
    p.add_argument("tensor", nargs="?", default="-",
                   help="tensor JSON file, or - for stdin (default)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("generate", help="emit a normal-form tensor as JSON")
    p.add_argument("--type", required=True,
                   choices=["sigma2", "i", "ii", "iii", "iv", "orbit"])
    p.add_argument("--n", type=int, help="number of factors (default 3)")
    p.add_argument("--dims", help="comma-separated mode dimensions")
    p.add_argument("--factor", type=int,
                   help="distinguished factor for --type iv (default 1)")
    p.add_argument("--orbit", type=int, choices=list(ORBIT_IDS),
                   help="orbit id for --type orbit")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("strassen", help="evaluate the 27 commutator equations")
    p.add_argument("tensor", nargs="?", default="-")
    p.add_argument("--jacobian", action="store_true",
                   help="also report the Jacobian rank at the tensor")
    p.set_defaults(func=_cmd_strassen)

    p = sub.add_parser("limit", help="limit plane of three curves from a JSON config")
    p.add_argument("config", nargs="?", default="-",
                   help="config JSON: model, curves, optional prec/max_prec")
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("rank", help="exact rank over a small finite field")
    p.add_argument("tensor", nargs="?", default="-")
    p.add_argument("--field", type=int, required=True, choices=[2, 3, 5])
    p.add_argument("--rmax", type=int, default=6,
                   help="largest rank to certify before reporting greater-than")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel worker processes for the search (default 1)")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("stabilizer", help="stabilizer and orbit dimensions")
    p.add_argument("tensor", nargs="?", default="-")
    p.set_defaults(func=_cmd_stabilizer)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
