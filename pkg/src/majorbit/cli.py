"""Command-line front end: one subcommand per operation, JSON in and out.

Exit codes encode computational health, not mathematical truth: 0 for a
completed computation (whatever the verdict), 2 for input or schema
problems, 3 for internal invariant violations. stdout carries exactly one
JSON document; human-readable logs go to stderr.
"""

import argparse
import json
import sys

from .errors import InternalError, MajorbitError, SchemaError
from .extremality import check_extreme
from .hermitian import (
    DoublyStochastic,
    HermitianOperator,
    birkhoff_decompose,
    check_extreme_diag,
    eig_scale,
    identity_suite,
    matrix_majorise,
    t_transform_chain,
)
from .measure import parse_function, parse_function_normalized, serialize_function
from .orbit import enumerate_extreme, oracle_extreme, sample_orbit
from .scales import majorise_check, rearrange, submajorise_check
from .selftest import run_all
from .witness import build_witness, serialize_witness


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _load_function(path, normalize=False):
    doc = _read_json(path)
    if normalize:
        return parse_function_normalized(doc)
    return parse_function(doc)


def _load_matrix(path, tol):
    return HermitianOperator.from_document(_read_json(path), tol=tol)


def _load_vector(path):
    doc = _read_json(path)
    if not isinstance(doc, list):
        raise SchemaError(f"{path} must hold a JSON array")
    return doc


def _cmd_rearrange(args):
    return 0, rearrange(_load_function(args.function, args.normalize)).serialize()


def _cmd_majorise(args):
    x = _load_function(args.x, args.normalize)
    y = _load_function(args.y, args.normalize)
    return 0, majorise_check(rearrange(x), rearrange(y)).serialize()


def _cmd_submajorise(args):
    x = _load_function(args.x, args.normalize)
    y = _load_function(args.y, args.normalize)
    return 0, {"holds": submajorise_check(x, y)}


def _cmd_extreme(args):
    x = _load_function(args.x, args.normalize)
    y = _load_function(args.y, args.normalize)
    verdict = check_extreme(x, y)
    return 0, verdict.serialize(include_witness=args.witness)


def _cmd_witness(args):
    x = _load_function(args.x, args.normalize)
    y = _load_function(args.y, args.normalize)
    return 0, serialize_witness(build_witness(x, y))


def _cmd_oracle(args):
    x = _load_function(args.x, args.normalize)
    y = _load_function(args.y, args.normalize)
    return 0, {"extreme": oracle_extreme(x, y)}


def _cmd_enumerate(args):
    y = _load_function(args.y, args.normalize)
    return 0, [serialize_function(f) for f in enumerate_extreme(y)]


def _cmd_sample(args):
    y = _load_function(args.y, args.normalize)
    return 0, serialize_function(sample_orbit(y, args.seed))


def _cmd_matrix_eig(args):
    a = _load_matrix(args.function, args.tol)
    return 0, eig_scale(a, snap_denominator=args.snap).serialize()


def _cmd_matrix_majorise(args):
    x = _load_matrix(args.x, args.tol)
    y = _load_matrix(args.y, args.tol)
    return 0, matrix_majorise(x, y, tol=args.tol).serialize()


def _cmd_matrix_extreme(args):
    x = _load_matrix(args.x, args.tol)
    y = _load_matrix(args.y, args.tol)
    return 0, {"extreme": check_extreme_diag(x, y)}


def _cmd_birkhoff(args):
    doc = _read_json(args.function)
    ds = DoublyStochastic.from_document(doc, tol=args.tol or 1e-9)
    decomposition = birkhoff_decompose(ds)
    out = decomposition.serialize()
    import numpy as np

    out["residual"] = float(
        np.max(np.abs(decomposition.matrix(ds.n) - ds.entries))
    )
    return 0, out


def _cmd_ttransform(args):
    x = _load_vector(args.x)
    y = _load_vector(args.y)
    s = t_transform_chain(x, y)
    return 0, {"matrix": s.entries.tolist()}


def _cmd_suite(args):
    trials = args.trials if args.trials is not None else 200
    report = identity_suite(args.seed, n=args.dim, trials=trials, tol=args.tol or 1e-8)
    return 0, report.serialize()


def _cmd_selftest(args):
    results, ok = run_all(seed=args.seed, trials=args.trials, stream=sys.stderr)
    doc = {
        "seed": args.seed,
        "passed": ok,
        "criteria": [r.serialize() for r in results],
    }
    return (0 if ok else 1), doc


def build_parser() -> _Parser:
    parser = _Parser(prog="majorbit", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1, help="PRNG seed (u64)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--normalize", action="store_true",
                        help="rescale input masses to total 1 before use")
    common.add_argument("--json-indent", type=int, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **flags):
        p = sub.add_parser(name, parents=[common])
        if flags.get("f"):
            p.add_argument("-f", dest="function", required=True)
        if flags.get("x"):
            p.add_argument("-x", dest="x", required=True)
        if flags.get("y"):
            p.add_argument("-y", dest="y", required=True)
        if flags.get("witness"):
            p.add_argument("--witness", action="store_true")
        if flags.get("snap"):
            p.add_argument("--snap", type=int, default=None,
                           help="snap eigenvalues to denominators up to N")
        if flags.get("dim"):
            p.add_argument("--dim", type=int, default=6)
        p.set_defaults(handler=handler)
        return p

    add("rearrange", _cmd_rearrange, f=True)
    add("majorise", _cmd_majorise, x=True, y=True)
    add("submajorise", _cmd_submajorise, x=True, y=True)
    add("extreme", _cmd_extreme, x=True, y=True, witness=True)
    add("witness", _cmd_witness, x=True, y=True)
    add("oracle", _cmd_oracle, x=True, y=True)
    add("enumerate", _cmd_enumerate, y=True)
    add("sample", _cmd_sample, y=True)
    add("matrix-eig", _cmd_matrix_eig, f=True, snap=True)
    add("matrix-majorise", _cmd_matrix_majorise, x=True, y=True)
    add("matrix-extreme", _cmd_matrix_extreme, x=True, y=True)
    add("birkhoff", _cmd_birkhoff, f=True)
    add("ttransform", _cmd_ttransform, x=True, y=True)
    add("suite", _cmd_suite, dim=True)
    add("selftest", _cmd_selftest)
    return parser


def main(argv=None) -> int:
    indent = None
    try:
        args = build_parser().parse_args(argv)
        indent = args.json_indent
        code, doc = args.handler(args)
    except MajorbitError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}, indent=indent))
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - surface as invariant violation
        print(json.dumps({"error": "InternalError", "detail": str(exc)}, indent=indent))
        return InternalError.exit_code
    print(json.dumps(doc, indent=indent))
    return code


def entry() -> None:
    sys.exit(main())
