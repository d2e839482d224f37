"""``diagmult`` command line: mult, oracle, factor, enumerate and bench.

Every command prints one JSON document on stdout.  Failures print
``{"error": {"code": ..., "message": ...}}`` and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .bench import run_bench
from .diagrams import Group, PartitionDiagram, enumerate_diagrams
from .errors import DiagmultError
from .factorization import factor, split_planar
from .kernels import OpCounter, TensorVector, layer_apply, matrix_mult, op_report
from .oracle import dense_matrix, export_dense, naive_mult
from .validation import check_group

log = logging.getLogger("diagmult")

# n is irrelevant to the spanning set for these groups, so a default is harmless.
_DEFAULT_N = {Group.ORTHOGONAL: 2, Group.SYMPLECTIC: 2}


class BadArguments(Exception):
    code = "BadArguments"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadArguments(message)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise BadArguments(f"{path}: invalid JSON ({exc})") from None


def _group(args):
    g = Group.parse(args.group)
    n = args.n if args.n is not None else _DEFAULT_N.get(g)
    if n is None:
        raise BadArguments(f"--n is required for group {g.value}")
    return check_group(g, n)


def _diagrams(path) -> tuple[list[PartitionDiagram], bool]:
    doc = _load_json(path)
    if isinstance(doc, list):
        return [PartitionDiagram.from_json(x) for x in doc], True
    return [PartitionDiagram.from_json(doc)], False


def _vector(path, n) -> TensorVector:
    doc = _load_json(path)
    if isinstance(doc, list):
        doc = {"n": n, "order": round(np.log(len(doc)) / np.log(n)) if n > 1 else 0, "coeffs": doc}
    vec = TensorVector.from_json(doc)
    if vec.n != n:
        raise BadArguments(f"vector is over R^{vec.n} but --n is {n}")
    return vec


def _weights(path) -> list:
    doc = _load_json(path)
    if isinstance(doc, dict):
        doc = doc.get("weights")
    if not isinstance(doc, list):
        raise BadArguments(f"{path}: expected a list of weights or a layer weight file")
    return doc


def cmd_mult(args) -> dict:
    g = _group(args)
    diagrams, many = _diagrams(args.diagram)
    vec = _vector(args.vector, g.n)
    counter = OpCounter() if args.count_ops else None
    if args.weights is not None:
        weights = _weights(args.weights)
        if len(weights) != len(diagrams):
            raise BadArguments(f"{len(weights)} weights for {len(diagrams)} diagrams")
    elif many:
        raise BadArguments("a list of diagrams needs --weights")
    else:
        weights = None

    if weights is None:
        out = matrix_mult(g, diagrams[0], vec, counter)
    else:
        out = layer_apply(g, list(zip(weights, diagrams)), vec, l=diagrams[0].l if diagrams else None, counter=counter)
    result = out.to_json()
    if args.check_oracle:
        dense = sum(
            (w if weights is not None else 1) * dense_matrix(g, d).astype(object)
            for w, d in zip(weights or [1], diagrams)
        )
        expected = naive_mult(np.asarray(dense), vec.coeffs.astype(object))
        result["oracle_match"] = bool(np.array_equal(expected, out.coeffs.astype(object)))
    if counter is not None:
        result["ops"] = op_report(counter)
    return result


def cmd_oracle(args) -> dict:
    g = _group(args)
    (d,), _ = _diagrams(args.diagram)
    M = dense_matrix(g, d)
    if args.out_csv:
        header = export_dense(M, g, d, args.out_csv)
        return {**header, "csv": args.out_csv}
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "group": g.group.value,
        "n": g.n,
        "diagram": d.to_json(),
        "entries": M.tolist(),
    }


def cmd_factor(args) -> dict:
    g = _group(args)
    (d,), _ = _diagrams(args.diagram)
    fz = factor(g, d)
    dec = split_planar(g, fz.planar)
    return {**fz.to_json(), "atoms": [a.to_json() for a in dec.atoms]}


def cmd_enumerate(args) -> dict:
    g = _group(args)
    basis = enumerate_diagrams(g, args.k, args.l)
    return {
        "group": g.group.value,
        "n": g.n,
        "k": args.k,
        "l": args.l,
        "count": len(basis),
        "diagrams": [d.to_json() for d in basis],
    }


def cmd_bench(args) -> dict:
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError:
        raise BadArguments(f"--n-list must be comma-separated integers, got {args.n_list!r}") from None
    if not n_list:
        raise BadArguments("--n-list is empty")
    diagrams = _diagrams(args.diagram)[0] if args.diagram else None
    log.info("bench %s k=%d l=%d n=%s", args.group, args.k, args.l, n_list)
    return run_bench(
        args.group,
        args.k,
        args.l,
        n_list,
        repeats=args.repeats,
        seed=args.seed,
        check_oracle=args.check_oracle,
        num_diagrams=args.num_diagrams,
        diagrams=diagrams,
        max_workers=args.workers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diagmult", description="Fast multiplication by equivariant spanning-set matrices.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_n=True):
        p.add_argument("--group", required=True, help="O, SO, Sp or Sn")
        if with_n:
            p.add_argument("--n", type=int, help="dimension of R^n (defaults to 2 for O and Sp)")

    p = sub.add_parser("mult", help="multiply a vector by a diagram matrix (or weighted sum)")
    common(p)
    p.add_argument("--diagram", required=True, help="diagram JSON, or a list of diagrams")
    p.add_argument("--vector", required=True, help="vector JSON {n, order, coeffs}")
    p.add_argument("--weights", help="weights list or layer weight file")
    p.add_argument("--check-oracle", action="store_true")
    p.add_argument("--count-ops", action="store_true")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("oracle", help="dense matrix of a diagram")
    common(p)
    p.add_argument("--diagram", required=True)
    p.add_argument("--out-csv", help="write entries as CSV (header goes to FILE.json)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("factor", help="permutation, planar diagram, permutation")
    common(p)
    p.add_argument("--diagram", required=True)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("enumerate", help="spanning-set diagrams in canonical order")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bench", help="naive versus staged multiplication")
    common(p, with_n=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n-list", required=True, help="e.g. 2,4,6,8")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-diagrams", type=int, default=4)
    p.add_argument("--diagram", help="benchmark these diagrams instead of sampling")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--check-oracle", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
        result = args.func(args)
        code = 0
    except (BadArguments, DiagmultError) as exc:
        result, code = {"error": {"code": exc.code, "message": str(exc)}}, 2 if isinstance(exc, BadArguments) else 1
    except ValueError as exc:
        result, code = {"error": {"code": "BadArguments", "message": str(exc)}}, 2
    except FileNotFoundError as exc:
        result, code = {"error": {"code": "FileNotFound", "message": str(exc)}}, 1
    except (KeyError, TypeError) as exc:
        result, code = {"error": {"code": "BadArguments", "message": f"malformed input: {exc}"}}, 2
    json.dump(result, stdout)
    stdout.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
