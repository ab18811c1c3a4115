"""Command line front end.

Five subcommands: reduce (rebuild a code at bounded weight), layer
(stack a code into a 3D-local layout), analyze (print code parameters),
generate (write example codes), and cone (build the 2-complex over a
degree-3 graph). Codes travel as JSON files in the row-support format,
graphs as edge lists, layouts as point clouds; see the io module.

Exit codes: 0 on success, 2 for argument and file-parse problems, 3
when an input fails validation, 4 when an assembled output violates a
structural invariant. The random seed comes from --seed when given,
else the QWEIGHT_SEED environment variable, else 0, and is echoed in
every run's output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from qweight.assembler import VerificationError, weight_reduce
from qweight.cone import cone_over_graph, to_obj
from qweight.css import DEFAULT_DISTANCE_BUDGET, params, validate
from qweight.generators import hastings_sparse_x, random_dense_css, standard_code
from qweight.io import (
    code_to_json,
    dump_code,
    load_code,
    load_edge_list,
    write_point_cloud,
)
from qweight.layer_code import build_layer_code
from qweight.report import format_report, write_report

PARSE_ERROR = 2
VALIDATION_ERROR = 3
INVARIANT_ERROR = 4


class _Failure(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.message = message


def _resolve_seed(explicit: Optional[int]) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("QWEIGHT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise _Failure(
            PARSE_ERROR, f"QWEIGHT_SEED must be an integer, got {env!r}"
        ) from None


def _load_code_or_fail(path: str):
    try:
        return load_code(path)
    except OSError as err:
        raise _Failure(PARSE_ERROR, f"cannot read {path}: {err}") from err
    except ValueError as err:
        raise _Failure(PARSE_ERROR, f"{path}: {err}") from err


def _require_commuting(code) -> None:
    check = validate(code)
    if not check.ok:
        i, l = check.anticommuting_pairs[0]
        raise _Failure(
            VALIDATION_ERROR,
            f"X check {i} and Z check {l} overlap on an odd number of qubits",
        )


def _run_reduce(args: argparse.Namespace) -> int:
    code = _load_code_or_fail(args.input)
    seed = _resolve_seed(args.seed)
    _require_commuting(code)
    if args.distance_budget < 0:
        raise _Failure(PARSE_ERROR, "--distance-budget must be >= 0")
    budget = args.distance_budget if args.distance_budget else None
    try:
        reduced = weight_reduce(
            code,
            uniformize=args.uniformize,
            expander_threshold=args.expander_threshold,
            seed=seed,
            distance_budget=budget,
        )
    except VerificationError as err:
        raise _Failure(INVARIANT_ERROR, str(err)) from err
    sys.stdout.write(format_report(reduced.report))
    if args.out:
        dump_code(reduced.code, args.out)
    if args.report:
        write_report(reduced.report, args.report)
    return 0


def _run_layer(args: argparse.Namespace) -> int:
    code = _load_code_or_fail(args.input)
    try:
        embedding = build_layer_code(code)
    except ValueError as err:
        raise _Failure(VALIDATION_ERROR, str(err)) from err
    except VerificationError as err:
        raise _Failure(INVARIANT_ERROR, str(err)) from err
    out = embedding.code
    print(f"planes: {embedding.plane_count}")
    print(f"qubits: {out.n}")
    print(f"x checks: {out.hx.rows}")
    print(f"z checks: {out.hz.rows}")
    print(f"locality radius: {embedding.locality_radius}")
    if args.out:
        dump_code(out, args.out)
    if args.coords:
        write_point_cloud(embedding, args.coords)
    return 0


def _run_analyze(args: argparse.Namespace) -> int:
    code = _load_code_or_fail(args.input)
    _require_commuting(code)
    print(params(code, distance_budget=args.distance_budget))
    return 0


def _run_generate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    needed = {"dense": ["n", "mx", "mz"], "hastings": ["n", "beta"],
              "standard": ["name"]}[args.kind]
    missing = [f"--{opt}" for opt in needed if getattr(args, opt) is None]
    if missing:
        raise _Failure(
            PARSE_ERROR, f"{args.kind} needs {' '.join(missing)}"
        )
    try:
        if args.kind == "dense":
            code = random_dense_css(args.n, args.mx, args.mz, seed=seed)
        elif args.kind == "hastings":
            code = hastings_sparse_x(args.n, args.beta, seed=seed)
        else:
            code = standard_code(args.name)
    except (ValueError, RuntimeError) as err:
        raise _Failure(PARSE_ERROR, str(err)) from err
    print(f"generated {code.label}: n={code.n} "
          f"checks={code.hx.rows}+{code.hz.rows}")
    print(f"seed: {seed}")
    if args.out:
        dump_code(code, args.out)
    else:
        print(json.dumps(code_to_json(code)))
    return 0


def _run_cone(args: argparse.Namespace) -> int:
    try:
        graph = load_edge_list(args.graph)
    except OSError as err:
        raise _Failure(PARSE_ERROR, f"cannot read {args.graph}: {err}") from err
    except ValueError as err:
        raise _Failure(PARSE_ERROR, f"{args.graph}: {err}") from err
    try:
        complex2, cert = cone_over_graph(graph)
    except ValueError as err:
        raise _Failure(VALIDATION_ERROR, str(err)) from err
    for name in ("vertex_degree_max", "edge_face_max", "face_size_max",
                 "boundary_vertex_degree_max", "boundary_edge_face_max",
                 "cells_total", "h0_rank", "h1_rank"):
        print(f"{name}: {getattr(cert, name)}")
    edges = graph.number_of_edges()
    constant = cert.cells_total / (edges * (1 + math.log2(edges)))
    print(f"cells constant: {constant:.4f}")
    if args.out:
        Path(args.out).write_text(to_obj(complex2))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qweight",
        description="Rebuild CSS codes at bounded stabilizer weight.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    reduce_p = sub.add_parser(
        "reduce", help="rebuild a code with check weight <= 5, qubit weight <= 6"
    )
    reduce_p.add_argument("input", help="code JSON file")
    reduce_p.add_argument("--seed", type=int, default=None)
    reduce_p.add_argument(
        "--uniformize", action=argparse.BooleanOptionalAction, default=True,
        help="pad grid heights to a common power of two (default on)",
    )
    reduce_p.add_argument(
        "--expander-threshold", type=float, default=0.1,
        help="Cheeger constant below which a boundary graph gets extra edges",
    )
    reduce_p.add_argument(
        "--distance-budget", type=int, default=0,
        help="coset enumeration budget for the distance bound; 0 skips it",
    )
    reduce_p.add_argument("--out", help="write the reduced code JSON here")
    reduce_p.add_argument(
        "--report",
        help="write a JSON report here, with weight and cone charts beside it",
    )
    reduce_p.set_defaults(run=_run_reduce)

    layer_p = sub.add_parser(
        "layer", help="stack a code into a 3D-local layout with weights <= 6"
    )
    layer_p.add_argument("input", help="code JSON file")
    layer_p.add_argument("--out", help="write the layered code JSON here")
    layer_p.add_argument("--coords", help="write the point cloud here")
    layer_p.set_defaults(run=_run_layer)

    analyze_p = sub.add_parser("analyze", help="print n, k, d, and max weight")
    analyze_p.add_argument("input", help="code JSON file")
    analyze_p.add_argument(
        "--distance-budget", type=int, default=DEFAULT_DISTANCE_BUDGET,
        help="coset enumeration budget; prints ? when exhausted",
    )
    analyze_p.set_defaults(run=_run_analyze)

    generate_p = sub.add_parser("generate", help="write an example code")
    generate_p.add_argument(
        "kind", choices=["dense", "hastings", "standard"]
    )
    generate_p.add_argument("--n", type=int)
    generate_p.add_argument("--mx", type=int, help="number of X checks (dense)")
    generate_p.add_argument("--mz", type=int, help="number of Z checks (dense)")
    generate_p.add_argument(
        "--beta", type=float, help="row density factor (hastings)"
    )
    generate_p.add_argument(
        "--name", help="fixture name (standard), e.g. steane or toric(3)"
    )
    generate_p.add_argument("--seed", type=int, default=None)
    generate_p.add_argument("--out", help="write the code JSON here")
    generate_p.set_defaults(run=_run_generate)

    cone_p = sub.add_parser(
        "cone", help="build the coned 2-complex over a degree-3 graph"
    )
    cone_p.add_argument("graph", help="edge-list file, one 'u v' per line")
    cone_p.add_argument("--out", help="write the complex as OBJ text here")
    cone_p.set_defaults(run=_run_cone)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else PARSE_ERROR
    try:
        return args.run(args)
    except _Failure as fail:
        print(f"error: {fail.message}", file=sys.stderr)
        return fail.exit_code


if __name__ == "__main__":
    sys.exit(main())
