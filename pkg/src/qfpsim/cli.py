"""Command-line entry point tying the modules into reproducible pipelines.

Exit codes: 0 success, 1 input/parse error, 2 mathematical precondition
failure.  Every command is deterministic given --seed (default 0) and embeds
full provenance in its output document.
"""

from __future__ import annotations

import argparse
import shlex
import sys

import numpy as np

from . import bounds, compiler, fingerprint, io, problems, projections
from .embeddings import (
    SignMatrix,
    verify_realization,
    verify_threshold_embedding,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the interchange contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _builtin_matrix(args) -> SignMatrix:
    if args.builtin == "eq":
        if args.n is None:
            raise io.DocumentError("--builtin eq requires --n")
        return problems.eq_matrix(args.n)
    if args.builtin == "ip":
        if args.k is None:
            raise io.DocumentError("--builtin ip requires --k")
        return problems.ip_matrix(args.k)
    if args.builtin == "ham":
        if args.n is None or args.d is None:
            raise io.DocumentError("--builtin ham requires --n and --d")
        return problems.ham_matrix(args.n, args.d)
    raise io.DocumentError(f"unknown builtin {args.builtin!r}")


def _load_matrix(args) -> SignMatrix:
    if args.matrix is not None:
        return io.parse_sign_matrix(io.load(args.matrix))
    if args.builtin is not None:
        return _builtin_matrix(args)
    raise io.DocumentError("either --matrix or --builtin is required")


def _emit(kind: str, payload: dict, args, argv: list[str]) -> None:
    doc = io.document(kind, payload, command=shlex.join(["qfpsim", *argv]),
                      seed=getattr(args, "seed", None))
    io.dump(doc, args.out)


def _nan_to_none(matrix: np.ndarray) -> list:
    return [[None if np.isnan(v) else v for v in row] for row in matrix]


def cmd_margin(args, argv) -> int:
    m = _load_matrix(args)
    report = bounds.margin_report(
        m, heuristic=args.heuristic, d=args.dim, seed=args.seed
    )
    _emit(
        "report",
        {
            "report": "margin",
            "rows": m.rows,
            "cols": m.cols,
            "forster": report.forster,
            "linial": report.linial,
            "upper": report.upper,
            "heuristic_lower": report.heuristic_lower,
            "qent_lower_bits": report.qent_lower_bits,
            "repetition_lower": report.repetition_lower,
            "gamma_source": report.gamma_source,
            "note": "qent/repetition bounds are asymptotic, constant omitted",
        },
        args,
        argv,
    )
    return 0


def _simulation_inputs(args):
    if args.embedding is not None:
        embedding = io.parse_embedding(io.load(args.embedding))
        m = _load_matrix(args)
        return embedding, m
    if args.builtin == "eq":
        if args.n is None:
            raise io.DocumentError("--builtin eq requires --n")
        m = problems.eq_matrix(args.n)
        system = compiler.compile_smp(problems.eq_parity_protocol(args.n))
        return compiler.assemble_shared_randomness_states(system, m), m
    raise io.DocumentError("simulate needs --embedding plus a matrix, or --builtin eq")


def cmd_simulate(args, argv) -> int:
    embedding, m = _simulation_inputs(args)
    reps = fingerprint.required_repetitions(embedding.delta0, embedding.delta1, args.eps)
    theta = (embedding.delta0 + embedding.delta1) / 2.0
    protocol = fingerprint.FingerprintProtocol(embedding, reps, theta)
    report = fingerprint.run_protocol(protocol, m, args.trials, args.seed)
    _emit(
        "report",
        {
            "report": "simulation",
            "delta0": embedding.delta0,
            "delta1": embedding.delta1,
            "theta": theta,
            "eps": args.eps,
            "trials": args.trials,
            "copies": report.repetitions,
            "qubits_per_copy": report.qubits_per_copy,
            "total_qubits": report.total_qubits,
            "max_error": report.max_error,
            "per_pair_error": _nan_to_none(report.per_pair_error),
        },
        args,
        argv,
    )
    return 0


def cmd_compile(args, argv) -> int:
    if args.protocol is not None:
        protocol = io.parse_protocol(io.load(args.protocol))
        m = _load_matrix(args)
    elif args.builtin == "eq":
        if args.n is None:
            raise io.DocumentError("--builtin eq requires --n")
        m = problems.eq_matrix(args.n)
        if args.model == "one-way":
            protocol = problems.eq_parity_one_way_protocol(args.n, args.num_r, args.seed)
        else:
            protocol = problems.eq_parity_protocol(args.n, args.num_r, args.seed)
    else:
        raise io.DocumentError("compile needs --protocol plus a matrix, or --builtin eq")

    if isinstance(protocol, compiler.OneWayProtocol):
        system = compiler.compile_one_way(protocol)
    else:
        system = compiler.compile_smp(protocol)

    if args.no_assemble:
        _emit("vector_system", io.vector_system_payload(system), args, argv)
        return 0

    embedding = compiler.assemble_shared_randomness_states(system, m)
    stages = [{"stage": "assembled", "dimension": embedding.dimension,
               "delta0": embedding.delta0, "delta1": embedding.delta1}]
    if args.reduce:
        embedding = compiler.reduce_embedding_dimension(
            embedding, m, args.seed, target_dim=args.target_dim
        )
        stages.append({"stage": "reduced", "dimension": embedding.dimension,
                       "delta0": embedding.delta0, "delta1": embedding.delta1})
    payload = io.embedding_payload(embedding)
    payload["stages"] = stages
    _emit("embedding", payload, args, argv)
    return 0


def cmd_project(args, argv) -> int:
    vectors = io.parse_vectors(io.load(args.vectors))
    projected = projections.project_vectors(vectors, args.dim, args.seed,
                                            identity=args.identity)
    report = projections.verify_distortion(vectors, projected, args.eps)
    _emit(
        "report",
        {
            "report": "projection",
            "source_dim": vectors.shape[1],
            "target_dim": args.dim,
            "eps": args.eps,
            "ok": report.ok,
            "worst_pair": list(report.worst_pair),
            "max_distortion": report.max_distortion,
            "max_inner_product_error": report.max_inner_product_error,
            "projected": projected.tolist(),
        },
        args,
        argv,
    )
    return 0


def cmd_verify(args, argv) -> int:
    m = _load_matrix(args)
    # Vectors are renormalized before checking, so corrupted entries show up
    # as inequality violations (with the offending pair named) rather than as
    # parse failures.
    if args.embedding is not None:
        embedding = io.parse_embedding(io.load(args.embedding), renormalize=True)
        report = verify_threshold_embedding(embedding, m)
        payload = {
            "report": "verify_embedding",
            "valid": report.valid,
            "worst_zero_side": report.worst_zero_side,
            "worst_one_side": report.worst_one_side,
            "worst_zero_pair": list(report.worst_zero_pair) if report.worst_zero_pair else None,
            "worst_one_pair": list(report.worst_one_pair) if report.worst_one_pair else None,
            "delta0": embedding.delta0,
            "delta1": embedding.delta1,
        }
    elif args.realization is not None:
        realization = io.parse_realization(io.load(args.realization), renormalize=True)
        report = verify_realization(realization, m)
        payload = {
            "report": "verify_realization",
            "valid": report.valid,
            "achieved_margin": report.achieved_margin,
            "worst_pair": list(report.worst_pair) if report.worst_pair else None,
            "gamma": realization.gamma,
        }
    else:
        raise io.DocumentError("verify needs --embedding or --realization")
    _emit("report", payload, args, argv)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="qfpsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, builtin=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--matrix", default=None, help="sign_matrix document")
        if builtin:
            p.add_argument("--builtin", choices=("eq", "ip", "ham"), default=None)
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--k", type=int, default=None)
            p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("margin", help="margin bounds for a sign matrix")
    common(p)
    p.add_argument("--heuristic", action="store_true",
                   help="also search for a max-margin witness")
    p.add_argument("--dim", type=int, default=None, help="witness dimension")
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("simulate", help="Monte-Carlo run of a fingerprinting protocol")
    common(p)
    p.add_argument("--embedding", default=None, help="embedding document")
    p.add_argument("--eps", type=float, default=1.0 / 3.0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compile", help="compile a classical protocol into fingerprint states")
    common(p)
    p.add_argument("--protocol", default=None, help="protocol document")
    p.add_argument("--model", choices=("smp", "one-way"), default="smp")
    p.add_argument("--num-r", type=int, default=None,
                   help="sample this many shared random strings instead of enumerating")
    p.add_argument("--no-assemble", action="store_true",
                   help="emit the raw vector system instead of assembled states")
    p.add_argument("--reduce", action="store_true", help="JL-reduce the embedding dimension")
    p.add_argument("--target-dim", type=int, default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("project", help="random-project a vector list and report distortion")
    common(p, builtin=False)
    p.add_argument("--vectors", required=True, help="vectors document")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--identity", action="store_true", help="identity test mode (d == D)")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("verify", help="verify an embedding or realization against a matrix")
    common(p)
    p.add_argument("--embedding", default=None)
    p.add_argument("--realization", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except io.DocumentError as exc:
        print(f"qfpsim: input error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as exc:
        print(f"qfpsim: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
