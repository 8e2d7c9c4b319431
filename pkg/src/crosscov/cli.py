"""Command line interface.

stdout carries one JSON document (or the rendered region / graph), stderr
carries diagnostics.  Exit codes: 0 ok, 1 internal error, 2 invalid input,
3 infeasible.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import graphs, io
from .covariance import DEFAULT_TOL, min_eigenvalue, validate
from .errors import CrossCovError, InfeasiblePoint, InvalidInput
from .parameterization import alpha_bounds, decompose, paired_params
from .region import region_grid, render_ascii, render_svg
from .simulation import fit, rank_one_project, sample_latent

EXIT_CODES = {"ok": 0, "internal": 1, "invalid_input": 2, "infeasible": 3}


@dataclass
class CommandResult:
    status: str = "ok"
    payload: object = None
    diagnostics: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def _load_cov(args, strict=None):
    sigma, p, q = io.read_matrix(args.input, args.p, args.q)
    strict = args.strict_rank if strict is None else strict
    return validate(sigma, p, q, strict_rank=strict)


def _rank_one(cov, diagnostics):
    if cov.sv_ratio > DEFAULT_TOL.rank:
        diagnostics.append(f"cross block is not rank one (sv ratio {cov.sv_ratio:.3g}); using its rank-one projection")
        return rank_one_project(cov)
    return cov


def cmd_decompose(args) -> CommandResult:
    res = CommandResult()
    cov = _rank_one(_load_cov(args), res.diagnostics)
    factors = decompose(cov)
    bounds = alpha_bounds(cov, factors)
    for flag, name in ((bounds.flat_min, "alpha_min"), (bounds.flat_max, "alpha_max")):
        if flag:
            res.diagnostics.append(f"eigenvalue curve is flat at zero near {name}; reporting the extreme root")
    res.payload = {
        "u": factors.u,
        "v": factors.v,
        "d": factors.d,
        "alpha_min": bounds.alpha_min,
        "alpha_max": bounds.alpha_max,
        "rho_min": bounds.rho_min,
        "sv_ratio": cov.sv_ratio,
    }
    return res


def cmd_params(args) -> CommandResult:
    res = CommandResult()
    if args.rho is None or args.alpha is None:
        raise InvalidInput("params needs --rho and --alpha")
    cov = _rank_one(_load_cov(args), res.diagnostics)
    factors = io.read_factors(args.factors) if args.factors else decompose(cov)
    params = paired_params(cov, factors, args.rho, args.alpha)
    eig_ee, eig_zz = min_eigenvalue(params.sigma_ee), min_eigenvalue(params.sigma_zz)
    for name, lam, block in (("sigma_ee", eig_ee, cov.xx), ("sigma_zz", eig_zz, cov.yy)):
        if abs(lam) <= DEFAULT_TOL.psd * max(np.max(np.abs(np.linalg.eigvalsh(block))), 1.0):
            res.diagnostics.append(f"{name} is singular (minimum eigenvalue {lam:.3g}): boundary of the feasible set")
    res.payload = dict(params.to_json(), min_eig_sigma_ee=eig_ee, min_eig_sigma_zz=eig_zz)
    return res


def cmd_region(args) -> CommandResult:
    if args.format not in ("ascii", "svg"):
        raise InvalidInput(f"--format must be ascii or svg, got {args.format!r}")
    if args.steps < 2:
        raise InvalidInput("--steps must be at least 2")
    res = CommandResult()
    cov = _rank_one(_load_cov(args), res.diagnostics)
    bounds = alpha_bounds(cov)
    grid = region_grid(bounds, args.steps)
    text = render_ascii(grid, bounds) if args.format == "ascii" else render_svg(grid, bounds)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        res.payload = {"out": args.out, "format": args.format, "steps": args.steps, "shaded": int(grid.mask.sum())}
    else:
        res.payload = text
    return res


def _figure4_from_args(args, k: int) -> graphs.MixedGraph:
    variants = args.variant.split(",")
    conditions = (args.condition or "I").split(",")
    if k >= len(variants):
        raise InvalidInput("not enough --variant values")
    cond = conditions[k] if k < len(conditions) else conditions[-1]
    return graphs.figure4(variant=variants[k].strip(), condition=cond.strip(), p=args.p or 1, q=args.q or 1)


def _graphs_from_args(args, count: int) -> list:
    inputs = args.input or []
    if inputs:
        if len(inputs) < count:
            raise InvalidInput(f"need {count} --input graph files")
        return [graphs.MixedGraph.from_json(io._load(path)) for path in inputs[:count]]
    if args.variant:
        return [_figure4_from_args(args, k) for k in range(count)]
    raise InvalidInput("give --input graph file(s) or --variant/--condition/--p/--q")


def _sep_json(t):
    a, b, Z = t
    return [a, b, [z for z in sorted(Z, key=str)]]


def cmd_graph(args) -> CommandResult:
    res = CommandResult()
    if args.action == "figure4":
        if not args.variant:
            raise InvalidInput("figure4 needs --variant")
        res.payload = _figure4_from_args(args, 0).to_json()
    elif args.action == "check":
        (g,) = _graphs_from_args(args, 1)
        ancestral = graphs.is_ancestral(g)
        res.payload = {"ancestral": ancestral, "maximal": graphs.is_maximal(g) if ancestral else False}
    elif args.action == "msep":
        (g,) = _graphs_from_args(args, 1)
        if args.query is None:
            raise InvalidInput("msep needs --query 'A | B | Z'")
        res.payload = graphs.m_separated(g, graphs.parse_query(args.query))
    elif args.action == "equiv":
        g1, g2 = _graphs_from_args(args, 2)
        over = None
        if set(g1.vertices) != set(g2.vertices):
            # single-latent structures: compare with eta standing in for xi
            g1 = graphs.rename_vertices(g1, {"eta": "xi"})
            g2 = graphs.rename_vertices(g2, {"eta": "xi"})
            over = [v for v in g1.vertices if v in set(g2.vertices)]
            res.diagnostics.append(f"vertex sets differ; comparing separations among {over}")
        eq = graphs.markov_equivalent(g1, g2, over)
        res.payload = {"equivalent": eq.equivalent}
        if not eq.equivalent:
            res.payload.update(witness=_sep_json(eq.witness), separated_in=eq.holds_in)
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInput(f"unknown graph action {args.action!r}")
    return res


def cmd_simulate(args) -> CommandResult:
    if args.n is None or args.n < 1 or args.out is None:
        raise InvalidInput("simulate needs --n >= 1 and --out")
    params = io.read_params(args.input)
    data = sample_latent(params, args.n, args.seed)
    io.write_csv(data, args.out)
    return CommandResult(payload={"rows": data.n, "columns": data.columns, "seed": args.seed, "out": args.out})


def cmd_fit(args) -> CommandResult:
    data = io.read_csv(args.input, args.p)
    report = fit(data)
    return CommandResult(payload=report.to_json(), diagnostics=list(report.diagnostics))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crosscov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_args(sp):
        sp.add_argument("--input", required=True, help="matrix JSON {p, q, sigma}")
        sp.add_argument("--p", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--strict-rank", action="store_true", help="require an exactly rank-one cross block")

    sp = sub.add_parser("decompose", help="SVD factors and alpha bounds")
    matrix_args(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("params", help="latent parameters at (rho, alpha)")
    matrix_args(sp)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--factors", help="reuse u, v, d from a decompose output file")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("region", help="render the feasible (rho, alpha) region")
    matrix_args(sp)
    sp.add_argument("--steps", type=int, default=40)
    sp.add_argument("--format", default="ascii")
    sp.add_argument("--out", help="write the rendering here instead of stdout")
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("graph", help="mixed graph queries")
    sp.add_argument("action", choices=["check", "equiv", "figure4", "msep"])
    sp.add_argument("--input", action="append", help="graph JSON (give twice for equiv)")
    sp.add_argument("--variant", help="a..e; comma separated pair for equiv")
    sp.add_argument("--condition", help="I or II; comma separated pair for equiv")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--query", help="'A1,A2 | B1 | Z1,Z2'")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("simulate", help="sample data from a params JSON")
    sp.add_argument("--input", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fit", help="estimate bounds and a single-latent fit from a data CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--p", type=int)
    sp.set_defaults(func=cmd_fit)
    return parser


def run(argv=None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasiblePoint as exc:
        return CommandResult("infeasible", {"error": str(exc), "failing": list(exc.failing)}, [str(exc)])
    except CrossCovError as exc:
        return CommandResult(exc.status, {"error": str(exc), "kind": type(exc).__name__}, [str(exc)])
    except (OSError, ValueError, KeyError) as exc:
        return CommandResult("invalid_input", {"error": str(exc), "kind": type(exc).__name__}, [str(exc)])


def main(argv=None) -> int:
    try:
        result = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_CODES["internal"]
    for line in result.diagnostics:
        print(f"warning: {line}" if result.status == "ok" else line, file=sys.stderr)
    payload = result.payload
    if isinstance(payload, str):
        sys.stdout.write(payload)
    elif payload is not None:
        sys.stdout.write(io.dumps(payload) + "\n")
    return result.exit_code


def entry() -> None:
    sys.exit(main())
