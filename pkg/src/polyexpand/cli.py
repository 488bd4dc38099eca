"""Command-line front end.

Exit status: 0 success, 2 malformed or unusable input, 3 limit exceeded, 4 invariant violated.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import cubespan, enumeration, families, walls
from .core import ZeroOnePolytope, dimension, format_pol, parse_pol, skeleton
from .errors import FormatError, LimitExceeded, PolyexpandError, VerificationFailure
from .expansion import (BRUTE_FORCE_LIMIT, certified_bound, diameter, edge_expansion_exact,
                        maxcut_bruteforce, np_reduction, validate_target_flow)
from .graph import Graph, format_dimacs, parse_dimacs
from .spectral import DEFAULT_TOL, spectral_report

log = logging.getLogger("polyexpand")

EXIT_OK, EXIT_FORMAT, EXIT_LIMIT, EXIT_VERIFY = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    max_n: int = BRUTE_FORCE_LIMIT
    workers: int | None = None
    out: Path | None = None

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.max_n <= 0:
            raise ValueError("limits must be positive")
        if self.workers is not None and self.workers <= 0:
            raise ValueError("worker count must be positive")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _is_dimacs(text: str) -> bool:
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith(("#", "c")):
            return s.startswith("p ")
    return False


def load_polytope(path: str) -> ZeroOnePolytope:
    return parse_pol(_read_text(path))


def load_graph(spec: str) -> Graph:
    """A DIMACS or .pol file (then its skeleton), or a name such as K4, C6, P3, E5 (edgeless)."""
    m = re.fullmatch(r"([KCPE])(\d+)", spec)
    if m and not Path(spec).exists():
        kind, n = m.group(1), int(m.group(2))
        return {"K": Graph.complete, "C": Graph.cycle, "P": Graph.path,
                "E": lambda k: Graph(k, ())}[kind](n)
    text = _read_text(spec)
    if _is_dimacs(text):
        return parse_dimacs(text)
    return skeleton(parse_pol(text))


def _emit(cfg: RunConfig, text: str, name: str | None = None) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    target = cfg.out
    if name is not None:
        target.mkdir(parents=True, exist_ok=True)
        target = target / name
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)


# --- commands ---------------------------------------------------------------------

def cmd_skeleton(cfg, args):
    P = load_polytope(args.input)
    G = skeleton(P)
    _emit(cfg, format_dimacs(G))
    return EXIT_OK


def cmd_expansion(cfg, args):
    G = load_graph(args.input)
    h, cert = edge_expansion_exact(G, cfg.max_n)
    if not cert.check(G) or cert.ratio != h:
        raise VerificationFailure("certificate recount disagrees with reported expansion")
    print(f"expansion: {h}")
    print(f"witness: {' '.join(map(str, cert.subset))}")
    print(f"cut_size: {cert.cut_size}")
    return EXIT_OK


def cmd_spectral(cfg, args):
    G = load_graph(args.input)
    _emit(cfg, spectral_report(G, cfg.tol).to_json() + "\n")
    return EXIT_OK


def cmd_walls(cfg, args):
    P = load_polytope(args.input)
    _emit(cfg, walls.walls_json(P) + "\n")
    return EXIT_OK


def cmd_check_fwm(cfg, args):
    P = load_polytope(args.input)
    check = walls.has_fractional_wall_matchings(P)
    print(f"fractional_wall_matchings: {'yes' if check.ok else 'no'}")
    for W in check.failing:
        print(f"failing_wall: {W.sigma}")
    return EXIT_OK


def cmd_wall_flow(cfg, args):
    P = load_polytope(args.input)
    G = skeleton(P)
    if args.target is not None:
        f = walls.build_wall_flow(P, args.target)
        if not validate_target_flow(G, f, args.target):
            raise VerificationFailure(f"flow into {args.target} fails divergence check")
        _emit(cfg, f.dump())
        return EXIT_OK
    phi, phi_max = walls.total_wall_flow(P)
    if phi_max > Fraction(P.n, 2):
        raise VerificationFailure(f"phi_max {phi_max} exceeds n/2")
    if cfg.out is not None:
        _emit(cfg, phi.dump())
    print(f"phi_max: {phi_max}")
    print(f"bound: {certified_bound(P.n, phi_max)}")
    return EXIT_OK


def cmd_balanced(cfg, args):
    P = load_polytope(args.input)
    ok, bad = walls.is_balanced(P)
    print(f"balanced: {'yes' if ok else 'no'}")
    if bad:
        W, i, j = bad
        print(f"violation: wall {W.sigma} coordinates {i} {j}")
    return EXIT_OK


def cmd_cubespan(cfg, args):
    P = load_polytope(args.input)
    res = cubespan.cswalls_total_flow(P)
    if res.complete and res.phi_max > Fraction(P.n, 2):
        raise VerificationFailure(f"phi_max {res.phi_max} exceeds n/2 despite full coverage")
    _emit(cfg, res.to_json() + "\n")
    return EXIT_OK


def cmd_gen(cfg, args):
    fam, params = args.family, args.params
    try:
        if fam in ("cube", "cube_minus_vertex"):
            P = getattr(families, fam)(int(params[0]))
        elif fam == "hypersimplex":
            P = families.hypersimplex(int(params[0]), int(params[1]))
        elif fam == "knapsack":
            weights = [int(x) for x in params[0].split(",")]
            P = families.knapsack_polytope(weights, int(params[1]))
        elif fam in ("stable_set", "matching", "perfect_matching", "spanning_tree"):
            P = getattr(families, f"{fam}_polytope")(load_graph(params[0]))
        else:
            raise FormatError(f"unknown family {fam!r}; choose from {', '.join(families.FAMILIES)}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, PolyexpandError):
            raise
        raise FormatError(f"bad parameters for {fam}: {exc or 'missing parameter'}") from None
    _emit(cfg, format_pol(P, f"{fam} {' '.join(params)}"))
    return EXIT_OK


def cmd_reduce_maxcut(cfg, args):
    G = load_graph(args.input)
    red = np_reduction(G)
    h, _ = edge_expansion_exact(red.g_prime, cfg.max_n)
    mc, _ = maxcut_bruteforce(G, cfg.max_n)
    rhs = G.n - Fraction(mc, G.n)
    print(f"h(G') = {h} = {G.n} - {mc}/{G.n}" if h == rhs else f"h(G') = {h}; n - maxcut/n = {rhs}")
    if h != rhs:
        raise VerificationFailure("reduction identity violated")
    return EXIT_OK


def cmd_classify(cfg, args):
    records = enumeration.classify(args.d, stretch=args.stretch_d5)
    print(f"d={args.d}: {len(records)} classes")
    if cfg.out is not None:
        for i, r in enumerate(records):
            _emit(cfg, format_pol(r.representative, f"class {i} signature {r.signature}"),
                  f"class_{i:04d}.pol")
    return EXIT_OK


def cmd_survey(cfg, args):
    rows = enumeration.survey(args.d, cfg.tol, cfg.workers, stretch=args.stretch_d5)
    bad = [r for r in rows if not (r.lower_bound - cfg.tol <= r.expansion <= r.upper_bound + cfg.tol)]
    if cfg.out is not None:
        enumeration.write_survey(rows, cfg.out, args.bins)
    else:
        sys.stdout.write(enumeration.histogram_csv(rows, args.bins))
    s = enumeration.summary(rows)
    print(f"classes: {s['classes']}", file=sys.stderr)
    print(f"min eigen lower bound: {s['lower_bound_min']:.9f}", file=sys.stderr)
    print(f"min exact expansion: {s['expansion_min']}", file=sys.stderr)
    if bad:
        raise VerificationFailure(f"eigenvalue sandwich violated for {len(bad)} classes")
    return EXIT_OK


def verify_polytope(P: ZeroOnePolytope, tol: float = DEFAULT_TOL, max_n: int = BRUTE_FORCE_LIMIT) -> dict:
    """Full analysis of one polytope; raises VerificationFailure when theory is contradicted."""
    G = skeleton(P)
    dim = dimension(P)
    out: dict = {"n": P.n, "d": P.d, "dimension": dim, "edges": G.m}
    if P.n < 2:
        out["verdict"] = "undefined (single vertex)"
        return out
    diam = diameter(G)
    out["diameter"] = diam
    if diam > dim:
        raise VerificationFailure(f"diameter {diam} exceeds dimension {dim}")
    rep = spectral_report(G, tol)
    out.update(lambda2=rep.lambda2, delta_max=rep.delta_max,
               eigen_lower=rep.lower_bound, eigen_upper=rep.upper_bound)
    h = None
    try:
        h, cert = edge_expansion_exact(G, max_n)
        out["expansion"] = h
        out["witness"] = cert.subset
        if not (rep.lower_bound - tol <= h <= rep.upper_bound + tol):
            raise VerificationFailure("eigenvalue sandwich violated")
    except LimitExceeded:
        out["expansion"] = None
    certs = []
    if rep.lower_bound >= 1 - tol:
        certs.append("eigenvalue")
    try:
        check = walls.has_fractional_wall_matchings(P)
        out["fractional_wall_matchings"] = check.ok
        if check.ok:
            phi = None
            for t in range(P.n):
                f = walls.build_wall_flow(P, t, check)
                if not validate_target_flow(G, f, t):
                    raise VerificationFailure(f"wall flow into {t} fails divergence check")
                if phi is None:
                    phi = f
                else:
                    phi.merge(f)
            bound = certified_bound(P.n, phi.phi_max())
            out["wall_flow_bound"] = bound
            if bound < 1:
                raise VerificationFailure("fractional wall-matchings but phi_max > n/2")
            certs.append("wall-matchings")
            if h is not None and bound > h:
                raise VerificationFailure("wall-flow bound exceeds exact expansion")
        else:
            out["failing_walls"] = [W.sigma for W in check.failing]
    except LimitExceeded:
        out["fractional_wall_matchings"] = None
    try:
        cs = cubespan.cswalls_total_flow(P)
        out["cubespan_complete"] = cs.complete
        if cs.complete:
            bound = certified_bound(P.n, cs.phi_max)
            out["cubespan_bound"] = bound
            if bound < 1:
                raise VerificationFailure("full cube-span coverage but phi_max > n/2")
            if h is not None and bound > h:
                raise VerificationFailure("cube-span bound exceeds exact expansion")
            certs.append("cube-spanned")
    except LimitExceeded:
        out["cubespan_complete"] = None
    out["certificates"] = certs
    if h is not None:
        out["verdict"] = "yes" if h >= 1 else "no"
    else:
        out["verdict"] = "yes" if certs else "unknown-by-certificates"
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v)) if v else "-"
    return str(v)


def cmd_verify(cfg, args):
    P = load_polytope(args.input)
    res = verify_polytope(P, cfg.tol, cfg.max_n)
    order = ["n", "d", "dimension", "edges", "diameter", "delta_max", "lambda2", "eigen_lower",
             "eigen_upper", "expansion", "witness", "fractional_wall_matchings", "failing_walls",
             "wall_flow_bound", "cubespan_complete", "cubespan_bound", "certificates"]
    for key in order:
        if key in res:
            print(f"{key}: {_fmt(res[key]) if res[key] is not None else 'unknown'}")
    verdict = res["verdict"]
    exact = res.get("expansion")
    print(f"verdict: expansion >= 1: {verdict}" + (f" (exact {exact})" if exact is not None else ""))
    return EXIT_OK


COMMANDS = {
    "skeleton": cmd_skeleton, "expansion": cmd_expansion, "spectral": cmd_spectral,
    "walls": cmd_walls, "check-fwm": cmd_check_fwm, "wall-flow": cmd_wall_flow,
    "balanced": cmd_balanced, "cubespan": cmd_cubespan, "gen": cmd_gen,
    "reduce-maxcut": cmd_reduce_maxcut, "classify": cmd_classify, "survey": cmd_survey,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--max-n", type=int, default=BRUTE_FORCE_LIMIT,
                        help="brute-force node limit for exact expansion / max-cut")
    common.add_argument("--out", type=Path, default=None, help="output file or directory")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default ${enumeration.WORKERS_ENV} or CPU count)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="polyexpand",
                                     description="Edge expansion of graphs of 0/1-polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("skeleton", "walls", "check-fwm", "balanced", "cubespan", "verify"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help=".pol file ('-' for stdin)")
    for name in ("expansion", "spectral", "reduce-maxcut"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="DIMACS graph, .pol file, or a name like K4/C6/P3/E2")
    p = sub.add_parser("wall-flow", parents=[common])
    p.add_argument("input")
    p.add_argument("--target", type=int, default=None, help="dump the flow into one vertex")
    p = sub.add_parser("gen", parents=[common])
    p.add_argument("family", help=", ".join(families.FAMILIES))
    p.add_argument("params", nargs="*")
    for name in ("classify", "survey"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("-d", type=int, required=True)
        p.add_argument("--stretch-d5", action="store_true", help="allow the (very slow) d=5 run")
        if name == "survey":
            p.add_argument("--bins", type=float, default=enumeration.DEFAULT_BIN_WIDTH,
                           help="histogram bin width")
    return parser


def run(cfg: RunConfig, args: argparse.Namespace) -> int:
    try:
        return COMMANDS[cfg.command](cfg, args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        # precondition failures on well-formed input (no perfect matching, missing wall-matchings, ...)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(args.command, [getattr(args, "input", None)], args.tol, args.max_n,
                        args.workers, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    return run(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
