"""Command-line interface: ``lmspectra <group> <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 enumeration budget exhausted.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import mpmath

from . import __version__
from .bowen import solve_dimension
from .cf.precision import default_bits
from .errors import BudgetExceeded, DimensionSolveError
from .gauss_cantor import (
    DEFAULT_BUDGET, GaussCantorSpec, WordSet, cover, dimension_upper_bound, gap_exponent_check,
    palis_takens_bounds, write_cover_csv,
)
from .markov import enumerate_triples, is_prime, mod_p_graph, write_modp_csv, write_triples_csv
from .spectra import (
    DEFAULT_NODE_BUDGET, approximate_spectra, constants, detect_gaps, hall_realize, render_svg,
    write_approx_csv, write_gaps_csv,
)

DIM_C2 = 0.531280506277205141624468647368


@dataclass(frozen=True)
class RunConfig:
    bits: int
    threads: int
    budget: Optional[int]

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.threads < 1:
            raise ValueError("--threads must be positive")
        if self.budget is not None and self.budget < 1:
            raise ValueError("--budget must be positive")


# -- argument types -----------------------------------------------------------------

def _range(text: str):
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    if not a < b:
        raise argparse.ArgumentTypeError("range must satisfy a < b")
    return a, b


def _wordset(text: str) -> WordSet:
    try:
        return WordSet.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _prefix(text: str):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed prefix word {text!r}")


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"expected a positive value, got {text}")
        return v
    return conv


# -- output helpers -------------------------------------------------------------------

@contextlib.contextmanager
def _sink(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_text(path: Optional[str], text: str) -> None:
    with _sink(path) as fh:
        fh.write(text)


# -- commands -------------------------------------------------------------------------

def _approx(args, cfg: RunConfig):
    a, b = args.range
    return approximate_spectra(a, b, args.Q, args.alphabet, period_bound=args.period,
                               budget=cfg.budget or DEFAULT_NODE_BUDGET, restricted=args.restricted)


def cmd_spectra_approx(args, cfg: RunConfig) -> int:
    ap = _approx(args, cfg)
    with _sink(args.out) as fh:
        write_approx_csv(ap, fh)
    if args.svg:
        _emit_text(args.svg, render_svg(ap))
    if args.out not in (None, "-"):
        print(f"range [{ap.a}, {ap.b}]  Q={ap.Q:g}  A={ap.A}  N={ap.N}  windows={ap.nodes}")
        print(f"outer intervals: {len(ap.outer)}  measure {ap.measure:.6g}")
        print(f"inner points: {len(ap.inner)} (periods <= {ap.period_bound})")
    return 0


def cmd_spectra_gaps(args, cfg: RunConfig) -> int:
    ap = _approx(args, cfg)
    report = detect_gaps(ap, args.scan)
    if args.min_width:
        report = type(report)(report.lo, report.hi,
                              tuple(g for g in report.gaps if g[1] - g[0] >= args.min_width))
    with _sink(args.out) as fh:
        write_gaps_csv(report, fh)
    return 0


def cmd_markov_tree(args, cfg: RunConfig) -> int:
    with _sink(args.out) as fh:
        write_triples_csv(enumerate_triples(args.bound), fh)
    return 0


def cmd_markov_modp(args, cfg: RunConfig) -> int:
    primes = args.primes or [p for p in range(3, args.pmax + 1) if is_prime(p)]
    for p in primes:
        if p < 3 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
    if cfg.threads > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            graphs = list(pool.map(mod_p_graph, primes))
    else:
        graphs = [mod_p_graph(p) for p in primes]
    with _sink(args.out) as fh:
        write_modp_csv(graphs, fh)
    return 0


def cmd_dim_bowen(args, cfg: RunConfig) -> int:
    r = solve_dimension(args.set, args.order, bits=cfg.bits, budget=cfg.budget or DEFAULT_BUDGET)
    _emit_text(args.out, r.report() + "\n")
    return 0


def cmd_dim_cover(args, cfg: RunConfig) -> int:
    spec = GaussCantorSpec(args.set, args.prefix)
    cyl = cover(spec, args.level, budget=cfg.budget or DEFAULT_BUDGET)
    with _sink(args.out) as fh:
        write_cover_csv(cyl, fh)
    return 0


def cmd_dim_bounds(args, cfg: RunConfig) -> int:
    lines = []
    for m in range(1, args.level + 1):
        bnd = palis_takens_bounds(args.set, m, budget=cfg.budget or DEFAULT_BUDGET)
        lines.append(f"{m},{bnd.alpha!r},{bnd.beta!r}")
    _emit_text(args.out, "level,alpha,beta\n" + "\n".join(lines) + "\n")
    return 0


def cmd_dim_gapcheck(args, cfg: RunConfig) -> int:
    g = gap_exponent_check(args.s0, args.depth, budget=cfg.budget or DEFAULT_BUDGET)
    body = {
        "s0": args.s0,
        "depth": args.depth,
        "passed": g.passed,
        "worst_ratio": g.worst_ratio,
        "worst_word": "".join(map(str, g.worst_word)),
        "critical_exponent": g.threshold,
        "words_checked": g.words_checked,
        "upper_bound": str(dimension_upper_bound(args.dim, args.s0)),
    }
    _emit_text(args.out, json.dumps(body, indent=2) + "\n")
    return 0


def cmd_hall(args, cfg: RunConfig) -> int:
    h = hall_realize(args.target, args.eps, bits=max(cfg.bits, 128))
    with mpmath.workprec(max(cfg.bits, 128)):
        body = {
            "target": mpmath.nstr(h.target, 20),
            "c0": h.c0,
            "x_digits": ",".join(map(str, h.a)),
            "y_digits": ",".join(map(str, h.b)),
            "sequence": str(h.sequence),
            "value": mpmath.nstr(h.value.value, 20),
            "error": mpmath.nstr(h.error, 3),
        }
    _emit_text(args.out, json.dumps(body, indent=2) + "\n")
    return 0


def cmd_constants(args, cfg: RunConfig) -> int:
    _emit_text(args.out, "\n".join(constants().lines(args.digits, cfg.bits)) + "\n")
    return 0


# -- parser ---------------------------------------------------------------------------

def _out(p):
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")


def _spectra_args(p):
    p.add_argument("--range", type=_range, required=True, metavar="a,b",
                   help="value range [a, b] of the spectrum to approximate")
    p.add_argument("--Q", type=_positive(float), default=100.0,
                   help="resolution: outer intervals have width <= 1/Q (default 100)")
    p.add_argument("--alphabet", type=_positive(int), default=None, metavar="A",
                   help="largest digit considered; default floor(b) + 1")
    p.add_argument("--period", type=_positive(int), default=None,
                   help="longest period for inner points (default min(2N+2, 10))")
    p.add_argument("--restricted", action="store_true",
                   help="allow b > A + 1: approximate the spectrum of sequences over 1..A only")


def _global_options(p, suppress: bool) -> None:
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--bits", type=int, default=dflt(None),
                   help="working precision in bits (default: $SPECTRA_BITS or 256; >= 64)")
    p.add_argument("--threads", type=int, default=dflt(1), help="worker processes (default 1)")
    p.add_argument("--budget", type=int, default=dflt(None),
                   help="enumeration limit (words, orbits or windows) before exiting with code 3")
    p.add_argument("--config", metavar="FILE", default=dflt(None),
                   help="key=value file of option defaults, e.g. 'Q = 1000'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmspectra", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, suppress=False)
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    groups = parser.add_subparsers(dest="group", metavar="{spectra,markov,dim,hall,constants}")
    groups.required = True

    sp = groups.add_parser("spectra", help="approximations of L and M")
    sc = sp.add_subparsers(dest="command", required=True)
    p = sc.add_parser("approx", parents=[common], help="outer cover and inner points as CSV",
                      description="Rows 'kind,lo,hi,word': merged outer intervals, then inner "
                                  "points (periodic words, digits joined by '-').")
    _spectra_args(p)
    _out(p)
    p.add_argument("--svg", metavar="PATH", help="also write a strip plot")
    p.set_defaults(func=cmd_spectra_approx)
    p = sc.add_parser("gaps", parents=[common], help="maximal open gaps of the outer cover as CSV 'lo,hi'")
    _spectra_args(p)
    p.add_argument("--scan", type=_range, metavar="lo,hi", help="subrange to scan (default: --range)")
    p.add_argument("--min-width", type=float, default=0.0, help="drop gaps narrower than this")
    _out(p)
    p.set_defaults(func=cmd_spectra_gaps)

    mp = groups.add_parser("markov", help="Markov triples and mod-p graphs")
    mc = mp.add_subparsers(dest="command", required=True)
    p = mc.add_parser("tree", parents=[common], help="all triples with z <= bound as CSV 'x,y,z'")
    p.add_argument("--bound", type=_positive(int), required=True, help="largest coordinate z")
    _out(p)
    p.set_defaults(func=cmd_markov_tree)
    p = mc.add_parser("modp", parents=[common], help="mod-p graph report as CSV 'p,num_vertices,num_components,largest'")
    p.add_argument("--pmax", type=int, default=50, help="all odd primes up to this (default 50)")
    p.add_argument("--primes", type=lambda s: [int(t) for t in s.split(",")], metavar="p1,p2,...",
                   help="explicit primes instead of --pmax")
    _out(p)
    p.set_defaults(func=cmd_markov_modp)

    dp = groups.add_parser("dim", help="dimensions of Gauss-Cantor sets")
    dc = dp.add_subparsers(dest="command", required=True)
    set_help = 'word set: digits "1,2" or blocks "(1,1,2),(2,2,1)"'
    p = dc.add_parser("bowen", parents=[common], help="dimension from the order-M determinant (JSON report)")
    p.add_argument("--set", type=_wordset, required=True, help=set_help)
    p.add_argument("--order", type=int, default=10, help="truncation order M >= 2 (default 10)")
    _out(p)
    p.set_defaults(func=cmd_dim_bowen)
    p = dc.add_parser("cover", parents=[common], help="level-m cylinder cover as CSV 'level,word,lo_num,lo_den,hi_num,hi_den'")
    p.add_argument("--set", type=_wordset, required=True, help=set_help)
    p.add_argument("--level", type=_positive(int), required=True, help="number of blocks m")
    p.add_argument("--prefix", type=_prefix, default=(), help="prefix word gamma, e.g. '2,1'")
    _out(p)
    p.set_defaults(func=cmd_dim_cover)
    p = dc.add_parser("bounds", parents=[common], help="covering bounds alpha_m <= dim <= beta_m for m = 1..level (CSV)")
    p.add_argument("--set", type=_wordset, required=True, help=set_help)
    p.add_argument("--level", type=_positive(int), default=8, help="largest level m (default 8)")
    _out(p)
    p.set_defaults(func=cmd_dim_bounds)
    p = dc.add_parser("gapcheck", parents=[common], help="two-child cylinder inequality over {1,2}^n (JSON)")
    p.add_argument("--s0", type=float, default=0.174813, help="exponent (default 0.174813)")
    p.add_argument("--depth", type=int, default=12, help="longest word checked (default 12)")
    p.add_argument("--dim", type=float, default=DIM_C2,
                   help="dimension added to s0 for the upper-bound figure (default dim C(2))")
    _out(p)
    p.set_defaults(func=cmd_dim_gapcheck)

    p = groups.add_parser("hall", parents=[common], help="realize a target >= 6 in L as c0 + x + y, x, y in C(4) (JSON)")
    p.add_argument("--target", type=float, required=True, help="value to realize")
    p.add_argument("--eps", type=_positive(float), default=1e-8, help="tolerance (default 1e-8)")
    _out(p)
    p.set_defaults(func=cmd_hall)

    p = groups.add_parser("constants", parents=[common], help="named constants evaluated at the working precision")
    p.add_argument("--digits", type=_positive(int), default=30, help="significant digits (default 30)")
    _out(p)
    p.set_defaults(func=cmd_constants)
    return parser


def read_config(path: str) -> Dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys use option names without dashes."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected key = value")
            k, v = (t.strip() for t in line.split("=", 1))
            out[k.replace("-", "_")] = v.strip("\"'")
    return out


def _subparsers(parser: argparse.ArgumentParser):
    yield parser
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                yield from _subparsers(sub)


def _apply_config(parser: argparse.ArgumentParser, cfg: Dict[str, str]) -> None:
    known = set()
    for p in _subparsers(parser):
        for action in p._actions:
            if action.dest in cfg:
                raw = cfg[action.dest]
                conv = action.type or (lambda s: s)
                if isinstance(action, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes")
                else:
                    value = conv(raw)
                p.set_defaults(**{action.dest: value})
                known.add(action.dest)
    unknown = set(cfg) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            _apply_config(parser, read_config(known.config))
        args = parser.parse_args(argv)
        cfg = RunConfig(args.bits if args.bits is not None else default_bits(), args.threads, args.budget)
        if getattr(args, "alphabet", 0) is None:
            args.alphabet = int(args.range[1]) + 1
        return args.func(args, cfg)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    except (ValueError, DimensionSolveError, OSError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
