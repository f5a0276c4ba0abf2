"""Command-line runner: ``intervalsys <subcommand> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 size cap exceeded,
3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .core import DomainError, UnsupportedSizeError, enumerate_interval_systems, format_system, is_binary, parse_system
from .limits import (
    LimitSet,
    complete_tree_limit,
    hausdorff,
    hausdorff_points,
    parse_limitset,
    render_svg,
    scale,
    cdf_sup_deviation,
    spine_limit,
)
from .martin import boundary_law_estimate, family_member, gamma, gamma_convergence, gamma_table, uniformity_test
from .processes import backward_chain, permutation_graph, remy_census, remy_chain, remy_tree, sample_231_avoiding, simulate_eip
from . import identities
from ._rng import make_rng


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _version() -> str:
    here = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always"], cwd=here, capture_output=True, text=True, timeout=5
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("expected non-negative integers")
    return vals


def _common(p, stochastic=False, formats=("csv", "json")):
    if stochastic:
        p.add_argument("--seed", type=_seed, required=True, help="64-bit seed (mandatory)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser():
    parser = _Parser(prog="intervalsys", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate-eip", help="forward simulation from a limit set with reconstruction distances")
    _common(p, stochastic=True)
    p.add_argument("--n", type=_positive, default=1000, help="path length N")
    p.add_argument("--limit", choices=["spine", "complete", "file"], default="spine")
    p.add_argument("--resolution", type=_positive, default=64, help="spine discretization")
    p.add_argument("--depth", type=int, default=5, help="complete-tree depth")
    p.add_argument("--limit-file", help="limitset v1 file for --limit file")
    p.add_argument("--trajectory", help="also dump the path as step,eta,system CSV")

    p = sub.add_parser("backward", help="backward chain of uniform deletions")
    _common(p, stochastic=True)
    p.add_argument("--system", required=True, help="start system, e.g. '5:2-5'")

    p = sub.add_parser("remy", help="Remy growth chain")
    _common(p, stochastic=True, formats=("csv", "json", "svg"))
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--census", action="store_true", help="count final trees over --trials chains")
    p.add_argument("--trials", type=_positive, default=1)

    p = sub.add_parser("gamma", help="exact density of a target in a source")
    _common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", help="target system; omit with --k for the whole table")
    p.add_argument("--k", type=_positive, help="target size for a full table")

    p = sub.add_parser("converge", help="exact gamma along the spine or complete family")
    _common(p)
    p.add_argument("--family", choices=["spine", "complete"], required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--sizes", type=_int_list, required=True, help="ground-set sizes (spine) or depths (complete)")
    p.add_argument("--trials", type=_positive, help="also estimate the boundary law by Monte Carlo")
    p.add_argument("--seed", type=_seed, help="seed for --trials")
    p.add_argument("--resolution", type=_positive, default=256, help="spine discretization for --trials")
    p.add_argument("--depth", type=int, default=7, help="complete-tree depth for --trials")

    p = sub.add_parser("identities", help="run the exhaustive exact-identity suites")
    p.add_argument("--max-n", type=_positive, default=4)
    p.add_argument("--composition-n", type=_positive, default=5)

    p = sub.add_parser("conjecture", help="231-avoider graphs vs scaled Remy trees")
    _common(p, stochastic=True)
    p.add_argument("--sizes", type=_int_list, default=[100, 400, 1600])
    p.add_argument("--trials", type=_positive, default=50, help="replicas per size")

    p = sub.add_parser("render", help="SVG of a system or limit set")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["svg"], default="svg")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--system")
    g.add_argument("--limit-file")
    g.add_argument("--limit", choices=["spine", "complete"])
    p.add_argument("--resolution", type=_positive, default=64)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--radius", type=float, default=2.0)
    return parser


# ---------------------------------------------------------------------------


def _table(header, rows, fmt, meta=None) -> str:
    if fmt == "json":
        doc = {"columns": header, "rows": [dict(zip(header, r)) for r in rows]}
        if meta is not None:
            doc["meta"] = meta
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _emit(text, args, meta=None):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if meta is not None:
            with open(args.out + ".json", "w", encoding="utf-8") as fh:
                fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _meta(args, **extra):
    params = {k: v for k, v in vars(args).items() if k not in ("out", "command")}
    return {"command": args.command, "seed": getattr(args, "seed", None), "params": params, "version": _version(), **extra}


def _limit(args) -> LimitSet:
    if args.limit == "spine":
        return spine_limit(args.resolution)
    if args.limit == "complete":
        if args.depth < 0:
            raise UsageError("--depth must be >= 0")
        return complete_tree_limit(args.depth)
    if not args.limit_file:
        raise UsageError("--limit file needs --limit-file")
    return _read_limit(args.limit_file)


def _read_limit(path) -> LimitSet:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_limitset(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_simulate_eip(args):
    K = _limit(args)
    traj, u = simulate_eip(K, args.n, make_rng(args.seed))
    checks = sorted({n for n in (10**p for p in range(1, 9)) if n < args.n} | {args.n})
    rows = []
    for n in checks:
        I = traj[n]
        bound = sum(cdf_sup_deviation(np.sort(u[:n])))
        rows.append((n, len(I), hausdorff(scale(I), K), bound))
    meta = _meta(args)
    _emit(_table(["n", "edges", "hausdorff", "cdf_bound"], rows, args.format, meta), args, meta)
    if args.trajectory:
        with open(args.trajectory, "w", encoding="utf-8", newline="") as fh:
            fh.write(traj.to_csv())


def cmd_backward(args):
    top = parse_system(args.system)
    traj = backward_chain(top, make_rng(args.seed))
    meta = _meta(args)
    if args.format == "json":
        rows = [(n, traj.erasers[n - 1] if n < traj.N else None, format_system(traj[n])) for n in range(1, traj.N + 1)]
        _emit(_table(["step", "eta", "system"], rows, "json", meta), args, meta)
    else:
        _emit(traj.to_csv(), args, meta)


def cmd_remy(args):
    rng = make_rng(args.seed)
    meta = _meta(args)
    if args.census:
        if args.n > 7:
            raise UnsupportedSizeError("census enumerates binary trees and is limited to n <= 7")
        counts = remy_census(args.n, args.trials, rng)
        trees = list(enumerate_interval_systems(args.n, is_binary))
        obs = [counts.get(t, 0) for t in trees]
        if sum(obs) != args.trials:
            raise AssertionError("Remy chain produced a non-binary tree")
        freq = [c / args.trials for c in obs]
        dev = max(abs(f - 1 / len(trees)) for f in freq)
        report = uniformity_test(obs)
        rows = [(format_system(t), c, f) for t, c, f in zip(trees, obs, freq)]
        meta.update(categories=len(trees), max_deviation=dev, chi_square=report.statistic)
        _emit(_table(["tree", "count", "freq"], rows, args.format if args.format != "svg" else "csv", meta), args, meta)
        print(f"categories={len(trees)} max_deviation={dev:.6f} chi_square={report.statistic:.4f}", file=sys.stderr if not args.out else sys.stdout)
        return
    tree = remy_tree(args.n, rng) if args.n > 64 else remy_chain(args.n, rng)[-1]
    if args.format == "svg":
        _emit(render_svg(scale(tree)), args, meta)
    else:
        _emit(_table(["n", "tree"], [(args.n, format_system(tree))], args.format, meta), args, meta)


def cmd_gamma(args):
    source = parse_system(args.source)
    if args.target:
        g = gamma(parse_system(args.target), source)
        if args.format == "json":
            _emit(json.dumps({"gamma": str(g), "gamma_float": float(g)}, sort_keys=True) + "\n", args)
        else:
            _emit(f"{g}\n", args)
        return
    if not args.k:
        raise UsageError("give --target or --k")
    table = gamma_table(source, args.k)
    rows = [(source.n, format_system(t), g.numerator, g.denominator, float(g)) for t, g in sorted(table.items(), key=lambda kv: kv[0].edges)]
    _emit(_table(["n", "target", "gamma_num", "gamma_den", "gamma_float"], rows, args.format), args)


def cmd_converge(args):
    target = parse_system(args.target)
    table = gamma_convergence(args.family, target, args.sizes)
    rows = list(table.rows())
    meta = None
    if args.trials:
        if args.seed is None:
            raise UsageError("--trials needs --seed")
        K = spine_limit(args.resolution) if args.family == "spine" else complete_tree_limit(args.depth)
        est, hw = boundary_law_estimate(K, target, args.trials, make_rng(args.seed))
        meta = _meta(args, boundary_estimate=est, half_width=hw)
        print(f"boundary_estimate={est:.6f} half_width={hw:.6f}", file=sys.stderr if not args.out else sys.stdout)
    _emit(_table(["n", "target", "gamma_num", "gamma_den", "gamma_float"], rows, args.format, meta), args, meta)


def cmd_identities(args):
    if args.max_n > 5 or args.composition_n > 6:
        raise UnsupportedSizeError("identity suites are limited to --max-n 5 and --composition-n 6")
    failed = 0
    for name, cases, fails in identities.run_all(args.max_n, args.composition_n):
        status = "PASS" if fails == 0 else "FAIL"
        print(f"{status} {name}: {cases} cases, {fails} failures")
        failed += fails
    if failed:
        raise AssertionError(f"{failed} identity failures")


def cmd_conjecture(args):
    rows = []
    for n in args.sizes:
        if n < 1:
            raise UsageError("sizes must be positive")
        for r in range(args.trials):
            rng = make_rng(args.seed, (n, r))
            sigma = sample_231_avoiding(n, rng)
            tree = remy_tree(n, rng)
            d = hausdorff_points(permutation_graph(sigma), scale(tree).points)
            rows.append((n, r, d))
    meta = _meta(args)
    _emit(_table(["n", "replica", "hausdorff"], rows, args.format, meta), args, meta)


def cmd_render(args):
    if args.system:
        K = scale(parse_system(args.system))
    elif args.limit_file:
        K = _read_limit(args.limit_file)
    else:
        K = _limit(args)
    _emit(render_svg(K, radius=args.radius), args)


COMMANDS = {
    "simulate-eip": cmd_simulate_eip,
    "backward": cmd_backward,
    "remy": cmd_remy,
    "gamma": cmd_gamma,
    "converge": cmd_converge,
    "identities": cmd_identities,
    "conjecture": cmd_conjecture,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"intervalsys: error: {exc}", file=sys.stderr)
        return 1
    except UnsupportedSizeError as exc:
        print(f"intervalsys: size limit: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"intervalsys: error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"intervalsys: internal check failed: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
