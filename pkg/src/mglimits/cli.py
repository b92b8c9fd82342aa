"""Command-line frontend: densities, transforms, checks, sampling, diagnostics.

Exit codes: 0 success, 1 a verdict failed, 2 input could not be parsed,
3 a computation budget was exceeded, 4 a precondition was violated.  All
randomness flows from --seed; reruns with identical inputs and flags produce
byte-identical outputs.
"""

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import convergence as cnv
from .densities import density, density_table
from .errors import (
    BudgetExceeded,
    FormatError,
    MglimitsError,
    TableMiss,
    TruncationTooLarge,
)
from .fixtures import default_testgraphs
from .graphon import StepMultigraphon, graphon_density, read_mgw
from .mobius import (
    ParameterTable,
    factorization_check,
    inverse_mobius,
    mobius_transform_table,
    ptab_dumps,
    read_ptab,
)
from .multigraph import Multigraph, mg_dumps, quotient, read_mg, reconstruct
from .parameter import (
    GraphParameter,
    check_limit_candidate,
    connection_matrix,
    generate_basis,
    psd_check,
    sample_consistent_sequence,
)
from .sampler import (
    sample_from_graph,
    sample_from_graph_injective,
    sample_from_graphon,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_PRECONDITION = 4


def _header(seed, max_mult, tol) -> str:
    return (f"# mglim {__version__}\n"
            f"# seed={seed} truncation=max_mult:{max_mult} tol={tol:g}\n")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _load_param(desc: str) -> GraphParameter:
    kind, _, rest = desc.partition(":")
    if not rest:
        raise FormatError(f"parameter {desc!r} needs the form kind:path")
    if kind == "graph":
        return GraphParameter.from_graph(read_mg(rest))
    if kind == "graphon":
        return GraphParameter.from_graphon(read_mgw(rest))
    if kind == "table":
        return GraphParameter.from_table([read_ptab(p)
                                          for p in rest.split(",")])
    raise FormatError(f"unknown parameter kind {kind!r} in {desc!r}")


def _source_max_mult(f: GraphParameter) -> int:
    if f.backend == "graph":
        return max(1, int(f._src.adj.max()))
    if f.backend == "graphon":
        return max(1, f._src.cap)
    return max(t.max_mult for t in f._tables.values())


# -- commands ----------------------------------------------------------------

def cmd_density(args) -> int:
    patterns = [read_mg(p) for p in args.F]
    if (args.G is None) == (args.W is None):
        raise FormatError("exactly one of --G and --W is required")
    header = _header(args.seed, args.max_mult, args.tol)
    if args.G is not None:
        g = read_mg(args.G)
        if len(patterns) == 1:
            value = density(patterns[0], g, args.variant)
            _emit(header + _fmt_value(value) + "\n", args.out)
            return EXIT_OK
        table = density_table(patterns, g, (args.variant,))
        _emit(header + table.to_csv(), args.out)
        return EXIT_OK
    w = read_mgw(args.W)
    mode = "leq" if args.variant.endswith("leq") else "eq"
    lines = [_fmt_value(graphon_density(f, w, mode)) for f in patterns]
    _emit(header + "\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_mobius(args) -> int:
    table = read_ptab(args.table)
    if args.inverse:
        header = _header(args.seed, table.max_mult, args.tol)
        entries, worst = {}, 0.0
        for a in table.keys():
            value, residual = inverse_mobius(table, a)
            entries[a] = value
            worst = max(worst, float(residual))
        out = ParameterTable(table.k, entries, max_mult=table.max_mult)
        header += f"# max_residual={worst:.3g}\n"
    else:
        # the alternating sum needs one overlay layer of input above the output
        out_mm = args.max_mult if args.max_mult is not None \
            else max(0, table.max_mult - 2)
        header = _header(args.seed, out_mm, args.tol)
        out = mobius_transform_table(table, out_mm)
    _emit(header + ptab_dumps(out), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    f = _load_param(args.param)
    max_mult = args.max_mult or _source_max_mult(f)
    lines = []
    failed = False

    rep = check_limit_candidate(f, max_mult=min(max_mult, 2))
    lines.append(rep.format())
    failed = failed or not rep.passed

    for k in range(args.k + 1):
        try:
            cm = connection_matrix(
                f, k, generate_basis(k, max_unlabeled=args.max_unlabeled,
                                     max_mult=min(max_mult, 2)))
            scale = max(1.0, float(np.abs(cm.matrix).max()))
            ok, eig = psd_check(cm, tol=args.tol * scale)
            lines.append(f"psd k={k} basis={cm.size} min_eig={eig:.3e} "
                         f"{'pass' if ok else 'fail'}")
            failed = failed or not ok
        except TableMiss:
            lines.append(f"psd k={k} skipped (table coverage)")

    for k in (1, 2):
        try:
            frep = factorization_check(f.evaluate, k, max_mult)
            ok = frep.max_deviation <= args.factor_tol
            lines.append(f"factorization k={k} deviation={float(frep.max_deviation):.3e} "
                         f"{'pass' if ok else 'fail'}")
            failed = failed or not ok
        except TableMiss:
            lines.append(f"factorization k={k} skipped (table coverage)")

    header = _header(args.seed, max_mult, args.tol)
    _emit(header + "\n".join(lines) + "\n", args.out)
    return EXIT_VERDICT if failed else EXIT_OK


def cmd_sample(args) -> int:
    if args.seed is None:
        raise MglimitsError("sample requires --seed")
    header = _header(args.seed, args.max_mult, args.tol)
    if args.consistent:
        f = _load_param(args.consistent.replace("param:", "", 1)
                        if args.consistent.startswith("param:")
                        else args.consistent)
        seq = sample_consistent_sequence(f, args.n, seed=args.seed,
                                         max_mult=args.max_mult)
        os.makedirs(args.out, exist_ok=True)
        names = []
        for i, g in enumerate(seq.graphs, start=1):
            name = f"g_{i:04d}.mg"
            names.append((name, g.n))
            with open(os.path.join(args.out, name), "w") as fh:
                fh.write(header + mg_dumps(g))
        manifest = header + "".join(f"{name} n={n}\n" for name, n in names)
        manifest += (f"method={seq.method} restarts={seq.restarts} "
                     f"max_dropped_mass={max(seq.dropped_mass):.3g}\n")
        with open(os.path.join(args.out, "manifest.txt"), "w") as fh:
            fh.write(manifest)
        return EXIT_OK
    kind, _, rest = (args.source or "").partition(":")
    if not rest:
        raise FormatError("--from needs the form kind:path")
    if kind == "graph":
        s = sample_from_graph(read_mg(rest), args.k, args.seed)
    elif kind == "injective":
        s = sample_from_graph_injective(read_mg(rest), args.k, args.seed)
    elif kind == "graphon":
        s = sample_from_graphon(read_mgw(rest), args.k, args.seed)
    else:
        raise FormatError(f"unknown sample source kind {kind!r}")
    _emit(header + f"# source={s.source}\n" + mg_dumps(s.window), args.out)
    return EXIT_OK


def _read_sequence(dirpath):
    try:
        names = sorted(os.listdir(dirpath))
    except (FileNotFoundError, NotADirectoryError) as exc:
        raise FormatError(f"cannot read sequence directory {dirpath}: {exc}")
    seq = []
    for name in names:
        path = os.path.join(dirpath, name)
        if name.endswith(".mg"):
            seq.append(read_mg(path))
        elif name.endswith(".mgw"):
            seq.append(read_mgw(path))
    if not seq:
        raise FormatError(f"no .mg or .mgw files in {dirpath}")
    return seq


def cmd_converge(args) -> int:
    seq = _read_sequence(args.seq)
    header = _header(args.seed, args.max_mult, args.tol)
    if args.tight:
        ws = [x if isinstance(x, StepMultigraphon)
              else StepMultigraphon.from_graph(x) for x in seq]
        rep = cnv.tightness_diagnostic(ws)
        _emit(header + rep.format() + "\n", args.out)
        return EXIT_OK if rep.passed else EXIT_VERDICT
    if args.tests == "default":
        tests = default_testgraphs(max_n=2)
    else:
        tests = [read_mg(p) for p in args.tests.split(",")]
    traj = cnv.density_trajectory(seq, tests, seed=args.seed)
    rep = cnv.cauchy_diagnostic(traj, tol=args.tol)
    text = header + traj.to_csv() + rep.format() + "\n"
    _emit(text, args.out)
    return EXIT_OK if rep.passed else EXIT_VERDICT


def cmd_quotient(args) -> int:
    g = read_mg(args.G)
    q = quotient(g)
    header = _header(args.seed, args.max_mult, args.tol)
    if args.reconstruct:
        back = reconstruct(q, args.reconstruct)
        _emit(header + mg_dumps(back), args.out)
        return EXIT_OK
    lines = ["# classes " + ";".join(",".join(map(str, c)) for c in q.classes),
             "# weights " + ",".join(str(w) for w in q.weights)]
    text = header + "\n".join(lines) + "\n" + mg_dumps(q.matrix)
    _emit(text, args.out)
    return EXIT_OK


# -- argument plumbing -------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="mglim",
        description="Multigraph limit toolkit: densities, transforms, "
                    "samplers, and diagnostics on .mg/.mgw/.ptab files.")
    p.add_argument("--version", action="version", version=f"mglim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=0):
        sp.add_argument("--seed", type=int, default=seed_default)
        sp.add_argument("--max-mult", dest="max_mult", type=int, default=2)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--out", default=None)

    d = sub.add_parser("density", help="densities of patterns in a graph or kernel")
    d.add_argument("--F", action="append", required=True,
                   help=".mg pattern (repeatable)")
    d.add_argument("--G", default=None, help=".mg target graph")
    d.add_argument("--W", default=None, help=".mgw target kernel")
    d.add_argument("--variant", default="hom_leq",
                   choices=("hom_leq", "hom_eq", "inj_leq", "inj_eq"))
    common(d)
    d.set_defaults(fn=cmd_density)

    m = sub.add_parser("mobius", help="alternating transform of a value table")
    m.add_argument("--table", required=True, help=".ptab input")
    m.add_argument("--inverse", action="store_true",
                   help="upward sum instead of the alternating transform")
    common(m)
    m.set_defaults(fn=cmd_mobius, max_mult=None)

    c = sub.add_parser("check", help="limit-candidate battery, PSD, factorization")
    c.add_argument("--param", required=True,
                   help="graph:g.mg | graphon:w.mgw | table:a.ptab[,b.ptab...]")
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--max-unlabeled", dest="max_unlabeled", type=int, default=1)
    c.add_argument("--factor-tol", dest="factor_tol", type=float, default=1e-10)
    common(c)
    c.set_defaults(fn=cmd_check, max_mult=None)

    s = sub.add_parser("sample", help="windows of exchangeable arrays")
    s.add_argument("--from", dest="source", default=None,
                   help="graph:g.mg | injective:g.mg | graphon:w.mgw")
    s.add_argument("--consistent", default=None,
                   help="param:<kind:path> for a nested sequence")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--n", type=int, default=10)
    common(s, seed_default=None)
    s.set_defaults(fn=cmd_sample)

    v = sub.add_parser("converge", help="trajectory and tightness diagnostics")
    v.add_argument("--seq", required=True, help="directory of .mg/.mgw files")
    v.add_argument("--tests", default="default")
    v.add_argument("--tight", action="store_true")
    common(v)
    v.set_defaults(fn=cmd_converge, tol=0.05)

    q = sub.add_parser("quotient", help="identical-row classes and blow-ups")
    q.add_argument("--G", required=True)
    q.add_argument("--reconstruct", type=int, default=None)
    common(q)
    q.set_defaults(fn=cmd_quotient)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the parse-error code
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, TruncationTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except MglimitsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
