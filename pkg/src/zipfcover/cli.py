"""Command-line entry point: ``zipfcover <group> <command> [options]``.

Every command writes plot-ready CSV plus a ``<stem>.manifest.json`` holding
the parameters and seed needed to reproduce it.  Exit status is 0 on success,
1 on a usage error and 2 when the computation itself fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import TokenStream, new_word_rate, random_typing, simon_process, word_length_distribution
from .covering import Covering, feasible_k_values, hierarchical_covering, layer_diagnostics
from .errors import ZipfCoverError
from .evolution import (
    DEFAULT_SEED,
    GenParams,
    SpecParams,
    lengths_to_rank_freq,
    run_generalization,
    run_specialization,
)
from .fixtures import fixture_info, load_fixture
from .lexsem import CompatibilityMatrix, HyponymTable, hyponym_sum_check, pca_classify, positive_weight_frequency_sum
from .mandelbrot import CostModel, DynamicsConfig, run_local_dynamics, zipf_mandelbrot_pmf
from .powerlaw import RankFrequencyTable, default_fit_range, fit_zipf_exponent, rank_frequency
from .zeta import B_MAX, DEFAULT_TOL, hurwitz_zeta, solve_exponent

OUT_ENV = "ZIPFCOVER_OUT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class Run:
    """Collects output paths for one command and writes its manifest."""

    def __init__(self, args, stem):
        self.out = Path(args.out or os.environ.get(OUT_ENV) or ".")
        self.out.mkdir(parents=True, exist_ok=True)
        self.stem = stem
        self.args = args
        self.paths = []

    def path(self, suffix) -> Path:
        p = self.out / f"{self.stem}{suffix}"
        self.paths.append(p.name)
        return p

    def write_rows(self, suffix, header, rows):
        with open(self.path(suffix), "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])

    def write_json(self, suffix, obj):
        self.path(suffix).write_text(json.dumps(obj, indent=1, ensure_ascii=False, default=_jsonable) + "\n", encoding="utf-8")

    def finish(self, extra=None):
        params = {k: v for k, v in vars(self.args).items() if k not in ("func", "out", "jobs")}
        manifest = {
            "subcommand": f"{self.args.group} {getattr(self.args, 'command', '')}".strip(),
            "parameters": params,
            "seed": self.args.seed,
            "toolkit_version": __version__,
            "output_paths": list(self.paths),
        }
        if extra:
            manifest["results"] = extra
        (self.out / f"{self.stem}.manifest.json").write_text(
            json.dumps(manifest, indent=1, ensure_ascii=False, default=_jsonable) + "\n", encoding="utf-8"
        )


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _fit_summary(table, fit_range=None):
    try:
        f = fit_zipf_exponent(table, fit_range)
    except ZipfCoverError:
        return None
    return {"B": f.B, "r_squared": f.r_squared, "fit_range": list(f.fit_range)}


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


def _sim_one(job):
    kind, params = job
    res = run_generalization(params) if kind == "gen" else run_specialization(params)
    return res


def cmd_sim(args):
    seeds = [args.seed + i for i in range(args.replicates)]
    if args.command == "gen":
        jobs = [("gen", GenParams(args.n, args.delta, s, not args.linear)) for s in seeds]
    else:
        jobs = [("spec", SpecParams(args.n, args.gamma, s, args.eps, not args.linear)) for s in seeds]
    run = Run(args, f"sim_{args.command}")
    results = _map(_sim_one, jobs, args.jobs)
    summary = []
    for s, res in zip(seeds, results):
        res.covering.to_csv(run.path(f"_seed{s}_covering.csv"))
        table = lengths_to_rank_freq(res)
        table.to_csv(run.path(f"_seed{s}_rankfreq.csv"))
        fit = _fit_summary(table, (args.kmin, args.kmax))
        summary.append({"seed": s, "intervals": len(res.covering), "iterations": res.iterations,
                        "rng_trace_hash": res.rng_trace_hash, "fit": fit})
        b = f"{fit['B']:.4f}" if fit else "n/a"
        print(f"seed {s}: {len(res.covering)} intervals, B = {b}")
    run.finish(summary)


def cmd_covering(args):
    if args.command == "hier":
        run = Run(args, "covering_hier")
        c = hierarchical_covering(args.depth)
        c.to_csv(run.path("_covering.csv"))
        table = lengths_to_rank_freq(c)
        table.to_csv(run.path("_rankfreq.csv"))
        fit = _fit_summary(table, (1, len(table)))
        print(f"{len(c)} intervals; B over all ranks = {fit['B']:.4f}" if fit else f"{len(c)} intervals")
        run.finish({"fit": fit})
        return
    c = Covering.from_csv(args.input, circular=True if args.circular else None)
    ks = args.k if args.k else feasible_k_values(c, args.k_max, args.per_decade)
    diag = layer_diagnostics(c, ks, args.rho)
    run = Run(args, "covering_diag")
    diag.to_csv(run.path("_layers.csv"))
    for row in diag:
        print(f"k={row.k:6d} rho={row.rho:.4f} gap={row.gap:.4f} overlap={row.overlap:.4f}")
    run.finish()


def cmd_mandelbrot(args):
    if args.command == "solve":
        run = Run(args, "mandelbrot_solve")
        b = solve_exponent(args.k0, args.tol, args.b_max)
        z = hurwitz_zeta(b, 1 + args.k0)
        print(f"B = {b:.10f}  (zeta(B, 1+k0) = {z.value:.12f})")
        run.write_json(".json", {"k0": args.k0, "B": b, "zeta": z.value, "zeta_error_bound": z.abs_error_bound})
        run.finish({"B": b})
    elif args.command == "pmf":
        run = Run(args, "mandelbrot_pmf")
        b = args.B if args.B is not None else solve_exponent(args.k0)
        p = zipf_mandelbrot_pmf(b, args.k0, args.n)
        RankFrequencyTable(p).to_csv(run.path("_rankfreq.csv"))
        print(f"B = {b:.6f}, {args.n} ranks written")
        run.finish({"B": b})
    else:
        run = Run(args, "mandelbrot_dynamics")
        cfg = DynamicsConfig(args.n_words, CostModel(args.c0, args.k0), args.band, args.step,
                             args.max_iters, args.p_floor, args.stride)
        res = run_local_dynamics(cfg, args.seed)
        run.write_rows("_trajectory.csv", ["iter", "C", "H", "Cstar", "n_changed"],
                       [(r.iter, r.C, r.H, r.Cstar, r.n_changed) for r in res.trajectory])
        live = res.p[res.p > cfg.p_floor]
        RankFrequencyTable(res.p).to_csv(run.path("_final.csv"))
        state = "converged" if res.converged else "stopped at max_iters"
        print(f"{state} after {res.iterations} iterations; {live.size} live words, top p = {res.p[0]:.6g}")
        fit = _fit_summary(RankFrequencyTable(res.p), (100, args.n_words)) if args.n_words >= 109 else None
        run.finish({"iterations": res.iterations, "converged": res.converged, "extinct": res.extinct, "tail_fit": fit})


def _write_stream_outputs(run, stream, save_stream):
    if save_stream:
        stream.to_file(run.path("_tokens.txt"))
    table = rank_frequency(stream)
    table.to_csv(run.path("_rankfreq.csv"))
    fit = _fit_summary(table)
    n_types = len(table)
    b = f"{fit['B']:.4f} over ranks {fit['fit_range']}" if fit else "n/a"
    print(f"{len(stream)} tokens, {n_types} types, B = {b}")
    return {"tokens": len(stream), "types": n_types, "fit": fit}


def cmd_baseline(args):
    if args.command == "typing":
        run = Run(args, "baseline_typing")
        stream = random_typing(args.alphabet, args.chars, args.seed)
    else:
        run = Run(args, "baseline_simon")
        stream = simon_process(args.p, args.tokens, args.seed)
    run.finish(_write_stream_outputs(run, stream, args.save_tokens))


def cmd_corpus(args):
    stream = TokenStream.from_file(args.input)
    run = Run(args, f"corpus_{args.command}")
    if args.command == "rankfreq":
        run.finish(_write_stream_outputs(run, stream, False))
    elif args.command == "wordlen":
        hist = word_length_distribution(stream)
        run.write_rows("_wordlen.csv", ["length", "distinct_words"], hist.items())
        print(f"{sum(hist.values())} distinct words, lengths {min(hist)}..{max(hist)}")
        run.finish()
    else:
        series = new_word_rate(stream, args.window)
        run.write_rows("_newrate.csv", ["n_tokens", "rate"], series.points)
        print(f"decay exponent = {series.fitted_decay_exponent:.4f}")
        run.finish({"decay_exponent": series.fitted_decay_exponent})


def _load_lex(args, kind):
    if args.fixture:
        info = fixture_info(args.fixture)
        if info.kind != kind:
            raise UsageError(f"fixture {args.fixture} holds a {info.kind}, not a {kind}")
        return load_fixture(args.fixture)
    if not args.input:
        raise UsageError("give --fixture or --input")
    return CompatibilityMatrix.from_csv(args.input) if kind == "matrix" else HyponymTable.from_csv(args.input)


def cmd_lex(args):
    if args.command == "sum":
        table = _load_lex(args, "hyponym")
        r = hyponym_sum_check(table, args.tolerance, args.include_excluded)
        run = Run(args, "lex_sum")
        run.write_json(".json", asdict(r))
        verdict = "pass" if r.passed else "fail"
        print(f"{table.name}: head {r.head_sum:.2f}, hyponyms {r.hyponym_sum:.2f}, ratio {r.ratio:.4f} ({verdict})")
        run.finish(asdict(r))
        return
    m = _load_lex(args, "matrix")
    res = pca_classify(m, args.normalize)
    total = positive_weight_frequency_sum(res, m)
    run = Run(args, "lex_pca")
    run.write_rows("_eigenvector.csv", ["noun", "polarity", "component"],
                   zip(m.cols, m.polarity, res.eigenvector.tolist()))
    run.write_rows("_weights.csv", ["adjective", "weight", "class"],
                   zip(res.retained_rows, res.weights.tolist(), res.classification))
    print("eigenvector: " + " ".join(f"{v:+.3f}" for v in res.eigenvector))
    print(f"dropped rows: {', '.join(res.dropped_rows) or 'none'}")
    print(f"positive-weight frequency sum = {total:.2f}")
    run.finish({"eigenvector": res.eigenvector, "positive_weight_frequency_sum": total})


def cmd_fit(args):
    table = RankFrequencyTable.from_csv(args.input)
    rng = (args.kmin, args.kmax) if args.kmax else (args.kmin, default_fit_range(len(table))[1])
    f = fit_zipf_exponent(table, rng)
    run = Run(args, "fit")
    run.write_json(".json", {"B": f.B, "intercept": f.intercept, "r_squared": f.r_squared, "fit_range": list(f.fit_range)})
    print(f"B = {f.B:.6f} (r^2 = {f.r_squared:.4f}) over ranks {f.fit_range[0]}..{f.fit_range[1]}")
    run.finish({"B": f.B})


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or the current directory)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent replicates (default 1)")

    p = _Parser(prog="zipfcover", description="Zipf's-law covering simulations and analyses.")
    p.add_argument("--version", action="version", version=__version__)
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    sim = groups.add_parser("sim", help="interval-evolution simulators").add_subparsers(dest="command", required=True)
    for name, text in (("gen", "grow-and-freeze model"), ("spec", "shrink-on-collision model")):
        s = sim.add_parser(name, parents=[common], help=text, description=text)
        s.add_argument("--n", type=int, default=10_000, help="number of intervals (default 10000)")
        s.add_argument("--replicates", type=int, default=1, help="runs with seeds seed, seed+1, ... (default 1)")
        s.add_argument("--linear", action="store_true", help="use the segment [0,1] instead of the circle")
        s.add_argument("--kmin", type=int, default=10, help="first rank of the reported fit (default 10)")
        s.add_argument("--kmax", type=int, default=1000, help="last rank of the reported fit (default 1000)")
        if name == "gen":
            s.add_argument("--delta", type=float, default=None, help="growth per step in units of |S| (default 1e-3/n)")
        else:
            s.add_argument("--gamma", type=float, default=2.0, help="competition band: length ratio limit (default 2)")
            s.add_argument("--eps", type=float, default=1e-12, help="intersections at or below this are ignored (default 1e-12)")
        s.set_defaults(func=cmd_sim)

    cov = groups.add_parser("covering", help="covering diagnostics").add_subparsers(dest="command", required=True)
    d = cov.add_parser("diag", parents=[common], help="gap/overlap of (rho,k)-layers of a covering CSV")
    d.add_argument("--input", required=True, help="covering CSV (rank,lo,hi,length)")
    d.add_argument("--rho", type=float, default=None, help="fixed rho; default chooses rho per k for unit mass")
    d.add_argument("--k", type=int, nargs="*", help="start ranks (default: log-spaced feasible ranks)")
    d.add_argument("--k-max", type=int, default=None, help="largest start rank when generating ranks")
    d.add_argument("--per-decade", type=int, default=10, help="start ranks per decade (default 10)")
    d.add_argument("--circular", action="store_true", help="treat the covering as circular")
    d.set_defaults(func=cmd_covering)
    h = cov.add_parser("hier", parents=[common], help="dyadic hierarchical covering")
    h.add_argument("--depth", type=int, default=11, help="levels below the root, at most 20 (default 11: 4095 ranks)")
    h.set_defaults(func=cmd_covering)

    man = groups.add_parser("mandelbrot", help="cost-ratio framework").add_subparsers(dest="command", required=True)
    s = man.add_parser("solve", parents=[common], help="exponent B with zeta(B, 1+k0) = 1")
    s.add_argument("--k0", type=float, required=True, help="address offset k0 >= 0")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL, help=f"residual tolerance (default {DEFAULT_TOL})")
    s.add_argument("--b-max", type=float, default=B_MAX, help=f"search ceiling for B (default {B_MAX:g})")
    s.set_defaults(func=cmd_mandelbrot)
    s = man.add_parser("pmf", parents=[common], help="truncated Zipf-Mandelbrot distribution")
    s.add_argument("--k0", type=float, default=10.0, help="address offset (default 10)")
    s.add_argument("--B", type=float, default=None, help="exponent (default: solved from k0)")
    s.add_argument("--n", type=int, default=10_000, help="number of ranks (default 10000)")
    s.set_defaults(func=cmd_mandelbrot)
    s = man.add_parser("dynamics", parents=[common], help="local cost-ratio dynamics")
    s.add_argument("--n-words", type=int, default=1000, help="vocabulary size (default 1000)")
    s.add_argument("--k0", type=float, default=10.0, help="address offset (default 10)")
    s.add_argument("--c0", type=float, default=1.0, help="cost scale in bits (default 1)")
    s.add_argument("--band", type=float, default=0.05, help="relative half-width of the no-change band (default 0.05)")
    s.add_argument("--step", type=float, default=1.05, help="multiplicative adjustment factor (default 1.05)")
    s.add_argument("--max-iters", type=int, default=100_000, help="iteration cap (default 100000)")
    s.add_argument("--p-floor", type=float, default=1e-15, help="frequency floor marking extinct words (default 1e-15)")
    s.add_argument("--stride", type=int, default=1, help="record every n-th iteration (default 1)")
    s.set_defaults(func=cmd_mandelbrot)

    base = groups.add_parser("baseline", help="reference text processes").add_subparsers(dest="command", required=True)
    s = base.add_parser("typing", parents=[common], help="random typing")
    s.add_argument("--alphabet", type=int, default=26, help="letters in the alphabet, 1..52 (default 26)")
    s.add_argument("--chars", type=int, default=10_000_000, help="characters typed (default 1e7)")
    s.add_argument("--save-tokens", action="store_true", help="also write the token stream")
    s.set_defaults(func=cmd_baseline)
    s = base.add_parser("simon", parents=[common], help="Simon cumulative-advantage process")
    s.add_argument("--p", type=float, default=0.1, help="probability of a new word (default 0.1)")
    s.add_argument("--tokens", type=int, default=1_000_000, help="stream length (default 1e6)")
    s.add_argument("--save-tokens", action="store_true", help="also write the token stream")
    s.set_defaults(func=cmd_baseline)

    corp = groups.add_parser("corpus", help="measurements on a UTF-8 text file").add_subparsers(dest="command", required=True)
    for name, text in (("wordlen", "distinct words per length"), ("newrate", "new-word rate per window"),
                       ("rankfreq", "rank-frequency table and fit")):
        s = corp.add_parser(name, parents=[common], help=text)
        s.add_argument("--input", required=True, help="text file; lowercased and split on non-letters")
        if name == "newrate":
            s.add_argument("--window", type=int, default=1000, help="tokens per window, at least 100 (default 1000)")
        s.set_defaults(func=cmd_corpus)

    lex = groups.add_parser("lex", help="hyponym sums and PCA").add_subparsers(dest="command", required=True)
    s = lex.add_parser("sum", parents=[common], help="compare head and hyponym frequency sums")
    s.add_argument("--fixture", help="bundled fixture id, e.g. table01_tree")
    s.add_argument("--input", help="hyponym table CSV")
    s.add_argument("--tolerance", type=float, default=0.20, help="allowed relative difference (default 0.20)")
    s.add_argument("--include-excluded", action="store_true", help="count excluded hyponyms too")
    s.set_defaults(func=cmd_lex)
    s = lex.add_parser("pca", parents=[common], help="classify adjectives by test-noun compatibility")
    s.add_argument("--fixture", help="bundled matrix id, e.g. table12_bad_matrix")
    s.add_argument("--input", help="compatibility matrix CSV")
    s.add_argument("--normalize", choices=("columns", "rows"), default="columns",
                   help="standardize noun columns (default) or adjective rows")
    s.set_defaults(func=cmd_lex)

    f = groups.add_parser("fit", parents=[common], help="Zipf exponent of a rank-frequency CSV")
    f.add_argument("--input", required=True, help="CSV with rank,frequency[,word]")
    f.add_argument("--kmin", type=int, default=10, help="first rank (default 10)")
    f.add_argument("--kmax", type=int, default=None, help="last rank (default n/10)")
    f.set_defaults(func=cmd_fit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"zipfcover: error: {exc}", file=sys.stderr)
        return 1
    except ZipfCoverError as exc:
        print(f"zipfcover: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"zipfcover: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
