"""Command-line interface: ``generate``, ``sample``, ``anneal``, ``experiment``.

Any long flag can also be set from a ``key = value`` config file passed with
``--config``; flags given on the command line win.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .annealer import AnnealSchedule, anneal, write_trace
from .datagen import TRUE_WEIGHTS, GeneratorConfig, generate
from .encoding import DEFAULT_BASIS, BasisVector, decode, full_plan, reduce_plan, write_plan
from .gibbs_sampler import SamplerConfig, correlation_report, write_report
from .harness import (
    METHODS,
    ExperimentConfig,
    format_summary,
    run_experiment,
    summarize,
    write_results,
    write_summary,
)
from .qubo_core import read_qubo, write_qubo
from .regression import build_qubo, cost_reduced, load_dataset, save_dataset

def parse_config_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_cuts(text: str) -> tuple[int, ...]:
    cuts = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            cuts.extend(range(int(lo), int(hi) + 1))
        elif part:
            cuts.append(int(part))
    return tuple(cuts)


def parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in str(text).split(";"):
        if part.strip():
            a, b = part.split("-")
            pairs.append((int(a), int(b)))
    return pairs


def parse_basis(text: str) -> BasisVector:
    return BasisVector(tuple(float(v) for v in str(text).split(",")))


def _add_generator_flags(p):
    d = GeneratorConfig()
    p.add_argument("--n-total", type=int, default=d.n_total)
    p.add_argument("--train-size", type=int, default=d.train_size)
    p.add_argument("--noise-sigma", type=float, default=d.noise_sigma)
    p.add_argument("--data-seed", type=int, default=d.seed)


def _add_sampler_flags(p):
    d = SamplerConfig()
    p.add_argument("--temperature", type=float, default=d.temperature)
    p.add_argument("--proposal-sigma", type=float, default=d.proposal_sigma)
    p.add_argument("--interval", type=int, default=None, help="default: 2 * D")
    p.add_argument("--chain-length", type=int, default=d.chain_length)
    p.add_argument("--burn-in", type=int, default=d.burn_in)
    p.add_argument("--sampler-seed", type=int, default=d.seed)
    p.add_argument("--threshold", type=float, default=0.8)


def _add_schedule_flags(p):
    d = AnnealSchedule()
    p.add_argument("--iterations", type=int, default=d.iterations)
    p.add_argument("--t0", type=float, default=d.t0)
    p.add_argument("--gamma", type=float, default=None,
                   help="default: rescaled so the end temperature matches 1e6 iterations at 0.99996")
    p.add_argument("--anneal-seed", type=int, default=d.seed)


def _schedule(args) -> AnnealSchedule:
    gamma = args.gamma
    if gamma is None:
        gamma = AnnealSchedule(t0=args.t0).rescaled(args.iterations).gamma
    return AnnealSchedule(args.iterations, args.t0, gamma, args.anneal_seed)


def _sampler(args, D: int) -> SamplerConfig:
    return SamplerConfig(args.temperature, args.proposal_sigma, args.interval or 2 * D,
                         args.chain_length, args.sampler_seed, args.burn_in)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qubodisc", description=__doc__)
    parser.add_argument("--config", help="key = value file with defaults for any flag")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic regression dataset")
    _add_generator_flags(g)
    g.add_argument("--out", required=True)

    s = sub.add_parser("sample", help="estimate parameter correlations and select pairs")
    s.add_argument("--data", required=True, help="dataset file (features..., target)")
    _add_sampler_flags(s)
    s.add_argument("--out", required=True, help="output prefix for _corr.csv / _pairs.csv")

    a = sub.add_parser("anneal", help="anneal a QUBO file or a regression dataset")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--qubo", help="QUBO text file ('n offset' then 'i j value')")
    src.add_argument("--data", help="dataset file; the regression QUBO is built from it")
    a.add_argument("--basis", default=",".join(repr(v) for v in DEFAULT_BASIS.values))
    a.add_argument("--pairs", default="", help="shared pairs, e.g. '0-5;8-9'")
    a.add_argument("--cut", type=int, default=0, help="shared bits per pair")
    _add_schedule_flags(a)
    a.add_argument("--trace", help="write a decimated annealing trace here")
    a.add_argument("--write-qubo", help="also write the QUBO that was annealed")
    a.add_argument("--write-plan", help="also write the encoding plan (with --data)")

    e = sub.add_parser("experiment", help="run the proposed/random/none comparison sweep")
    _add_generator_flags(e)
    _add_sampler_flags(e)
    _add_schedule_flags(e)
    e.add_argument("--basis", default=",".join(repr(v) for v in DEFAULT_BASIS.values))
    e.add_argument("--cuts", default="0-10")
    e.add_argument("--methods", default=",".join(METHODS))
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--seed", type=int, default=0, help="master seed")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out-dir", default=".")
    parser.set_defaults(_commands=sub.choices)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    first, _ = parser.parse_known_args(argv)
    if first.config:
        values = parse_config_file(first.config)
        for subparser in first._commands.values():
            known = {a.dest: a for a in subparser._actions}
            subparser.set_defaults(**{
                key: known[key].type(value) if known[key].type else value
                for key, value in values.items() if key in known
            })
    return parser.parse_args(argv)


def cmd_generate(args) -> None:
    ds = generate(GeneratorConfig(args.n_total, args.train_size, args.noise_sigma, args.data_seed))
    save_dataset(args.out, ds)
    print(f"wrote {ds.N} samples, D={ds.D}, to {args.out}")


def cmd_sample(args) -> None:
    ds = load_dataset(args.data)
    report = correlation_report(ds, _sampler(args, ds.D), args.threshold)
    corr_path, pairs_path = write_report(args.out, report)
    for (a, b), rho in report.pairs:
        print(f"pair ({a}, {b})  rho={rho:.4f}")
    print(f"wrote {corr_path} and {pairs_path}")


def cmd_anneal(args) -> None:
    plan = ds = None
    if args.qubo:
        q = read_qubo(args.qubo)
    else:
        ds = load_dataset(args.data)
        plan = reduce_plan(full_plan(ds.D, parse_basis(args.basis)), parse_pairs(args.pairs), args.cut)
        q = build_qubo(ds, plan)
        if args.write_plan:
            write_plan(args.write_plan, plan)
    if args.write_qubo:
        write_qubo(args.write_qubo, q)
    result = anneal(q, _schedule(args), trace=bool(args.trace))
    if args.trace:
        write_trace(args.trace, result)
    print(f"n_bits={q.n} best_energy={result.best_energy!r} seconds={result.wall_time:.3f} "
          f"accepted={result.flips_accepted}/{result.flips_attempted}")
    print("best_z=" + "".join(str(int(b)) for b in result.best_z))
    if plan is not None:
        w = decode(plan, result.best_z)
        print("w=" + ",".join(repr(float(v)) for v in w))
        print(f"cost_reduced={cost_reduced(w, ds)!r}")


def cmd_experiment(args) -> None:
    gen = GeneratorConfig(args.n_total, args.train_size, args.noise_sigma, args.data_seed)
    D = TRUE_WEIGHTS.size
    cfg = ExperimentConfig(
        generator=gen,
        basis=parse_basis(args.basis),
        sampler=_sampler(args, D),
        schedule=_schedule(args),
        threshold=args.threshold,
        cut_values=parse_cuts(args.cuts),
        methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
        n_trials=args.trials,
        master_seed=args.seed,
    )
    reports = run_experiment(cfg, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = summarize(reports)
    write_results(out / "results.csv", reports)
    write_summary(out / "summary.csv", rows)
    print(format_summary(rows))
    print(f"wrote {out / 'results.csv'} and {out / 'summary.csv'}")


COMMANDS = {
    "generate": cmd_generate,
    "sample": cmd_sample,
    "anneal": cmd_anneal,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"qubodisc: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except Exception as exc:
        print(f"qubodisc {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
