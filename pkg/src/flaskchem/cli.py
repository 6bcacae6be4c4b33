"""Command-line experiment runner.

    flaskchem run CONFIG [--workers N]
    flaskchem check CONFIG --hom NAME [--exhaustive]
    flaskchem lambda EXPR [--max-steps N]

Results go to stdout (JSON lines for ``run`` and ``check``), diagnostics to
stderr. Exit codes: 0 success, 1 failed check, 2 bad config or usage,
3 exact-step budget exceeded, 4 unknown homomorphism, 5 lambda syntax error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import typing as t
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .algebra import check_hom_property, exhaustive_samples
from .chem import LambdaSyntaxError, ReducerConfig, parse_lambda, reduce_term, show
from .config import ConfigError, ExperimentConfig, UnknownHom, build_hom, load_config
from .flask import BudgetExceeded, FlaskProcess, check_naturality, iter_trajectory, markov_morphism
from .multiset import Multiset
from .rng import Stream

EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_UNKNOWN_HOM = 4
EXIT_SYNTAX = 5


def entropy(sigma: Multiset) -> float:
    """Shannon entropy (nats) of the label frequencies; double precision."""
    n = sigma.total()
    if n == 0:
        return 0.0
    h = 0.0
    for _, c in sigma.items():
        p = c / n
        h -= p * math.log(p)
    return h


def metrics(trajectory: int, step: int, sigma: Multiset) -> dict:
    return {
        "trajectory": trajectory,
        "step": step,
        "total": sigma.total(),
        "species": len(sigma),
        "entropy": entropy(sigma),
    }


def trajectory_lines(cfg: ExperimentConfig, index: int) -> list[str]:
    proc = cfg.process()
    rng = Stream.for_trajectory(cfg.seed, index)
    lines = []
    for step, sigma in enumerate(iter_trajectory(proc, cfg.initial_state, cfg.steps, rng)):
        if step % cfg.record_every:
            continue
        record = metrics(index, step, sigma)
        if cfg.record_states:
            record["state"] = sigma.to_json(cfg.algebra.encode)
        lines.append(json.dumps(record))
    return lines


def _worker(raw: dict, index: int) -> list[str]:
    return trajectory_lines(ExperimentConfig.from_json(raw), index)


def run_experiment(cfg: ExperimentConfig, out: t.TextIO | None = None, workers: int = 1) -> None:
    """Emit the exact step distribution or the metrics of every trajectory.

    Trajectory ``i`` uses the stream derived from ``(seed, i)``, and lines are
    emitted in trajectory order, so output does not depend on ``workers``.
    """
    out = out or sys.stdout
    if cfg.mode == "exact-step":
        d = cfg.process().step_exact(cfg.initial_state)
        if sum(w for _, w in d.items()) != 1:
            raise AssertionError("exact step distribution does not sum to 1")
        encode = cfg.algebra.encode
        out.write(json.dumps(d.to_json(lambda s: s.to_json(encode))) + "\n")
        return
    indices = range(cfg.trajectories)
    if workers > 1 and cfg.trajectories > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = pool.map(_worker, itertools.repeat(cfg.raw), indices)
            for lines in chunks:
                for line in lines:
                    out.write(line + "\n")
    else:
        for i in indices:
            for line in trajectory_lines(cfg, i):
                out.write(line + "\n")


def _random_states(pool: list, count: int, max_total: int, rng: Stream) -> list[Multiset]:
    states = []
    for _ in range(count):
        n = rng.below(max_total + 1)
        states.append(Multiset([pool[rng.below(len(pool))] for _ in range(n)]))
    return states


def run_check(cfg: ExperimentConfig, hom_name: str, exhaustive: bool, out: t.TextIO | None = None) -> bool:
    """Check the homomorphism law and the naturality square; True if all pass."""
    out = out or sys.stdout
    alg = cfg.algebra
    h = build_hom(hom_name, alg, cfg.check.params)
    enc_src, enc_tgt = alg.encode, h.target.encode

    states = [cfg.initial_state, *cfg.check.states]
    if exhaustive:
        if alg.carrier is None:
            raise ConfigError(f"--exhaustive needs a finite carrier; {alg.name!r} is infinite")
        pool = list(alg.carrier)
    else:
        pool = sorted({x for s in states for x in s.support()}, key=lambda x: json.dumps(enc_src(x)))
        if not pool and alg.carrier is not None:
            pool = list(alg.carrier)
    if cfg.check.random_states:
        if not pool:
            raise ConfigError("random_states needs elements to draw from")
        states += _random_states(pool, cfg.check.random_states, cfg.check.max_total, Stream(cfg.seed))

    report = check_hom_property(h, exhaustive_samples(alg.sig, pool))
    for c in report.failures:
        out.write(json.dumps({
            "check": "hom",
            "ok": False,
            "op": c.op,
            "args": [enc_src(a) for a in c.args],
            "mapped_result": enc_tgt(c.mapped_result),
            "result_of_mapped": enc_tgt(c.result_of_mapped),
        }) + "\n")

    src = cfg.process()
    tgt = FlaskProcess(h.target, cfg.protocols, budget=cfg.exact_budget)
    m = markov_morphism(src, tgt, h)
    nat_failures = 0
    for sigma in states:
        res = check_naturality(m, sigma)
        if not res.ok:
            nat_failures += 1
            dump = lambda d: d.to_json(lambda s: s.to_json(enc_tgt))  # noqa: E731
            out.write(json.dumps({
                "check": "naturality",
                "ok": False,
                "state": sigma.to_json(enc_src),
                "step_then_map": dump(res.step_then_map),
                "map_then_step": dump(res.map_then_step),
            }) + "\n")

    ok = report.ok and nat_failures == 0
    out.write(json.dumps({
        "hom": hom_name,
        "hom_checks": len(report.checks),
        "hom_failures": len(report.failures),
        "naturality_checks": len(states),
        "naturality_failures": nat_failures,
        "ok": ok,
    }) + "\n")
    return ok


def run_lambda(expr: str, max_steps: int, out: t.TextIO | None = None) -> None:
    out = out or sys.stdout
    r = reduce_term(parse_lambda(expr), ReducerConfig(max_steps))
    out.write(f"{show(r.term)}\n")
    out.write(f"steps: {r.steps}\n")
    out.write(f"limit hit: {'yes' if r.limit_hit else 'no'}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flaskchem", description="Algebraic artificial chemistry reactors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.add_argument("--workers", type=int, default=1, help="processes for sample mode (output is unaffected)")

    check = sub.add_parser("check", help="check a homomorphism and its naturality square")
    check.add_argument("config")
    check.add_argument("--hom", required=True)
    check.add_argument("--exhaustive", action="store_true", help="test the hom law over the whole finite carrier")

    lam = sub.add_parser("lambda", help="reduce a lambda term")
    lam.add_argument("expr")
    lam.add_argument("--max-steps", type=int, default=1000)
    return parser


def main(argv: t.Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            run_experiment(load_config(args.config), workers=args.workers)
        elif args.command == "check":
            if not run_check(load_config(args.config), args.hom, args.exhaustive):
                return EXIT_CHECK_FAILED
        else:
            if args.max_steps < 0:
                raise ConfigError("--max-steps must be non-negative")
            run_lambda(args.expr, args.max_steps)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnknownHom as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_HOM
    except LambdaSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    return 0


if __name__ == "__main__":
    sys.exit(main())
