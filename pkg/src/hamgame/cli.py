"""Command-line interface: batch experiments, property suites, solver, bounds, replay."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, fields
from pathlib import Path

from .board import TranscriptParseError, write_transcript
from .engine import play_game
from .experiment import ExperimentConfig, SummaryRow, game_meta, replay_file, run_experiment
from .properties import SUITES, run_property_suite
from .solver import WinningSetSystem, bias_monotonicity_check, hamilton_winning_sets, solve
from .strategies import BREAKERS, MAKERS
from .theory import bound_table, constants


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _merge(args: argparse.Namespace, keys) -> dict:
    """File values first, then every flag the user actually gave."""
    merged = _load_config(getattr(args, "config", None))
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    if "bias" in merged and "bias_coeff" in merged and args.bias_coeff is not None:
        merged.pop("bias")
    if "bias" in merged and "bias_coeff" in merged and args.bias is not None:
        merged.pop("bias_coeff")
    return merged


_GAME_KEYS = ("n", "bias", "bias_coeff", "maker", "breaker", "seed", "profile", "delta", "out", "move_cap")
_EXP_KEYS = _GAME_KEYS + ("games", "jobs")


def _game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with the same keys as the flags; flags override it")
    p.add_argument("--n", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bias", type=int, help="absolute Breaker bias b")
    g.add_argument("--bias-coeff", type=float, help="c with b = floor(c n / ln n)")
    p.add_argument("--maker", choices=sorted(MAKERS))
    p.add_argument("--breaker", choices=sorted(BREAKERS))
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--profile", choices=("paper", "desk"))
    p.add_argument("--delta", type=float, help="monitor delta for the desk profile")
    p.add_argument("--move-cap", type=int, help="Maker move cap (default 14n)")


def _experiment_config(args, keys) -> ExperimentConfig:
    merged = _merge(args, keys)
    if "n" not in merged:
        raise ValueError("--n is required (flag or config file)")
    return ExperimentConfig.from_dict(merged)


def cmd_play(args) -> int:
    cfg = _experiment_config(args, _GAME_KEYS)
    exp = ExperimentConfig.from_dict({**asdict(cfg), "out": None, "games": 1})
    gc = exp.game_config(0)
    result, transcript = play_game(gc)
    if cfg.out:
        write_transcript(cfg.out, transcript)
        with open(cfg.out + ".meta.json", "w") as fh:
            json.dump(game_meta(gc, 0, result), fh)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args, _EXP_KEYS)
    row, _, _ = run_experiment(cfg)
    w = csv.DictWriter(sys.stdout, fieldnames=[f.name for f in fields(SummaryRow)])
    w.writeheader()
    w.writerow(asdict(row))
    return 0


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == ["all"] or not args.suite else args.suite
    ok = True
    for s in suites:
        rep = run_property_suite(s, args.budget, seed=args.seed)
        print(rep.summary())
        for cex in rep.counterexamples:
            print("  counterexample:", json.dumps(cex))
        ok &= rep.passed
    return 0 if ok else 1


def cmd_solve(args) -> int:
    if args.sets:
        system = WinningSetSystem.parse(Path(args.sets).read_text())
        label = args.sets
    else:
        system = hamilton_winning_sets(args.n)
        label = f"K_{args.n} Hamiltonicity"
    if args.b_max:
        for b in range(1, args.b_max + 1):
            print(f"{label} b={b}: {solve(system, b, to_move=args.first).winner}")
        mono = bias_monotonicity_check(system, args.b_max)
        print(f"monotone: {mono}")
        return 0 if mono else 1
    res = solve(system, args.bias, to_move=args.first)
    print(f"{label} b={args.bias}: winner={res.winner} states={res.states_visited}")
    print("line: " + " ".join(f"{m[0]}:{x}" for m, x in res.principal_variation))
    return 0


def cmd_bound(args) -> int:
    if args.ln_n is not None:
        c = constants(ln_n=args.ln_n)
        print(f"ln_n={c.ln_n} delta0={c.delta0:.6g} delta={c.delta:.6g} epsilon={c.epsilon:.6g}")
        return 0
    k0_of_n = (lambda n: args.k0) if args.k0 is not None else (lambda n: math.floor(n * args.k0_frac))
    w = csv.writer(sys.stdout)
    w.writerow(["n", "delta", "k0", "ln_bound", "log10_bound"])
    for n, delta, k0, lb in bound_table(args.n, args.delta, k0_of_n):
        w.writerow([n, delta, k0, repr(lb), repr(lb / math.log(10))])
    return 0


def cmd_replay(args) -> int:
    config = None
    if args.n is not None:
        merged = _merge(args, _GAME_KEYS)
        config = ExperimentConfig.from_dict({**merged, "games": 1}).game_config(0)
        if args.game_seed is not None:
            config.seed = args.game_seed
    try:
        rep = replay_file(args.path, config)
    except TranscriptParseError as exc:
        print(f"parse error: {exc}")
        return 2
    if not rep.verified:
        print(f"illegal transcript: {rep.error}")
        return 1
    print(json.dumps({"verified": True, "matches_original": rep.matches_original, "result": rep.result.to_dict()}, indent=2))
    return 0 if rep.matches_original in (None, True) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hamgame", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("play", help="play one seeded game and print its result")
    _game_flags(sp)
    sp.add_argument("--out", help="write the transcript (JSONL) here")
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("experiment", help="play many seeded games and print a CSV summary row")
    _game_flags(sp)
    sp.add_argument("--games", type=int)
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--out", help="output directory for games.jsonl, summary.csv, transcripts/")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", action="append", choices=SUITES + ("all",))
    sp.add_argument("--budget", type=int, help="sample budget per suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("solve", help="exact solver for tiny boards")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--n", type=int, help="Hamiltonicity game on K_n (n <= 7, board <= 16 edges)")
    src.add_argument("--sets", help="winning-set file: '# size N' then one set per line")
    sp.add_argument("--bias", type=int, default=1)
    sp.add_argument("--b-max", type=int, help="solve every b in 1..B and check monotonicity")
    sp.add_argument("--first", choices=("breaker", "maker"), default="breaker")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bound", help="tabulate the log failure bound")
    sp.add_argument("--n", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    sp.add_argument("--delta", type=float, default=0.5)
    k = sp.add_mutually_exclusive_group()
    k.add_argument("--k0", type=int)
    k.add_argument("--k0-frac", type=float, default=1 / 128)
    sp.add_argument("--ln-n", type=float, help="print the preset constants at this ln n instead")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("replay", help="re-referee a transcript file")
    sp.add_argument("path")
    _game_flags(sp)
    sp.add_argument("--game-seed", type=int, help="per-game seed (otherwise derived from --seed)")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
