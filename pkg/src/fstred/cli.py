"""Command line front end.

Subcommands: ``reduce`` (shrink a cascade or a pair and write the
result), ``apply`` (run a token sequence through a cascade), ``verify``
(compare the bounded relations of two cascades), ``stats`` (size
counters as TSV) and ``gen`` (deterministic random cascades).

Exit codes: 0 success, 1 verification failed (witness printed), 2
usage or format error, 3 limits exceeded (no verdict possible).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import Cascade, FstError, Symbol, fst_stats
from .engine import (DEFAULT_LIMITS, Limits, PROBE_TEXT, TruncatedRelation,
                     apply_cascade, enumerate_relation, relations_equal)
from .gen import GenParams, random_cascade
from .reduce import ReductionReport, reduce_cascade
from .textio import (Manifest, parse_fst, parse_manifest, serialize_fst,
                     serialize_manifest, write_report)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_TRUNCATED = 3


def _add_limit_flags(parser):
    parser.add_argument("--max-outputs", type=int, default=DEFAULT_LIMITS.max_outputs,
                        metavar="N", help="cap on distinct outputs per input")
    parser.add_argument("--epsilon-bound", type=int,
                        default=DEFAULT_LIMITS.max_epsilon_moves, metavar="K",
                        help="cap on consecutive input-epsilon moves per path")
    parser.add_argument("--max-output-len", type=int,
                        default=DEFAULT_LIMITS.max_output_len, metavar="M",
                        help="cap on emitted output length")


def _limits(args) -> Limits:
    return Limits(args.max_outputs, args.epsilon_bound, args.max_output_len)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fstred",
        description="Shrink transducer cascades by merging interchangeable "
                    "intermediate symbols; the overall relation is preserved.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("reduce", help="reduce a cascade (or one pair) and write the result")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cascade", metavar="MANIFEST",
                     help="manifest listing .fst files, first-applied first")
    src.add_argument("--pair", nargs=2, metavar=("T1", "T2"),
                     help="two .fst files forming a pair")
    p.add_argument("--out-dir", required=True, metavar="DIR",
                   help="where reduced .fst files and the new manifest go")
    p.add_argument("--report", metavar="FILE.tsv",
                   help="also write a before/after TSV report")

    p = sub.add_parser("apply", help="run a token sequence through a cascade")
    p.add_argument("--cascade", required=True, metavar="MANIFEST")
    p.add_argument("--input", required=True, metavar="TOKENS",
                   help="space-separated input tokens")
    _add_limit_flags(p)

    p = sub.add_parser("verify",
                       help="check that two cascades define the same bounded relation")
    p.add_argument("--before", required=True, metavar="MANIFEST")
    p.add_argument("--after", required=True, metavar="MANIFEST")
    p.add_argument("--max-len", required=True, type=int, metavar="L",
                   help="maximum input sequence length to enumerate")
    p.add_argument("--vocab", default="auto", metavar="auto|LIST",
                   help="input tokens: 'auto' (input alphabet of --before's "
                        "first stage) or a comma-separated list")
    p.add_argument("--probe", action="store_true",
                   help=f"also feed the out-of-alphabet probe token {PROBE_TEXT}")
    _add_limit_flags(p)

    p = sub.add_parser("stats", help="print size counters as TSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fst", metavar="FILE")
    src.add_argument("--cascade", metavar="MANIFEST")

    p = sub.add_parser("gen", help="generate a random cascade deterministically")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--states", default="2:8", metavar="LO:HI")
    p.add_argument("--alphabet", default="2:6", metavar="LO:HI")
    p.add_argument("--arcs", default="1:3", metavar="LO:HI",
                   help="outgoing arcs per state")
    p.add_argument("--redundancy", type=float, default=0.5)
    p.add_argument("--final-prob", type=float, default=0.3)
    p.add_argument("--epsilon-prob", type=float, default=0.1)
    p.add_argument("--unknown-prob", type=float, default=0.1)
    p.add_argument("--out-dir", required=True, metavar="DIR")
    return parser


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FstError(f"cannot read {path}: {exc}") from exc


def _load_cascade(manifest_path):
    manifest = parse_manifest(_read(manifest_path))
    base = Path(manifest_path).parent
    return manifest, Cascade(parse_fst(_read(base / p)) for p in manifest.paths)


def _pct(before: int, after: int) -> str:
    if before == 0:
        return "0.0% reduction"
    return f"{100.0 * (before - after) / before:.1f}% reduction"


def cmd_reduce(args) -> int:
    if args.cascade:
        manifest, cascade = _load_cascade(args.cascade)
        names = [Path(p).name for p in manifest.paths]
        manifest_name = Path(args.cascade).name
    else:
        t1_path, t2_path = args.pair
        cascade = Cascade([parse_fst(_read(t1_path)), parse_fst(_read(t2_path))])
        names = [Path(t1_path).name, Path(t2_path).name]
        manifest_name = "cascade.lst"
    if len(cascade) < 2:
        raise FstError("reduction needs a cascade of at least two stages")
    if len(set(names)) != len(names):
        raise FstError("stage file names collide; cannot write them into one directory")

    reduced, pair_reports = reduce_cascade(cascade)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, fst in zip(names, reduced):
        (out_dir / name).write_text(serialize_fst(fst), encoding="utf-8")
    (out_dir / manifest_name).write_text(
        serialize_manifest(Manifest(tuple(names))), encoding="utf-8")

    merges = {r.stage_index: r for r in pair_reports}
    per_stage = []
    for j, (before, after) in enumerate(zip(cascade, reduced)):
        pr = merges.get(j)
        per_stage.append(ReductionReport(
            stage_index=j,
            before=fst_stats(before),
            after=fst_stats(after),
            classes_merged=pr.classes_merged if pr else 0,
            symbols_eliminated=pr.symbols_eliminated if pr else 0,
        ))
    if args.report:
        Path(args.report).write_text(write_report(per_stage), encoding="utf-8")

    for j, r in enumerate(per_stage, 1):
        print(f"stage {j}: arcs {r.before.arcs} -> {r.after.arcs} "
              f"({_pct(r.before.arcs, r.after.arcs)})")
    total_before = sum(r.before.arcs for r in per_stage)
    total_after = sum(r.after.arcs for r in per_stage)
    print(f"total: arcs {total_before} -> {total_after} "
          f"({_pct(total_before, total_after)})")
    return EXIT_OK


def cmd_apply(args) -> int:
    _, cascade = _load_cascade(args.cascade)
    result = apply_cascade(cascade, args.input.split(), _limits(args))
    for out in sorted(result.outputs, key=lambda seq: tuple(s.text for s in seq)):
        print(" ".join(s.text for s in out))
    if result.truncated:
        print("warning: output truncated by limits", file=sys.stderr)
    return EXIT_OK


def _fmt_seq(seq) -> str:
    return " ".join(s.text for s in seq)


def cmd_verify(args) -> int:
    _, before = _load_cascade(args.before)
    _, after = _load_cascade(args.after)
    if args.vocab == "auto":
        vocab = set(before.stages[0].sigma_in)
    else:
        vocab = {Symbol(tok) for tok in args.vocab.split(",") if tok}
        if not vocab:
            raise FstError("--vocab lists no tokens")
    if args.probe:
        vocab.add(Symbol(PROBE_TEXT))
    limits = _limits(args)
    try:
        r_before = enumerate_relation(before, args.max_len, vocab, limits)
        r_after = enumerate_relation(after, args.max_len, vocab, limits)
        verdict = relations_equal(r_before, r_after)
    except TruncatedRelation as exc:
        print(f"no verdict: {exc}", file=sys.stderr)
        return EXIT_TRUNCATED
    if verdict.equal:
        print(f"ok: relations equal ({len(r_before.pairs)} pairs "
              f"at max input length {args.max_len})")
        return EXIT_OK
    inp, out = verdict.witness
    side = "before" if verdict.side == "left" else "after"
    print(f'mismatch: input "{_fmt_seq(inp)}" -> output "{_fmt_seq(out)}" '
          f"only in {side}")
    return EXIT_VERIFY_FAILED


def cmd_stats(args) -> int:
    if args.fst:
        counters = [fst_stats(parse_fst(_read(args.fst)))]
    else:
        _, cascade = _load_cascade(args.cascade)
        counters = [fst_stats(f) for f in cascade]
    reports = [ReductionReport(stage_index=i, before=s, after=s)
               for i, s in enumerate(counters)]
    sys.stdout.write(write_report(reports))
    return EXIT_OK


def _parse_range(text: str, flag: str) -> tuple:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise FstError(f"{flag} expects LO:HI, got {text!r}") from None
    return lo, hi


def cmd_gen(args) -> int:
    try:
        params = GenParams(
            seed=args.seed,
            stages=args.stages,
            states_per_stage=_parse_range(args.states, "--states"),
            alphabet_size=_parse_range(args.alphabet, "--alphabet"),
            arcs_per_state=_parse_range(args.arcs, "--arcs"),
            redundancy=args.redundancy,
            final_prob=args.final_prob,
            epsilon_prob=args.epsilon_prob,
            unknown_prob=args.unknown_prob,
        )
    except ValueError as exc:
        raise FstError(str(exc)) from None
    cascade = random_cascade(params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = [f"t{i}.fst" for i in range(1, len(cascade) + 1)]
    for name, fst in zip(names, cascade):
        (out_dir / name).write_text(serialize_fst(fst), encoding="utf-8")
    (out_dir / "cascade.lst").write_text(
        serialize_manifest(Manifest(tuple(names))), encoding="utf-8")
    print(f"wrote {len(names)} transducers and cascade.lst to {out_dir}")
    return EXIT_OK


_COMMANDS = {
    "reduce": cmd_reduce,
    "apply": cmd_apply,
    "verify": cmd_verify,
    "stats": cmd_stats,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (FstError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def cli():
    raise SystemExit(main())
