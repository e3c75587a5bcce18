"""Batch entry points.

    interlangue count          corpus file -> count table
    interlangue build-network  count tables -> network JSON
    interlangue layout         deterministic offline layout -> snapshot (+SVG)
    interlangue export         network JSON or snapshot SVG from saved files
    interlangue serve          run the HTTP service

Exit codes: 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .corpus import (CorpusError, TokenizerConfig, accumulate_dice_stats,
                     count_translations, load_lemmas, load_table, load_word_list,
                     merge_tables, parse_align_method, read_corpus, save_table)
from .explorer import ExplorerError, start_session
from .network import NetworkError, PairSpec, WordId, build_network
from .render import render_svg
from .space import (DegenerateScale, SolverConfig, SpaceError, compute_charges_springs,
                    dump_snapshot, load_config, load_snapshot, snapshot)

USAGE_ERROR = 1
DATA_ERROR = 2
NUMERIC_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_langs(text: str) -> tuple[str, str]:
    parts = text.split("-")
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"expected 'l1-l2', got {text!r}")
    return parts[0], parts[1]


def _parse_word(text: str) -> WordId:
    if ":" not in text:
        raise ValueError(f"expected 'lang:word', got {text!r}")
    lang, word = text.split(":", 1)
    return WordId(lang, word)


def _tokenizer_from_args(args) -> TokenizerConfig:
    return TokenizerConfig(mode=args.tokenizer, lowercase=not args.keep_case,
                           strip_punctuation=not args.keep_punctuation)


def _add_tokenizer_flags(parser) -> None:
    parser.add_argument("--tokenizer", choices=["whitespace", "unicode-word-boundary"],
                        default="whitespace")
    parser.add_argument("--keep-case", action="store_true",
                        help="do not lowercase tokens")
    parser.add_argument("--keep-punctuation", action="store_true",
                        help="keep punctuation on/as tokens")


def _count_chunk(chunk_args):
    pairs, lang_pair, tokenizer, lemmas, method, word_list, stats, threshold = chunk_args
    return count_translations(pairs, lang_pair, tokenizer, lemmas, method=method,
                              word_list=word_list, dice_stats=stats,
                              dice_threshold=threshold)


def cmd_count(args) -> int:
    lang_pair = _parse_langs(args.langs)
    tokenizer = _tokenizer_from_args(args)
    lemmas = load_lemmas(args.lemmas) if args.lemmas else None
    word_list = load_word_list(args.word_list) if args.word_list else None
    method, threshold = parse_align_method(args.align)
    pairs = list(read_corpus(args.corpus, *lang_pair))
    stats = None
    if method == "dice":
        stats = accumulate_dice_stats(pairs, lang_pair, tokenizer, lemmas)
    if args.jobs > 1 and len(pairs) > 1:
        import multiprocessing

        chunk_size = (len(pairs) + args.jobs - 1) // args.jobs
        chunks = [pairs[i:i + chunk_size] for i in range(0, len(pairs), chunk_size)]
        with multiprocessing.Pool(args.jobs) as pool:
            partials = pool.map(_count_chunk, [
                (chunk, lang_pair, tokenizer, lemmas, method, word_list, stats, threshold)
                for chunk in chunks])
        table = merge_tables(partials)
    else:
        table = count_translations(pairs, lang_pair, tokenizer, lemmas, method=method,
                                   word_list=word_list, dice_stats=stats,
                                   dice_threshold=threshold)
    save_table(table, args.out)
    print(f"wrote {args.out}: {len(table.pair_counts)} pairs, total {table.total}")
    return 0


def _load_tables(paths):
    return [load_table(path) for path in paths]


def cmd_build_network(args) -> int:
    network = build_network(_load_tables(args.table))
    exported = network.export()
    Path(args.out).write_text(
        json.dumps(exported, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")
    print(f"wrote {args.out}: {len(exported['nodes'])} nodes, "
          f"{len(exported['edges'])} edges")
    return 0


def _solver_config(args) -> SolverConfig:
    config = load_config(args.config) if args.config else SolverConfig()
    if args.seed_rng is not None:
        config = replace(config, rng_seed=args.seed_rng)
    return config


def cmd_layout(args) -> int:
    network = build_network(_load_tables(args.table))
    config = _solver_config(args)
    pairs = PairSpec([_parse_langs(p) for p in args.pairs.split(",")])
    seed = _parse_word(args.seed)
    session = start_session(seed, pairs, network, config, session_id="offline")
    for _ in range(args.rounds):
        session.step()
    if args.rounds == 0:
        # no round ran, so freeze the caches the first round would see
        try:
            compute_charges_springs(session.state, network, pairs, session.config)
        except DegenerateScale:
            session.state.clear_caches()
    snap = snapshot(session.state, network, session.config, pairs, meta={
        "seed": {"lang": seed.lang, "word": seed.word},
        "rounds": args.rounds,
    })
    dump_snapshot(snap, args.out)
    print(f"wrote {args.out}: {len(snap['words'])} words after {args.rounds} rounds, "
          f"E_total={snap['energy']['total']:.6g}")
    if args.svg:
        Path(args.svg).write_text(render_svg(snap), encoding="utf-8")
        print(f"wrote {args.svg}")
    return 0


def cmd_export(args) -> int:
    if args.network:
        if not args.table:
            print("export --network needs at least one --table", file=sys.stderr)
            return USAGE_ERROR
        return cmd_build_network(args)
    if args.snapshot:
        snap = load_snapshot(args.snapshot)
        Path(args.out).write_text(render_svg(snap), encoding="utf-8")
        print(f"wrote {args.out}")
        return 0
    print("export needs --network or --snapshot", file=sys.stderr)
    return USAGE_ERROR


def cmd_serve(args) -> int:
    from .service import SessionSettings, build_dataset, create_app

    if len(args.corpus) != len(args.langs):
        print("each --corpus needs a matching --langs", file=sys.stderr)
        return USAGE_ERROR
    tokenizer = _tokenizer_from_args(args)
    lemmas = load_lemmas(args.lemmas) if args.lemmas else None
    word_list = load_word_list(args.word_list) if args.word_list else None
    sources = []
    for corpus_path, langs in zip(args.corpus, args.langs):
        lang_pair = _parse_langs(langs)
        sources.append((lang_pair, list(read_corpus(corpus_path, *lang_pair)), args.align))
    dataset = build_dataset(sources, tokenizer, lemmas, word_list)
    app = create_app(dataset, _solver_config(args),
                     SessionSettings(idle_park_rounds=args.idle_park_rounds),
                     event_log_dir=args.event_log_dir,
                     rng_seed=args.seed_rng or 0)
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="interlangue", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count translations in a corpus file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--langs", required=True, help="language pair, e.g. en-ja")
    p.add_argument("--align", default="provided", help="provided or dice:<threshold>")
    p.add_argument("--lemmas")
    p.add_argument("--word-list")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_tokenizer_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("build-network", help="export a network JSON from count tables")
    p.add_argument("--table", action="append", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_network)

    p = sub.add_parser("layout", help="run a deterministic offline layout")
    p.add_argument("--table", action="append", required=True)
    p.add_argument("--seed", required=True, help="center word as lang:word")
    p.add_argument("--pairs", required=True, help="comma-separated pairs, e.g. en-ja,en-fr")
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--config")
    p.add_argument("--seed-rng", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("export", help="re-export saved artifacts")
    p.add_argument("--network", action="store_true")
    p.add_argument("--snapshot")
    p.add_argument("--table", action="append")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--corpus", action="append", required=True)
    p.add_argument("--langs", action="append", required=True)
    p.add_argument("--align", default="provided")
    p.add_argument("--lemmas")
    p.add_argument("--word-list")
    p.add_argument("--config")
    p.add_argument("--seed-rng", type=int, default=None)
    p.add_argument("--event-log-dir")
    p.add_argument("--idle-park-rounds", type=int, default=8)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_tokenizer_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except (ValueError, CorpusError, NetworkError, ExplorerError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except SpaceError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return NUMERIC_ERROR


if __name__ == "__main__":
    sys.exit(main())
