#!/usr/bin/env python3
"""Regenerate the recorded-session fixtures used by the frontend tests.

Runs the deterministic demo session for 23 steps (exactly 50 events on
this corpus) and writes the event log plus the matching final snapshot.
Run from the repository root:  python3 frontend/fixtures/generate_fixtures.py
"""

import json
from pathlib import Path

from interlangue.corpus import TokenizerConfig, count_translations, read_corpus
from interlangue.explorer import start_session
from interlangue.network import PairSpec, WordId, build_network
from interlangue.space import SolverConfig, snapshot

ROOT = Path(__file__).resolve().parents[2]
HERE = Path(__file__).resolve().parent

pairs_data = list(read_corpus(ROOT / "demos" / "data" / "demo_corpus_en_ja.tsv",
                              "en", "ja"))
network = build_network([count_translations(pairs_data, ("en", "ja"),
                                            TokenizerConfig())])
config = SolverConfig(rng_seed=7)
pairs = PairSpec([("en", "ja")])
session = start_session(WordId("en", "beautiful"), pairs, network, config)
for _ in range(23):
    session.step()
assert len(session.events) == 50, f"expected 50 events, got {len(session.events)}"

(HERE / "session_events.jsonl").write_text(
    "".join(e.to_json() + "\n" for e in session.events), encoding="utf-8")
snap = snapshot(session.state, network, config, pairs)
(HERE / "session_snapshot.json").write_text(
    json.dumps(snap, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
    encoding="utf-8")
print(f"wrote {len(session.events)} events and snapshot "
      f"({len(snap['words'])} words, {len(snap['edges'])} edges)")
