#!/usr/bin/env python3
# Watch the exploration loop work: after each converged round it may
# pull in the best candidate word, drop words that lost contact with
# the center region, and trim the active set to its size cap.  Then we
# recenter on a translation, as a map click would.
from pathlib import Path

from interlangue.corpus import TokenizerConfig, count_translations, read_corpus
from interlangue.explorer import replay, start_session
from interlangue.network import PairSpec, WordId, build_network
from interlangue.space import SolverConfig

HERE = Path(__file__).parent
pairs_data = list(read_corpus(HERE / "data" / "demo_corpus_en_ja.tsv", "en", "ja"))
network = build_network([count_translations(pairs_data, ("en", "ja"),
                                            TokenizerConfig())])

config = SolverConfig(n_max=6, rng_seed=7)
session = start_session(WordId("en", "beautiful"), PairSpec([("en", "ja")]),
                        network, config)

for round_no in range(8):
    for event in session.step():
        if event.kind == "word_added":
            print(f"round {round_no}: + {event.payload['lang']}:{event.payload['word']}")
        elif event.kind == "word_removed":
            print(f"round {round_no}: - {event.payload['lang']}:{event.payload['word']}")
    if session.phase == "steady":
        print(f"round {round_no}: steady ({len(session.state.coords)} words)")

print("\nclick on ja:utsukushii -> the map re-centers there:")
session.recenter(WordId("ja", "utsukushii"))
for w in session.state.words:
    x = session.state.coords[w]
    marker = "*" if w == session.state.pinned else " "
    print(f" {marker} {w.lang}:{w.word:<12} [{x[0]:+.3f}, {x[1]:+.3f}]")

# the event log carries the whole history; replaying it rebuilds the
# exact same state, which is what the browser client relies on
restored = replay(session.events)
assert restored.pinned == session.state.pinned
assert set(restored.coords) == set(session.state.coords)
print(f"\nevent log: {len(session.events)} events, replay matches live state")
