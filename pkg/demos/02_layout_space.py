#!/usr/bin/env python3
# Embed the demo vocabulary in the plane: words of the same language
# repel like charges, translated words attract like springs, and the
# searched word is pinned at the origin.  Writes a snapshot and an SVG.
from pathlib import Path

import numpy as np

from interlangue.corpus import TokenizerConfig, count_translations, read_corpus
from interlangue.explorer import start_session
from interlangue.network import PairSpec, WordId, build_network
from interlangue.render import render_svg
from interlangue.space import SolverConfig, dump_snapshot, snapshot, total_energy

HERE = Path(__file__).parent
pairs_data = list(read_corpus(HERE / "data" / "demo_corpus_en_ja.tsv", "en", "ja"))
table = count_translations(pairs_data, ("en", "ja"), TokenizerConfig())
network = build_network([table])

config = SolverConfig(rng_seed=7)
pairs = PairSpec([("en", "ja")])
session = start_session(WordId("en", "beautiful"), pairs, network, config)

print("searching around 'beautiful'; the first neighbors are its translations:")
print(" ", ", ".join(f"{w.lang}:{w.word}" for w in session.state.words))

for round_no in range(10):
    session.step()
    e_total, e_rep, e_att = total_energy(session.state, config)
    print(f"round {round_no}: |W|={len(session.state.coords)} "
          f"E={e_total:.3f} (rep {e_rep:.3f} + att {e_att:.3f})")

print("\nfinal map (distance from center in parentheses):")
for w in session.state.words:
    x = session.state.coords[w]
    print(f"  {w.lang}:{w.word:<12} ({np.linalg.norm(x):.3f})  at "
          f"[{x[0]:+.3f}, {x[1]:+.3f}]")

out = HERE / "out"
out.mkdir(exist_ok=True)
snap = snapshot(session.state, network, config, pairs)
dump_snapshot(snap, out / "demo_layout.json")
(out / "demo_layout.svg").write_text(render_svg(snap), encoding="utf-8")
print(f"\nwrote {out / 'demo_layout.json'} and {out / 'demo_layout.svg'}")
