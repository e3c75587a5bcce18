#!/usr/bin/env python3
# Count "this word was translated into that word" events in a small
# aligned English-Japanese corpus and save the result as a TSV table.
from pathlib import Path

from interlangue.corpus import TokenizerConfig, count_translations, read_corpus, save_table

HERE = Path(__file__).parent
corpus_path = HERE / "data" / "demo_corpus_en_ja.tsv"

# each line is  id <TAB> source <TAB> target <TAB> alignment ("i-j" links)
pairs = list(read_corpus(corpus_path, "en", "ja"))
print(f"read {len(pairs)} sentence pairs, e.g.:")
print(f"  {pairs[0].source_text!r} / {pairs[0].target_text!r} "
      f"links={pairs[0].alignment}")

# the stored alignments drive the counting; tokens are lowercased
table = count_translations(pairs, ("en", "ja"), TokenizerConfig(),
                           keep_provenance=True)

print(f"\n{len(table.pair_counts)} distinct translation pairs, "
      f"{table.total} translation events:")
for (u, v), c in sorted(table.pair_counts.items(), key=lambda kv: -kv[1]):
    backing = ", ".join(table.provenance[(u, v)])
    print(f"  {u:>10} -> {v:<12} x{c}   (from {backing})")

print("\nmost frequent words:")
for (lang, w), c in sorted(table.occurrence_counts.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  {lang}:{w:<12} {c} occurrences")

out = HERE / "out"
out.mkdir(exist_ok=True)
save_table(table, out / "demo_table_en_ja.tsv")
print(f"\nsaved {out / 'demo_table_en_ja.tsv'}")
print("the same run is available as: interlangue count --corpus "
      f"{corpus_path} --langs en-ja --align provided --out table.tsv")
