"""Parallel-corpus ingestion and translation counting.

Turns a stream of aligned sentence pairs into a table of counts
"word u (language 1) was translated into word v (language 2)", plus
per-word occurrence counts.  Tokenization, lemma normalization and
word alignment are pluggable; a Dice-coefficient aligner is bundled
for corpora that ship without alignments.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator


class CorpusError(Exception):
    """Base class for corpus-layer failures."""


class FormatError(CorpusError):
    """A corpus or table file is malformed; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MissingAlignment(CorpusError):
    """method='provided' was requested but the pair stores no alignment."""


class InvalidAlignment(CorpusError):
    """An alignment link points outside the tokenized sentence."""


class MixedLanguagePair(CorpusError):
    """A sentence pair's languages differ from the table being built."""


@dataclass
class SentencePair:
    """One aligned sentence pair.

    `alignment` is a list of (source token index, target token index)
    links referring to the tokenization used at counting time.  `tag`
    is an opaque pass-through annotation column (e.g. a part-of-speech
    marker); nothing downstream interprets it.
    """

    id: str
    source_lang: str
    target_lang: str
    source_text: str
    target_text: str
    alignment: list[tuple[int, int]] | None = None
    tag: str | None = None

    def __post_init__(self):
        if self.source_lang == self.target_lang:
            raise ValueError(f"sentence pair {self.id!r}: source and target language are both "
                             f"{self.source_lang!r}")


@dataclass(frozen=True)
class TokenizerConfig:
    """Deterministic tokenizer settings.

    mode 'whitespace' splits on whitespace; 'unicode-word-boundary'
    extracts word-character runs (keeping internal apostrophes, so
    "it's" stays one token) and, unless punctuation is stripped, emits
    punctuation runs as their own tokens.  This boundary rule is fixed
    and frozen by a golden test.
    """

    mode: str = "whitespace"
    lowercase: bool = True
    strip_punctuation: bool = True

    def __post_init__(self):
        if self.mode not in ("whitespace", "unicode-word-boundary"):
            raise ValueError(f"unknown tokenizer mode {self.mode!r}")


_WORD_OR_PUNCT = re.compile(r"\w+(?:['’]\w+)*|[^\w\s]+", re.UNICODE)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_edge_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    """Split `text` into tokens. Total and deterministic; '' yields []."""
    if config.mode == "whitespace":
        tokens = text.split()
        if config.strip_punctuation:
            tokens = [t for t in (_strip_edge_punct(t) for t in tokens) if t]
    else:
        tokens = _WORD_OR_PUNCT.findall(text)
        if config.strip_punctuation:
            tokens = [t for t in tokens if any(not _is_punct(c) for c in t)]
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    return tokens


@dataclass
class LemmaMap:
    """Per-language mapping from surface forms to representative words.

    Representatives are fixed points: normalize(normalize(w)) equals
    normalize(w) for every w, which the constructor enforces.
    """

    entries: dict[str, dict[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        for lang, table in self.entries.items():
            for surface, rep in table.items():
                if self.normalize(lang, rep) != rep:
                    raise ValueError(
                        f"lemma map for {lang!r} is not idempotent: "
                        f"{surface!r} -> {rep!r} but {rep!r} -> {self.normalize(lang, rep)!r}")

    def normalize(self, lang: str, token: str) -> str:
        table = self.entries.get(lang, {})
        if token in table:
            return table[token]
        low = token.lower()
        return table.get(low, low)


def normalize(token: str, lemmas: LemmaMap | None = None, lang: str = "") -> str:
    """Map a token to its representative word (lowercased fallback)."""
    if lemmas is None:
        return token.lower()
    return lemmas.normalize(lang, token)


def load_lemmas(path: str | Path) -> LemmaMap:
    """Read a lemma file: tab-separated `lang  surface  representative` lines."""
    entries: dict[str, dict[str, str]] = defaultdict(dict)
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise FormatError(f"expected 3 tab-separated columns, got {len(cols)}", line_no)
            lang, surface, rep = cols
            entries[lang][surface] = rep
    try:
        return LemmaMap(dict(entries))
    except ValueError as exc:
        raise FormatError(str(exc), 0) from exc


def load_word_list(path: str | Path) -> dict[str, set[str]]:
    """Read a word-list file: tab-separated `lang  word` lines."""
    words: dict[str, set[str]] = defaultdict(set)
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise FormatError(f"expected 2 tab-separated columns, got {len(cols)}", line_no)
            words[cols[0]].add(cols[1])
    return dict(words)


# ---------------------------------------------------------------------------
# Alignment


def parse_pharaoh(text: str) -> list[tuple[int, int]]:
    """Parse '0-1 1-0 ...' alignment links."""
    links = []
    for chunk in text.split():
        parts = chunk.split("-")
        if len(parts) != 2 or not parts[0].isdigit() or not parts[1].isdigit():
            raise ValueError(f"bad alignment link {chunk!r}")
        links.append((int(parts[0]), int(parts[1])))
    return links


def format_pharaoh(links: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"{i}-{j}" for i, j in links)


def parse_align_method(spec: str) -> tuple[str, float | None]:
    """Parse an alignment method string: 'provided' or 'dice:<threshold>'."""
    if spec == "provided":
        return "provided", None
    if spec.startswith("dice:"):
        try:
            threshold = float(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad dice threshold in {spec!r}") from None
        return "dice", threshold
    raise ValueError(f"unknown alignment method {spec!r}")


@dataclass
class DiceStats:
    """Sentence-level co-occurrence statistics for the Dice aligner.

    All counts are over normalized token *types* per sentence pair:
    `cooccur[(u, v)]` counts pairs where u appears on the source side
    and v on the target side; the frequency counters count sentences
    containing the word.
    """

    lang_pair: tuple[str, str]
    cooccur: Counter = field(default_factory=Counter)
    source_freq: Counter = field(default_factory=Counter)
    target_freq: Counter = field(default_factory=Counter)


def _normalized_types(text, lang, tokenizer, lemmas):
    return sorted({normalize(t, lemmas, lang) for t in tokenize(text, tokenizer)})


def accumulate_dice_stats(pairs: Iterable[SentencePair], lang_pair: tuple[str, str],
                          tokenizer: TokenizerConfig, lemmas: LemmaMap | None = None) -> DiceStats:
    """First pass over a corpus: gather the statistics dice alignment needs."""
    stats = DiceStats(lang_pair)
    l1, l2 = lang_pair
    for pair in pairs:
        src = _normalized_types(pair.source_text, l1, tokenizer, lemmas)
        tgt = _normalized_types(pair.target_text, l2, tokenizer, lemmas)
        for u in src:
            stats.source_freq[u] += 1
        for v in tgt:
            stats.target_freq[v] += 1
        for u in src:
            for v in tgt:
                stats.cooccur[(u, v)] += 1
    return stats


def dice_coefficient(stats: DiceStats, u: str, v: str) -> float:
    denom = stats.source_freq[u] + stats.target_freq[v]
    if denom == 0:
        return 0.0
    return 2.0 * stats.cooccur[(u, v)] / denom


def align(pair: SentencePair, method: str, *, tokenizer: TokenizerConfig,
          lemmas: LemmaMap | None = None, stats: DiceStats | None = None,
          threshold: float | None = None) -> list[tuple[int, int]]:
    """Return (source index, target index) links for one sentence pair.

    method 'provided' passes through the stored alignment (validated
    against the token ranges); 'dice' links token positions (i, j)
    whenever the Dice coefficient of their normalized forms reaches
    `threshold`, using pre-accumulated corpus `stats`.
    """
    src = tokenize(pair.source_text, tokenizer)
    tgt = tokenize(pair.target_text, tokenizer)
    if method == "provided":
        if pair.alignment is None:
            raise MissingAlignment(f"pair {pair.id!r} has no stored alignment")
        for i, j in pair.alignment:
            if not (0 <= i < len(src)) or not (0 <= j < len(tgt)):
                raise InvalidAlignment(
                    f"pair {pair.id!r}: link {i}-{j} outside token ranges "
                    f"({len(src)}x{len(tgt)})")
        return list(pair.alignment)
    if method == "dice":
        if stats is None or threshold is None:
            raise ValueError("dice alignment needs accumulated stats and a threshold")
        links = []
        norm_src = [normalize(t, lemmas, pair.source_lang) for t in src]
        norm_tgt = [normalize(t, lemmas, pair.target_lang) for t in tgt]
        for i, u in enumerate(norm_src):
            for j, v in enumerate(norm_tgt):
                if dice_coefficient(stats, u, v) >= threshold:
                    links.append((i, j))
        return links
    raise ValueError(f"unknown alignment method {method!r}")


# ---------------------------------------------------------------------------
# Count tables


@dataclass
class TranslationCountTable:
    """Translation counts for one ordered language pair.

    `pair_counts[(u, v)]` counts "u was translated into v" events;
    `occurrence_counts[(lang, word)]` counts token occurrences in the
    counted corpus.  `provenance`, when kept, lists the sentence-pair
    ids contributing each pair count (one id per counted link).
    """

    lang_pair: tuple[str, str]
    pair_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    occurrence_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    provenance: dict[tuple[str, str], list[str]] | None = None

    @property
    def total(self) -> int:
        """Sum of all pair counts."""
        return sum(self.pair_counts.values())

    def validate(self) -> None:
        l1, l2 = self.lang_pair
        if l1 == l2:
            raise ValueError(f"language pair {self.lang_pair} is degenerate")
        for key, count in self.pair_counts.items():
            if count < 0:
                raise ValueError(f"negative pair count for {key}")
        for key, count in self.occurrence_counts.items():
            if count < 0:
                raise ValueError(f"negative occurrence count for {key}")
        max_per_word: dict[tuple[str, str], int] = defaultdict(int)
        for (u, v), count in self.pair_counts.items():
            max_per_word[(l1, u)] = max(max_per_word[(l1, u)], count)
            max_per_word[(l2, v)] = max(max_per_word[(l2, v)], count)
        for key, needed in max_per_word.items():
            have = self.occurrence_counts.get(key)
            if have is None:
                raise ValueError(f"word {key} appears in pair counts but has no occurrence count")
            if have < needed:
                raise ValueError(f"occurrence count {have} of {key} is below its "
                                 f"largest pair count {needed}")

    def merge(self, other: "TranslationCountTable") -> "TranslationCountTable":
        """Combine two partial tables for the same language pair.

        Associative and commutative, so partial counts from parallel
        workers can be folded in any order.
        """
        if other.lang_pair != self.lang_pair:
            raise MixedLanguagePair(
                f"cannot merge table for {other.lang_pair} into {self.lang_pair}")
        pair_counts = Counter(self.pair_counts)
        pair_counts.update(other.pair_counts)
        occurrence = Counter(self.occurrence_counts)
        occurrence.update(other.occurrence_counts)
        provenance = None
        if self.provenance is not None or other.provenance is not None:
            provenance = defaultdict(list)
            for source in (self.provenance, other.provenance):
                for key, ids in (source or {}).items():
                    provenance[key].extend(ids)
            provenance = {key: sorted(ids) for key, ids in provenance.items()}
        return TranslationCountTable(self.lang_pair, dict(pair_counts), dict(occurrence),
                                     provenance)


def merge_tables(tables: Iterable[TranslationCountTable]) -> TranslationCountTable:
    result = None
    for table in tables:
        result = table if result is None else result.merge(table)
    if result is None:
        raise ValueError("no tables to merge")
    return result


def _allowed(word_list, lang, word) -> bool:
    if word_list is None:
        return True
    return word in word_list.get(lang, set())


def count_translations(pairs: Iterable[SentencePair], lang_pair: tuple[str, str],
                       tokenizer: TokenizerConfig, lemmas: LemmaMap | None = None, *,
                       method: str = "provided", word_list: dict[str, set[str]] | None = None,
                       dice_stats: DiceStats | None = None, dice_threshold: float | None = None,
                       keep_provenance: bool = False) -> TranslationCountTable:
    """Count translation events over a stream of sentence pairs.

    Every aligned link increments the pair count of its normalized
    endpoints; every token increments its word's occurrence count.
    Word-list filtering applies after normalization, to both counts.
    Duplicate links within one pair are counted once.
    """
    l1, l2 = lang_pair
    pair_counts: Counter = Counter()
    occurrence: Counter = Counter()
    provenance = defaultdict(list) if keep_provenance else None
    for pair in pairs:
        if (pair.source_lang, pair.target_lang) != (l1, l2):
            raise MixedLanguagePair(
                f"pair {pair.id!r} is {pair.source_lang}->{pair.target_lang}, "
                f"table is {l1}->{l2}")
        src = tokenize(pair.source_text, tokenizer)
        tgt = tokenize(pair.target_text, tokenizer)
        links = align(pair, method, tokenizer=tokenizer, lemmas=lemmas,
                      stats=dice_stats, threshold=dice_threshold)
        for token in src:
            word = normalize(token, lemmas, l1)
            if _allowed(word_list, l1, word):
                occurrence[(l1, word)] += 1
        for token in tgt:
            word = normalize(token, lemmas, l2)
            if _allowed(word_list, l2, word):
                occurrence[(l2, word)] += 1
        for i, j in sorted(set(links)):
            if not (0 <= i < len(src)) or not (0 <= j < len(tgt)):
                raise InvalidAlignment(
                    f"pair {pair.id!r}: link {i}-{j} outside token ranges "
                    f"({len(src)}x{len(tgt)})")
            u = normalize(src[i], lemmas, l1)
            v = normalize(tgt[j], lemmas, l2)
            if _allowed(word_list, l1, u) and _allowed(word_list, l2, v):
                pair_counts[(u, v)] += 1
                if provenance is not None:
                    provenance[(u, v)].append(pair.id)
    table = TranslationCountTable(lang_pair, dict(pair_counts), dict(occurrence),
                                  dict(provenance) if provenance is not None else None)
    table.validate()
    return table


# ---------------------------------------------------------------------------
# File formats

_TABLE_MAGIC = "# interlangue-count-table v1"


def save_table(table: TranslationCountTable, path: str | Path) -> None:
    """Write a count table as deterministic UTF-8 TSV.

    Layout: a magic line, `# langs`, `# total`, a `# pairs` section of
    `u<TAB>v<TAB>count` rows, then one `# occurrences<TAB><lang>`
    section per language with `word<TAB>_<TAB>count` rows.  Rows are
    sorted, so identical tables serialize byte-identically.  The
    provenance index is in-memory only and not written.
    """
    table.validate()
    l1, l2 = table.lang_pair
    for lang, word in list(table.occurrence_counts) + [
            (l1, u) for u, _ in table.pair_counts] + [(l2, v) for _, v in table.pair_counts]:
        if "\t" in word or "\n" in word:
            raise ValueError(f"word {word!r} contains tab or newline")
    lines = [_TABLE_MAGIC, f"# langs\t{l1}\t{l2}", f"# total\t{table.total}", "# pairs"]
    for (u, v), count in sorted(table.pair_counts.items()):
        lines.append(f"{u}\t{v}\t{count}")
    for lang in (l1, l2):
        lines.append(f"# occurrences\t{lang}")
        for (wl, word), count in sorted(table.occurrence_counts.items()):
            if wl == lang:
                lines.append(f"{word}\t_\t{count}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_table(path: str | Path) -> TranslationCountTable:
    """Read a table written by `save_table`, validating every invariant."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != _TABLE_MAGIC:
        raise FormatError(f"expected magic header {_TABLE_MAGIC!r}", 1)
    if len(lines) < 4 or not lines[1].startswith("# langs\t"):
        raise FormatError("expected '# langs' header", 2)
    lang_cols = lines[1].split("\t")
    if len(lang_cols) != 3:
        raise FormatError("expected '# langs<TAB>l1<TAB>l2'", 2)
    l1, l2 = lang_cols[1], lang_cols[2]
    if l1 == l2:
        raise FormatError(f"degenerate language pair {l1!r}", 2)
    if not lines[2].startswith("# total\t"):
        raise FormatError("expected '# total' header", 3)
    try:
        declared_total = int(lines[2].split("\t")[1])
    except (IndexError, ValueError):
        raise FormatError("bad total", 3) from None
    if lines[3] != "# pairs":
        raise FormatError("expected '# pairs' section", 4)

    pair_counts: dict[tuple[str, str], int] = {}
    occurrence: dict[tuple[str, str], int] = {}
    section = "pairs"
    section_lang = ""
    for line_no, line in enumerate(lines[4:], start=5):
        if not line:
            continue
        if line.startswith("# occurrences\t"):
            section_lang = line.split("\t", 1)[1]
            if section_lang not in (l1, l2):
                raise FormatError(f"occurrence section for unknown language "
                                  f"{section_lang!r}", line_no)
            section = "occurrences"
            continue
        if line.startswith("#"):
            raise FormatError(f"unknown section header {line!r}", line_no)
        cols = line.split("\t")
        if len(cols) != 3:
            raise FormatError(f"expected 3 tab-separated columns, got {len(cols)}", line_no)
        try:
            count = int(cols[2])
        except ValueError:
            raise FormatError(f"bad count {cols[2]!r}", line_no) from None
        if count < 0:
            raise FormatError(f"negative count {count}", line_no)
        if section == "pairs":
            key = (cols[0], cols[1])
            if key in pair_counts:
                raise FormatError(f"duplicate pair row {key}", line_no)
            pair_counts[key] = count
        else:
            okey = (section_lang, cols[0])
            if cols[1] != "_":
                raise FormatError("occurrence rows use '_' in the second column", line_no)
            if okey in occurrence:
                raise FormatError(f"duplicate occurrence row {okey}", line_no)
            occurrence[okey] = count

    table = TranslationCountTable((l1, l2), pair_counts, occurrence)
    if table.total != declared_total:
        raise FormatError(f"declared total {declared_total} but rows sum to {table.total}", 3)
    try:
        table.validate()
    except ValueError as exc:
        raise FormatError(str(exc), 0) from exc
    return table


def read_corpus(path: str | Path, source_lang: str, target_lang: str) -> Iterator[SentencePair]:
    """Read a corpus file: `id<TAB>source<TAB>target[<TAB>alignment][<TAB>tag]` lines."""
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) < 3 or len(cols) > 5:
                raise FormatError(f"expected 3-5 tab-separated columns, got {len(cols)}", line_no)
            alignment = None
            if len(cols) >= 4 and cols[3]:
                try:
                    alignment = parse_pharaoh(cols[3])
                except ValueError as exc:
                    raise FormatError(str(exc), line_no) from exc
            tag = cols[4] if len(cols) == 5 else None
            try:
                yield SentencePair(cols[0], source_lang, target_lang, cols[1], cols[2],
                                   alignment, tag)
            except ValueError as exc:
                raise FormatError(str(exc), line_no) from exc


def write_corpus(pairs: Iterable[SentencePair], path: str | Path) -> None:
    lines = []
    for pair in pairs:
        cols = [pair.id, pair.source_text, pair.target_text]
        if pair.alignment is not None or pair.tag is not None:
            cols.append(format_pharaoh(pair.alignment or []))
        if pair.tag is not None:
            cols.append(pair.tag)
        lines.append("\t".join(cols))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
