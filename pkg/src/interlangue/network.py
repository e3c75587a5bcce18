"""Weighted word graph built from translation-count tables.

Nodes are (language, word) pairs weighted by corpus occurrences; edges
connect words of different languages weighted by how often one was
translated into the other.  The graph is immutable after construction
and safe for unrestricted concurrent reads.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .corpus import TranslationCountTable


class NetworkError(Exception):
    """Base class for network-layer failures."""


class DuplicateLanguagePair(NetworkError):
    """Two tables cover the same ordered language pair."""


class EmptyCorpusPair(NetworkError):
    """A referenced language pair has no counted translations (T = 0)."""


@dataclass(frozen=True, order=True)
class WordId:
    """A word of a specific language; equality and order are (lang, word)."""

    lang: str
    word: str


def edge_key(u: WordId, v: WordId) -> tuple[WordId, WordId]:
    """Canonical unordered edge key (smaller endpoint first)."""
    return (u, v) if u <= v else (v, u)


def pair_key(l1: str, l2: str) -> tuple[str, str]:
    """Canonical unordered language-pair key."""
    return (l1, l2) if l1 <= l2 else (l2, l1)


class PairSpec:
    """A deduplicated set of unordered language pairs.

    (l1, l2) and (l2, l1) are the same pair; (l, l) is rejected.
    """

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        seen = set()
        for l1, l2 in pairs:
            if l1 == l2:
                raise ValueError(f"degenerate language pair ({l1!r}, {l2!r})")
            seen.add(pair_key(l1, l2))
        self.pairs: tuple[tuple[str, str], ...] = tuple(sorted(seen))
        by_lang: dict[str, set[str]] = defaultdict(set)
        for l1, l2 in self.pairs:
            by_lang[l1].add(l2)
            by_lang[l2].add(l1)
        self._by_lang = {lang: tuple(sorted(partners)) for lang, partners in by_lang.items()}

    def langs_paired_with(self, lang: str) -> tuple[str, ...]:
        return self._by_lang.get(lang, ())

    def contains(self, l1: str, l2: str) -> bool:
        return pair_key(l1, l2) in self.pairs

    @property
    def langs(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_lang))

    def __iter__(self):
        return iter(self.pairs)

    def __eq__(self, other):
        return isinstance(other, PairSpec) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"PairSpec({list(self.pairs)!r})"


class LangueNetwork:
    """Immutable word graph over one or more count tables.

    Tables for both directions of a language pair are symmetrized into
    one undirected edge set (directional counts are summed) and their
    totals pooled, so normalized counts stay comparable across corpora
    of different sizes.
    """

    def __init__(self, tables: Iterable[TranslationCountTable]):
        node_counts: dict[WordId, int] = defaultdict(int)
        adjacency: dict[WordId, dict[WordId, int]] = defaultdict(dict)
        pair_totals: dict[tuple[str, str], int] = defaultdict(int)
        seen_ordered: set[tuple[str, str]] = set()

        for table in tables:
            table.validate()
            if table.lang_pair in seen_ordered:
                raise DuplicateLanguagePair(
                    f"two tables cover the ordered pair {table.lang_pair}")
            seen_ordered.add(table.lang_pair)
            l1, l2 = table.lang_pair
            pair_totals[pair_key(l1, l2)] += table.total
            for (lang, word), count in table.occurrence_counts.items():
                node_counts[WordId(lang, word)] += count
            for (u_word, v_word), count in table.pair_counts.items():
                if count == 0:
                    continue
                u, v = WordId(l1, u_word), WordId(l2, v_word)
                adjacency[u][v] = adjacency[u].get(v, 0) + count
                adjacency[v][u] = adjacency[v].get(u, 0) + count

        self._nodes = dict(node_counts)
        self._adjacency = {w: dict(nbrs) for w, nbrs in adjacency.items()}
        self._pair_totals = dict(pair_totals)
        words_by_lang: dict[str, list[str]] = defaultdict(list)
        for w in sorted(self._nodes):
            words_by_lang[w.lang].append(w.word)
        self._words_by_lang = dict(words_by_lang)

    # -- structure --------------------------------------------------------

    @property
    def nodes(self) -> dict[WordId, int]:
        return self._nodes

    def __contains__(self, word: WordId) -> bool:
        return word in self._nodes

    def occurrence_count(self, word: WordId) -> int:
        return self._nodes.get(word, 0)

    def edge_count(self, u: WordId, v: WordId) -> int:
        return self._adjacency.get(u, {}).get(v, 0)

    def pair_total(self, l1: str, l2: str) -> int:
        return self._pair_totals.get(pair_key(l1, l2), 0)

    @property
    def pair_totals(self) -> dict[tuple[str, str], int]:
        return self._pair_totals

    def edges(self) -> list[tuple[WordId, WordId, int]]:
        """All undirected edges, each reported once, sorted."""
        out = []
        for u in sorted(self._adjacency):
            for v in sorted(self._adjacency[u]):
                if u <= v:
                    out.append((u, v, self._adjacency[u][v]))
        return out

    def neighbors(self, u: WordId, pairs: PairSpec) -> set[WordId]:
        """Words connected to `u` whose language pair is in `pairs`."""
        return {v for v in self._adjacency.get(u, {})
                if pairs.contains(u.lang, v.lang)}

    def words_with_prefix(self, prefix: str, lang: str, limit: int = 20) -> list[str]:
        out = []
        for word in self._words_by_lang.get(lang, []):
            if word.startswith(prefix):
                out.append(word)
                if len(out) >= limit:
                    break
        return out

    # -- normalized counts --------------------------------------------------

    def normalized_pair_count(self, u: WordId, v: WordId) -> float:
        """Edge count divided by the pair total: comparable across corpora."""
        total = self.pair_total(u.lang, v.lang)
        if total <= 0:
            raise EmptyCorpusPair(f"language pair ({u.lang}, {v.lang}) has no counts")
        return self.edge_count(u, v) / total

    def normalized_word_count(self, u: WordId, pairs: PairSpec) -> float:
        """Average, over the languages paired with u's, of u's share of
        each pair's translation mass.

        The inner sum runs over every corpus word of the partner
        language (non-neighbors contribute zero), not just currently
        active words.
        """
        partner_langs = pairs.langs_paired_with(u.lang)
        if not partner_langs:
            raise EmptyCorpusPair(f"no language pairs reference {u.lang!r}")
        acc = 0.0
        for lang in partner_langs:
            total = self.pair_total(u.lang, lang)
            if total <= 0:
                raise EmptyCorpusPair(f"language pair ({u.lang}, {lang}) has no counts")
            pair_sum = 0.0
            for v in sorted(self._adjacency.get(u, {})):
                if v.lang == lang:
                    pair_sum += self._adjacency[u][v] / total
            acc += pair_sum
        return acc / len(partner_langs)

    # -- export --------------------------------------------------------------

    def export(self) -> dict:
        """JSON-ready dict of nodes, edges and pair totals."""
        return {
            "nodes": [{"lang": w.lang, "word": w.word, "count": c}
                      for w, c in sorted(self._nodes.items())],
            "edges": [{"u": {"lang": u.lang, "word": u.word},
                       "v": {"lang": v.lang, "word": v.word},
                       "count": c}
                      for u, v, c in self.edges()],
            "pairs": [{"langs": list(key), "total": total}
                      for key, total in sorted(self._pair_totals.items())],
        }


def build_network(tables: Iterable[TranslationCountTable]) -> LangueNetwork:
    """Construct the word graph from count tables (one per ordered pair)."""
    return LangueNetwork(tables)
