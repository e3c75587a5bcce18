from pathlib import Path

import numpy as np
import pytest

from interlangue.corpus import (TokenizerConfig, TranslationCountTable,
                                count_translations, read_corpus)
from interlangue.network import PairSpec, WordId, build_network
from interlangue.space import SolverConfig, SpaceState

DATA = Path(__file__).parent / "data"


@pytest.fixture
def tokenizer():
    return TokenizerConfig()


@pytest.fixture
def toy_corpus_path():
    return DATA / "toy_en_ja.tsv"


@pytest.fixture
def toy_table_path():
    return DATA / "toy_en_ja_table.tsv"


@pytest.fixture
def toy_pairs(toy_corpus_path):
    return list(read_corpus(toy_corpus_path, "en", "ja"))


@pytest.fixture
def toy_table(toy_pairs, tokenizer):
    return count_translations(toy_pairs, ("en", "ja"), tokenizer, keep_provenance=True)


@pytest.fixture
def toy_network(toy_table):
    return build_network([toy_table])


@pytest.fixture
def en_ja_pairs():
    return PairSpec([("en", "ja")])


def make_table(lang_pair, pair_counts, extra_occurrences=()):
    """Build a valid table from pair counts; occurrence counts default to
    each word's summed pair counts (always >= the max), plus extras."""
    l1, l2 = lang_pair
    occurrence = {}
    for (u, v), count in pair_counts.items():
        occurrence[(l1, u)] = occurrence.get((l1, u), 0) + count
        occurrence[(l2, v)] = occurrence.get((l2, v), 0) + count
    for key, count in dict(extra_occurrences).items():
        occurrence[key] = count
    table = TranslationCountTable(lang_pair, dict(pair_counts), occurrence)
    table.validate()
    return table


def frozen_state(words, coords, charges, springs, pinned, d=2):
    """A SpaceState with hand-set caches, for frozen-weight solver tests."""
    state = SpaceState(pinned)
    for w in words:
        state.add_word(w, np.asarray(coords[w], dtype=float), t=1)
    state.charges = dict(charges)
    state.springs = dict(springs)
    return state


@pytest.fixture
def solver_config():
    return SolverConfig()


def word(lang, text):
    return WordId(lang, text)
