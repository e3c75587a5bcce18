import random

import pytest

from interlangue.network import (DuplicateLanguagePair, EmptyCorpusPair, PairSpec,
                                 WordId, build_network)

from conftest import make_table


def test_build_single_edge():
    table = make_table(("en", "ja"), {("beautiful", "utsukushii"): 2})
    net = build_network([table])
    assert len(net.nodes) == 2
    u, v = WordId("en", "beautiful"), WordId("ja", "utsukushii")
    assert net.edge_count(u, v) == 2
    assert net.edge_count(v, u) == 2


def test_shared_word_is_one_node():
    t1 = make_table(("en", "ja"), {("beautiful", "utsukushii"): 2})
    t2 = make_table(("en", "fr"), {("beautiful", "beau"): 3})
    net = build_network([t1, t2])
    u = WordId("en", "beautiful")
    assert len([w for w in net.nodes if w == u]) == 1
    assert net.occurrence_count(u) == 5  # summed across both corpora
    langs = {v.lang for v in net.neighbors(u, PairSpec([("en", "ja"), ("en", "fr")]))}
    assert langs == {"ja", "fr"}


def test_empty_tables_give_empty_network():
    net = build_network([])
    assert net.nodes == {}
    assert net.edges() == []


def test_duplicate_ordered_pair_rejected():
    t1 = make_table(("en", "ja"), {("a", "b"): 1})
    t2 = make_table(("en", "ja"), {("c", "d"): 1})
    with pytest.raises(DuplicateLanguagePair):
        build_network([t1, t2])


def test_reverse_direction_tables_symmetrize():
    fwd = make_table(("en", "ja"), {("beautiful", "utsukushii"): 2})
    rev = make_table(("ja", "en"), {("utsukushii", "beautiful"): 3})
    net = build_network([fwd, rev])
    u, v = WordId("en", "beautiful"), WordId("ja", "utsukushii")
    assert net.edge_count(u, v) == 5
    assert net.pair_total("en", "ja") == 5
    assert net.pair_total("ja", "en") == 5


# -- neighbors ---------------------------------------------------------------

@pytest.fixture
def two_pair_network():
    t1 = make_table(("en", "ja"), {("beautiful", "utsukushii"): 2,
                                   ("beautiful", "kirei"): 1})
    t2 = make_table(("en", "fr"), {("beautiful", "beau"): 3})
    return build_network([t1, t2])


def test_neighbors_under_pair_spec(two_pair_network):
    u = WordId("en", "beautiful")
    got = two_pair_network.neighbors(u, PairSpec([("en", "ja")]))
    assert got == {WordId("ja", "utsukushii"), WordId("ja", "kirei")}


def test_neighbors_pair_filter(two_pair_network):
    u = WordId("en", "beautiful")
    got = two_pair_network.neighbors(u, PairSpec([("en", "fr")]))
    assert got == {WordId("fr", "beau")}


def test_neighbors_unknown_word_empty(two_pair_network):
    assert two_pair_network.neighbors(WordId("en", "nope"), PairSpec([("en", "ja")])) == set()


def test_neighbors_symmetric(two_pair_network):
    pairs = PairSpec([("en", "ja"), ("en", "fr")])
    for u in two_pair_network.nodes:
        for v in two_pair_network.neighbors(u, pairs):
            assert u in two_pair_network.neighbors(v, pairs)


# -- normalized counts ------------------------------------------------------

def test_normalized_pair_count():
    table = make_table(("en", "ja"), {("u", "v"): 2, ("x", "y"): 8})
    net = build_network([table])
    assert net.normalized_pair_count(WordId("en", "u"), WordId("ja", "v")) == 0.2


def test_normalized_word_count_single_pair():
    table = make_table(("en", "ja"), {("u", "v1"): 2, ("u", "v2"): 3, ("x", "y"): 5})
    net = build_network([table])
    assert net.normalized_word_count(WordId("en", "u"), PairSpec([("en", "ja")])) == 0.5


def test_normalized_word_count_averages_over_pairs():
    # pair sums 0.5 and 0.1 average to 0.3
    t1 = make_table(("en", "ja"), {("u", "v1"): 5, ("x", "y"): 5})
    t2 = make_table(("en", "fr"), {("u", "w1"): 1, ("x", "z"): 9})
    net = build_network([t1, t2])
    pairs = PairSpec([("en", "ja"), ("en", "fr")])
    assert net.normalized_word_count(WordId("en", "u"), pairs) == pytest.approx(0.3)


def test_normalized_count_empty_pair_raises():
    table = make_table(("en", "ja"), {("u", "v"): 1})
    net = build_network([table])
    with pytest.raises(EmptyCorpusPair):
        net.normalized_pair_count(WordId("en", "u"), WordId("fr", "w"))
    with pytest.raises(EmptyCorpusPair):
        net.normalized_word_count(WordId("en", "u"), PairSpec([("en", "fr")]))


def test_normalized_pair_counts_sum_to_one_fuzz():
    rng = random.Random(3)
    for trial in range(10):
        counts = {}
        for i in range(rng.randint(1, 12)):
            counts[(f"u{rng.randint(0, 5)}", f"v{rng.randint(0, 5)}")] = rng.randint(1, 9)
        net = build_network([make_table(("en", "ja"), counts)])
        total = sum(net.normalized_pair_count(WordId("en", u), WordId("ja", v))
                    for (u, v) in counts)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_normalized_word_count_in_unit_interval_fuzz():
    rng = random.Random(5)
    for trial in range(10):
        counts = {(f"u{rng.randint(0, 4)}", f"v{rng.randint(0, 4)}"): rng.randint(1, 9)
                  for _ in range(rng.randint(1, 10))}
        net = build_network([make_table(("en", "ja"), counts)])
        pairs = PairSpec([("en", "ja")])
        for w in net.nodes:
            cbar = net.normalized_word_count(w, pairs)
            assert 0.0 <= cbar <= 1.0


# -- pair spec ---------------------------------------------------------------

def test_pair_spec_dedups_unordered():
    spec = PairSpec([("en", "ja"), ("ja", "en"), ("en", "fr")])
    assert spec.pairs == (("en", "fr"), ("en", "ja"))
    assert spec.langs_paired_with("en") == ("fr", "ja")
    assert spec.contains("ja", "en")


def test_pair_spec_rejects_degenerate():
    with pytest.raises(ValueError):
        PairSpec([("en", "en")])


# -- export ---------------------------------------------------------------

def test_export_schema(two_pair_network):
    data = two_pair_network.export()
    assert {"nodes", "edges", "pairs"} <= set(data)
    for edge in data["edges"]:
        assert edge["u"]["lang"] != edge["v"]["lang"]


def test_words_with_prefix(toy_network):
    assert toy_network.words_with_prefix("be", "en") == ["beautiful"]
    assert toy_network.words_with_prefix("b", "en") == ["beautiful", "big"]
    assert toy_network.words_with_prefix("zz", "en") == []
