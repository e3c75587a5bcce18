"""Bilingual word maps from translation counts.

Pipeline: count translations in parallel corpora (`corpus`), assemble
the weighted word graph (`network`), embed words by balancing
same-language repulsion against translation attraction (`space`),
explore adaptively around a center word (`explorer`), and serve it
all over HTTP with synchronized example sentences (`service`).
"""

from .corpus import (LemmaMap, SentencePair, TokenizerConfig, TranslationCountTable,
                     align, count_translations, load_table, normalize, save_table,
                     tokenize)
from .explorer import Event, ExplorationSession, replay, start_session
from .network import LangueNetwork, PairSpec, WordId, build_network
from .space import (SolverConfig, SpaceState, snapshot, total_energy,
                    update_coordinates)

__all__ = [
    "LemmaMap", "SentencePair", "TokenizerConfig", "TranslationCountTable",
    "align", "count_translations", "load_table", "normalize", "save_table",
    "tokenize", "Event", "ExplorationSession", "replay", "start_session",
    "LangueNetwork", "PairSpec", "WordId", "build_network", "SolverConfig",
    "SpaceState", "snapshot", "total_energy", "update_coordinates",
]

__version__ = "0.1.0"
