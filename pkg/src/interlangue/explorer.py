"""Adaptive exploration around a center word.

A session starts from one searched word and its immediate neighbors,
then loops: converge coordinates, promote words near the center to
"parents", add the unexplored neighbor of a parent whose starting
position lands closest to the center, drop words that lost contact
with every parent, and trim the active set back under its size cap
from the outside in.  Every change is appended to an event log that
replays to the exact same state.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .network import LangueNetwork, PairSpec, WordId
from .space import (DegenerateScale, NonFiniteCoordinate, SolverConfig, SpaceState,
                    descend, initial_coordinate, make_state, total_energy,
                    update_coordinates)


class ExplorerError(Exception):
    """Base class for exploration failures."""


class UnknownWord(ExplorerError):
    """The requested word is not in the network."""


class EmptyPair(ExplorerError):
    """A requested language pair has no counted translations."""


class NotActive(ExplorerError):
    """The requested word is not in the active set."""


SETTLING = "settling"
STEADY = "steady"

EVENT_KINDS = ("coords_updated", "word_added", "word_removed", "recentered", "converged")


@dataclass(frozen=True)
class Event:
    """One append-only session event; seq is strictly increasing."""

    kind: str
    payload: dict
    seq: int

    def to_json(self) -> str:
        return json.dumps({"seq": self.seq, "kind": self.kind, "payload": self.payload},
                          sort_keys=True, ensure_ascii=False)

    @staticmethod
    def from_json(text: str) -> "Event":
        raw = json.loads(text)
        return Event(raw["kind"], raw["payload"], raw["seq"])


def _word_ref(w: WordId) -> dict:
    return {"lang": w.lang, "word": w.word}


class ExplorationSession:
    """A live exploration bound to a network, language pairs and a
    center word.  One session is one logical thread of execution; step
    is never reentrant."""

    def __init__(self, session_id: str, pairs: PairSpec, network: LangueNetwork,
                 config: SolverConfig, state: SpaceState):
        self.id = session_id
        self.pairs = pairs
        self.network = network
        self.config = config
        self.state = state
        self.phase = SETTLING
        self.events: list[Event] = []
        self.round = 0

    # -- events ----------------------------------------------------------

    def _emit(self, kind: str, payload: dict) -> Event:
        event = Event(kind, payload, len(self.events))
        self.events.append(event)
        return event

    def _emit_added(self, w: WordId) -> Event:
        # occ and edges ride along for renderers; replay ignores them
        edges = [{**_word_ref(v), "c": self.network.edge_count(w, v)}
                 for v in sorted(self.network.neighbors(w, self.pairs))
                 if v in self.state.coords]
        return self._emit("word_added", {
            **_word_ref(w),
            "x": [float(v) for v in self.state.coords[w]],
            "t": self.state.residence[w],
            "occ": self.network.occurrence_count(w),
            "edges": edges,
        })

    # -- the loop ----------------------------------------------------------

    def _run_round(self) -> bool:
        """One coordinate-update round with the recovery paths.

        A non-finite coordinate means the step size was too large: the
        session's step size is halved (persistently) and the round
        retried.  A degenerate scale is healed by seeding residence
        times when new words caused it, otherwise by running the round
        with cleared caches (no forces), which lets the add phase
        reconnect the active set.
        """
        for _ in range(60):
            try:
                return update_coordinates(self.state, self.network, self.pairs, self.config)
            except NonFiniteCoordinate:
                self.config = replace(self.config, eta=self.config.eta / 2.0)
            except DegenerateScale:
                fresh = [w for w, t in self.state.residence.items() if t == 0]
                if fresh:
                    for w in fresh:
                        self.state.residence[w] = 1
                    continue
                self.state.clear_caches()
                converged = descend(self.state, self.config)
                if converged:
                    for w in self.state.residence:
                        self.state.residence[w] += 1
                return converged
        raise NonFiniteCoordinate("round kept producing non-finite coordinates")

    def step(self) -> list[Event]:
        """One loop iteration: converge, then add/prune when converged.

        Emits coords_updated always; on convergence also converged,
        then at most one word_added and any word_removed events.
        """
        first = len(self.events)
        converged = self._run_round()
        self.round += 1
        self._emit("coords_updated", {
            "coords": [{**_word_ref(w), "x": [float(v) for v in self.state.coords[w]]}
                       for w in self.state.words],
            "springs": [{"u": _word_ref(u), "v": _word_ref(v), "k": k}
                        for (u, v), k in sorted(self.state.springs.items())],
        })
        if not converged:
            return self.events[first:]
        e_total, e_rep, e_att = total_energy(self.state, self.config)
        self._emit("converged", {
            "round": self.round,
            "energy": {"total": e_total, "rep": e_rep, "att": e_att},
        })

        parents = {w for w in self.state.coords
                   if float(np.linalg.norm(self.state.coords[w])) <= self.config.r_par}
        changed = False

        candidates: set[WordId] = set()
        for parent in sorted(parents):
            candidates |= self.network.neighbors(parent, self.pairs)
        candidates -= set(self.state.coords)
        if candidates:
            scored = []
            for w in sorted(candidates):
                x = initial_coordinate(w, self.state, self.network, self.pairs, self.config)
                scored.append((float(np.linalg.norm(x)), w, x))
            _, best, x_best = min(scored, key=lambda item: (item[0], item[1]))
            self.state.add_word(best, x_best, t=0)
            self._emit_added(best)
            changed = True

        for w in self.state.words:
            if w in parents:
                continue
            if any(p in parents for p in self.network.neighbors(w, self.pairs)):
                continue
            self.state.remove_word(w)
            self._emit("word_removed", _word_ref(w))
            changed = True

        while len(self.state.coords) > self.config.n_max:
            victim = max((w for w in self.state.words if w != self.state.pinned),
                         key=lambda w: (float(np.linalg.norm(self.state.coords[w])), w))
            self.state.remove_word(victim)
            self._emit("word_removed", _word_ref(victim))
            changed = True

        assert self.state.pinned in self.state.coords
        self.phase = SETTLING if changed else STEADY
        return self.events[first:]

    def recenter(self, w: WordId) -> list[Event]:
        """Pin `w` and translate the whole configuration so it sits at
        the origin; residence times are retained."""
        if w not in self.state.coords:
            raise NotActive(f"{w.lang}:{w.word} is not active")
        first = len(self.events)
        self.state.pin(w)
        self._emit("recentered", _word_ref(w))
        self.phase = SETTLING
        return self.events[first:]


def start_session(seed: WordId, pairs: PairSpec, network: LangueNetwork,
                  config: SolverConfig, session_id: str | None = None) -> ExplorationSession:
    """Open a session: the seed pinned at the origin plus its immediate
    neighbors, all with residence time 1 so the first round has a
    well-defined scale."""
    if seed not in network:
        raise UnknownWord(f"{seed.lang}:{seed.word} is not in the network")
    for l1, l2 in pairs:
        if network.pair_total(l1, l2) <= 0:
            raise EmptyPair(f"language pair ({l1}, {l2}) has no counted translations")
    state = make_state(seed, config.d)
    session = ExplorationSession(session_id or uuid.uuid4().hex, pairs, network,
                                 config, state)
    session._emit_added(seed)
    neighbors = sorted(network.neighbors(seed, pairs))
    for neighbor in neighbors:
        x = initial_coordinate(neighbor, state, network, pairs, config)
        state.add_word(neighbor, x, t=1)
        session._emit_added(neighbor)
    if not neighbors:
        session.phase = STEADY
    return session


# ---------------------------------------------------------------------------
# Replay


@dataclass
class ReplayState:
    """State reconstructed from an event log."""

    coords: dict[WordId, np.ndarray]
    residence: dict[WordId, int]
    pinned: WordId | None


def replay(events: Iterable[Event]) -> ReplayState:
    """Rebuild the active set and coordinates from an event log.

    Checks that seq starts at 0 and has no gaps.
    """
    coords: dict[WordId, np.ndarray] = {}
    residence: dict[WordId, int] = {}
    pinned: WordId | None = None
    expected = 0
    for event in events:
        if event.seq != expected:
            raise ValueError(f"event seq {event.seq}, expected {expected}")
        expected += 1
        payload = event.payload
        if event.kind == "word_added":
            w = WordId(payload["lang"], payload["word"])
            coords[w] = np.array(payload["x"], dtype=float)
            residence[w] = payload["t"]
            if pinned is None:
                pinned = w
        elif event.kind == "coords_updated":
            for entry in payload["coords"]:
                coords[WordId(entry["lang"], entry["word"])] = np.array(entry["x"],
                                                                        dtype=float)
        elif event.kind == "word_removed":
            w = WordId(payload["lang"], payload["word"])
            coords.pop(w, None)
            residence.pop(w, None)
        elif event.kind == "recentered":
            w = WordId(payload["lang"], payload["word"])
            offset = coords[w].copy()
            for v in coords:
                coords[v] = coords[v] - offset
            coords[w] = np.zeros_like(offset)
            pinned = w
        elif event.kind == "converged":
            for w in residence:
                residence[w] += 1
        else:
            raise ValueError(f"unknown event kind {event.kind!r}")
    return ReplayState(coords, residence, pinned)


def save_events(events: Iterable[Event], path: str | Path) -> None:
    Path(path).write_text("".join(e.to_json() + "\n" for e in events), encoding="utf-8")


def load_events(path: str | Path) -> list[Event]:
    return [Event.from_json(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines() if line]
