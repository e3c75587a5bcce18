"""Session-oriented HTTP facade.

Exposes exploration sessions over JSON/HTTP: create a session around a
seed word, stream its event log as server-sent events (resumable by
sequence cursor), recenter it, query word completions, and sample
example sentences for the active translation edges.  Each session
steps on its own worker thread; handlers enqueue commands that the
worker consumes between rounds.
"""

from __future__ import annotations

import json
import queue
import threading
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .corpus import (LemmaMap, SentencePair, TokenizerConfig, count_translations,
                     parse_align_method, accumulate_dice_stats)
from .explorer import (EmptyPair, Event, ExplorationSession, NotActive, UnknownWord,
                       replay, start_session)
from .network import LangueNetwork, PairSpec, WordId, build_network, edge_key
from .space import SolverConfig, SpaceState


class ServiceError(Exception):
    """Base class for service-layer failures."""


class NoExamples(ServiceError):
    """No active edge has stored example sentences."""


class InactiveEdge(ServiceError):
    """An explicitly requested edge is not active in the session."""


# ---------------------------------------------------------------------------
# Example store


@dataclass
class ExampleStore:
    """Sentence-pair provenance: which pairs back each translation edge."""

    pairs_by_id: dict[str, SentencePair] = field(default_factory=dict)
    links: dict[tuple[WordId, WordId], list[str]] = field(default_factory=dict)

    def sentences_for(self, u: WordId, v: WordId) -> list[str]:
        return self.links.get(edge_key(u, v), [])


@dataclass
class ServiceDataset:
    """Everything the service needs: the word graph plus provenance."""

    network: LangueNetwork
    store: ExampleStore
    tokenizer: TokenizerConfig
    lemmas: LemmaMap | None = None


def build_dataset(sources: Iterable[tuple[tuple[str, str], list[SentencePair], str]],
                  tokenizer: TokenizerConfig,
                  lemmas: LemmaMap | None = None,
                  word_list: dict[str, set[str]] | None = None) -> ServiceDataset:
    """Count each corpus with provenance and assemble network + store.

    `sources` yields (lang_pair, sentence pairs, alignment method
    spec); method specs are 'provided' or 'dice:<threshold>'.
    """
    tables = []
    store = ExampleStore()
    for lang_pair, pairs, method_spec in sources:
        method, threshold = parse_align_method(method_spec)
        stats = None
        if method == "dice":
            stats = accumulate_dice_stats(pairs, lang_pair, tokenizer, lemmas)
        table = count_translations(pairs, lang_pair, tokenizer, lemmas, method=method,
                                   word_list=word_list, dice_stats=stats,
                                   dice_threshold=threshold, keep_provenance=True)
        tables.append(table)
        l1, l2 = lang_pair
        for pair in pairs:
            store.pairs_by_id[pair.id] = pair
        for (u_word, v_word), ids in (table.provenance or {}).items():
            key = edge_key(WordId(l1, u_word), WordId(l2, v_word))
            store.links.setdefault(key, []).extend(ids)
    for key in store.links:
        store.links[key] = sorted(store.links[key])
    return ServiceDataset(build_network(tables), store, tokenizer, lemmas)


# ---------------------------------------------------------------------------
# Example sampling


@dataclass
class ExampleBatch:
    """Sampled example sentences with the weights used to draw them."""

    examples: list[tuple[SentencePair, tuple[WordId, WordId]]]
    weights: dict[tuple[WordId, WordId], float]


def active_edges(state: SpaceState, network: LangueNetwork,
                 pairs: PairSpec) -> list[tuple[WordId, WordId, int]]:
    """Translation edges between currently active words under `pairs`."""
    by_lang: dict[str, list[WordId]] = {}
    for w in sorted(state.coords):
        by_lang.setdefault(w.lang, []).append(w)
    out = []
    for l1, l2 in pairs:
        for u in by_lang.get(l1, []):
            for v in by_lang.get(l2, []):
                count = network.edge_count(u, v)
                if count > 0:
                    out.append((*edge_key(u, v), count))
    return sorted(out)


def sample_examples(state: SpaceState, dataset: ServiceDataset, pairs: PairSpec,
                    config: SolverConfig, n: int, rng: np.random.Generator,
                    edge: tuple[WordId, WordId] | None = None) -> ExampleBatch:
    """Draw n example sentences, biased toward edges near the center.

    Edges are drawn i.i.d. with probability proportional to
    count * alpha_x^|midpoint|, then one backing sentence pair is
    drawn uniformly per edge.  An explicit edge bypasses sampling.
    """
    store = dataset.store
    if edge is not None:
        u, v = edge_key(*edge)
        if (u not in state.coords or v not in state.coords
                or dataset.network.edge_count(u, v) <= 0
                or not pairs.contains(u.lang, v.lang)):
            raise InactiveEdge(f"edge {u.lang}:{u.word} - {v.lang}:{v.word} "
                               "is not active in the session")
        ids = store.sentences_for(u, v)
        if not ids:
            raise NoExamples("the requested edge has no stored example sentences")
        picks = [ids[rng.integers(len(ids))] for _ in range(n)]
        return ExampleBatch([(store.pairs_by_id[i], (u, v)) for i in picks],
                            {(u, v): 1.0})

    edges = active_edges(state, dataset.network, pairs)
    eligible = [(u, v, count) for u, v, count in edges if store.sentences_for(u, v)]
    if not eligible:
        raise NoExamples("no active edge has stored example sentences")
    weights = {}
    for u, v, count in eligible:
        midpoint = (state.coords[u] + state.coords[v]) / 2.0
        weights[(u, v)] = count * config.alpha_x ** float(np.linalg.norm(midpoint))
    keys = sorted(weights)
    probs = np.array([weights[k] for k in keys], dtype=float)
    probs = probs / probs.sum()
    examples = []
    for index in rng.choice(len(keys), size=n, p=probs):
        u, v = keys[int(index)]
        ids = store.sentences_for(u, v)
        examples.append((store.pairs_by_id[ids[rng.integers(len(ids))]], (u, v)))
    return ExampleBatch(examples, weights)


# ---------------------------------------------------------------------------
# Session management


@dataclass
class SessionSettings:
    """Service-level knobs, distinct from the solver's own config."""

    max_rounds: int | None = None
    idle_park_rounds: int = 8


class SessionHandle:
    """A session plus its worker thread, command queue and event signal."""

    def __init__(self, session: ExplorationSession, settings: SessionSettings,
                 log_path: Path | None):
        self.session = session
        self.settings = settings
        self.lock = threading.Lock()
        self.new_events = threading.Condition(self.lock)
        self.commands: queue.Queue = queue.Queue()
        self.worker: threading.Thread | None = None
        self.parked = False
        self.rounds = 0
        self.idle_rounds = 0
        self.log_path = log_path
        self._logged = 0

    def _flush_log(self) -> None:
        if self.log_path is None:
            return
        events = self.session.events
        if self._logged < len(events):
            with open(self.log_path, "a", encoding="utf-8") as fh:
                for event in events[self._logged:]:
                    fh.write(event.to_json() + "\n")
            self._logged = len(events)

    def notify(self) -> None:
        with self.new_events:
            self._flush_log()
            self.new_events.notify_all()


def _run_worker(handle: SessionHandle) -> None:
    session = handle.session
    while True:
        settings = handle.settings
        try:
            command = handle.commands.get_nowait()
        except queue.Empty:
            command = None
        if command is not None:
            kind, payload = command
            if kind == "recenter":
                with handle.lock:
                    try:
                        session.recenter(payload)
                    except NotActive:
                        pass  # pruned between the POST and this round
                    handle.idle_rounds = 0
                    handle.parked = False
                handle.notify()
            continue
        with handle.lock:
            done = ((settings.max_rounds is not None and handle.rounds >= settings.max_rounds)
                    or handle.idle_rounds >= settings.idle_park_rounds)
            if done and not handle.commands.empty():
                done = False  # a command slipped in; serve it before parking
            if done:
                handle.parked = True
        if done:
            handle.notify()
            return
        with handle.lock:
            events = session.step()
            handle.rounds += 1
            quiet = not any(e.kind in ("word_added", "word_removed") for e in events)
            converged = any(e.kind == "converged" for e in events)
            handle.idle_rounds = handle.idle_rounds + 1 if (quiet and converged) else 0
        handle.notify()


class SessionManager:
    """Creates, indexes, parks and resurrects sessions."""

    def __init__(self, dataset: ServiceDataset, config: SolverConfig,
                 settings: SessionSettings | None = None,
                 event_log_dir: str | Path | None = None,
                 rng_seed: int = 0):
        self.dataset = dataset
        self.config = config
        self.settings = settings or SessionSettings()
        self.event_log_dir = Path(event_log_dir) if event_log_dir else None
        if self.event_log_dir:
            self.event_log_dir.mkdir(parents=True, exist_ok=True)
        self.handles: dict[str, SessionHandle] = {}
        self.rng = np.random.default_rng(rng_seed)
        self._lock = threading.Lock()

    def _log_path(self, session_id: str) -> Path | None:
        if self.event_log_dir is None:
            return None
        return self.event_log_dir / f"{session_id}.jsonl"

    def create(self, seed: WordId, pairs: PairSpec, config: SolverConfig | None = None,
               max_rounds: int | None = None, autostart: bool = True) -> SessionHandle:
        config = config or self.config
        session = start_session(seed, pairs, self.dataset.network, config)
        settings = replace(self.settings, max_rounds=max_rounds) \
            if max_rounds is not None else self.settings
        log_path = self._log_path(session.id)
        if log_path is not None:
            manifest = {
                "session_id": session.id,
                "seed": {"lang": seed.lang, "word": seed.word},
                "pairs": [list(p) for p in pairs],
                "config": {f.name: getattr(config, f.name) for f in fields(config)},
            }
            log_path.with_suffix(".manifest.json").write_text(
                json.dumps(manifest, sort_keys=True, ensure_ascii=False) + "\n",
                encoding="utf-8")
        handle = SessionHandle(session, settings, log_path)
        handle._flush_log()
        with self._lock:
            self.handles[session.id] = handle
        if autostart:
            self.ensure_worker(handle)
        return handle

    def ensure_worker(self, handle: SessionHandle) -> None:
        with self._lock:
            # a parked worker never steps again, so replacing it while its
            # thread unwinds is safe
            if handle.worker is None or not handle.worker.is_alive() or handle.parked:
                handle.parked = False
                handle.worker = threading.Thread(target=_run_worker, args=(handle,),
                                                 daemon=True)
                handle.worker.start()

    def get(self, session_id: str) -> SessionHandle | None:
        handle = self.handles.get(session_id)
        if handle is not None:
            return handle
        return self._resurrect(session_id)

    def _resurrect(self, session_id: str) -> SessionHandle | None:
        """Rebuild a parked session from its event log on reconnect."""
        if self.event_log_dir is None:
            return None
        log_path = self._log_path(session_id)
        manifest_path = log_path.with_suffix(".manifest.json")
        if not (log_path.exists() and manifest_path.exists()):
            return None
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        config = SolverConfig(**manifest["config"])
        pairs = PairSpec([tuple(p) for p in manifest["pairs"]])
        events = [Event.from_json(line)
                  for line in log_path.read_text(encoding="utf-8").splitlines() if line]
        restored = replay(events)
        state = SpaceState(restored.pinned)
        for w, x in restored.coords.items():
            state.add_word(w, x, t=restored.residence.get(w, 1))
        state.coords[restored.pinned] = np.zeros(config.d)
        session = ExplorationSession(session_id, pairs, self.dataset.network, config, state)
        session.events = events
        handle = SessionHandle(session, self.settings, log_path)
        handle._logged = len(events)
        handle.parked = True
        with self._lock:
            self.handles[session_id] = handle
        return handle

    def stop_all(self) -> None:
        for handle in list(self.handles.values()):
            with handle.lock:
                handle.parked = True
                handle.settings = replace(handle.settings, max_rounds=handle.rounds)


# ---------------------------------------------------------------------------
# HTTP app


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"code": code, "message": message}, status_code=status)


def _parse_word(text: str) -> WordId:
    if ":" not in text:
        raise ValueError(f"expected 'lang:word', got {text!r}")
    lang, word = text.split(":", 1)
    return WordId(lang, word)


def _session_snapshot(handle: SessionHandle, dataset: ServiceDataset,
                      pairs: PairSpec) -> dict:
    session = handle.session
    state = session.state
    return {
        "words": [{"lang": w.lang, "word": w.word,
                   "x": [float(v) for v in state.coords[w]],
                   "t": state.residence[w],
                   "occ": dataset.network.occurrence_count(w)}
                  for w in state.words],
        "edges": [{"u": {"lang": u.lang, "word": u.word},
                   "v": {"lang": v.lang, "word": v.word}, "c": c}
                  for u, v, c in active_edges(state, dataset.network, pairs)],
        "pinned": {"lang": state.pinned.lang, "word": state.pinned.word},
        "seq": len(session.events) - 1,
        "phase": session.phase,
    }


def create_app(dataset: ServiceDataset, config: SolverConfig | None = None,
               settings: SessionSettings | None = None,
               event_log_dir: str | Path | None = None,
               rng_seed: int = 0) -> FastAPI:
    """Build the HTTP app; all endpoints live under /v1."""
    config = config or SolverConfig()
    manager = SessionManager(dataset, config, settings, event_log_dir, rng_seed)
    app = FastAPI(title="interlangue", version="1")
    app.state.manager = manager

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        return _error(500, "Internal", str(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return _error(422, "BadRequest", str(exc))

    @app.exception_handler(StarletteHTTPException)
    async def handle_http(request: Request, exc: StarletteHTTPException):
        return _error(exc.status_code, "HTTPError", str(exc.detail))

    @app.get("/healthz")
    @app.get("/v1/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/v1/sessions", status_code=201)
    async def create_session(body: dict):
        try:
            seed_raw = body["seed"]
            seed = (WordId(seed_raw["lang"], seed_raw["word"])
                    if isinstance(seed_raw, dict) else _parse_word(seed_raw))
            pairs = PairSpec([tuple(p) for p in body["langs"]])
        except (KeyError, ValueError, TypeError) as exc:
            return _error(422, "BadRequest", str(exc))
        overrides = body.get("config") or {}
        try:
            session_config = replace(config, **overrides) if overrides else config
        except (TypeError, ValueError) as exc:
            return _error(422, "BadRequest", f"bad config override: {exc}")
        try:
            handle = manager.create(seed, pairs, session_config,
                                    max_rounds=body.get("max_rounds"),
                                    autostart=body.get("autostart", True))
        except UnknownWord as exc:
            return _error(404, "UnknownWord", str(exc))
        except EmptyPair as exc:
            return _error(404, "EmptyPair", str(exc))
        except ValueError as exc:
            return _error(422, "BadRequest", str(exc))
        with handle.lock:
            snapshot = _session_snapshot(handle, dataset, pairs)
        return JSONResponse({"session_id": handle.session.id, "snapshot": snapshot},
                            status_code=201)

    def _event_stream(handle: SessionHandle, cursor: int):
        while True:
            with handle.new_events:
                events = handle.session.events
                pending = [e for e in events if e.seq > cursor]
                parked = handle.parked
                if not pending and not parked:
                    handle.new_events.wait(timeout=0.2)
                    events = handle.session.events
                    pending = [e for e in events if e.seq > cursor]
                    parked = handle.parked
            for event in pending:
                cursor = event.seq
                yield f"event: {event.kind}\ndata: {event.to_json()}\n\n"
            if parked and not pending:
                return
            if not pending:
                yield ": ping\n\n"

    @app.get("/v1/sessions/{session_id}/events")
    async def stream_events(session_id: str, cursor: int = -1):
        handle = manager.get(session_id)
        if handle is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        return StreamingResponse(_event_stream(handle, cursor),
                                 media_type="text/event-stream")

    @app.post("/v1/sessions/{session_id}/recenter")
    async def recenter(session_id: str, body: dict):
        handle = manager.get(session_id)
        if handle is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        try:
            w = WordId(body["lang"], body["word"])
        except (KeyError, TypeError) as exc:
            return _error(422, "BadRequest", str(exc))
        with handle.lock:
            if w not in handle.session.state.coords:
                return _error(409, "NotActive", f"{w.lang}:{w.word} is not active")
        handle.commands.put(("recenter", w))
        manager.ensure_worker(handle)
        return {"status": "queued"}

    @app.get("/v1/sessions/{session_id}/examples")
    async def examples(session_id: str, n: int = 20, u: str | None = None,
                       v: str | None = None):
        handle = manager.get(session_id)
        if handle is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        if n < 1:
            return _error(422, "BadRequest", "n must be >= 1")
        edge = None
        if u is not None or v is not None:
            if u is None or v is None:
                return _error(422, "BadRequest", "u and v must be given together")
            try:
                edge = (_parse_word(u), _parse_word(v))
            except ValueError as exc:
                return _error(422, "BadRequest", str(exc))
        with handle.lock:
            session = handle.session
            try:
                batch = sample_examples(session.state, dataset, session.pairs,
                                        session.config, n, manager.rng, edge)
            except NoExamples as exc:
                return _error(404, "NoExamples", str(exc))
            except InactiveEdge as exc:
                return _error(409, "InactiveEdge", str(exc))
        return {
            "examples": [{
                "pair": {"id": pair.id, "source_lang": pair.source_lang,
                         "target_lang": pair.target_lang,
                         "source_text": pair.source_text,
                         "target_text": pair.target_text,
                         "alignment": pair.alignment},
                "link": {"u": {"lang": link_u.lang, "word": link_u.word},
                         "v": {"lang": link_v.lang, "word": link_v.word}},
            } for pair, (link_u, link_v) in batch.examples],
            "weights": [{"u": {"lang": eu.lang, "word": eu.word},
                         "v": {"lang": ev.lang, "word": ev.word},
                         "weight": weight}
                        for (eu, ev), weight in sorted(batch.weights.items())],
        }

    @app.get("/v1/search")
    async def search(q: str, lang: str, limit: int = 20):
        return {"completions": dataset.network.words_with_prefix(q, lang, limit)}

    return app
