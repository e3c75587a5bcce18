"""Coordinate solver balancing same-language repulsion against
cross-language translation attraction.

Words carry charges that repel other words of the same language
(energy q_u q_v / r) and are tied to their translations by springs
(energy k r^2).  Charges and spring constants derive from normalized
translation counts, scaled by a positional/temporal weight p which
discounts words far from the pinned center or freshly added.  Each
update round recomputes those weights from the current positions,
freezes them, then runs plain gradient descent, so within a round the
energy is an ordinary function of coordinates and its gradient is
exact.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .network import LangueNetwork, PairSpec, WordId, edge_key


class SpaceError(Exception):
    """Base class for solver failures."""


class DegenerateScale(SpaceError):
    """The charge/spring scale divisor is undefined (all weights zero or
    no active translation edge).  Seeding residence times fixes the
    all-new-words case."""


class NonFiniteCoordinate(SpaceError):
    """A coordinate left the finite range; the step size is too large."""


class NoActiveNeighbor(SpaceError):
    """A word cannot be placed because none of its neighbors is active."""


@dataclass(frozen=True)
class SolverConfig:
    """Solver hyperparameters.

    Defaults are frozen here (and pinned by tests); tuned only for
    stability on desk-scale corpora:
      d                    space dimension (2 or 3)
      alpha_t, alpha_x     temporal / spatial weight bases, in (0, 1)
      gamma                count-compression exponent, in (0, 1]
      r_par                radius within which words sponsor candidates
      n_max                active-set size cap
      eta                  descent step size
      max_iters_per_round  descent iterations per update round
      eps                  per-round convergence threshold (max displacement)
      delta                distance floor capping the repulsion singularity;
                           also the placement-jitter magnitude
      max_step             per-word displacement cap per descent iteration;
                           tames the near-singular gradients of words that
                           start almost coincident
      rng_seed             seed mixed into deterministic placement jitter
    """

    d: int = 2
    alpha_t: float = 0.5
    alpha_x: float = 0.8
    gamma: float = 0.5
    r_par: float = 1.5
    n_max: int = 60
    eta: float = 0.05
    max_iters_per_round: int = 200
    eps: float = 1e-4
    delta: float = 1e-6
    max_step: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError(f"d must be 2 or 3, got {self.d}")
        if not 0.0 < self.alpha_t < 1.0:
            raise ValueError(f"alpha_t must be in (0, 1), got {self.alpha_t}")
        if not 0.0 < self.alpha_x < 1.0:
            raise ValueError(f"alpha_x must be in (0, 1), got {self.alpha_x}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.r_par <= 0:
            raise ValueError(f"r_par must be positive, got {self.r_par}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.max_iters_per_round < 1:
            raise ValueError(f"max_iters_per_round must be >= 1, got "
                             f"{self.max_iters_per_round}")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_step <= 0:
            raise ValueError(f"max_step must be positive, got {self.max_step}")


def save_config(config: SolverConfig, path: str | Path) -> None:
    """Write a config as `key = value` lines."""
    lines = [f"{f.name} = {getattr(config, f.name)}" for f in fields(config)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_config(path: str | Path) -> SolverConfig:
    """Read a `key = value` config file; unknown keys are errors."""
    valid = {f.name for f in fields(SolverConfig)}
    kwargs = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in valid:
            raise ValueError(f"line {line_no}: unknown config key {key!r}")
        if key in ("d", "n_max", "max_iters_per_round", "rng_seed"):
            kwargs[key] = int(value)
        else:
            kwargs[key] = float(value)
    return SolverConfig(**kwargs)


@dataclass
class SpaceState:
    """The mutable layout state: active words, coordinates, residence
    times, the pinned center, and the per-round charge/spring caches."""

    pinned: WordId
    coords: dict[WordId, np.ndarray] = field(default_factory=dict)
    residence: dict[WordId, int] = field(default_factory=dict)
    charges: dict[WordId, float] = field(default_factory=dict)
    springs: dict[tuple[WordId, WordId], float] = field(default_factory=dict)
    base_charges: dict[WordId, float] = field(default_factory=dict)
    base_springs: dict[tuple[WordId, WordId], float] = field(default_factory=dict)
    pweights: dict[WordId, float] = field(default_factory=dict)

    @property
    def words(self) -> list[WordId]:
        return sorted(self.coords)

    def add_word(self, w: WordId, x: np.ndarray, t: int = 0) -> None:
        self.coords[w] = np.asarray(x, dtype=float).copy()
        self.residence[w] = t

    def remove_word(self, w: WordId) -> None:
        if w == self.pinned:
            raise ValueError("cannot remove the pinned word")
        del self.coords[w]
        del self.residence[w]

    def pin(self, w: WordId) -> None:
        """Make `w` the center: translate everything so it sits exactly
        at the origin."""
        offset = self.coords[w].copy()
        for v in self.coords:
            self.coords[v] = self.coords[v] - offset
        self.coords[w] = np.zeros_like(offset)
        self.pinned = w

    def clear_caches(self) -> None:
        self.charges = {}
        self.springs = {}
        self.base_charges = {}
        self.base_springs = {}
        self.pweights = {}


def make_state(pinned: WordId, d: int) -> SpaceState:
    state = SpaceState(pinned)
    state.add_word(pinned, np.zeros(d), t=1)
    return state


# ---------------------------------------------------------------------------
# Weights, charges, springs


def weight_p(t_u: int, x: np.ndarray, config: SolverConfig) -> float:
    """Positional/temporal weight (1 - alpha_t^t) * alpha_x^|x|.

    Zero for brand-new words (t = 0); approaches 1 for old words at
    the center.
    """
    return (1.0 - config.alpha_t ** t_u) * config.alpha_x ** float(np.linalg.norm(x))


def compress(count: float, config: SolverConfig) -> float:
    """Damp heavy counts: count^gamma."""
    return count ** config.gamma


def compute_charges_springs(state: SpaceState, network: LangueNetwork, pairs: PairSpec,
                            config: SolverConfig) -> None:
    """Recompute the charge/spring caches from current positions.

    Base values divide compressed normalized counts by the scale
    divisor C, the p-weighted mean of compressed edge counts over all
    active cross-language word pairs; cached values fold in the p
    weights.  Raises DegenerateScale when C is undefined: either every
    weight is zero (seed residence times) or no active pair carries a
    translation.  A state with no cross-language pairs at all gets
    all-zero caches instead (there is nothing to scale).
    """
    words = state.words
    p = {w: weight_p(state.residence[w], state.coords[w], config) for w in words}
    by_lang: dict[str, list[WordId]] = {}
    for w in words:
        by_lang.setdefault(w.lang, []).append(w)

    numerator = 0.0
    denominator = 0.0
    edge_cbars: dict[tuple[WordId, WordId], float] = {}
    any_pair = False
    for l1, l2 in pairs:
        for s in by_lang.get(l1, []):
            for t in by_lang.get(l2, []):
                any_pair = True
                weight = p[s] * p[t]
                denominator += weight
                if network.edge_count(s, t) > 0:
                    cbar = network.normalized_pair_count(s, t)
                    edge_cbars[edge_key(s, t)] = cbar
                    numerator += weight * compress(cbar, config)

    if not any_pair:
        state.clear_caches()
        state.pweights = p
        return
    if denominator == 0.0:
        raise DegenerateScale("all positional/temporal weights are zero; "
                              "seed residence times so at least one word has t >= 1")
    if numerator == 0.0:
        raise DegenerateScale("no active translation edge carries weight; "
                              "the scale divisor would be zero")

    scale = numerator / denominator
    base_charges = {}
    charges = {}
    for w in words:
        qbar = compress(network.normalized_word_count(w, pairs), config) / scale
        base_charges[w] = qbar
        charges[w] = qbar * p[w]
    base_springs = {}
    springs = {}
    for key, cbar in sorted(edge_cbars.items()):
        u, v = key
        kbar = compress(cbar, config) / scale
        base_springs[key] = kbar
        springs[key] = kbar * p[u] * p[v]

    state.charges = charges
    state.springs = springs
    state.base_charges = base_charges
    state.base_springs = base_springs
    state.pweights = p


# ---------------------------------------------------------------------------
# Energies and gradient


def rep_energy(x_u: np.ndarray, x_v: np.ndarray, q_u: float, q_v: float,
               delta: float) -> float:
    """Repulsion energy q_u q_v / r, floored at distance delta."""
    r = float(np.linalg.norm(np.asarray(x_u, float) - np.asarray(x_v, float)))
    return q_u * q_v / max(r, delta)


def att_energy(x_u: np.ndarray, x_v: np.ndarray, k: float) -> float:
    """Spring energy k r^2."""
    d = np.asarray(x_u, float) - np.asarray(x_v, float)
    return k * float(d @ d)


class _Terms:
    """Frozen pairwise terms of one round, vectorized over numpy arrays.

    Repulsion terms pair same-language words (each unordered pair
    once); attraction terms follow the cached springs.  Rebuilt
    whenever the caches change.
    """

    def __init__(self, state: SpaceState):
        self.words = state.words
        self.index = {w: i for i, w in enumerate(self.words)}
        d = len(next(iter(state.coords.values()))) if state.coords else 0
        self.x = np.array([state.coords[w] for w in self.words], dtype=float).reshape(
            len(self.words), d)
        self.q = np.array([state.charges.get(w, 0.0) for w in self.words], dtype=float)

        rep_i, rep_j = [], []
        by_lang: dict[str, list[int]] = {}
        for i, w in enumerate(self.words):
            by_lang.setdefault(w.lang, []).append(i)
        for lang in sorted(by_lang):
            for i, j in itertools.combinations(by_lang[lang], 2):
                rep_i.append(i)
                rep_j.append(j)
        self.rep_i = np.array(rep_i, dtype=int)
        self.rep_j = np.array(rep_j, dtype=int)
        self.rep_qq = self.q[self.rep_i] * self.q[self.rep_j] if len(rep_i) else np.zeros(0)

        att_i, att_j, att_k = [], [], []
        for (u, v), k in sorted(state.springs.items()):
            att_i.append(self.index[u])
            att_j.append(self.index[v])
            att_k.append(k)
        self.att_i = np.array(att_i, dtype=int)
        self.att_j = np.array(att_j, dtype=int)
        self.att_k = np.array(att_k, dtype=float)

    def energy(self, x: np.ndarray, delta: float) -> tuple[float, float, float]:
        e_rep = 0.0
        if len(self.rep_i):
            diff = x[self.rep_i] - x[self.rep_j]
            r = np.linalg.norm(diff, axis=1)
            e_rep = float(np.sum(self.rep_qq / np.maximum(r, delta)))
        e_att = 0.0
        if len(self.att_i):
            diff = x[self.att_i] - x[self.att_j]
            e_att = float(np.sum(self.att_k * np.sum(diff * diff, axis=1)))
        return e_rep + e_att, e_rep, e_att

    def gradient(self, x: np.ndarray, delta: float) -> np.ndarray:
        g = np.zeros_like(x)
        if len(self.rep_i):
            diff = x[self.rep_i] - x[self.rep_j]
            r = np.linalg.norm(diff, axis=1)
            # inside the floor the energy is flat, but the force keeps
            # pushing (inverse-distance force with the denominator
            # clamped): words that land closer than delta must separate
            # rather than fuse on the plateau
            coef = -self.rep_qq / np.maximum(r, delta) ** 3
            contrib = coef[:, None] * diff
            np.add.at(g, self.rep_i, contrib)
            np.add.at(g, self.rep_j, -contrib)
        if len(self.att_i):
            diff = x[self.att_i] - x[self.att_j]
            contrib = (2.0 * self.att_k)[:, None] * diff
            np.add.at(g, self.att_i, contrib)
            np.add.at(g, self.att_j, -contrib)
        return g


def total_energy(state: SpaceState, config: SolverConfig) -> tuple[float, float, float]:
    """(total, repulsion, attraction) energy under the frozen caches."""
    terms = _Terms(state)
    return terms.energy(terms.x, config.delta)


def gradient(state: SpaceState, config: SolverConfig) -> dict[WordId, np.ndarray]:
    """Gradient of the frozen-cache energy, per word.

    Exact everywhere except inside the repulsion distance floor, where
    the floored energy is flat but the reported force continues the
    inverse-distance law with the distance clamped; separating steps
    there are energy-neutral, so descent stays monotone.  The pinned
    word's gradient is reported like any other but is never applied by
    the descent loop.
    """
    terms = _Terms(state)
    g = terms.gradient(terms.x, config.delta)
    return {w: g[i].copy() for w, i in terms.index.items()}


_MIN_STEP = 1e-18


def descend(state: SpaceState, config: SolverConfig,
            trace: list | None = None) -> bool:
    """One frozen-weight descent round over the cached charges/springs.

    Runs up to max_iters_per_round steps x <- x - eta g, with each
    word's displacement capped at max_step and the round's step size
    halved whenever a step would raise the energy, so accepted
    energies never increase.  Returns True when the final step moved
    no word by eps or more.  The pinned word never moves.  `trace`,
    when given, collects the accepted energy after each step.
    """
    if not state.coords:
        return True
    terms = _Terms(state)
    x = terms.x.copy()
    if not np.all(np.isfinite(x)):
        raise NonFiniteCoordinate("non-finite coordinates on entry")
    pinned_idx = terms.index[state.pinned]
    eta = config.eta
    energy, _, _ = terms.energy(x, config.delta)
    converged = False
    for _ in range(config.max_iters_per_round):
        g = terms.gradient(x, config.delta)
        g[pinned_idx] = 0.0
        while True:
            move = -eta * g
            lengths = np.linalg.norm(move, axis=1)
            clip = np.where(lengths > config.max_step, config.max_step /
                            np.maximum(lengths, _MIN_STEP), 1.0)
            x_new = x + clip[:, None] * move
            e_new, _, _ = terms.energy(x_new, config.delta)
            if e_new <= energy or eta <= _MIN_STEP:
                break
            eta *= 0.5
        if eta <= _MIN_STEP and not e_new <= energy:
            x_new, e_new = x, energy
        if not np.all(np.isfinite(x_new)):
            raise NonFiniteCoordinate("descent produced a non-finite coordinate; "
                                      "halve the step size and retry the round")
        displacement = float(np.max(np.linalg.norm(x_new - x, axis=1)))
        x, energy = x_new, e_new
        if trace is not None:
            trace.append(energy)
        if displacement < config.eps:
            converged = True
            break
    for w, i in terms.index.items():
        state.coords[w] = x[i].copy()
    state.coords[state.pinned] = np.zeros(config.d)
    return converged


def update_coordinates(state: SpaceState, network: LangueNetwork, pairs: PairSpec,
                       config: SolverConfig) -> bool:
    """One full update round: refresh the charge/spring caches from the
    current positions, freeze them, descend, and (on convergence)
    advance every word's residence time."""
    compute_charges_springs(state, network, pairs, config)
    converged = descend(state, config)
    if converged:
        for w in state.residence:
            state.residence[w] += 1
    return converged


# ---------------------------------------------------------------------------
# Placement


def _jitter(w: WordId, config: SolverConfig) -> np.ndarray:
    """Deterministic jitter of magnitude delta, seeded by the word."""
    digest = hashlib.sha256(
        f"{config.rng_seed}|{w.lang}|{w.word}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
    while True:
        direction = rng.standard_normal(config.d)
        norm = np.linalg.norm(direction)
        if norm > 1e-12:
            return config.delta * direction / norm


def initial_coordinate(w: WordId, state: SpaceState, network: LangueNetwork,
                       pairs: PairSpec, config: SolverConfig) -> np.ndarray:
    """Edge-count-weighted centroid of w's active neighbors, plus a
    deterministic jitter to break exact coincidence."""
    total = 0
    centroid = np.zeros(config.d)
    for v in sorted(network.neighbors(w, pairs)):
        if v in state.coords:
            c = network.edge_count(w, v)
            centroid += c * state.coords[v]
            total += c
    if total == 0:
        raise NoActiveNeighbor(f"{w.lang}:{w.word} has no active neighbor")
    return centroid / total + _jitter(w, config)


# ---------------------------------------------------------------------------
# Snapshots


def snapshot(state: SpaceState, network: LangueNetwork, config: SolverConfig,
             pairs: PairSpec, meta: dict | None = None) -> dict:
    """JSON-ready snapshot of the current layout.

    Contains everything a renderer needs without the network: word
    coordinates, charges, residence and occurrence counts; edge spring
    constants (weighted and base) and raw counts; energies; config.
    """
    words = [{
        "lang": w.lang,
        "word": w.word,
        "x": [float(value) for value in state.coords[w]],
        "q": state.charges.get(w, 0.0),
        "t": state.residence[w],
        "occ": network.occurrence_count(w),
    } for w in state.words]
    edges = [{
        "u": {"lang": u.lang, "word": u.word},
        "v": {"lang": v.lang, "word": v.word},
        "k": k,
        "kbar": state.base_springs.get((u, v), 0.0),
        "c": network.edge_count(u, v),
    } for (u, v), k in sorted(state.springs.items())]
    e_total, e_rep, e_att = total_energy(state, config)
    snap = {
        "words": words,
        "edges": edges,
        "pinned": {"lang": state.pinned.lang, "word": state.pinned.word},
        "pairs": [list(pair) for pair in pairs],
        "energy": {"total": e_total, "rep": e_rep, "att": e_att},
        "config": {f.name: getattr(config, f.name) for f in fields(config)},
    }
    if meta:
        snap["meta"] = meta
    return snap


def state_from_snapshot(snap: dict) -> tuple[SpaceState, SolverConfig]:
    """Rebuild a state (with frozen caches) and config from a snapshot."""
    config = SolverConfig(**snap["config"])
    pinned = WordId(snap["pinned"]["lang"], snap["pinned"]["word"])
    state = SpaceState(pinned)
    for entry in snap["words"]:
        w = WordId(entry["lang"], entry["word"])
        state.add_word(w, np.array(entry["x"], dtype=float), t=entry["t"])
        state.charges[w] = entry["q"]
    for entry in snap["edges"]:
        u = WordId(entry["u"]["lang"], entry["u"]["word"])
        v = WordId(entry["v"]["lang"], entry["v"]["word"])
        state.springs[(u, v)] = entry["k"]
        state.base_springs[(u, v)] = entry.get("kbar", 0.0)
    return state, config


def dump_snapshot(snap: dict, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(snap, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")


def load_snapshot(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
