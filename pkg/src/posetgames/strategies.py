"""Scripted agents: the adversarial Bob strategies on the generated chain
posets, the painter-simulation Alice for the (2,1) coloring game, and the
baseline opponent suite (random / greedy / lookahead / stdin / minimax).

All scripted strategies recompute or incrementally sync their memory from the
game state and transcript, so a forked agent plus a forked state replays
identically (what the best-response search relies on).  Every strategy asserts
its bookkeeping invariants each turn and fails loudly instead of drifting.
"""

from __future__ import annotations

import copy
import sys
from random import Random

from .constructions import ConstructionMeta
from .engine import (
    ALICE,
    AUXILIARY,
    BOB,
    COLORING,
    GRUNDY,
    MARKING,
    STANDARD,
    GameConfig,
    GameState,
    Move,
)
from .intervalgame import IntervalGame, WILD, make_painter
from .poset import ChainInterval, Poset, PosetError, StackedPoset, min_chain_partition


class StrategyError(Exception):
    pass


class SupplyExhausted(StrategyError):
    """No duplicate left for the interval the strategy needs: the
    construction is undersized for this opposition."""


class RegionCollapse(StrategyError):
    """The trapped region vanished: sizing below the defaults."""


class AllCopiesInvalidated(StrategyError):
    """Every stacked copy got invalidated: copy count too small."""


class TranslationIllegal(StrategyError):
    """A move translated between the real game and a simulation failed the
    other side's legality: the availability/legality bridge is broken."""


class InvariantViolation(StrategyError):
    pass


class Agent:
    name = "agent"

    def reset(self, poset: Poset, config: GameConfig, seed: int) -> None:
        self.poset = poset
        self.config = config
        self.rng = Random(seed)

    def propose(self, state: GameState) -> Move | None:
        raise NotImplementedError

    def decided_win(self, state: GameState):
        return None

    def pop_annotations(self) -> list[dict]:
        notes = getattr(self, "_annotations", [])
        self._annotations = []
        return notes

    def note(self, **kw) -> None:
        if not hasattr(self, "_annotations"):
            self._annotations = []
        self._annotations.append(kw)

    def fork(self) -> "Agent":
        memo = {id(self.poset): self.poset}
        meta = getattr(self, "meta", None)
        if meta is not None:
            memo[id(meta)] = meta
        return copy.deepcopy(self, memo)


def _greedy_move(state: GameState, start_hint: int = 0) -> Move | None:
    """Lowest uncolored point with its least legal color (or choice/mark)."""
    variant = state.config.variant
    for x in range(start_hint, state.poset.n):
        if state.colors[x] != 0:
            continue
        if variant == GRUNDY:
            return Move.choose_point(x)
        if variant == MARKING:
            return Move.mark_point(x)
        for c in range(1, state.config.k + 1):
            if state.color_legal(x, c):
                return Move.color_point(x, c)
    if start_hint:
        return _greedy_move(state, 0)
    return None


class GreedyAgent(Agent):
    """First point, least color."""

    name = "greedy"

    def propose(self, state):
        return _greedy_move(state)


class RandomAgent(Agent):
    """Uniform legal move; auxiliary-mode replier passes with a small
    probability.  Points discovered to have no legal color are pruned."""

    name = "random"

    def __init__(self, pass_prob: float = 0.1):
        self.pass_prob = pass_prob

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        self._candidates = list(range(poset.n))

    def propose(self, state):
        cfg = state.config
        if (cfg.mode == AUXILIARY and state.mover == ALICE
                and self.rng.random() < self.pass_prob):
            return Move.pass_move()
        variant = cfg.variant
        cands = self._candidates
        while cands:
            idx = self.rng.randrange(len(cands))
            x = cands[idx]
            if state.colors[x] != 0:
                cands[idx] = cands[-1]
                cands.pop()
                continue
            if variant == GRUNDY:
                return Move.choose_point(x)
            if variant == MARKING:
                return Move.mark_point(x)
            colors = state.available_colors(x)
            if not colors:
                cands[idx] = cands[-1]
                cands.pop()
                continue
            return Move.color_point(x, self.rng.choice(colors))
        return None


class LookaheadAgent(Agent):
    """Two-ply adversarial probe on sampled candidate moves.

    On posets small enough to copy cheaply this is a true 2-ply minimax over a
    sampled move set with a blocking-pressure evaluation; on larger posets it
    degrades to targeting the sampled uncolored point with the fewest
    available colors (maximal stranding pressure for Bob, protection for
    Alice).
    """

    name = "lookahead"

    def __init__(self, plies: int = 2, samples: int = 6, copy_limit: int = 400):
        self.plies = plies
        self.samples = samples
        self.copy_limit = copy_limit

    def _sample_moves(self, state, rng) -> list[Move]:
        variant = state.config.variant
        out = []
        seen = set()
        tries = 0
        while len(out) < self.samples and tries < self.samples * 8:
            tries += 1
            x = rng.randrange(state.poset.n)
            if state.colors[x] != 0 or x in seen:
                continue
            if variant == GRUNDY:
                seen.add(x)
                out.append(Move.choose_point(x))
            elif variant == MARKING:
                seen.add(x)
                out.append(Move.mark_point(x))
            else:
                colors = state.available_colors(x)
                if not colors:
                    continue
                seen.add(x)
                out.append(Move.color_point(x, rng.choice(colors)))
        if not out:
            fallback = _greedy_move(state)
            if fallback:
                out.append(fallback)
        return out

    def _eval(self, state, rng) -> int:
        """Bob-positive score: sampled stranding plus color pressure."""
        if state.config.variant != COLORING:
            return state.max_color_used * 1000
        score = 0
        seen = 0
        for _ in range(40):
            if seen >= 10:
                break
            x = rng.randrange(state.poset.n)
            if state.colors[x] != 0:
                continue
            seen += 1
            avail = len(state.available_colors(x))
            if avail == 0:
                score += 1000
            else:
                score += state.config.k - avail
        return score + state.max_color_used

    def propose(self, state):
        me = state.mover
        sign = 1 if me == BOB else -1
        if state.poset.n > self.copy_limit:
            return self._pressure_move(state)
        moves = self._sample_moves(state, self.rng)
        if not moves:
            return None
        best, best_score = None, None
        for move in moves:
            child = state.copy().apply_move(me, move)
            reply_rng = Random(self.rng.randrange(2 ** 30))
            score = None
            if child.uncolored and not child.over and child.mover != me:
                for reply in self._sample_moves(child, reply_rng)[:4]:
                    grand = child.copy().apply_move(child.mover, reply)
                    s = sign * self._eval(grand, reply_rng)
                    score = s if score is None else min(score, s)
            if score is None:
                score = sign * self._eval(child, reply_rng)
            if best_score is None or score > best_score:
                best, best_score = move, score
        return best

    def _pressure_move(self, state):
        variant = state.config.variant
        best, best_key = None, None
        for _ in range(48):
            x = self.rng.randrange(state.poset.n)
            if state.colors[x] != 0:
                continue
            if variant != COLORING:
                return Move.choose_point(x) if variant == GRUNDY else Move.mark_point(x)
            colors = state.available_colors(x)
            if not colors:
                continue
            key = (len(colors), x)
            if best_key is None or key < best_key:
                if state.mover == BOB:
                    best = Move.color_point(x, colors[-1])
                else:
                    best = Move.color_point(x, colors[0])
                best_key = key
        return best or _greedy_move(state)


class PassAgent(Agent):
    """Auxiliary-mode replier that always passes (degenerate baseline)."""

    name = "pass"

    def propose(self, state):
        if state.config.mode == AUXILIARY and state.mover == ALICE:
            return Move.pass_move()
        return _greedy_move(state)


class StdinAgent(Agent):
    """Reads moves from a stream; reprompts on illegal input.

    Line formats: ``color X C`` | ``choose X`` | ``mark X`` | ``pass``.
    """

    name = "stdin"

    def __init__(self, stream=None, out=None):
        self.stream = stream
        self.out = out

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        if self.stream is None:
            self.stream = sys.stdin
        if self.out is None:
            self.out = sys.stderr

    def propose(self, state):
        while True:
            print(f"[{state.mover} to move, round {state.round_no}, "
                  f"{state.moves_left} left] > ", end="", file=self.out, flush=True)
            line = self.stream.readline()
            if not line:
                return None
            parts = line.split()
            try:
                move = self._parse(parts)
            except (ValueError, IndexError):
                print(f"unparseable move: {line.strip()!r}", file=self.out)
                continue
            if move.kind == "pass":
                return move
            probe = state.copy()
            try:
                probe.apply_move(state.mover, move)
            except Exception as exc:
                print(f"illegal: {exc}", file=self.out)
                continue
            return move

    @staticmethod
    def _parse(parts: list[str]) -> Move:
        kind = parts[0].lower()
        if kind == "pass":
            return Move.pass_move()
        if kind == "color":
            return Move.color_point(int(parts[1]), int(parts[2]))
        if kind == "choose":
            return Move.choose_point(int(parts[1]))
        if kind == "mark":
            return Move.mark_point(int(parts[1]))
        raise ValueError(kind)


class MinimaxAgent(Agent):
    """Perfect play via the exact solver; tiny posets only."""

    name = "minimax"

    def __init__(self, node_budget: int = 2_000_000):
        self.node_budget = node_budget

    def propose(self, state):
        from .solver import best_move

        if state.poset.n > 12:
            raise PosetError("minimax agent refuses posets beyond 12 points")
        return best_move(state, node_budget=self.node_budget)


# ---------------------------------------------------------------------------
# Region trap: Bob's width-2 auxiliary strategy.


def _uncolored_runs(colors, positions) -> list[tuple[int, int]]:
    """Maximal uncolored runs of the base chain positions [lo, hi]."""
    runs = []
    start = None
    for p in positions:
        if colors[p] == 0:
            if start is None:
                start = p
        elif start is not None:
            runs.append((start, p - 1))
            start = None
    if start is not None:
        runs.append((start, positions[-1]))
    return runs


def _best_trap_region(runs, covers):
    """The uncolored subinterval with the most dead colors.

    covers: (lo, hi, color) for every colored side point.  A color is dead on
    a subinterval when some cover contains it entirely, so shrinking into a
    partial overlap converts a blocker into a kill.  Maximizes
    (#dead, length, -lo); returns ((lo, hi), dead set) or (None, set()).
    """
    best = None
    for rlo, rhi in runs:
        cands = [(rlo, rhi)]
        clipped = [(max(lo, rlo), min(hi, rhi)) for lo, hi, _ in covers
                   if lo <= rhi and hi >= rlo]
        anchors = sorted({p for lo, hi in clipped for p in (lo, hi)})
        for p in anchors:
            per_color: dict[int, tuple[int, int]] = {}
            for lo, hi, c in covers:
                clo, chi = max(lo, rlo), min(hi, rhi)
                if clo <= p <= chi:
                    cur = per_color.get(c)
                    if cur is None or chi - clo > cur[1] - cur[0]:
                        per_color[c] = (clo, chi)
            if per_color:
                ilo, ihi = rlo, rhi
                for lo, hi in per_color.values():
                    ilo, ihi = max(ilo, lo), min(ihi, hi)
                cands.append((ilo, ihi))
        for ilo, ihi in cands:
            dead = {c for lo, hi, c in covers if lo <= ilo and ihi <= hi}
            key = (len(dead), ihi - ilo, -ilo)
            if best is None or key > best[0]:
                best = (key, (ilo, ihi), dead)
    if best is None:
        return None, set()
    return best[1], best[2]


class _TrapCore:
    """The region-trap computation on a boundary-interval construction.

    Pure function of the current coloring: finds the uncolored base run with
    the most dead colors (ties: larger, then lower), and either declares
    victory (all k colors dead there) or produces the next kill move:
    a fresh color on an unused side duplicate whose interval covers the run
    and avoids that color.
    """

    def __init__(self, meta: ConstructionMeta, k: int, offset: int = 0):
        self.meta = meta
        self.k = k
        self.offset = offset     # id shift when embedded in a stacked copy
        self.m = meta.m
        self.side = meta.side[0]            # [(pid, lo, hi)] ascending
        self._dup_index: dict[tuple[int, int], list[int]] = {}
        for pid, lo, hi in self.side:
            self._dup_index.setdefault((lo, hi), []).append(pid)

    def _colored_side(self, colors):
        out = []
        for pid, lo, hi in self.side:
            c = colors[pid + self.offset]
            if c != 0:
                out.append((lo, hi, c))
        return out

    def region_and_dead(self, colors):
        runs = _uncolored_runs(
            [colors[p + self.offset] for p in range(self.m)], list(range(self.m)))
        if not runs:
            return None, set(), []
        region, dead = _best_trap_region(runs, self._colored_side(colors))
        return region, dead, runs

    def step(self, colors):
        """('victory', region pts) | ('move', global pid, color)."""
        region, dead, runs = self.region_and_dead(colors)
        if region is None:
            raise RegionCollapse("no uncolored base run left")
        if len(dead) >= self.k:
            lo, hi = region
            return ("victory", [p + self.offset for p in range(lo, hi + 1)])
        lo, hi = region
        below = {colors[p + self.offset] for p in range(0, lo)} - {0}
        above = {colors[p + self.offset] for p in range(hi + 1, self.m)} - {0}
        fresh = [c for c in range(1, self.k + 1) if c not in dead]
        threatened = [c for c in fresh if (c in below) != (c in above)]
        calm = [c for c in fresh if c not in below and c not in above]
        stuck = [c for c in fresh if c in below and c in above]
        for color in threatened + calm + stuck:
            prefer_suffix = color in below
            for iv in self._covering_intervals(lo, hi, prefer_suffix):
                if self._interval_blocked(colors, iv, color):
                    continue
                pid = self._fresh_duplicate(colors, iv)
                if pid is not None:
                    return ("move", pid + self.offset, color)
        raise SupplyExhausted(
            f"no fresh duplicate avoids the blockers for region [{lo},{hi}]")

    def _covering_intervals(self, lo: int, hi: int, prefer_suffix: bool):
        prefixes = [(0, j) for j in range(hi, self.m - 1 + 1)]
        suffixes = [(i, self.m - 1) for i in range(lo, -1, -1)]
        first, second = (suffixes, prefixes) if prefer_suffix else (prefixes, suffixes)
        return first + second

    def _interval_blocked(self, colors, iv, color) -> bool:
        lo, hi = iv
        return any(colors[p + self.offset] == color for p in range(lo, hi + 1))

    def _fresh_duplicate(self, colors, iv):
        for pid in self._dup_index.get(iv, ()):
            if colors[pid + self.offset] == 0:
                return pid
        return None


class RegionTrapBob(Agent):
    """Bob in the auxiliary coloring game on a boundary-interval poset.

    Each turn: one new dead color on a side duplicate covering the current
    region, until all k colors are dead on a nonempty uncolored run; filler
    moves afterwards.  Invariants checked per turn; failures raise."""

    name = "trap"

    def __init__(self, meta: ConstructionMeta):
        self.meta = meta

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        if config.mode != AUXILIARY or config.variant != COLORING or config.b != 1:
            raise StrategyError("region trap plays the auxiliary (a,1) coloring game")
        self.core = _TrapCore(self.meta, config.k)
        self.moves_made = 0
        self.victory_pts: list[int] | None = None

    def propose(self, state):
        if self.victory_pts is None:
            action = self.core.step(state.colors)
            if action[0] == "move":
                _, pid, color = action
                self.moves_made += 1
                self._check_invariants(state, pid, color)
                return Move.color_point(pid, color)
            self.victory_pts = action[1]
            self.note(event="victory", region=self.victory_pts[:4],
                      moves=self.moves_made)
        return _greedy_move(state)

    def _check_invariants(self, state, pid, color):
        region, dead, runs = self.core.region_and_dead(state.colors)
        lo, hi = region
        iv = self.meta.interval_of(pid)
        if not (iv.lo <= lo and hi <= iv.hi):
            raise InvariantViolation("chosen duplicate does not cover the region")
        if color in dead:
            raise InvariantViolation("chosen color already dead")
        if len(dead) < self.moves_made - 1:
            raise InvariantViolation(
                f"dead colors {len(dead)} < strategy moves {self.moves_made - 1}")
        biggest = max(b - a + 1 for a, b in runs)
        bound = self.core.m / (2 ** self.moves_made) - self.moves_made
        if biggest < bound:
            raise InvariantViolation(
                f"largest run {biggest} below the halving bound {bound:.1f}")

    def decided_win(self, state):
        if self.victory_pts is not None:
            return ("blocked", self.victory_pts)
        return None


# ---------------------------------------------------------------------------
# Phased trap: Bob's auxiliary (a,1) strategy on sliding-window posets.


class PhasedTrapBob(Agent):
    """Bob on a sliding-window poset, auxiliary (a,1) game, a >= 2.

    Kills a fraction 1/(floor(a/2)+1) of the remaining colors per phase using
    side chain i's fixed-size windows, then re-anchors inside the surviving
    region on the next (smaller) window scale.  Refuses palettes at or above
    (1+1/floor(a/2))^(w-1).  Phase accounting is asserted exactly.
    """

    name = "phased"

    def __init__(self, meta: ConstructionMeta):
        self.meta = meta

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        p = self.meta.params
        self.a, self.w, self.kk = p["a"], p["w"], p["k"]
        self.sizes = p["sizes"]
        self.m = self.meta.m
        if config.mode != AUXILIARY or config.variant != COLORING or config.b != 1:
            raise StrategyError("phased trap plays the auxiliary (a,1) coloring game")
        if config.a != self.a:
            raise StrategyError(f"built for a={self.a}, game has a={config.a}")
        k = config.k
        q = self.a // 2
        if k >= (1 + 1 / q) ** (self.w - 1):
            raise StrategyError(
                f"palette {k} >= (1+1/{q})^{self.w - 1}: the bound does not apply")
        self.k = k
        self.q = q
        self.r = [k]                      # colors remaining entering each phase
        self.phase = 1
        self.kills_at_phase_start = 0
        self.region: tuple[int, int] = (0, self.m - 1)
        self.victory_pts = None
        self._anchor_for_phase()
        self._dup_index = []
        for chain in self.meta.side:
            index: dict[tuple[int, int], list[int]] = {}
            for pid, lo, hi in chain:
                index.setdefault((lo, hi), []).append(pid)
            self._dup_index.append(index)

    # -- bookkeeping --------------------------------------------------------

    def threshold(self) -> int:
        return -(-self.r[-1] // (self.q + 1))     # ceil division

    def _anchor_for_phase(self) -> None:
        size = self.sizes[self.phase - 1]
        lo, hi = self.region
        if hi - lo + 1 > size:
            # Center a size-`size` window in the surviving region (all windows
            # inside it are uncolored, so supply ties break on the margin).
            start = lo + ((hi - lo + 1) - size) // 2
            self.region = (start, start + size - 1)

    def _shrink_region(self, colors) -> None:
        lo, hi = self.region
        runs = _uncolored_runs(colors, list(range(lo, hi + 1)))
        if not runs:
            raise RegionCollapse(f"region [{lo},{hi}] fully colored")
        region, _ = _best_trap_region(runs, self._colored_side_points(colors))
        self.region = region

    def _colored_side_points(self, colors):
        out = []
        for chain in self.meta.side:
            for pid, lo, hi in chain:
                if colors[pid] != 0:
                    out.append((lo, hi, colors[pid]))
        return out

    def _dead_colors(self, colors) -> set[int]:
        lo, hi = self.region
        return {c for slo, shi, c in self._colored_side_points(colors)
                if slo <= lo and hi <= shi}

    # -- the move -------------------------------------------------------------

    def propose(self, state):
        if self.victory_pts is not None:
            return _greedy_move(state)
        colors = state.colors
        self._shrink_region(colors)
        dead = self._dead_colors(colors)
        if len(dead) >= self.k:
            lo, hi = self.region
            pts = [p for p in range(lo, hi + 1) if colors[p] == 0]
            if not pts or not state.blocked_uncolored(pts):
                raise InvariantViolation("victory declared on a colorable region")
            self.victory_pts = pts
            self.note(event="victory", phase=self.phase, r_trace=self.r)
            return _greedy_move(state)
        kills_in_phase = len(dead) - self.kills_at_phase_start
        while kills_in_phase >= self.threshold() and self.phase < self.w - 1:
            self.r.append(self.r[-1] - kills_in_phase)
            self.phase += 1
            self.kills_at_phase_start = len(dead)
            self._shrink_region(colors)
            self._anchor_for_phase()
            kills_in_phase = 0
            self.note(event="phase", phase=self.phase, r_trace=list(self.r))
        move = self._kill_move(state, dead)
        self._assert_accounting(dead)
        return move

    def _kill_move(self, state, dead):
        colors = state.colors
        lo, hi = self.region
        size = self.sizes[self.phase - 1]
        span = hi - lo + 1
        if span > size:
            raise RegionCollapse(
                f"region span {span} exceeds the phase-{self.phase} window {size}")
        fresh = [c for c in range(1, self.k + 1) if c not in dead]
        ranked = self._rank_by_exposure(colors, fresh, size)
        windows = self._candidate_windows(size)
        chain_idx = self.phase - 1
        for color in ranked:
            best = None
            for wlo, whi in windows:
                if any(colors[p] == color for p in range(wlo, whi + 1)):
                    continue
                pids = self._dup_index[chain_idx].get((wlo, whi), ())
                pid = next((p for p in pids if colors[p] == 0), None)
                if pid is None:
                    continue
                if not state.color_legal(pid, color):
                    continue      # blocked through another side chain
                supply = sum(1 for p in pids if colors[p] == 0)
                key = (supply, -wlo)
                if best is None or key > best[0]:
                    best = (key, pid)
            if best is not None:
                return Move.color_point(best[1], color)
        raise SupplyExhausted(
            f"phase {self.phase}: no window/duplicate kills any of {fresh}")

    def _candidate_windows(self, size):
        lo, hi = self.region
        out = []
        first = max(0, hi - size + 1)
        last = min(lo, self.m - size)
        for wlo in range(first, last + 1):
            out.append((wlo, wlo + size - 1))
        return out

    def _rank_by_exposure(self, colors, fresh, size):
        lo, hi = self.region
        below_zone = range(max(0, hi - size + 1), lo)
        above_zone = range(hi + 1, min(self.m, lo + size))
        def exposure(c):
            b = any(colors[p] == c for p in below_zone)
            a = any(colors[p] == c for p in above_zone)
            return (b, a)
        one_sided = [c for c in fresh if sum(exposure(c)) == 1]
        calm = [c for c in fresh if sum(exposure(c)) == 0]
        hard = [c for c in fresh if sum(exposure(c)) == 2]
        return one_sided + calm + hard

    def _assert_accounting(self, dead):
        if self.r[0] != self.k or any(
                self.r[i + 1] >= self.r[i] or self.r[i + 1] < 0
                for i in range(len(self.r) - 1)):
            raise InvariantViolation(f"r-trace not strictly decreasing: {self.r}")
        if len(self.r) > self.w - 1:
            raise InvariantViolation(f"more phases than w-1: {self.r}")

    def decided_win(self, state):
        if self.victory_pts is not None:
            return ("blocked", self.victory_pts)
        return None


# ---------------------------------------------------------------------------
# Parallel copies: lifting an auxiliary strategy to the standard game.


class TrapEmbed:
    """Auxiliary region-trap as the embedded per-copy strategy."""

    def __init__(self, inner_meta: ConstructionMeta, k: int):
        self.k = k
        self.meta = inner_meta
        self.horizon = k + 2

    def make(self, offset: int) -> _TrapCore:
        return _TrapCore(self.meta, self.k, offset)

    def next_move(self, core: _TrapCore, colors):
        action = core.step(colors)
        if action[0] == "victory":
            return ("victory", ("blocked", action[1]))
        _, pid, color = action
        return ("move", Move.color_point(pid, color))


class OrderEmbed:
    """Replay a fixed choice order (worst-case first-fit order) per copy."""

    def __init__(self, order: list[int], target: int):
        self.order = order
        self.target = target
        self.horizon = len(order)

    def make(self, offset: int):
        return {"offset": offset, "at": 0}

    def global_victory(self, state):
        # A first-fit color >= target anywhere settles the game value.
        if state.max_color_used >= self.target:
            return ("value", self.target)
        return None

    def next_move(self, mem, colors):
        while mem["at"] < len(self.order):
            pid = self.order[mem["at"]] + mem["offset"]
            mem["at"] += 1
            if colors[pid] == 0:
                return ("move", Move.choose_point(pid))
        raise SupplyExhausted("order replayed without reaching the target")


class LiftedBob(Agent):
    """Bob in the standard (a,b) game on stacked copies, running an embedded
    auxiliary-(floor(a/b),1) strategy in parallel.

    Each turn advances the alive copy with the fewest completed embedded
    rounds; a copy where Alice placed more than floor(a/b) points since Bob's
    previous visit is invalidated.  Default copy count b*T*(a+1)+1 for an
    embedded horizon of T rounds."""

    name = "lift"

    def __init__(self, meta: ConstructionMeta, embed):
        self.meta = meta
        self.embed = embed

    @staticmethod
    def default_copies(a: int, b: int, horizon: int) -> int:
        return b * horizon * (a + 1) + 1

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        if not isinstance(poset, StackedPoset):
            raise StrategyError("lift strategy needs a stacked poset")
        if config.mode != STANDARD:
            raise StrategyError("lift strategy plays the standard game")
        self.quota = config.a // config.b
        self.copies = poset.copies
        self.inner_n = poset.inner.n
        self.mem = [self.embed.make(c * self.inner_n) for c in range(self.copies)]
        self.alive = [True] * self.copies
        self.rounds_done = [0] * self.copies
        self.touches = [0] * self.copies
        self.cursor = 0
        self.evidence = None

    def _sync(self, state):
        entries = state.entries
        while self.cursor < len(entries):
            rec = entries[self.cursor]
            self.cursor += 1
            if rec.actor == ALICE and rec.move.x is not None:
                self.touches[rec.move.x // self.inner_n] += 1

    def propose(self, state):
        self._sync(state)
        if self.evidence is None:
            self.evidence = getattr(self.embed, "global_victory", lambda s: None)(state)
        if self.evidence is not None:
            return _greedy_move(state)
        for c in range(self.copies):
            if self.alive[c] and self.touches[c] > self.quota:
                self.alive[c] = False
                self.note(event="invalidated", copy=c, touches=self.touches[c])
        order = sorted((self.rounds_done[c], c)
                       for c in range(self.copies) if self.alive[c])
        for _, c in order:
            try:
                kind, payload = self.embed.next_move(self.mem[c], state.colors)
            except StrategyError as exc:
                self.alive[c] = False
                self.note(event="embed_failed", copy=c, error=str(exc))
                continue
            if kind == "victory":
                self.evidence = payload
                self.note(event="victory", copy=c, rounds=self.rounds_done[c])
                return _greedy_move(state)
            self.rounds_done[c] += 1
            self.touches[c] = 0
            return payload
        raise AllCopiesInvalidated(
            f"all {self.copies} copies dead after {len(state.entries)} moves")

    def decided_win(self, state):
        return self.evidence


# ---------------------------------------------------------------------------
# Painter-simulation Alice for the standard (2,1) coloring game.


class PainterAlice(Agent):
    """Alice with w*2^(w-1) colors on a width-w poset, (2,1) standard mode.

    Runs one interval presentation game per chain of a minimum chain
    partition, with disjoint sub-palettes.  Bob coloring x in chain j with a
    chain-i color becomes: wildcard on x in game j, plus a presentation of
    x's incomparability interval in game i with that color forbidden; the
    painter's replies are Alice's real moves, topped up with idle asks on the
    chain with the most uncolored points.  Real legality and simulated
    availability are asserted equivalent for every translated move.
    """

    name = "painter"

    def reset(self, poset, config, seed):
        super().reset(poset, config, seed)
        if config.mode != STANDARD or (config.a, config.b) != (2, 1):
            raise StrategyError("painter strategy plays the standard (2,1) game")
        part = min_chain_partition(poset)
        self.chains = part.chains
        self.w = len(self.chains)
        self.sub = 2 ** (self.w - 1)
        if config.k != self.w * self.sub:
            raise StrategyError(
                f"palette {config.k} != {self.w} * 2^{self.w - 1}")
        self.chain_of = part.chain_of()
        self.pos_of = {}
        for ci, chain in enumerate(self.chains):
            for pos, pid in enumerate(chain):
                self.pos_of[pid] = pos
        self.games = [IntervalGame(len(chain), self.sub) for chain in self.chains]
        self.painters = [make_painter(self.w, g) for g in self.games]
        self.buffer: list[Move] = []
        self.cursor = 0
        self.buffer_spill = 0

    # -- palette mapping ------------------------------------------------------

    def _chain_color(self, real: int) -> tuple[int, int]:
        return (real - 1) // self.sub, (real - 1) % self.sub + 1

    def _real_color(self, chain_idx: int, game_color: int) -> int:
        return chain_idx * self.sub + game_color

    # -- incomparability intervals ---------------------------------------------

    def _interval_in_chain(self, chain_idx: int, x: int) -> ChainInterval:
        chain = self.chains[chain_idx]
        poset = self.poset
        from bisect import bisect_left

        lo = bisect_left(chain, True, key=lambda c: not poset.lt(c, x))
        hi = bisect_left(chain, True, key=lambda c: poset.lt(x, c)) - 1
        if hi < lo:
            return ChainInterval.empty()
        return ChainInterval(lo, hi)

    # -- syncing Bob's moves ----------------------------------------------------

    def _sync(self, state):
        while self.cursor < len(state.entries):
            rec = state.entries[self.cursor]
            self.cursor += 1
            if rec.actor == ALICE:
                continue
            x, real = rec.move.x, rec.move.color
            i, gcolor = self._chain_color(real)
            j = self.chain_of[x]
            if i == j:
                self.games[i].assign(self.pos_of[x], gcolor)
                self.painters[i].observe_assign(self.pos_of[x], gcolor)
                continue
            self.games[j].assign(self.pos_of[x], WILD)
            self.painters[j].observe_assign(self.pos_of[x], WILD)
            interval = self._interval_in_chain(i, x)
            if interval.is_empty:
                continue
            record = self.games[i].present(interval, gcolor)
            replies = self.painters[i].on_present(record)
            for pos, gc in replies:
                self.buffer.append(
                    Move.color_point(self.chains[i][pos], self._real_color(i, gc)))

    # -- move production -----------------------------------------------------

    def propose(self, state):
        self._sync(state)
        if len(self.buffer) > 2:
            self.buffer_spill += 1
        if state.uncolored == 0:
            return None
        if self.buffer:
            return self._checked(state, self.buffer.pop(0))
        return self._checked(state, self._idle_move())

    def _idle_move(self) -> Move:
        ranked = sorted(range(self.w), key=lambda i: (-self.games[i].uncolored, i))
        for i in ranked:
            game = self.games[i]
            if game.uncolored == 0:
                continue
            pos = game.first_uncolored()
            gc = self.painters[i].on_ask(pos)
            return Move.color_point(self.chains[i][pos], self._real_color(i, gc))
        raise TranslationIllegal("no uncolored point found for an idle move")

    def _checked(self, state, move: Move) -> Move:
        if not state.color_legal(move.x, move.color):
            raise TranslationIllegal(
                f"simulated move color {move.color} on {move.x} is illegal "
                "in the real game")
        return move

    def pop_annotations(self):
        notes = super().pop_annotations()
        if self.buffer_spill:
            notes.append({"event": "buffer_spill", "count": self.buffer_spill})
            self.buffer_spill = 0
        return notes


# ---------------------------------------------------------------------------
# Registry.


def make_agent(spec: str, meta: ConstructionMeta | None = None,
               inner_order: list[int] | None = None,
               inner_target: int | None = None) -> Agent:
    """Build an agent from its CLI name, e.g. ``random``, ``lookahead:2``,
    ``minimax``, ``trap``, ``phased``, ``lift:trap``, ``lift:order``,
    ``painter``, ``stdin``, ``pass``."""
    kind, _, arg = spec.partition(":")
    if kind == "random":
        return RandomAgent()
    if kind == "greedy":
        return GreedyAgent()
    if kind == "lookahead":
        return LookaheadAgent(plies=int(arg) if arg else 2)
    if kind == "minimax":
        return MinimaxAgent()
    if kind == "stdin":
        return StdinAgent()
    if kind == "pass":
        return PassAgent()
    if kind == "trap":
        if meta is None:
            raise StrategyError("trap agent needs construction metadata")
        return RegionTrapBob(meta)
    if kind == "phased":
        if meta is None:
            raise StrategyError("phased agent needs construction metadata")
        return PhasedTrapBob(meta)
    if kind == "painter":
        return PainterAlice()
    if kind == "lift":
        if meta is None or meta.kind != "stack":
            raise StrategyError("lift agent needs stacked-construction metadata")
        if arg == "trap":
            inner = meta.inner
            k = inner.params["k"]
            return LiftedBob(meta, TrapEmbed(inner, k))
        if arg == "order":
            if inner_order is None or inner_target is None:
                raise StrategyError("lift:order needs the order and target")
            return LiftedBob(meta, OrderEmbed(inner_order, inner_target))
        raise StrategyError(f"unknown embedded strategy {arg!r}")
    raise StrategyError(f"unknown agent {spec!r}")
