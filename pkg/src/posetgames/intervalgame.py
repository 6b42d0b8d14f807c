"""The interval presentation game on a chain, and its recursive painter.

Presenter and Painter play on a chain of m positions with a family of
intervals whose strict nesting depth is bounded: I nests strictly inside J
(written I << J here) when I is contained in J and avoids both of J's
endpoints.  Each round is one of three scenarios:

1. Presenter assigns an available color, or the wildcard, to an uncolored
   position.  The wildcard can never be forbidden.
2. Presenter presents a family interval with a forbidden color from the
   palette; Painter replies by coloring 0, 1 or 2 uncolored positions of it.
3. Presenter picks an uncolored position; Painter must answer with an
   available palette color or Presenter wins.

Painter wins when the whole chain is colored.  With nesting depth < levels
and a palette of 2^(levels-1) colors, ``RecursivePainter(levels)`` never
loses: it splits the palette into (half-color, bit) pairs and simulates a
(levels-1)-game on the passed intervals, preserving the blocking invariant
checked by ``check_invariant``.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .poset import ChainInterval

WILD = 0   # assignable by scenario 1, never forbidden


class IllegalPresent(Exception):
    pass


class IllegalAssign(Exception):
    pass


class StrategyStuck(Exception):
    """The painter could not honor its contract: an implementation or
    understanding error, never expected for legal inputs."""


def nests_inside(inner: ChainInterval, outer: ChainInterval) -> bool:
    """inner << outer: strictly inside, avoiding both endpoints of outer."""
    if inner.is_empty or outer.is_empty:
        return False
    return outer.lo < inner.lo and inner.hi < outer.hi


def nested_depth(family) -> int:
    """Length of the longest << chain, via DP over intervals sorted by size."""
    ivs = [iv for iv in family if not iv.is_empty]
    ivs.sort(key=lambda iv: (len(iv), iv.lo))
    best = [1] * len(ivs)
    top = 0
    for idx, iv in enumerate(ivs):
        for jdx in range(idx):
            if nests_inside(ivs[jdx], iv):
                best[idx] = max(best[idx], best[jdx] + 1)
        top = max(top, best[idx])
    return top


def split_color(c: int) -> tuple[int, int]:
    """Palette color 1..2^(L-1)  ->  (half-color 1..2^(L-2), bit)."""
    return (c + 1) // 2, c % 2


def join_color(i: int, j: int) -> int:
    return 2 * i - j


@dataclass(frozen=True)
class PresentRecord:
    interval: ChainInterval
    forbidden: int
    serial: int


class IntervalGame:
    """State of one presentation game.

    family=None means the family is open-ended (intervals arrive lazily, as in
    the per-chain simulations of the real coloring game); an explicit family
    restricts what may be presented and enables the full invariant check.
    """

    def __init__(self, m: int, palette: int, family: list[ChainInterval] | None = None):
        if m < 0 or palette < 1:
            raise ValueError("need m >= 0 and palette >= 1")
        self.m = m
        self.palette = palette
        self.family = None if family is None else list(family)
        self.colors: list[int | None] = [None] * m
        self.uncolored = m
        self.presented: list[PresentRecord] = []
        self._forb = [bytearray(m) for _ in range(palette + 1)]   # [color][pos]
        self._colored_sorted: list[int] = []                      # all colored positions
        self._by_color: dict[int, list[int]] = {}                 # color -> sorted positions
        self._first_free = 0

    # -- queries ------------------------------------------------------------

    def is_uncolored(self, pos: int) -> bool:
        return self.colors[pos] is None

    def first_uncolored(self) -> int | None:
        """Lowest uncolored position, via a monotone cursor."""
        while self._first_free < self.m and self.colors[self._first_free] is not None:
            self._first_free += 1
        return self._first_free if self._first_free < self.m else None

    def forbidden_at(self, pos: int, color: int) -> bool:
        return bool(self._forb[color][pos])

    def available_colors(self, pos: int) -> set[int]:
        """Palette colors not forbidden at pos, plus the wildcard."""
        if self.colors[pos] is not None:
            raise IllegalAssign(f"position {pos} already colored")
        out = {c for c in range(1, self.palette + 1) if not self._forb[c][pos]}
        out.add(WILD)
        return out

    def colored_in(self, interval: ChainInterval, color: int) -> bool:
        from bisect import bisect_left, bisect_right

        positions = self._by_color.get(color)
        if not positions or interval.is_empty:
            return False
        return bisect_right(positions, interval.hi) > bisect_left(positions, interval.lo)

    def uncolored_in(self, interval: ChainInterval) -> int:
        from bisect import bisect_left, bisect_right

        if interval.is_empty:
            return 0
        colored = (bisect_right(self._colored_sorted, interval.hi)
                   - bisect_left(self._colored_sorted, interval.lo))
        return len(interval) - colored

    # -- moves ---------------------------------------------------------------

    def assign(self, pos: int, color: int) -> None:
        """Scenario-1-style coloring (also used for Painter replies)."""
        from bisect import insort

        if not (0 <= pos < self.m):
            raise IllegalAssign(f"position {pos} out of range")
        if self.colors[pos] is not None:
            raise IllegalAssign(f"position {pos} already colored")
        if color != WILD:
            if not (1 <= color <= self.palette):
                raise IllegalAssign(f"color {color} outside the palette")
            if self._forb[color][pos]:
                raise IllegalAssign(f"color {color} is forbidden at {pos}")
        self.colors[pos] = color
        self.uncolored -= 1
        insort(self._colored_sorted, pos)
        insort(self._by_color.setdefault(color, []), pos)

    def present(self, interval: ChainInterval, forbidden: int) -> PresentRecord:
        if interval.is_empty:
            raise IllegalPresent("cannot present an empty interval")
        if not (0 <= interval.lo and interval.hi < self.m):
            raise IllegalPresent(f"interval [{interval.lo},{interval.hi}] out of range")
        if not (1 <= forbidden <= self.palette):
            raise IllegalPresent(f"forbidden color {forbidden} outside the palette")
        if self.family is not None and interval not in self.family:
            raise IllegalPresent(f"interval [{interval.lo},{interval.hi}] not in the family")
        if self.colored_in(interval, forbidden):
            raise IllegalPresent(
                f"color {forbidden} already on a point of [{interval.lo},{interval.hi}]")
        record = PresentRecord(interval, forbidden, len(self.presented))
        self.presented.append(record)
        row = self._forb[forbidden]
        for p in interval.positions():
            row[p] = 1
        return record

    def finished(self) -> bool:
        return self.uncolored == 0


# ---------------------------------------------------------------------------
# Painter.


class BasePainter:
    """Depth-1 painter: single color, empty family expected."""

    def __init__(self, game: IntervalGame):
        if game.palette != 1:
            raise ValueError("base painter needs a 1-color palette")
        self.game = game
        self.passed: list[tuple[ChainInterval, int]] = []

    def observe_assign(self, pos: int, color: int) -> None:
        pass

    def on_present(self, record: PresentRecord):
        raise StrategyStuck(
            "presentation in a depth-1 game: the family must be nesting-free")

    def on_ask(self, pos: int) -> int:
        if self.game.forbidden_at(pos, 1):
            raise StrategyStuck("single color forbidden at an asked position")
        self.game.assign(pos, 1)
        return 1

    def check_invariant(self, family=None) -> None:
        pass


class RecursivePainter:
    """Palette-splitting painter for nesting depth < levels.

    Splits each color into (half, bit); an interval presented with forbidden
    (half, bit) either receives up to two sealing points of color (half,
    1-bit) (placed at the extremal colorable positions, which walls off every
    interval that could strand an uncolored point), or, when a strictly
    enclosing interval already forbade the complementary color, is passed to
    the embedded game with forbidden color `half`.
    """

    def __init__(self, levels: int, game: IntervalGame):
        if levels < 1:
            raise ValueError("levels must be >= 1")
        if game.palette != 2 ** (levels - 1):
            raise ValueError(f"palette {game.palette} != 2^{levels - 1}")
        self.levels = levels
        self.game = game
        self.passed: list[tuple[ChainInterval, int]] = []
        self.telemetry = {"fallback_used": 0, "seals": 0, "passes": 0}
        if levels == 1:
            self._base = BasePainter(game)
            self.inner = None
        else:
            self._base = None
            self.inner_game = IntervalGame(game.m, 2 ** (levels - 2))
            self.inner = (RecursivePainter(levels - 1, self.inner_game)
                          if levels > 2 else BasePainter(self.inner_game))

    # -- scenario 1 ----------------------------------------------------------

    def observe_assign(self, pos: int, color: int) -> None:
        if self._base is not None:
            return
        mirrored = WILD if color == WILD else split_color(color)[0]
        self.inner_game.assign(pos, mirrored)
        self.inner.observe_assign(pos, mirrored)

    # -- scenario 2 ----------------------------------------------------------

    def on_present(self, record: PresentRecord) -> list[tuple[int, int]]:
        if self._base is not None:
            return self._base.on_present(record)
        interval, (i, j) = record.interval, split_color(record.forbidden)
        encloser = any(
            nests_inside(interval, r.interval) and split_color(r.forbidden) == (i, 1 - j)
            for r in self.game.presented if r.serial != record.serial)
        if encloser:
            return self._pass_down(interval, i)
        return self._seal(interval, i, j)

    def _seal(self, interval: ChainInterval, i: int, j: int) -> list[tuple[int, int]]:
        seal_color = join_color(i, 1 - j)
        candidates = [p for p in interval.positions()
                      if self.game.is_uncolored(p)
                      and not self.game.forbidden_at(p, seal_color)]
        picks: list[int]
        if not candidates:
            picks = []
        elif candidates[0] == candidates[-1]:
            picks = [candidates[0]]
        else:
            picks = [candidates[0], candidates[-1]]
        if not self._seal_ok(interval, i, picks):
            self.telemetry["fallback_used"] += 1
            picks = self._seal_fallback(interval, i, candidates)
        for p in picks:
            self.game.assign(p, seal_color)
            self.inner_game.assign(p, WILD)
            self.inner.observe_assign(p, WILD)
        self.telemetry["seals"] += 1
        return [(p, seal_color) for p in picks]

    def _seal_fallback(self, interval: ChainInterval, i: int,
                       candidates: list[int]) -> list[int]:
        from itertools import combinations

        options: list[list[int]] = [list(pair) for pair in combinations(candidates, 2)]
        options.extend([p] for p in candidates)
        options.append([])
        for picks in options:
            if self._seal_ok(interval, i, picks):
                return picks
        raise StrategyStuck(
            f"no <=2-point seal of [{interval.lo},{interval.hi}] "
            f"preserves the invariant for half-color {i}")

    def _seal_ok(self, new_interval: ChainInterval, i: int, picks: list[int]) -> bool:
        """Would the invariant survive presenting new_interval given the seal?

        Checked against the presented intervals plus the explicit family when
        one exists.  Unpresented intervals of a lazy family are protected by
        the extremal seal itself: an interval avoiding both seal points with
        an uncolored position between them nests strictly inside.
        """
        picks_set = set(picks)
        others = [r.interval for r in self.game.presented] + [new_interval]
        if self.game.family is not None:
            others = others + self.game.family
        seen = set()
        for cand in others:
            key = (cand.lo, cand.hi)
            if key in seen or cand.is_empty:
                continue
            seen.add(key)
            if nests_inside(cand, new_interval):
                continue
            if self._interval_has_pair_color(cand, i, picks_set):
                continue
            if (cand, i) in self.passed:
                continue
            uncolored = self.game.uncolored_in(
                ChainInterval(max(cand.lo, new_interval.lo), min(cand.hi, new_interval.hi)))
            uncolored -= sum(1 for p in picks_set
                             if cand.lo <= p <= cand.hi and new_interval.lo <= p <= new_interval.hi)
            if uncolored > 0:
                return False
        return True

    def _interval_has_pair_color(self, interval: ChainInterval, i: int,
                                 extra: set[int] = frozenset()) -> bool:
        if any(interval.lo <= p <= interval.hi for p in extra):
            return True
        return (self.game.colored_in(interval, join_color(i, 0))
                or self.game.colored_in(interval, join_color(i, 1)))

    def _pass_down(self, interval: ChainInterval, i: int) -> list[tuple[int, int]]:
        inner_record = self.inner_game.present(interval, i)
        self.passed.append((interval, i))
        self._assert_passed_depth()
        replies = self.inner.on_present(inner_record)
        out = [(pos, self._lift(pos, half)) for pos, half in replies]
        self.telemetry["passes"] += 1
        return out

    def _lift(self, pos: int, half: int) -> int:
        """Color pos in the outer game consistently with inner color `half`."""
        for j in (1, 0):
            c = join_color(half, j)
            if not self.game.forbidden_at(pos, c):
                self.game.assign(pos, c)
                return c
        raise StrategyStuck(
            f"both colors of half {half} forbidden at {pos}: invariant broken")

    def _assert_passed_depth(self) -> None:
        depth = nested_depth([iv for iv, _ in self.passed])
        if depth > max(0, self.levels - 2):
            raise StrategyStuck(
                f"passed family reached nesting depth {depth} in a "
                f"{self.levels}-level game")

    # -- scenario 3 ----------------------------------------------------------

    def on_ask(self, pos: int) -> int:
        if self._base is not None:
            return self._base.on_ask(pos)
        half = self.inner.on_ask(pos)
        return self._lift(pos, half)

    # -- verification ----------------------------------------------------------

    def check_invariant(self, family: list[ChainInterval] | None = None) -> None:
        """Direct quantification of the blocking invariant; raises on violation.

        For every presented J with forbidden (i,j) and every interval I of the
        family (or presented) with no (i,*)-colored points: either I∩J has no
        uncolored points, or I nests strictly inside J — and when such an I was
        itself presented with forbidden (i,1-j), it must have been passed down.
        """
        pool: list[ChainInterval] = [r.interval for r in self.game.presented]
        if family is not None:
            pool = pool + list(family)
        elif self.game.family is not None:
            pool = pool + self.game.family
        seen = set()
        intervals = []
        for iv in pool:
            key = (iv.lo, iv.hi)
            if key not in seen and not iv.is_empty:
                seen.add(key)
                intervals.append(iv)
        for rec in self.game.presented:
            J, (i, j) = rec.interval, split_color(rec.forbidden)
            for I in intervals:
                if self._interval_has_pair_color(I, i):
                    continue
                overlap = ChainInterval(max(I.lo, J.lo), min(I.hi, J.hi))
                if self.game.uncolored_in(overlap) == 0:
                    continue
                if (I, i) in self.passed:
                    continue
                if not nests_inside(I, J):
                    raise StrategyStuck(
                        f"invariant broken: [{I.lo},{I.hi}] vs presented "
                        f"[{J.lo},{J.hi}] forbidding {rec.forbidden}")
                presented_complement = any(
                    r.interval == I and split_color(r.forbidden) == (i, 1 - j)
                    for r in self.game.presented)
                if presented_complement:
                    raise StrategyStuck(
                        f"pass clause broken: [{I.lo},{I.hi}] with half {i}")
        if self.inner is not None and not isinstance(self.inner, BasePainter):
            self.inner.check_invariant([iv for iv, _ in self.passed])


def make_painter(levels: int, game: IntervalGame):
    return BasePainter(game) if levels == 1 else RecursivePainter(levels, game)


# ---------------------------------------------------------------------------
# Presenter adversaries and the fuzz driver.


class PresenterFuzzer:
    """Random legal scenario-1/2/3 actions, seed-deterministic; skews toward
    scenario 3 as the chain fills so games terminate."""

    def __init__(self, seed: int, mix: tuple[float, float, float] = (0.3, 0.4, 0.3)):
        self.rng = Random(seed)
        self.mix = mix

    def act(self, game: IntervalGame):
        """Return ("assign", pos, color) | ("present", interval, f) | ("ask", pos)."""
        uncolored = [p for p in range(game.m) if game.is_uncolored(p)]
        if not uncolored:
            return None
        w1, w2, w3 = self.mix
        if game.uncolored <= max(2, game.m // 5):
            w3 += 1.0
        if not game.family:
            w2 = 0.0
        for _ in range(20):
            r = self.rng.random() * (w1 + w2 + w3)
            if r < w1:
                pos = self.rng.choice(uncolored)
                color = self.rng.choice(sorted(game.available_colors(pos)))
                return ("assign", pos, color)
            if r < w1 + w2:
                options = [(iv, f) for iv in game.family
                           for f in range(1, game.palette + 1)
                           if not game.colored_in(iv, f)]
                if not options:
                    continue
                iv, f = options[self.rng.randrange(len(options))]
                return ("present", iv, f)
            return ("ask", self.rng.choice(uncolored))
        return ("ask", self.rng.choice(uncolored))


def run_interval_game(game: IntervalGame, painter, presenter,
                      max_actions: int | None = None,
                      check_every: int = 0) -> dict:
    """Drive a full game.  Returns a result dict with the winner and stats.

    With check_every > 0 the painter's invariant is verified after every
    check_every-th action (and at the end).
    """
    actions = 0
    limit = max_actions if max_actions is not None else 50 * (game.m + 5)
    log = []
    while not game.finished():
        action = presenter.act(game)
        if action is None:
            break
        actions += 1
        if actions > limit:
            raise StrategyStuck("presenter exceeded the action budget")
        log.append(action)
        kind = action[0]
        if kind == "assign":
            _, pos, color = action
            game.assign(pos, color)
            painter.observe_assign(pos, color)
        elif kind == "present":
            _, iv, f = action
            record = game.present(iv, f)
            replies = painter.on_present(record)
            if len(replies) > 2:
                raise StrategyStuck("painter colored more than 2 points")
        else:
            _, pos = action
            if not (game.available_colors(pos) - {WILD}):
                return {"winner": "presenter", "actions": actions, "log": log}
            color = painter.on_ask(pos)
            if color == WILD:
                raise StrategyStuck("painter answered an ask with the wildcard")
        if check_every and (actions % check_every == 0 or game.finished()):
            painter.check_invariant()
    return {"winner": "painter", "actions": actions, "log": log,
            "telemetry": getattr(painter, "telemetry", {})}


def random_nested_family(rng: Random, m: int, max_depth: int,
                         count: int | None = None) -> list[ChainInterval]:
    """Random interval family with nesting depth <= max_depth (greedy filter)."""
    if count is None:
        count = rng.randrange(0, max(1, m))
    family: list[ChainInterval] = []
    for _ in range(count * 3):
        if len(family) >= count:
            break
        lo = rng.randrange(m)
        hi = rng.randrange(lo, m)
        iv = ChainInterval(lo, hi)
        if any(iv == other for other in family):
            continue
        if nested_depth(family + [iv]) <= max_depth:
            family.append(iv)
    return family
