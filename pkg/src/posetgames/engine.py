"""Rule engines for the (a,b)-coloring, (a,b)-Grundy and (a,b)-marking games
played directly on a poset: color classes must be chains.

Two round modes:

* ``standard``: Alice moves first, exact quotas (a moves for Alice then b for
  Bob each round).  A player whose quota exceeds the available legal moves
  simply stops; if uncolored points remain when nobody can move, Bob wins.
  Completing the coloring mid-turn is an immediate Alice win.
* ``auxiliary``: Bob moves first with exact quota b, Alice replies with any
  number of moves between 0 and a (an explicit pass ends her reply).

Legality never depends on who is moving, which keeps the endgame rule simple:
the coloring game is over exactly when all points are colored (Alice wins) or
no legal move exists at all (Bob wins).

Color-class membership tests ride on the chain invariant: a class is totally
ordered, so "x comparable to every member" reduces to a binary search plus two
neighbour checks, O(log) per query even on 10^5-point posets.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from random import Random

from .poset import Poset, PosetError

COLORING = "coloring"
GRUNDY = "grundy"
MARKING = "marking"
STANDARD = "standard"
AUXILIARY = "auxiliary"
ALICE = "alice"
BOB = "bob"


class IllegalMove(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class AgentProtocolError(Exception):
    pass


@dataclass(frozen=True)
class GameConfig:
    variant: str = COLORING
    a: int = 1
    b: int = 1
    k: int = 0          # palette size, coloring only
    mode: str = STANDARD

    def __post_init__(self):
        if self.variant not in (COLORING, GRUNDY, MARKING):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.mode not in (STANDARD, AUXILIARY):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.a < 0 or self.b < 0 or self.a + self.b < 1:
            raise ValueError("need a >= 0, b >= 0, a + b >= 1")
        if self.variant == COLORING and self.k < 1:
            raise ValueError("coloring variant needs a palette size k >= 1")
        if self.mode == AUXILIARY and self.b < 1:
            raise ValueError("auxiliary mode needs b >= 1 (Bob moves first)")

    def to_json_dict(self) -> dict:
        return {"variant": self.variant, "a": self.a, "b": self.b,
                "k": self.k, "mode": self.mode}

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameConfig":
        return cls(**d)


@dataclass(frozen=True)
class Move:
    kind: str                  # "color" | "choose" | "mark" | "pass"
    x: int | None = None
    color: int | None = None

    @classmethod
    def color_point(cls, x: int, color: int) -> "Move":
        return cls("color", x, color)

    @classmethod
    def choose_point(cls, x: int) -> "Move":
        return cls("choose", x)

    @classmethod
    def mark_point(cls, x: int) -> "Move":
        return cls("mark", x)

    @classmethod
    def pass_move(cls) -> "Move":
        return cls("pass")

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.x is not None:
            d["x"] = self.x
        if self.color is not None:
            d["color"] = self.color
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "Move":
        return cls(d["kind"], d.get("x"), d.get("color"))


@dataclass
class MoveRecord:
    actor: str
    move: Move
    round_no: int


class GameState:
    """Evolving position of one match.  Confined to one execution context;
    use copy() for tree search."""

    def __init__(self, poset: Poset, config: GameConfig):
        self.poset = poset
        self.config = config
        self.colors = [0] * poset.n          # 0 = uncolored / unchosen / unmarked
        self.classes: dict[int, list[int]] = {}
        self.uncolored = poset.n
        self.round_no = 1
        self.entries: list[MoveRecord] = []
        self.max_color_used = 0
        self.max_backdeg = 0
        self.backdeg_at_mark: dict[int, int] = {}
        self.over = False                     # set when verified no legal move exists
        if config.mode == STANDARD:
            self.mover, self.moves_left = ALICE, config.a
            if config.a == 0:
                self.mover, self.moves_left = BOB, config.b
        else:
            self.mover, self.moves_left = BOB, config.b

    # -- chain-class machinery -------------------------------------------

    def _class_slot(self, color: int, x: int) -> int | None:
        """Insertion index of x into the class chain, or None on conflict."""
        chain = self.classes.get(color)
        if not chain:
            return 0
        lt = self.poset.lt
        lo, hi = 0, len(chain)
        while lo < hi:
            mid = (lo + hi) // 2
            if lt(x, chain[mid]):
                hi = mid
            elif lt(chain[mid], x):
                lo = mid + 1
            else:
                return None
        if lo > 0 and not lt(chain[lo - 1], x):
            return None
        if lo < len(chain) and not lt(x, chain[lo]):
            return None
        return lo

    def color_legal(self, x: int, color: int) -> bool:
        if self.colors[x] != 0 or color < 1:
            return False
        if self.config.variant == COLORING and color > self.config.k:
            return False
        return self._class_slot(color, x) is not None

    def first_fit_color(self, x: int) -> int:
        """Least positive color absent among the points incomparable to x."""
        color = 1
        while self._class_slot(color, x) is None:
            color += 1
        return color

    def available_colors(self, x: int) -> list[int]:
        k = self.config.k if self.config.variant == COLORING else self.poset.n
        return [c for c in range(1, k + 1) if self._class_slot(c, x) is not None]

    # -- rules -------------------------------------------------------------

    def legal_moves(self) -> list[Move]:
        """Full enumeration; meant for the solver and small posets."""
        if self.poset.n > 4000:
            raise PosetError("legal_moves enumeration refused beyond 4000 points")
        out: list[Move] = []
        if self.config.variant == COLORING:
            for x in range(self.poset.n):
                if self.colors[x] == 0:
                    out.extend(Move.color_point(x, c) for c in self.available_colors(x))
        elif self.config.variant == GRUNDY:
            out = [Move.choose_point(x) for x in range(self.poset.n) if self.colors[x] == 0]
        else:
            out = [Move.mark_point(x) for x in range(self.poset.n) if self.colors[x] == 0]
        if self.config.mode == AUXILIARY and self.mover == ALICE:
            out.append(Move.pass_move())
        return out

    def exists_legal_move(self) -> bool:
        if self.uncolored == 0:
            return False
        if self.config.variant != COLORING:
            return True
        return any(
            self.colors[x] == 0 and any(
                self._class_slot(c, x) is not None for c in range(1, self.config.k + 1))
            for x in range(self.poset.n))

    def blocked_uncolored(self, points) -> bool:
        """True iff every given point is uncolored with an empty color set."""
        pts = list(points)
        if not pts:
            return False
        for x in pts:
            if self.colors[x] != 0:
                return False
            if any(self._class_slot(c, x) is not None
                   for c in range(1, self.config.k + 1)):
                return False
        return True

    def apply_move(self, actor: str, move: Move) -> "GameState":
        if self.over or self.uncolored == 0:
            raise IllegalMove("game is over")
        if actor != self.mover:
            raise IllegalMove(f"wrong turn: {actor} moved on {self.mover}'s turn")
        if self.moves_left <= 0:
            raise IllegalMove("quota exhausted")
        variant = self.config.variant
        if move.kind == "pass":
            if not (self.config.mode == AUXILIARY and actor == ALICE):
                raise IllegalMove("bad pass: only the auxiliary-mode replier may pass")
            self.entries.append(MoveRecord(actor, move, self.round_no))
            self.moves_left = 0
            self._advance()
            return self
        if move.kind == "color":
            if variant != COLORING:
                raise IllegalMove(f"color move in {variant} game")
            slot = None
            if self.colors[move.x] == 0 and 1 <= move.color <= self.config.k:
                slot = self._class_slot(move.color, move.x)
            if slot is None:
                raise IllegalMove(f"conflict: color {move.color} illegal on {move.x}")
            self._place(move.x, move.color, slot)
        elif move.kind == "choose":
            if variant != GRUNDY:
                raise IllegalMove(f"choose move in {variant} game")
            if self.colors[move.x] != 0:
                raise IllegalMove(f"point {move.x} already chosen")
            color = self.first_fit_color(move.x)
            self._place(move.x, color, self._class_slot(color, move.x))
            move = Move("choose", move.x, color)   # record the forced color
        elif move.kind == "mark":
            if variant != MARKING:
                raise IllegalMove(f"mark move in {variant} game")
            if self.colors[move.x] != 0:
                raise IllegalMove(f"point {move.x} already marked")
            deg = sum(1 for y, c in enumerate(self.colors)
                      if c != 0 and self.poset.incomparable(move.x, y))
            self.colors[move.x] = 1
            self.uncolored -= 1
            self.backdeg_at_mark[move.x] = deg
            self.max_backdeg = max(self.max_backdeg, deg)
        else:
            raise IllegalMove(f"unknown move kind {move.kind!r}")
        self.entries.append(MoveRecord(actor, move, self.round_no))
        self.moves_left -= 1
        if self.moves_left == 0:
            self._advance()
        return self

    def _place(self, x: int, color: int, slot: int) -> None:
        self.colors[x] = color
        self.classes.setdefault(color, []).insert(slot, x)
        self.uncolored -= 1
        self.max_color_used = max(self.max_color_used, color)

    def _advance(self) -> None:
        cfg = self.config
        if cfg.mode == STANDARD:
            if self.mover == ALICE:
                self.mover, self.moves_left = BOB, cfg.b
                if cfg.b == 0:
                    self.round_no += 1
                    self.mover, self.moves_left = ALICE, cfg.a
            else:
                self.round_no += 1
                self.mover, self.moves_left = ALICE, cfg.a
                if cfg.a == 0:
                    self.mover, self.moves_left = BOB, cfg.b
        else:
            if self.mover == BOB:
                self.mover, self.moves_left = ALICE, cfg.a
                if cfg.a == 0:
                    self.round_no += 1
                    self.mover, self.moves_left = BOB, cfg.b
            else:
                self.round_no += 1
                self.mover, self.moves_left = BOB, cfg.b

    def end_turn_stuck(self) -> None:
        """The mover has no legal move: stop the turn; end the game if nobody
        can move (legality is player-independent, so one check settles it)."""
        if self.exists_legal_move():
            raise IllegalMove("turn ended while legal moves exist")
        self.over = True

    def outcome(self):
        variant = self.config.variant
        if variant == COLORING:
            if self.uncolored == 0:
                return "alice"
            if self.over:
                return "bob"
            return "ongoing"
        if self.uncolored > 0:
            return "ongoing"
        if variant == GRUNDY:
            return ("value", self.max_color_used)
        return ("value", 1 + self.max_backdeg)

    def copy(self) -> "GameState":
        new = object.__new__(GameState)
        new.poset = self.poset
        new.config = self.config
        new.colors = list(self.colors)
        new.classes = {c: list(ch) for c, ch in self.classes.items()}
        new.uncolored = self.uncolored
        new.round_no = self.round_no
        new.entries = list(self.entries)
        new.max_color_used = self.max_color_used
        new.max_backdeg = self.max_backdeg
        new.backdeg_at_mark = dict(self.backdeg_at_mark)
        new.over = self.over
        new.mover = self.mover
        new.moves_left = self.moves_left
        return new

    def check_chain_classes(self) -> None:
        """Debug assertion: every color class is a chain."""
        for color, chain in self.classes.items():
            for i in range(len(chain) - 1):
                if not self.poset.lt(chain[i], chain[i + 1]):
                    raise PosetError(f"class {color} is not an ascending chain")


# ---------------------------------------------------------------------------
# Transcripts.


@dataclass
class Transcript:
    config: GameConfig
    poset_fingerprint: str
    seed: int
    entries: list[MoveRecord] = field(default_factory=list)
    outcome: str | tuple = "ongoing"
    decided_early: bool = False
    stats: dict = field(default_factory=dict)
    annotations: list[dict] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps({
            "config": self.config.to_json_dict(),
            "poset": self.poset_fingerprint,
            "seed": self.seed,
            "outcome": list(self.outcome) if isinstance(self.outcome, tuple) else self.outcome,
            "decided_early": self.decided_early,
            "stats": self.stats,
        }, sort_keys=True)]
        lines.extend(json.dumps({
            "actor": r.actor, "move": r.move.to_json_dict(), "roundNo": r.round_no,
        }, sort_keys=True) for r in self.entries)
        lines.extend(json.dumps({"annotation": a}, sort_keys=True)
                     for a in self.annotations)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        lines = [json.loads(l) for l in text.splitlines() if l.strip()]
        head = lines[0]
        outcome = head["outcome"]
        if isinstance(outcome, list):
            outcome = tuple(outcome)
        t = cls(GameConfig.from_json_dict(head["config"]), head["poset"], head["seed"],
                outcome=outcome, decided_early=head.get("decided_early", False),
                stats=head.get("stats", {}))
        for row in lines[1:]:
            if "annotation" in row:
                t.annotations.append(row["annotation"])
            else:
                t.entries.append(MoveRecord(
                    row["actor"], Move.from_json_dict(row["move"]), row["roundNo"]))
        return t

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_jsonl().encode()).hexdigest()[:16]


def replay(poset: Poset, transcript: Transcript) -> GameState:
    """Re-run every recorded move through the rules; raises on any illegality."""
    state = GameState(poset, transcript.config)
    for rec in transcript.entries:
        move = rec.move
        if move.kind == "choose":
            move = Move.choose_point(move.x)
        state.apply_move(rec.actor, move)
    return state


# ---------------------------------------------------------------------------
# Match driver.


def play_match(poset: Poset, config: GameConfig, alice, bob, seed: int = 0,
               stop_when_decided: bool = False, max_rounds: int | None = None,
               collect_annotations: bool = False) -> Transcript:
    """Drive a match to completion (or to a verified early decision).

    Every agent-proposed move goes through apply_move, so an illegal proposal
    raises AgentProtocolError.  Agents are reset with seeds derived from
    (seed, role), making the transcript a pure function of its inputs.
    """
    state = GameState(poset, config)
    agents = {ALICE: alice, BOB: bob}
    for role, agent in agents.items():
        agent.reset(poset, config, Random(seed * 2 + (role == BOB)).randrange(2 ** 30))
    transcript = Transcript(config, poset.fingerprint(), seed)
    state.entries = transcript.entries

    while True:
        if state.uncolored == 0 or state.over:
            break
        if max_rounds is not None and state.round_no > max_rounds:
            break
        agent = agents[state.mover]
        move = agent.propose(state)
        if move is None:
            state.end_turn_stuck()   # verifies the claim, raises if moves exist
            continue
        try:
            state.apply_move(state.mover, move)
        except IllegalMove as exc:
            raise AgentProtocolError(
                f"{agent.__class__.__name__} proposed an illegal move: {exc}") from exc
        if stop_when_decided:
            for role, candidate in agents.items():
                evidence = getattr(candidate, "decided_win", lambda s: None)(state)
                if evidence is None:
                    continue
                kind, payload = evidence
                if kind == "blocked" and state.blocked_uncolored(payload):
                    transcript.outcome = "bob"
                    transcript.decided_early = True
                elif kind == "value" and state.max_color_used >= payload:
                    transcript.outcome = ("value", state.max_color_used)
                    transcript.decided_early = True
                if transcript.decided_early:
                    break
            if transcript.decided_early:
                break
        if collect_annotations:
            note = getattr(agent, "pop_annotations", None)
            if note:
                transcript.annotations.extend(note())

    if not transcript.decided_early:
        transcript.outcome = state.outcome()
    transcript.stats = {
        "colors_used": state.max_color_used,
        "max_backdeg": state.max_backdeg,
        "moves": len(transcript.entries),
        "rounds": state.round_no,
        "uncolored": state.uncolored,
    }
    return transcript


# ---------------------------------------------------------------------------
# Straight-line first-fit: the independent oracle the game variants are
# checked against (no GameState involved).


def first_fit_sequence(poset: Poset, order, inc_lists: list[list[int]] | None = None):
    """First-fit colors along the given processing order.

    Returns (colors dict, max color).  inc_lists may be precomputed when many
    orders are evaluated on the same poset.
    """
    if inc_lists is None:
        inc_lists = [sorted(poset.incomparables(x)) for x in range(poset.n)]
    colors: dict[int, int] = {}
    top = 0
    for x in order:
        used = {colors[y] for y in inc_lists[x] if y in colors}
        c = 1
        while c in used:
            c += 1
        colors[x] = c
        top = max(top, c)
    return colors, top
