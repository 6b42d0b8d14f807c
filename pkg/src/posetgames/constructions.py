"""Generators for the adversarial chain posets used by the scripted strategies.

Every generator returns ``(poset, ConstructionMeta)``; the metadata maps point
ids to construction roles (base-chain position, side-chain duplicate with its
assigned base interval, copy index for stacks) and is what the scripted
strategies consume instead of re-deriving structure from the raw order.

All side chains are realized through one device: a base chain of length m and,
per side chain, an ordered list of base intervals with both endpoints
nondecreasing along the list (the unique shape, up to reversal, that makes the
side points form a chain).  Cross-relations between side chains of different
intervals: comparable iff the intervals are strictly separated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .poset import (
    ChainInterval,
    DensePoset,
    Poset,
    PosetError,
    SidePoint,
    StackedPoset,
    StructuredPoset,
)


@dataclass
class MonotoneChainSpec:
    """One side chain: ordered (lo, hi, multiplicity) interval entries.

    Both endpoints must be nondecreasing along the list, otherwise the side
    points would not form a chain.
    """

    entries: list[tuple[int, int, int]]

    def validate(self, m: int) -> None:
        if not self.entries:
            raise PosetError("side chain spec has no entries")
        prev_lo, prev_hi = -1, -1
        for lo, hi, mult in self.entries:
            if not (0 <= lo <= hi < m):
                raise PosetError(f"interval [{lo},{hi}] outside base chain 0..{m-1}")
            if mult < 1:
                raise PosetError(f"multiplicity {mult} < 1")
            if lo < prev_lo or hi < prev_hi:
                raise PosetError(
                    f"monotonicity violation: [{lo},{hi}] after [{prev_lo},{prev_hi}]")
            prev_lo, prev_hi = lo, hi

    def expanded(self) -> list[tuple[int, int]]:
        out = []
        for lo, hi, mult in self.entries:
            out.extend([(lo, hi)] * mult)
        return out


@dataclass
class ConstructionMeta:
    """Role map for a generated poset, consumed by the scripted strategies."""

    kind: str
    params: dict
    m: int = 0                                  # base chain length
    base_ids: list[int] = field(default_factory=list)
    # per side chain: list of (point id, lo, hi) ascending along the chain
    side: list[list[tuple[int, int, int]]] = field(default_factory=list)
    # stacks only
    copies: int = 0
    inner: "ConstructionMeta | None" = None

    def interval_of(self, pid: int) -> ChainInterval | None:
        for chain in self.side:
            for qid, lo, hi in chain:
                if qid == pid:
                    return ChainInterval(lo, hi)
        return None

    def duplicates(self, chain_idx: int, lo: int, hi: int) -> list[int]:
        """Ids of side-chain points assigned exactly the interval [lo, hi]."""
        return [pid for pid, a, b in self.side[chain_idx] if a == lo and b == hi]

    def side_ids(self, chain_idx: int) -> list[int]:
        return [pid for pid, _, _ in self.side[chain_idx]]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "m": self.m,
            "base_ids": self.base_ids,
            "side": [[list(t) for t in chain] for chain in self.side],
            "copies": self.copies,
            "inner": self.inner.to_json_dict() if self.inner else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConstructionMeta":
        inner = data.get("inner")
        return cls(
            kind=data["kind"],
            params=data["params"],
            m=data["m"],
            base_ids=list(data["base_ids"]),
            side=[[tuple(t) for t in chain] for chain in data["side"]],
            copies=data.get("copies", 0),
            inner=cls.from_json_dict(inner) if inner else None,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConstructionMeta":
        return cls.from_json_dict(json.loads(text))


def monotone_chain_poset(m: int, specs: list[MonotoneChainSpec],
                         kind: str = "monotone", params: dict | None = None,
                         width_hint: int | None = None):
    """Base chain of length m plus one side chain per spec.

    Returns (StructuredPoset, ConstructionMeta).  Labels record the roles.
    """
    if m < 1:
        raise PosetError("base chain must have at least one point")
    side_points: list[SidePoint] = []
    meta = ConstructionMeta(kind=kind, params=params or {}, m=m,
                            base_ids=list(range(m)), side=[])
    labels = {i: f"C:{i}" for i in range(m)}
    next_id = m
    for c, spec in enumerate(specs, start=1):
        spec.validate(m)
        chain_meta = []
        for idx, (lo, hi) in enumerate(spec.expanded()):
            side_points.append(SidePoint(chain=c, index=idx, lo=lo, hi=hi))
            labels[next_id] = f"C{c}:{idx}:[{lo},{hi}]"
            chain_meta.append((next_id, lo, hi))
            next_id += 1
        meta.side.append(chain_meta)
    poset = StructuredPoset(m, side_points, labels=labels, width_hint=width_hint)
    return poset, meta


def boundary_intervals(m: int) -> list[tuple[int, int]]:
    """All intervals of 0..m-1 containing position 0 or position m-1,
    in the unique order with both endpoints nondecreasing:
    prefixes [0,j] ascending, then suffixes [i,m-1] with i >= 1 ascending.
    """
    out = [(0, j) for j in range(m)]
    out.extend((i, m - 1) for i in range(1, m))
    return out


def boundary_interval_poset(k: int, m: int | None = None):
    """Two chains: base C of length m and a side chain holding, for every
    boundary interval I of C, 2k consecutive points incomparable exactly to I.

    Default m = 2^(k+2), enough headroom for the region-trap strategy to
    survive k rounds of halving.  Width is 2 by construction.
    """
    if k < 1:
        raise PosetError("k must be >= 1")
    if m is None:
        m = 2 ** (k + 2)
    if m < 2:
        raise PosetError("base chain needs at least 2 points")
    entries = [(lo, hi, 2 * k) for lo, hi in boundary_intervals(m)]
    poset, meta = monotone_chain_poset(
        m, [MonotoneChainSpec(entries)],
        kind="boundary_interval", params={"k": k, "m": m}, width_hint=2)
    return poset, meta


def sliding_window_poset(a: int, w: int, k: int,
                         sizes: list[int] | None = None, m: int | None = None):
    """Base chain plus w-1 side chains; side chain i holds, for every interval
    of C of size sizes[i], (a+1)*k consecutive points incomparable exactly to
    it, windows ascending by position.

    Sizes must be strictly descending.  Defaults: sizes[w-2] = (a+1)*k,
    sizes[i] = 64*sizes[i+1], m = 4*sizes[0]; geometric headroom for the
    phased trap strategy, which asserts its invariants every round and fails
    loudly if the sizing is too tight.
    """
    if a < 2 or w < 2 or k < 1:
        raise PosetError("need a >= 2, w >= 2, k >= 1")
    if sizes is None:
        sizes = [0] * (w - 1)
        sizes[-1] = (a + 1) * k
        for i in range(w - 3, -1, -1):
            sizes[i] = 64 * sizes[i + 1]
    if len(sizes) != w - 1:
        raise PosetError(f"need {w-1} window sizes, got {len(sizes)}")
    if any(sizes[i] <= sizes[i + 1] for i in range(len(sizes) - 1)) or sizes[-1] < 1:
        raise PosetError("window sizes must be strictly descending and >= 1")
    if m is None:
        m = 4 * sizes[0]
    if m < sizes[0]:
        raise PosetError("base chain shorter than the largest window")
    mult = (a + 1) * k
    specs = []
    for size in sizes:
        entries = [(j, j + size - 1, mult) for j in range(m - size + 1)]
        specs.append(MonotoneChainSpec(entries))
    poset, meta = monotone_chain_poset(
        m, specs, kind="sliding_window",
        params={"a": a, "w": w, "k": k, "sizes": list(sizes), "m": m},
        width_hint=w)
    return poset, meta


def stack_copies(inner: Poset, n: int, inner_meta: ConstructionMeta | None = None):
    """n copies of a poset, every point of copy i below every point of copy j
    for i < j.  Width is preserved."""
    if n < 1:
        raise PosetError("need at least one copy")
    labels = {}
    for c in range(n):
        for p in range(inner.n):
            base = inner.labels.get(p, str(p))
            labels[c * inner.n + p] = f"copy{c}:{base}"
    poset = StackedPoset(inner, n, labels=labels)
    meta = ConstructionMeta(
        kind="stack", params={"n": n, "inner_n": inner.n},
        copies=n, inner=inner_meta)
    return poset, meta


def fence_poset() -> DensePoset:
    """The fixed 10-point poset with r_i < r_j iff i+1 < j: its
    incomparability graph is the path r0 - r1 - ... - r9."""
    n = 10
    pairs = [(i, j) for i in range(n) for j in range(n) if i + 1 < j]
    from .poset import validate_poset

    poset = validate_poset(pairs, n, labels={i: f"r{i}" for i in range(n)})
    poset.width_hint = 2
    return poset
