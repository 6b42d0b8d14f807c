"""Finite strict partial orders and their chain/antichain machinery.

Points are integers 0..n-1.  The strict order relation is kept transitively
closed; incomparability (the edge relation of the incomparability graph) is
derived from it.  Two storage backends exist:

* ``DensePoset`` keeps the closed relation as per-point bitmasks, giving O(1)
  comparability tests.  Used for validated input, file I/O and the solver.
* ``StructuredPoset`` / ``StackedPoset`` compute comparability from the
  generating formulas of the chain constructions, so instances with 10^4..10^5
  points stay cheap to build and query.

Width and minimum chain partitions are computed exactly via maximum bipartite
matching on the comparability digraph (Dilworth's theorem); structured posets
whose width is guaranteed by construction carry a ``width_hint`` that
short-circuits the matching (cross-validated against it in the test suite).
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_left
from dataclasses import dataclass, field
from random import Random


class PosetError(Exception):
    pass


class ValidationError(PosetError):
    """A relation violates a partial-order axiom (names the axiom)."""


class ContiguityViolation(PosetError):
    """Incomparable set not consecutive in a chain: the poset is corrupt."""


@dataclass(frozen=True)
class ChainInterval:
    """A contiguous run of positions inside one chain, inclusive endpoints."""

    lo: int = 0
    hi: int = -1

    @classmethod
    def empty(cls) -> "ChainInterval":
        return cls(0, -1)

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    def __len__(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1

    def __contains__(self, pos: int) -> bool:
        return self.lo <= pos <= self.hi

    def covers(self, other: "ChainInterval") -> bool:
        """self ⊇ other (an empty interval is covered by anything)."""
        return other.is_empty or (not self.is_empty and self.lo <= other.lo and other.hi <= self.hi)

    def positions(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass
class ChainPartition:
    """Disjoint chains covering all points, each sorted ascending in the order."""

    chains: list[list[int]]

    def __len__(self) -> int:
        return len(self.chains)

    def chain_of(self) -> dict[int, int]:
        out = {}
        for idx, chain in enumerate(self.chains):
            for p in chain:
                out[p] = idx
        return out

    def validate(self, poset: "Poset") -> None:
        seen: set[int] = set()
        for chain in self.chains:
            for i, p in enumerate(chain):
                if p in seen:
                    raise PosetError(f"point {p} appears in two chains")
                seen.add(p)
                if i > 0 and not poset.lt(chain[i - 1], p):
                    raise PosetError(f"chain not ascending at {chain[i-1]},{p}")
        if len(seen) != poset.n:
            raise PosetError("partition does not cover all points")


class Poset:
    """Abstract finite strict partial order. Instances are immutable."""

    n: int
    labels: dict[int, str]
    width_hint: int | None = None

    def lt(self, x: int, y: int) -> bool:
        raise NotImplementedError

    def comparable(self, x: int, y: int) -> bool:
        return self.lt(x, y) or self.lt(y, x)

    def incomparable(self, x: int, y: int) -> bool:
        return x != y and not self.lt(x, y) and not self.lt(y, x)

    def incomparables(self, x: int) -> set[int]:
        """All points incomparable to x.  O(n); fine for desk-scale posets."""
        return {y for y in range(self.n) if self.incomparable(x, y)}

    def canonical_chains(self) -> list[list[int]] | None:
        """A chain partition known from structure, or None."""
        return None

    def to_dense(self, limit: int = 5000) -> "DensePoset":
        if self.n > limit:
            raise PosetError(f"refusing to densify a poset with {self.n} > {limit} points")
        down = [0] * self.n
        up = [0] * self.n
        for x in range(self.n):
            for y in range(self.n):
                if self.lt(x, y):
                    up[x] |= 1 << y
                    down[y] |= 1 << x
        return DensePoset(self.n, up, down, dict(self.labels), width_hint=self.width_hint)

    def cover_pairs(self) -> list[tuple[int, int]]:
        """Edges of the transitive reduction (closure-on-load file format)."""
        return self.to_dense(limit=20000).cover_pairs()

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "cover": [list(e) for e in self.cover_pairs()],
            "labels": {str(k): v for k, v in self.labels.items()},
        }

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.to_json_dict(), sort_keys=True).encode())
        return h.hexdigest()[:16]

    def relation_equal(self, other: "Poset") -> bool:
        if self.n != other.n:
            return False
        return all(self.lt(x, y) == other.lt(x, y) for x in range(self.n) for y in range(self.n))


class DensePoset(Poset):
    """Bit-matrix backend: up[x] holds the mask of points above x."""

    def __init__(self, n: int, up: list[int], down: list[int],
                 labels: dict[int, str] | None = None, width_hint: int | None = None):
        self.n = n
        self.up = up
        self.down = down
        self.labels = labels or {}
        self.width_hint = width_hint
        full = (1 << n) - 1
        self.inc = [full & ~(up[i] | down[i] | (1 << i)) for i in range(n)]

    def lt(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def incomparable(self, x: int, y: int) -> bool:
        return bool((self.inc[x] >> y) & 1)

    def incomparables(self, x: int) -> set[int]:
        return _mask_to_set(self.inc[x])

    def inc_mask(self, x: int) -> int:
        return self.inc[x]

    def to_dense(self, limit: int = 5000) -> "DensePoset":
        return self

    def cover_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for x in range(self.n):
            succ = self.up[x]
            via = 0
            m = succ
            while m:
                y = (m & -m).bit_length() - 1
                via |= self.up[y]
                m &= m - 1
            m = succ & ~via
            while m:
                y = (m & -m).bit_length() - 1
                pairs.append((x, y))
                m &= m - 1
        return pairs


def _mask_to_set(mask: int) -> set[int]:
    out = set()
    while mask:
        out.add((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


def validate_poset(pairs, n: int, labels: dict[int, str] | None = None) -> DensePoset:
    """Build a transitively closed poset from (a < b) pairs, or fail loudly.

    Raises ValidationError naming the violated axiom: a reflexive pair or a
    cycle (antisymmetry violation after closure).
    """
    succ: list[set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValidationError(f"pair ({a},{b}) references ids outside 0..{n-1}")
        if a == b:
            raise ValidationError(f"reflexive pair ({a},{a})")
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    # Kahn topological order; leftovers mean a cycle.
    order = [i for i in range(n) if indeg[i] == 0]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                order.append(y)
    if len(order) < n:
        bad = [i for i in range(n) if i not in set(order)]
        raise ValidationError(f"cycle detected through points {sorted(bad)[:6]}")
    up = [0] * n
    for x in reversed(order):
        m = 0
        for y in succ[x]:
            m |= up[y] | (1 << y)
        up[x] = m
    down = [0] * n
    for x in range(n):
        m = up[x]
        while m:
            y = (m & -m).bit_length() - 1
            down[y] |= 1 << x
            m &= m - 1
    return DensePoset(n, up, down, labels)


def load_poset(source) -> DensePoset:
    """Load from the JSON file format {"n":, "cover":, "labels":}."""
    if isinstance(source, (str, bytes)):
        data = json.loads(source)
    else:
        data = source
    labels = {int(k): v for k, v in data.get("labels", {}).items()}
    return validate_poset([tuple(e) for e in data["cover"]], data["n"], labels)


def save_poset(poset: Poset) -> str:
    return json.dumps(poset.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Structured backends: comparability from construction formulas.


@dataclass(frozen=True)
class SidePoint:
    """A side-chain point incomparable to exactly one base-chain interval."""

    chain: int          # 1-based side-chain index (0 is the base chain)
    index: int          # position within its side chain
    lo: int             # base positions lo..hi are the incomparables
    hi: int


class StructuredPoset(Poset):
    """Base chain 0..m-1 plus side chains of interval-tagged points.

    Relations: within a chain by index; side point x vs base point c is
    x > c iff c < x.lo, x < c iff c > x.hi, incomparable iff lo <= c <= hi;
    side points of different chains are comparable iff their intervals are
    strictly separated, ordered by position.
    """

    def __init__(self, m: int, side_points: list[SidePoint],
                 labels: dict[int, str] | None = None, width_hint: int | None = None):
        self.m = m
        self.side = side_points
        self.n = m + len(side_points)
        self.labels = labels or {}
        self.width_hint = width_hint
        n_chains = 1 + (max((s.chain for s in side_points), default=0))
        self._chains: list[list[int]] = [list(range(m))] + [[] for _ in range(n_chains - 1)]
        for i, s in enumerate(side_points):
            self._chains[s.chain].append(m + i)
        for c in range(1, n_chains):
            self._chains[c].sort(key=lambda pid: self.side[pid - self.m].index)

    def _info(self, pid: int) -> SidePoint | None:
        return None if pid < self.m else self.side[pid - self.m]

    def lt(self, x: int, y: int) -> bool:
        sx, sy = self._info(x), self._info(y)
        if sx is None and sy is None:
            return x < y
        if sx is None:
            return x < sy.lo
        if sy is None:
            return sx.hi < y
        if sx.chain == sy.chain:
            return sx.index < sy.index
        return sx.hi < sy.lo

    def incomparables(self, x: int) -> set[int]:
        sx = self._info(x)
        out = set()
        if sx is None:
            for i, s in enumerate(self.side):
                if s.lo <= x <= s.hi:
                    out.add(self.m + i)
        else:
            out.update(range(sx.lo, sx.hi + 1))
            for i, s in enumerate(self.side):
                if s.chain != sx.chain and not (s.hi < sx.lo or sx.hi < s.lo):
                    out.add(self.m + i)
        return out

    def canonical_chains(self) -> list[list[int]]:
        return [list(c) for c in self._chains]

    def fingerprint(self) -> str:
        h = hashlib.sha256(b"structured")
        h.update(self.m.to_bytes(8, "big"))
        for s in self.side:
            h.update(b"%d,%d,%d,%d;" % (s.chain, s.index, s.lo, s.hi))
        return h.hexdigest()[:16]

    def base_interval(self, pid: int) -> ChainInterval:
        s = self._info(pid)
        if s is None:
            raise PosetError(f"{pid} is a base-chain point")
        return ChainInterval(s.lo, s.hi)


class StackedPoset(Poset):
    """n copies of an inner poset, every point of copy i below copy j for i<j."""

    def __init__(self, inner: Poset, copies: int, labels: dict[int, str] | None = None):
        self.inner = inner
        self.copies = copies
        self.n = inner.n * copies
        self.labels = labels or {}
        self.width_hint = inner.width_hint

    def split(self, pid: int) -> tuple[int, int]:
        return divmod(pid, self.inner.n)

    def lt(self, x: int, y: int) -> bool:
        cx, px = divmod(x, self.inner.n)
        cy, py = divmod(y, self.inner.n)
        if cx != cy:
            return cx < cy
        return self.inner.lt(px, py)

    def incomparables(self, x: int) -> set[int]:
        cx, px = divmod(x, self.inner.n)
        base = cx * self.inner.n
        return {base + q for q in self.inner.incomparables(px)}

    def fingerprint(self) -> str:
        h = hashlib.sha256(b"stacked")
        h.update(self.inner.fingerprint().encode())
        h.update(self.copies.to_bytes(8, "big"))
        return h.hexdigest()[:16]

    def canonical_chains(self) -> list[list[int]] | None:
        inner_chains = self.inner.canonical_chains()
        if inner_chains is None:
            inner_chains = min_chain_partition(self.inner).chains
        glued = []
        for chain in inner_chains:
            full = []
            for c in range(self.copies):
                full.extend(c * self.inner.n + p for p in chain)
            glued.append(full)
        return glued


# ---------------------------------------------------------------------------
# Width, chain partitions and antichains (Dilworth via bipartite matching).


def _comparability_successors(poset: Poset) -> list[list[int]]:
    return [[y for y in range(poset.n) if poset.lt(x, y)] for x in range(poset.n)]


def _hopcroft_karp(adj: list[list[int]], n_left: int, n_right: int):
    """Maximum matching on a bipartite graph given as left adjacency lists."""
    INF = float("inf")
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    while True:
        dist = [INF] * n_left
        queue = [u for u in range(n_left) if match_l[u] == -1]
        for u in queue:
            dist[u] = 0
        head = 0
        found = False
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] is INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break

        def try_augment(u: int) -> bool:
            for v in adj[u]:
                w = match_r[v]
                if w == -1 or (dist[w] == dist[u] + 1 and try_augment(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = INF
            return False

        for u in range(n_left):
            if match_l[u] == -1:
                try_augment(u)
    return match_l, match_r


def _dilworth(poset: Poset):
    """(width, chains, antichain) via matching on the split digraph."""
    import sys

    adj = _comparability_successors(poset)
    n = poset.n
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        match_l, match_r = _hopcroft_karp(adj, n, n)
    finally:
        sys.setrecursionlimit(old_limit)
    # Chains: follow matched successor pointers from unmatched-on-the-right.
    chains = []
    for start in range(n):
        if match_r[start] != -1:
            continue
        chain = [start]
        while match_l[chain[-1]] != -1:
            chain.append(match_l[chain[-1]])
        chains.append(chain)
    # König: alternate from unmatched lefts; antichain = Z_left minus Z_right.
    in_z_l = [match_l[u] == -1 for u in range(n)]
    queue = [u for u in range(n) if in_z_l[u]]
    in_z_r = [False] * n
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in adj[u]:
            if not in_z_r[v]:
                in_z_r[v] = True
                w = match_r[v]
                if w != -1 and not in_z_l[w]:
                    in_z_l[w] = True
                    queue.append(w)
    antichain = sorted(x for x in range(n) if in_z_l[x] and not in_z_r[x])
    width = n - sum(1 for v in match_l if v != -1)
    assert len(chains) == width and len(antichain) == width
    return width, chains, antichain


def width(poset: Poset) -> int:
    """Maximum antichain size == minimum chain cover size."""
    if poset.n == 0:
        return 0
    if poset.width_hint is not None:
        return poset.width_hint
    return _dilworth(poset)[0]


def min_chain_partition(poset: Poset) -> ChainPartition:
    """Partition into exactly width(P) chains."""
    canonical = poset.canonical_chains()
    if canonical is not None and poset.width_hint == len([c for c in canonical if c]):
        part = ChainPartition([sorted_chain for sorted_chain in canonical if sorted_chain])
        return part
    _, chains, _ = _dilworth(poset)
    return ChainPartition(chains)


def max_antichain(poset: Poset, lex_least_limit: int = 120) -> list[int]:
    """A maximum antichain; lexicographically least point ids when n is small.

    Beyond `lex_least_limit` points the (deterministic) König witness is
    returned directly, since the lex-least repair needs O(n) extra matchings.
    """
    w, _, witness = _dilworth(poset)
    if poset.n > lex_least_limit:
        return witness

    def best_with(prefix: list[int], excluded: set[int]) -> int:
        # Max antichain size among points incomparable to the whole prefix.
        allowed = [x for x in range(poset.n) if x not in excluded]
        if not allowed:
            return len(prefix)
        remap = {x: i for i, x in enumerate(allowed)}
        sub = validate_poset(
            [(remap[a], remap[b]) for a in allowed for b in allowed if poset.lt(a, b)],
            len(allowed))
        return len(prefix) + _dilworth(sub)[0]

    chosen: list[int] = []
    blocked: set[int] = set()
    for x in range(poset.n):
        if x in blocked:
            continue
        trial_blocked = blocked | {x} | {y for y in range(poset.n) if poset.comparable(x, y)}
        if best_with(chosen + [x], trial_blocked) == w:
            chosen.append(x)
            blocked = trial_blocked
            if len(chosen) == w:
                break
    assert len(chosen) == w
    return chosen


def incomparables(poset: Poset, x: int) -> set[int]:
    return poset.incomparables(x)


def incomparability_interval(poset: Poset, chain: list[int], x: int) -> ChainInterval:
    """Positions of the incomparables of x within a chain, as one interval.

    Comparability of a middle chain element propagates to an end, so the
    incomparable positions are consecutive for any valid poset; the guard
    raises ContiguityViolation on corrupt input.  O(log |chain|).
    """
    if x in chain:
        raise PosetError(f"point {x} lies on the chain")
    k = len(chain)
    # Points below x form a prefix of the chain, points above a suffix.
    lo = bisect_left(chain, True, key=lambda c: not poset.lt(c, x))
    hi = bisect_left(chain, True, key=lambda c: poset.lt(x, c)) - 1
    if hi < lo:
        return ChainInterval.empty()
    for pos in (lo, hi):
        if poset.comparable(chain[pos], x):
            raise ContiguityViolation(f"incomparables of {x} not consecutive in chain")
    if lo > 0 and not poset.lt(chain[lo - 1], x):
        raise ContiguityViolation(f"chain prefix below {x} is broken at {lo - 1}")
    if hi < k - 1 and not poset.lt(x, chain[hi + 1]):
        raise ContiguityViolation(f"chain suffix above {x} is broken at {hi + 1}")
    return ChainInterval(lo, hi)


# ---------------------------------------------------------------------------
# Induced-subposet search.


def contains_induced(host: Poset, pattern: Poset):
    """Does an induced-subposet embedding of `pattern` into `host` exist?

    Returns (found, mapping) where mapping sends pattern ids to host ids.
    Backtracking over pattern points ordered most-constrained-first, with
    candidate lists driven by already-assigned incomparable neighbours.
    """
    q = pattern.n
    if q > 12:
        raise PosetError("pattern larger than 12 points")
    if q == 0:
        return True, {}
    if q > host.n:
        return False, None

    inc_q = [pattern.incomparables(i) for i in range(q)]
    # Order: start at the highest incomparability degree, grow along
    # incomparability edges first so candidate lists stay tiny.
    order = [max(range(q), key=lambda i: len(inc_q[i]))]
    placed = {order[0]}
    while len(order) < q:
        nxt = max(
            (i for i in range(q) if i not in placed),
            key=lambda i: (len(inc_q[i] & placed), sum(1 for j in placed if pattern.comparable(i, j))),
        )
        order.append(nxt)
        placed.add(nxt)

    host_inc_deg: list[int] | None = None
    if host.n <= 2000:
        host_inc_deg = [len(host.incomparables(v)) for v in range(host.n)]

    assign: dict[int, int] = {}
    used: set[int] = set()

    def candidates(i: int):
        anchors = [j for j in assign if i in inc_q[j]]
        if anchors:
            pool = host.incomparables(assign[anchors[0]])
            return sorted(pool - used)
        return [v for v in range(host.n) if v not in used]

    def consistent(i: int, v: int) -> bool:
        if host_inc_deg is not None and host_inc_deg[v] < len(inc_q[i]):
            return False
        for j, w in assign.items():
            if pattern.lt(i, j) != host.lt(v, w) or pattern.lt(j, i) != host.lt(w, v):
                return False
        return True

    def backtrack(depth: int) -> bool:
        if depth == q:
            return True
        i = order[depth]
        for v in candidates(i):
            if consistent(i, v):
                assign[i] = v
                used.add(v)
                if backtrack(depth + 1):
                    return True
                del assign[i]
                used.discard(v)
        return False

    if backtrack(0):
        return True, dict(assign)
    return False, None


# ---------------------------------------------------------------------------
# Random instance generation.


def random_width_poset(w: int, n: int, seed: int) -> StructuredPoset:
    """A random poset of width exactly w on n points.

    Built as w chains with monotone interval-overlap cross-relations and the
    width asserted post-hoc via the matching oracle; regenerated on mismatch
    (at most 100 attempts, then a loud failure).
    """
    if w < 1 or n < w:
        raise PosetError(f"need w >= 1 and n >= w, got w={w} n={n}")
    rng = Random(seed)
    from .constructions import MonotoneChainSpec, monotone_chain_poset

    for attempt in range(100):
        if w == 1:
            poset = StructuredPoset(n, [], width_hint=1)
            return poset
        # Random composition of n into w chain sizes, base chain gets the rest.
        sizes = [1] * (w - 1)
        for _ in range(n - w - (n - w) // 2):
            sizes[rng.randrange(w - 1)] += 1
        m = n - sum(sizes)
        if m < 1:
            m = 1
            sizes[0] -= 1
        specs = []
        ok = True
        for size in sizes:
            if size < 1:
                ok = False
                break
            entries = []
            lo = rng.randrange(m)
            hi = rng.randrange(lo, m)
            for _ in range(size):
                entries.append((lo, hi, 1))
                lo = min(m - 1, lo + rng.choice((0, 0, 1, 2)))
                hi = min(m - 1, max(hi, lo) + rng.choice((0, 0, 1, 2)))
                if hi < lo:
                    hi = lo
            specs.append(MonotoneChainSpec(entries))
        if not ok:
            continue
        poset, _meta = monotone_chain_poset(m, specs)
        got = _dilworth(poset)[0]
        if got == w:
            poset.width_hint = w
            return poset
    raise PosetError(f"could not hit width {w} on {n} points in 100 attempts (seed {seed})")
