"""Adversarial triples against the natural-number enumeration of the
bit-predicate presentation of the random graph: for each n, a vertex b_n
whose prefix contains an induced n-cycle and a minimal vertex c_n seeing
exactly that cycle, with the short-cycle obstruction checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import FalsificationError, InputError


def adjacent(u: int, v: int) -> bool:
    """Bit predicate, symmetrized: for u < v, u ~ v iff bit u of v is set."""
    if u == v:
        raise InputError("the graph is irreflexive")
    if u > v:
        u, v = v, u
    return (v >> u) & 1 == 1


def neighborhood_in_prefix(c: int, top: int) -> FrozenSet[int]:
    """Neighbors of c among {0..top}, read off the bits of c below the cut
    (plus an explicit scan of the larger vertices, when any exist)."""
    hood = {v for v in _bits(c) if v <= top}
    for v in range(c + 1, top + 1):
        if (v >> c) & 1:
            hood.add(v)
    return frozenset(hood)


def is_induced_cycle(vertices: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """If the vertex set induces a single chordless cycle, return it in
    traversal order (started at the minimum); otherwise None."""
    vs = list(dict.fromkeys(vertices))
    n = len(vs)
    if n < 3:
        return None
    degree: Dict[int, List[int]] = {v: [] for v in vs}
    edges = 0
    for a, b in combinations(vs, 2):
        if adjacent(a, b):
            degree[a].append(b)
            degree[b].append(a)
            edges += 1
    if edges != n or any(len(nb) != 2 for nb in degree.values()):
        return None
    # connected 2-regular graph with n edges = one cycle
    start = min(vs)
    order = [start]
    prev, cur = None, start
    while True:
        a, b = degree[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return tuple(order) if len(order) == n else None


def _neighbors_below(v: int, top: int) -> int:
    """Bitmask of the neighbors of v among the vertices 0..top-1."""
    mask = v & ((1 << min(v, top)) - 1)
    for u in range(v + 1, top):
        if (u >> v) & 1:
            mask |= 1 << u
    return mask


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cycles_with_max(n: int, v_max: int) -> Iterable[Tuple[int, Tuple[int, ...]]]:
    """(mask, cycle) for every induced n-cycle whose maximum vertex is
    v_max, in ascending mask order.

    Depth-first extension of induced paths rooted at v_max: each added
    vertex is adjacent to the path's last vertex and to no other, and the
    closing vertex is additionally adjacent to v_max.  Every cycle is
    reached from both directions; the mask keyed dict removes the twin.
    """
    nbrs = [_neighbors_below(w, v_max) for w in range(v_max)]
    nbr_top = _neighbors_below(v_max, v_max)
    masks: Set[int] = set()

    def extend(last: int, length: int, used: int, forbidden: int) -> None:
        if length == n - 1:
            for u in _bits(nbrs[last] & nbr_top & ~forbidden):
                masks.add(used | (1 << u) | (1 << v_max))
            return
        for u in _bits(nbrs[last] & ~forbidden & ~nbr_top):
            extend(u, length + 1, used | (1 << u), forbidden | nbrs[last] | (1 << u))

    for w in _bits(nbr_top):
        extend(w, 2, 1 << w, 1 << w)
    result = []
    for mask in sorted(masks):
        cycle = is_induced_cycle([v for v in _bits(mask)])
        assert cycle is not None
        result.append((mask, cycle))
    return result


def first_cycle_bound(n: int, start: int) -> Tuple[int, Tuple[int, ...]]:
    """The first b >= start whose prefix {0..b} contains an induced
    n-cycle, with a witnessing cycle."""
    # the minimal prefix containing any induced n-cycle
    v_max = n - 1
    while True:
        cycles = list(_cycles_with_max(n, v_max))
        if cycles:
            b = max(start, v_max)
            return b, cycles[0][1]
        v_max += 1


def minimal_exact_vertex(n: int, b: int) -> Tuple[int, Tuple[int, ...]]:
    """The minimal vertex c whose neighborhood within {0..b} is exactly an
    induced n-cycle, together with that cycle.

    Any c > b sees precisely the prefix vertices named by its low bits, so
    the minimum is the smallest cycle characteristic mask exceeding b; if
    every mask is <= b the explicit witness mask + 2^(b+1) still qualifies
    (and beats nothing, since qualifying masks are < 2^(b+1)).

    Masks are monotone in the maximum vertex, so the scan walks v_max
    upward and can start at the first level whose masks can exceed b.
    """
    for v_max in range(max(n - 1, (b + 1).bit_length() - 1), b + 1):
        for mask, cycle in _cycles_with_max(n, v_max):
            if mask > b:
                return mask, cycle
    for v_max in range(n - 1, b + 1):
        for mask, cycle in _cycles_with_max(n, v_max):
            return mask + (1 << (b + 1)), cycle
    raise AssertionError("prefix contains no induced cycle")


@dataclass(frozen=True)
class Triple:
    n: int
    a: int
    b: int
    c: int
    cycle: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "cycle": list(self.cycle),
        }


def triple_from_json(doc: dict) -> Triple:
    return Triple(doc["n"], doc["a"], doc["b"], doc["c"], tuple(doc["cycle"]))


def build_triples(max_n: int) -> List[Triple]:
    """Triples for n = 4..max_n; each b_n is the first vertex after the
    previous c whose prefix holds an induced n-cycle, and c_n is the
    minimal vertex adjacent to exactly that cycle within the prefix."""
    if max_n < 4:
        raise InputError("max_n must be at least 4")
    triples = []
    c_prev = 0  # induction base: scanning starts at n = 4
    for n in range(4, max_n + 1):
        b, _ = first_cycle_bound(n, c_prev + 1)
        c, cycle = minimal_exact_vertex(n, b)
        triple = Triple(n, 0, b, c, cycle)
        _validate_triple(triple)
        triples.append(triple)
        c_prev = c
    return triples


def _validate_triple(t: Triple) -> None:
    cycle = is_induced_cycle(t.cycle)
    if cycle is None:
        raise FalsificationError("stored cycle is not an induced cycle", t)
    if max(t.cycle) > t.b:
        raise FalsificationError("cycle exceeds the prefix", t)
    if neighborhood_in_prefix(t.c, t.b) != frozenset(t.cycle):
        raise FalsificationError("c's prefix neighborhood is not the cycle", t)


@dataclass
class ObstructionReport:
    checks: List[dict]
    pair_certificates: List[dict]
    violations: List[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "pairs": self.pair_certificates,
            "violations": self.violations,
        }


def check_obstruction(triples: Sequence[Triple]) -> ObstructionReport:
    """For every triple and every 2 < i < n: confirm exhaustively that no
    induced i-cycle within the prefix has all vertices adjacent to c.

    Consequently no adjacency-and-order-preserving map of initial segments
    can send a shorter triple onto a longer one, reported per pair.
    """
    for t in triples:
        _validate_triple(t)
    checks = []
    violations = []
    no_short_cycle: Dict[Tuple[int, int], bool] = {}
    for t in triples:
        neighbors = sorted(neighborhood_in_prefix(t.c, t.b))
        for i in range(3, t.n):
            bad = [
                sub
                for sub in combinations(neighbors, i)
                if is_induced_cycle(sub) is not None
            ]
            checks.append({"n": t.n, "i": i, "candidates_violating": len(bad)})
            no_short_cycle[(t.n, i)] = not bad
            if bad:
                violations.append({"n": t.n, "i": i, "witness": list(bad[0])})
    pairs = []
    for p, small in enumerate(triples):
        for large in triples[p + 1 :]:
            pairs.append(
                {
                    "from_n": small.n,
                    "to_n": large.n,
                    "obstructed": bool(no_short_cycle.get((large.n, small.n), True)),
                }
            )
    return ObstructionReport(checks, pairs, violations)


# ---------------------------------------------------------------------------
# Finite graphs and their free amalgam
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGraph:
    vertices: FrozenSet[int]
    edges: FrozenSet[FrozenSet[int]]

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2 or not e <= self.vertices:
                raise InputError(f"bad edge {set(e)}")

    @staticmethod
    def of(vertices: Iterable[int], edges: Iterable[Tuple[int, int]]) -> "FiniteGraph":
        return FiniteGraph(
            frozenset(vertices), frozenset(frozenset(e) for e in edges)
        )

    def induced(self, subset: Iterable[int]) -> "FiniteGraph":
        sub = frozenset(subset)
        if not sub <= self.vertices:
            raise InputError("subset is not a vertex subset")
        return FiniteGraph(sub, frozenset(e for e in self.edges if e <= sub))


def prefix_graph(top: int) -> FiniteGraph:
    return FiniteGraph.of(
        range(top + 1),
        (
            (u, v)
            for u in range(top + 1)
            for v in range(u + 1, top + 1)
            if adjacent(u, v)
        ),
    )


def free_amalgam_graphs(
    base: FiniteGraph, ext: FiniteGraph, common: Iterable[int]
) -> FiniteGraph:
    """Disjoint union glued over the common part; no cross edges."""
    shared = frozenset(common)
    if base.induced(shared) != ext.induced(shared):
        raise InputError("common part induces different subgraphs")
    return FiniteGraph(base.vertices | ext.vertices, base.edges | ext.edges)
