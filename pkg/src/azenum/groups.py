"""Finite groups as multiplication tables, with derived structure.

Elements are indices 0..order-1 into the table; names are cosmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import lcm
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import CapacityError, InputError, StructuralError

MAX_ORDER = 256


@dataclass(frozen=True)
class GroupTable:
    name: str
    order: int
    element_names: Tuple[str, ...]
    mul: Tuple[Tuple[int, ...], ...]
    identity_index: int
    inverse: Tuple[int, ...]

    def mul_of(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inv_of(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, n: int) -> int:
        out = self.identity_index
        for _ in range(n):
            out = self.mul[out][a]
        return out

    def element_order(self, a: int) -> int:
        x = a
        n = 1
        while x != self.identity_index:
            x = self.mul[x][a]
            n += 1
        return n

    def commutator(self, a: int, b: int) -> int:
        ia, ib = self.inverse[a], self.inverse[b]
        return self.mul[self.mul[ia][ib]][self.mul[a][b]]

    def index_of_name(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise InputError(f"unknown element name {name!r} in group {self.name}")


@dataclass(frozen=True)
class GroupAnalysis:
    exponent: int
    center: Tuple[int, ...]
    commutator_subgroup: Tuple[int, ...]
    involutions: Tuple[int, ...]


@dataclass(frozen=True)
class KGroupSpec:
    group: GroupTable
    k_subgroup: Tuple[int, ...]
    transversal: Tuple[int, ...]
    element_order: Tuple[int, ...]


def validate_and_analyze(
    mul: Sequence[Sequence[int]],
    element_names: Optional[Sequence[str]] = None,
    name: str = "G",
) -> Tuple[GroupTable, GroupAnalysis]:
    """Validate a raw multiplication table and derive its structure."""
    order = len(mul)
    if order == 0:
        raise StructuralError("empty table")
    if order > MAX_ORDER:
        raise CapacityError(f"order {order} exceeds desk-scale cap {MAX_ORDER}")
    for a, row in enumerate(mul):
        if len(row) != order:
            raise StructuralError(f"row {a} has length {len(row)}, expected {order}")
        for b, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < order:
                raise StructuralError(f"entry mul[{a}][{b}] = {v!r} out of range")

    identity = None
    for e in range(order):
        if all(mul[e][x] == x and mul[x][e] == x for x in range(order)):
            identity = e
            break
    if identity is None:
        raise StructuralError("no two-sided identity")

    inverse = [None] * order
    for a in range(order):
        for b in range(order):
            if mul[a][b] == identity and mul[b][a] == identity:
                inverse[a] = b
                break
        if inverse[a] is None:
            raise StructuralError(f"element {a} has no two-sided inverse")

    for a in range(order):
        for b in range(order):
            ab = mul[a][b]
            for c in range(order):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    raise StructuralError(
                        f"associativity fails at triple ({a}, {b}, {c})"
                    )

    if element_names is None:
        element_names = tuple(f"e{i}" for i in range(order))
    else:
        element_names = tuple(element_names)
        if len(element_names) != order or len(set(element_names)) != order:
            raise StructuralError("element names must be distinct, one per element")

    table = GroupTable(
        name=name,
        order=order,
        element_names=element_names,
        mul=tuple(tuple(row) for row in mul),
        identity_index=identity,
        inverse=tuple(inverse),
    )

    exponent = 1
    for a in range(order):
        exponent = lcm(exponent, table.element_order(a))
    center = tuple(
        a
        for a in range(order)
        if all(mul[a][b] == mul[b][a] for b in range(order))
    )
    commutators = {table.commutator(a, b) for a in range(order) for b in range(order)}
    commutator_subgroup = tuple(sorted(subgroup_closure(table, commutators)))
    involutions = tuple(
        a for a in range(order) if a != identity and mul[a][a] == identity
    )
    return table, GroupAnalysis(exponent, center, commutator_subgroup, involutions)


def subgroup_closure(table: GroupTable, generators) -> FrozenSet[int]:
    seen = {table.identity_index}
    frontier = list(set(generators) | seen)
    seen.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen):
                for c in (table.mul[a][b], table.mul[b][a]):
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return frozenset(seen)


def is_subgroup(table: GroupTable, subset) -> bool:
    s = set(subset)
    if table.identity_index not in s:
        return False
    for a in s:
        if table.inverse[a] not in s:
            return False
        for b in s:
            if table.mul[a][b] not in s:
                return False
    return True


def is_class_csw(table: GroupTable, analysis: GroupAnalysis) -> bool:
    """Exponent divides 4 and every involution is central."""
    if 4 % analysis.exponent != 0:
        return False
    center = set(analysis.center)
    return all(v in center for v in analysis.involutions)


def validate_k(table: GroupTable, analysis: GroupAnalysis, k) -> bool:
    ks = set(k)
    for a in ks:
        if not isinstance(a, int) or not 0 <= a < table.order:
            raise InputError(f"K index {a!r} out of range")
    if not is_subgroup(table, ks):
        return False
    if not set(analysis.commutator_subgroup) <= ks:
        return False
    return ks <= set(analysis.center)


def rank(table: GroupTable) -> int:
    """Size of a smallest generating set, by exhaustive subset search."""
    if table.order == 1:
        return 0
    candidates = [a for a in range(table.order) if a != table.identity_index]
    for size in range(1, len(candidates) + 1):
        for subset in combinations(candidates, size):
            if len(subgroup_closure(table, subset)) == table.order:
                return size
    raise StructuralError("no generating set found")  # unreachable


def make_kgroup(
    table: GroupTable,
    analysis: GroupAnalysis,
    k,
    order_hint: Optional[Sequence[int]] = None,
) -> KGroupSpec:
    """Fix the transversal and element order used by canonical forms.

    Transversal: identity represents its own coset, all other cosets are
    represented by their smallest element index; ordered identity first,
    then by representative index.
    """
    if not validate_k(table, analysis, k):
        raise InputError("K must be a subgroup with G' <= K <= Z(G)")
    ks = sorted(set(k))
    seen = set()
    reps: List[int] = []
    for g in range(table.order):
        if g in seen:
            continue
        coset = {table.mul[g][x] for x in ks}
        seen.update(coset)
        reps.append(table.identity_index if table.identity_index in coset else min(coset))
    reps.sort()
    reps.remove(table.identity_index)
    transversal = (table.identity_index, *reps)

    if order_hint is None:
        rest = [g for g in range(table.order) if g != table.identity_index]
        element_order = (table.identity_index, *rest)
    else:
        element_order = tuple(order_hint)
        if sorted(element_order) != list(range(table.order)):
            raise InputError("order_hint must be a permutation of all elements")
        if element_order[0] != table.identity_index:
            raise InputError("order_hint must start with the identity")
    return KGroupSpec(table, tuple(ks), transversal, element_order)


def standard_element_order(kg: KGroupSpec) -> Tuple[int, ...]:
    """The element order sorted by K-coset and then by K-multiplier.

    Ranking K-multiples consistently across cosets is what makes the
    coset enumeration compatible with the shift-and-copy maps of the
    enumeration pipeline (an arbitrary order need not be)."""
    k_list = [kg.group.identity_index] + [
        x for x in sorted(kg.k_subgroup) if x != kg.group.identity_index
    ]
    return tuple(kg.group.mul[t][x] for t in kg.transversal for x in k_list)


def make_standard_kgroup(table: GroupTable, analysis: GroupAnalysis, k) -> KGroupSpec:
    """A KGroupSpec using the coset-major element order."""
    base = make_kgroup(table, analysis, k)
    return make_kgroup(table, analysis, k, order_hint=standard_element_order(base))


def find_isomorphism(g1: GroupTable, g2: GroupTable) -> Optional[Dict[int, int]]:
    """Brute-force isomorphism search by generator images.

    Returns a full element map or None. Intended as an independent oracle
    at desk scale (orders <= 64 or so).
    """
    if g1.order != g2.order:
        return None
    orders1 = [g1.element_order(a) for a in range(g1.order)]
    orders2 = [g2.element_order(a) for a in range(g2.order)]
    if sorted(orders1) != sorted(orders2):
        return None

    gens = _generating_sequence(g1)

    def extend(assigned: List[Tuple[int, int]]) -> Optional[Dict[int, int]]:
        mapping = _closure_map(g1, g2, assigned)
        if mapping is None:
            return None
        if len(assigned) == len(gens):
            if len(mapping) != g1.order:
                return None
            return mapping
        nxt = gens[len(assigned)]
        used = set(mapping.values())
        for img in range(g2.order):
            if img in used or orders2[img] != orders1[nxt]:
                continue
            result = extend(assigned + [(nxt, img)])
            if result is not None:
                return result
        return None

    return extend([])


def _generating_sequence(table: GroupTable) -> List[int]:
    """A small generating sequence, greedily grown."""
    gens: List[int] = []
    span = {table.identity_index}
    while len(span) < table.order:
        best = None
        best_size = len(span)
        for a in range(table.order):
            if a in span:
                continue
            size = len(subgroup_closure(table, gens + [a]))
            if size > best_size:
                best, best_size = a, size
                if size == table.order:
                    break
        gens.append(best)
        span = subgroup_closure(table, gens)
    return gens


def _closure_map(g1, g2, assigned) -> Optional[Dict[int, int]]:
    """Grow the partial hom determined by generator images; None on clash."""
    mapping = {g1.identity_index: g2.identity_index}
    frontier = [g1.identity_index]
    while frontier:
        x = frontier.pop()
        fx = mapping[x]
        for gen, img in assigned:
            y = g1.mul[x][gen]
            fy = g2.mul[fx][img]
            if y in mapping:
                if mapping[y] != fy:
                    return None
            else:
                mapping[y] = fy
                frontier.append(y)
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping


# ---------------------------------------------------------------------------
# Bundled catalog
# ---------------------------------------------------------------------------


def _table_from_rule(elems, op, names, name):
    index = {e: i for i, e in enumerate(elems)}
    mul = [[index[op(a, b)] for b in elems] for a in elems]
    table, analysis = validate_and_analyze(mul, names, name=name)
    return table, analysis


def _build_catalog():
    cat = {}

    c2, a2 = _table_from_rule(
        [0, 1], lambda a, b: (a + b) % 2, ["1", "g"], "C2"
    )
    cat["C2"] = (c2, a2, [0, 1])  # K = G

    c4, a4 = _table_from_rule(
        [0, 1, 2, 3], lambda a, b: (a + b) % 4, ["1", "g", "g2", "g3"], "C4"
    )
    cat["C4"] = (c4, a4, [0, 2])  # K = {1, g^2}

    v4, av4 = _table_from_rule(
        [(0, 0), (1, 0), (0, 1), (1, 1)],
        lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2),
        ["1", "a", "b", "ab"],
        "C2xC2",
    )
    cat["C2xC2"] = (v4, av4, [0])  # K trivial

    # Quaternion elements as (sign, unit): unit 0=1, 1=i, 2=j, 3=k.
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 1): (-1, 3),
        (2, 3): (1, 1), (3, 2): (-1, 1),
        (3, 1): (1, 2), (1, 3): (-1, 2),
    }

    def q8_op(a, b):
        s, u = unit_mul[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    q8_elems = [(s, u) for u in range(4) for s in (1, -1)]
    q8_names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    q8, aq8 = _table_from_rule(q8_elems, q8_op, q8_names, "Q8")
    cat["Q8"] = (q8, aq8, [0, 1])  # K = {1, -1}

    d4_elems = [(r, s) for s in (0, 1) for r in range(4)]

    def d4_op(a, b):
        r1, s1 = a
        r2, s2 = b
        r = (r1 + (r2 if s1 == 0 else -r2)) % 4
        return (r, (s1 + s2) % 2)

    d4_names = ["1", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
    d4, ad4 = _table_from_rule(d4_elems, d4_op, d4_names, "D4")
    cat["D4"] = (d4, ad4, [0, 2])  # K = {1, r^2} = G' = Z

    return cat


_CATALOG = None


def catalog_names() -> List[str]:
    return ["C2", "C4", "C2xC2", "Q8", "D4"]


def catalog_group(name: str) -> Tuple[GroupTable, GroupAnalysis, List[int]]:
    """Bundled group with its analysis and default K indices."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    try:
        entry = _CATALOG[name]
    except KeyError:
        raise InputError(f"unknown catalog group {name!r}")
    return entry


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def group_to_json(table: GroupTable, k=None) -> dict:
    doc = {
        "name": table.name,
        "order": table.order,
        "elements": list(table.element_names),
        "mul": [list(row) for row in table.mul],
    }
    if k is not None:
        doc["K"] = sorted(k)
    return doc


def group_from_json(doc: dict):
    try:
        mul = doc["mul"]
        names = doc.get("elements")
        name = doc.get("name", "G")
    except (KeyError, TypeError):
        raise InputError("group document must contain 'mul'")
    table, analysis = validate_and_analyze(mul, names, name=name)
    if "order" in doc and doc["order"] != table.order:
        raise InputError("declared order does not match table size")
    k = doc.get("K")
    return table, analysis, k


def load_group_file(path):
    with open(path) as fh:
        return group_from_json(json.load(fh))
