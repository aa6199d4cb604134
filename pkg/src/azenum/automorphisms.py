"""Generators of the automorphism group: finitary coordinate permutations
and the self-inverse ladder maps, plus words in them and verification.

A `Perm` stores the "moves" convention: the value at coordinate j is moved
to coordinate perm[j].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .central_product import CPContext, CPElement
from .errors import InputError


@dataclass(frozen=True)
class Perm:
    moves: Tuple[Tuple[int, int], ...]  # sorted (source, target) pairs

    @staticmethod
    def from_mapping(mapping: Dict[int, int]) -> "Perm":
        items = {s: t for s, t in mapping.items() if s != t}
        if sorted(items) != sorted(items.values()):
            raise InputError("permutation must map its support onto itself")
        if any(c < 0 for c in items):
            raise InputError("negative coordinate in permutation")
        return Perm(tuple(sorted(items.items())))

    @staticmethod
    def from_cycles(cycles: Sequence[Sequence[int]]) -> "Perm":
        mapping: Dict[int, int] = {}
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if a in mapping:
                    raise InputError(f"coordinate {a} repeated in cycles")
                mapping[a] = b
        return Perm.from_mapping(mapping)

    def mapping(self) -> Dict[int, int]:
        return dict(self.moves)

    def cycles(self) -> List[List[int]]:
        mapping = self.mapping()
        seen = set()
        out = []
        for start in sorted(mapping):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            cur = mapping[start]
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = mapping[cur]
            out.append(cyc)
        return out

    def inverse(self) -> "Perm":
        return Perm(tuple(sorted((t, s) for s, t in self.moves)))

    def max_coord(self) -> int:
        return max((max(s, t) for s, t in self.moves), default=-1)


@dataclass(frozen=True)
class BetaStar:
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise InputError("ladder coordinates must be distinct")
        if any(c < 0 for c in self.coords):
            raise InputError("negative ladder coordinate")

    def max_coord(self) -> int:
        return max(self.coords)


AutGenerator = Union[Perm, BetaStar]


@dataclass(frozen=True)
class AutWord:
    gens: Tuple[AutGenerator, ...]

    def max_coord(self) -> int:
        return max((g.max_coord() for g in self.gens), default=-1)

    def inverse(self) -> "AutWord":
        out = []
        for g in reversed(self.gens):
            out.append(g.inverse() if isinstance(g, Perm) else g)
        return AutWord(tuple(out))

    def __mul__(self, other: "AutWord") -> "AutWord":
        return AutWord(self.gens + other.gens)


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------


def apply_perm(ctx: CPContext, perm: Perm, x: CPElement) -> CPElement:
    rep = ctx.representative(x)
    mapping = perm.mapping()
    return ctx.make({mapping.get(c, c): v for c, v in rep.items()})


def beta_star_raw(ctx: CPContext, coords: Sequence[int], rep: Dict[int, int]) -> Dict[int, int]:
    """Tuple-level ladder action: the image entry at relative position j is
    the ordered product of all window entries except the j-th."""
    g = ctx.group
    e = g.identity_index
    vals = [rep.get(c, e) for c in coords]
    m = len(vals)
    prefix = [e] * (m + 1)
    for i in range(m):
        prefix[i + 1] = g.mul[prefix[i]][vals[i]]
    suffix = [e] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = g.mul[vals[i]][suffix[i + 1]]
    out = dict(rep)
    for j, c in enumerate(coords):
        v = g.mul[prefix[j]][suffix[j + 1]]
        if v == e:
            out.pop(c, None)
        else:
            out[c] = v
    return out


def apply_beta_star(ctx: CPContext, bs: BetaStar, x: CPElement) -> CPElement:
    if len(bs.coords) != ctx.exponent + 2:
        raise InputError(
            f"ladder needs exponent+2 = {ctx.exponent + 2} coordinates, "
            f"got {len(bs.coords)}"
        )
    return ctx.make(beta_star_raw(ctx, bs.coords, ctx.representative(x)))


def apply_word(ctx: CPContext, word: AutWord, x: CPElement) -> CPElement:
    for gen in word.gens:
        if isinstance(gen, Perm):
            x = apply_perm(ctx, gen, x)
        else:
            x = apply_beta_star(ctx, gen, x)
    return x


# ---------------------------------------------------------------------------
# The copy automorphisms alpha_{I, i0, j0}
# ---------------------------------------------------------------------------


def alpha_word(ctx: CPContext, I: Iterable[int], i0: int, j0: int) -> AutWord:
    """A word copying the entry at i0 onto every coordinate of I, for
    elements trivial on I and j0. Built per exponent-sized block: ladder on
    (i0, block..., j0) then the transposition (i0 j0)."""
    block_coords = sorted(set(I))
    if len(block_coords) != len(list(I)):
        raise InputError("I must not repeat coordinates")
    m = ctx.exponent
    if i0 in block_coords or j0 in block_coords:
        raise InputError("i0 and j0 must avoid I")
    if i0 == j0:
        raise InputError("i0 and j0 must differ")
    if len(block_coords) % m != 0:
        raise InputError(f"exponent {m} must divide |I| = {len(block_coords)}")
    gens: List[AutGenerator] = []
    swap = Perm.from_mapping({i0: j0, j0: i0})
    for start in range(0, len(block_coords), m):
        block = block_coords[start : start + m]
        gens.append(BetaStar((i0, *block, j0)))
        gens.append(swap)
    return AutWord(tuple(gens))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    level: int
    size: int
    pairs_checked: int
    exhaustive: bool
    failure: Optional[str] = None
    witness: Optional[tuple] = None


EXHAUSTIVE_PAIR_CAP = 1 << 15


def verify_automorphism(
    ctx: CPContext,
    word: AutWord,
    n: int,
    sample_pairs: int = 100_000,
    rng: Optional[random.Random] = None,
) -> VerifyReport:
    """Check that the word acts as an automorphism of the level-n subgroup.

    Bijectivity is exhaustive; the homomorphism law is exhaustive for small
    levels and sampled otherwise.
    """
    if word.max_coord() >= n:
        raise InputError("word touches coordinates at or above the level")
    domain = ctx.all_cosets(n)
    size = len(domain)
    images = {}
    for x in domain:
        y = apply_word(ctx, word, x)
        if max(y.support_coords(), default=0) >= n:
            return VerifyReport(False, n, size, 0, False, "image escapes level", (x, y))
        images[x] = y
    if len(set(images.values())) != size:
        return VerifyReport(False, n, size, 0, False, "not injective", None)

    exhaustive = size * size <= EXHAUSTIVE_PAIR_CAP
    if exhaustive:
        pairs = ((x, y) for x in domain for y in domain)
    else:
        rng = rng or random.Random(0)
        pairs = (
            (domain[rng.randrange(size)], domain[rng.randrange(size)])
            for _ in range(sample_pairs)
        )
    checked = 0
    for x, y in pairs:
        prod = ctx.multiply(x, y)
        if images[prod] != ctx.multiply(images[x], images[y]):
            return VerifyReport(
                False, n, size, checked, exhaustive, "homomorphism law fails", (x, y)
            )
        checked += 1
    return VerifyReport(True, n, size, checked, exhaustive)


def check_coset_welldefined(
    ctx: CPContext,
    coords: Sequence[int],
    trials: int = 200,
    rng: Optional[random.Random] = None,
) -> Optional[tuple]:
    """Probe representative independence of a raw ladder action.

    Returns a witness (element, rep_a, rep_b) whose two representatives map
    to different cosets, or None if no dependence was found. Used to show
    that windows of the wrong arity do not descend to the quotient.
    """
    rng = rng or random.Random(0)
    g = ctx.group
    order = g.order
    window = list(coords)
    outside = max(window) + 1
    for _ in range(trials):
        support = {
            c: rng.randrange(order)
            for c in rng.sample(window, rng.randint(0, len(window)))
        }
        x = ctx.make(support)
        rep_a = ctx.representative(x)
        # alternative representative: a K element at a window coordinate,
        # cancelled at a coordinate outside the window
        k = ctx.k_list[rng.randrange(len(ctx.k_list))]
        c1 = window[rng.randrange(len(window))]
        rep_b = dict(rep_a)
        e = g.identity_index
        rep_b[c1] = g.mul[rep_b.get(c1, e)][k]
        rep_b[outside] = g.mul[rep_b.get(outside, e)][g.inverse[k]]
        assert ctx.make(rep_b) == x
        img_a = ctx.make(beta_star_raw(ctx, window, rep_a))
        img_b = ctx.make(beta_star_raw(ctx, window, rep_b))
        if img_a != img_b:
            return (x, rep_a, rep_b)
    return None


# ---------------------------------------------------------------------------
# Finite automorphisms and level extension
# ---------------------------------------------------------------------------


@dataclass
class FiniteAutomorphism:
    level: int
    mapping: Dict[CPElement, CPElement]


def finite_automorphism_from_word(ctx: CPContext, word: AutWord, n: int) -> FiniteAutomorphism:
    return FiniteAutomorphism(n, {x: apply_word(ctx, word, x) for x in ctx.all_cosets(n)})


def fixes_k_pointwise(ctx: CPContext, phi: FiniteAutomorphism) -> bool:
    return all(phi.mapping[ctx.embed_k(k)] == ctx.embed_k(k) for k in ctx.k_list)


def extend_automorphism(
    ctx: CPContext, phi: FiniteAutomorphism, new_level: int
) -> FiniteAutomorphism:
    """Extend trivially on the upper central factor.

    Every level-n' element splits (centrally over K) into a low part below
    the old level and a high part above it; the image is phi(low) * high.
    Requires phi to fix the embedded K pointwise, which makes the split
    independent of the chosen representative.
    """
    n = phi.level
    if new_level <= n:
        raise InputError("new level must exceed the automorphism level")
    if not fixes_k_pointwise(ctx, phi):
        raise InputError("automorphism moves an embedded K element")
    mapping = {}
    for x in ctx.all_cosets(new_level):
        rep = ctx.representative(x)
        low = ctx.make({c: v for c, v in rep.items() if c < n})
        high = ctx.make({c: v for c, v in rep.items() if c >= n})
        mapping[x] = ctx.multiply(phi.mapping[low], high)
    return FiniteAutomorphism(new_level, mapping)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def word_to_json(word: AutWord) -> list:
    out = []
    for gen in word.gens:
        if isinstance(gen, Perm):
            out.append({"perm": gen.cycles()})
        else:
            out.append({"beta": list(gen.coords)})
    return out


def word_from_json(doc: list) -> AutWord:
    gens: List[AutGenerator] = []
    for item in doc:
        if not isinstance(item, dict) or len(item) != 1:
            raise InputError(f"bad generator entry {item!r}")
        if "perm" in item:
            gens.append(Perm.from_cycles(item["perm"]))
        elif "beta" in item:
            gens.append(BetaStar(tuple(item["beta"])))
        else:
            raise InputError(f"bad generator entry {item!r}")
    return AutWord(tuple(gens))
