"""End-to-end pipeline over the central product: normalize a family of
tuples, find a strongly embedded pair, build the shift-and-copy map from
the witness, realize it as a word in the generator set, and verify that
it maps one tuple to the other while preserving the element ordering.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .automorphisms import AutWord, Perm, alpha_word, apply_word, word_to_json
from .central_product import CPContext, CPElement
from .errors import InputError, InsufficientFamilyError
from .wqo import Embedding, Word, find_increasing_pair, last_appearance_order

MemberTuple = Tuple[CPElement, ...]


@dataclass
class TupleFamily:
    ctx: CPContext
    arity: int
    members: List[MemberTuple]

    def __post_init__(self):
        for member in self.members:
            if len(member) != self.arity:
                raise InputError("member arity mismatch")


def letter_word(ctx: CPContext, member: MemberTuple) -> Word:
    """The member as a finite word over n-tuples of group elements: the
    i-th letter collects the i-th entries of the components' canonical
    minimal representatives, truncated at the last nontrivial index."""
    e = ctx.group.identity_index
    reps = [ctx.minimal_representative(comp).as_dict() for comp in member]
    top = max((c for rep in reps for c in rep), default=-1)
    return Word(
        tuple(tuple(rep.get(i, e) for rep in reps) for i in range(top + 1))
    )


@dataclass
class NormalizedFamily:
    ctx: CPContext
    arity: int
    kept: Tuple[int, ...]  # original member indices, ascending
    words: Tuple[Word, ...]  # aligned with kept
    members: Tuple[MemberTuple, ...]
    alphabet: Tuple[tuple, ...]  # letters by last appearance (shared)


def normalize_family(fam: TupleFamily) -> NormalizedFamily:
    """Pigeonhole filtering: bucket members by letter set, last-appearance
    order, and per-letter multiplicity residues modulo the exponent; keep
    the largest bucket with at least two members."""
    if len(fam.members) < 2:
        raise InsufficientFamilyError("need at least 2 members")
    m = fam.ctx.exponent
    buckets: Dict[object, List[int]] = {}
    words = [letter_word(fam.ctx, member) for member in fam.members]
    for idx, word in enumerate(words):
        order = last_appearance_order(word)
        residues = tuple(
            sum(1 for x in word.letters if x == letter) % m for letter in order
        )
        buckets.setdefault((order, residues), []).append(idx)
    best = max(buckets.values(), key=len)
    if len(best) < 2:
        raise InsufficientFamilyError(
            "no two members share letter set, last-appearance order and "
            "multiplicity residues; supply more members"
        )
    kept = tuple(best)
    return NormalizedFamily(
        ctx=fam.ctx,
        arity=fam.arity,
        kept=kept,
        words=tuple(words[k] for k in kept),
        members=tuple(fam.members[k] for k in kept),
        alphabet=last_appearance_order(words[kept[0]]),
    )


@dataclass
class BetaMap:
    ctx: CPContext
    i: int  # original family indices
    j: int
    word_i: Word
    word_j: Word
    f: Embedding
    i_s: Dict[tuple, int]  # per letter: last occurrence in word_j
    I_s: Dict[tuple, Tuple[int, ...]]  # per letter: target positions off the image
    member_i: MemberTuple
    member_j: MemberTuple

    @property
    def l_i(self) -> int:
        return len(self.word_i) - 1

    @property
    def l_j(self) -> int:
        return len(self.word_j) - 1

    @property
    def shift(self) -> int:
        return self.l_j - self.l_i


def build_beta(nf: NormalizedFamily) -> BetaMap:
    """Find a strongly embedded pair among the normalized words and read
    off the per-letter copy data from the witness."""
    if len(nf.words[0]) == 0:
        # identity members: the trivial map
        pair_i, pair_j, emb = 0, 1, Embedding(())
    else:
        result = find_increasing_pair(nf.words, "star")
        if result is None:
            raise InsufficientFamilyError(
                "no strongly embedded pair in the bucket; supply more members"
            )
        pair_i, pair_j, emb = result.i, result.j, result.embedding
    w_i, w_j = nf.words[pair_i], nf.words[pair_j]
    image = set(emb.image)
    i_s: Dict[tuple, int] = {}
    I_s: Dict[tuple, Tuple[int, ...]] = {}
    m = nf.ctx.exponent
    for letter in nf.alphabet:
        positions = [p for p, x in enumerate(w_j.letters) if x == letter]
        i_s[letter] = positions[-1]
        off = tuple(p for p in positions if p not in image)
        if len(off) % m != 0:
            raise AssertionError(
                f"exponent {m} does not divide |I_s| = {len(off)}"
            )
        I_s[letter] = off
    return BetaMap(
        ctx=nf.ctx,
        i=nf.kept[pair_i],
        j=nf.kept[pair_j],
        word_i=w_i,
        word_j=w_j,
        f=emb,
        i_s=i_s,
        I_s=I_s,
        member_i=nf.members[pair_i],
        member_j=nf.members[pair_j],
    )


def apply_beta(bm: BetaMap, x: CPElement) -> CPElement:
    """The shift-and-copy map on a finite-support element, coordinate by
    coordinate: positions up to l_i follow the witness (fanning out over
    I_s when they land on a letter's last occurrence), higher positions
    shift by l_j - l_i."""
    ctx = bm.ctx
    g = ctx.group
    rep = ctx.minimal_representative(x).as_dict()
    out: Dict[int, int] = {}

    def emit(coord, val):
        out[coord] = g.mul[out.get(coord, g.identity_index)][val]

    for l, val in rep.items():
        if l <= bm.l_i:
            t = bm.f.image[l]
            emit(t, val)
            letter = bm.word_j.letters[t]
            if bm.i_s[letter] == t:
                for p in bm.I_s[letter]:
                    emit(p, val)
        else:
            emit(l + bm.shift, val)
    return ctx.make(out)


def min_word_levels(bm: BetaMap) -> Tuple[int, int]:
    """The least (l, l') accepted by beta_as_word."""
    l_prime = bm.l_j + 1
    return (l_prime + max(1, bm.shift), l_prime)


def beta_as_word(bm: BetaMap, l: int, l_prime: int) -> AutWord:
    """A word in the generators agreeing with the map on every element
    supported within {0,...,l'}: a permutation of {0,...,l} extending the
    witness and shifting (l_i, l'] by l_j - l_i, followed by one copy word
    per letter with a nonempty off-image set, anchored past l."""
    l_min, lp_min = min_word_levels(bm)
    if l_prime <= bm.l_j or l <= l_prime or l < l_prime + bm.shift:
        raise InputError(
            f"levels too small; minimal feasible (l, l') = ({l_min}, {lp_min})"
        )
    sigma: Dict[int, int] = {}
    for t in range(bm.l_i + 1):
        sigma[t] = bm.f.image[t]
    for t in range(bm.l_i + 1, l_prime + 1):
        sigma[t] = t + bm.shift
    free_targets = sorted(set(range(l + 1)) - set(sigma.values()))
    for t, target in zip(range(l_prime + 1, l + 1), free_targets):
        sigma[t] = target
    word = AutWord((Perm.from_mapping(sigma),))
    for letter in bm.i_s:
        if bm.I_s[letter]:
            word = word * alpha_word(
                bm.ctx, bm.I_s[letter], i0=bm.i_s[letter], j0=l + 1
            )
    return word


# ---------------------------------------------------------------------------
# End-to-end run with verification
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    ok: bool
    i: int
    j: int
    f: Tuple[int, ...]
    i_s: Dict[tuple, int]
    I_s: Dict[tuple, Tuple[int, ...]]
    levels: Tuple[int, int]
    word: AutWord
    reports: Dict[str, dict]
    seed: int
    depth: int
    failures: List[str]

    def to_json(self) -> dict:
        def letter_key(letter):
            return ",".join(str(v) for v in letter)

        return {
            "ok": self.ok,
            "i": self.i,
            "j": self.j,
            "f": list(self.f),
            "i_s": {letter_key(k): v for k, v in sorted(self.i_s.items())},
            "I_s": {
                letter_key(k): list(v) for k, v in sorted(self.I_s.items())
            },
            "levels": list(self.levels),
            "word": word_to_json(self.word),
            "reports": self.reports,
            "seed": self.seed,
            "depth": self.depth,
            "failures": self.failures,
        }


def _random_supported(ctx: CPContext, rng: random.Random, top: int) -> CPElement:
    coords = rng.sample(range(top + 1), rng.randint(0, min(3, top + 1)))
    return ctx.make({c: rng.randrange(ctx.group.order) for c in coords})


def _max_diff_index(ctx: CPContext, x: CPElement, y: CPElement) -> int:
    rx = ctx.minimal_representative(x).as_dict()
    ry = ctx.minimal_representative(y).as_dict()
    return max(c for c in set(rx) | set(ry) if rx.get(c) != ry.get(c))


def run_az(fam: TupleFamily, depth: int = 500, seed: int = 0) -> Certificate:
    """Full pipeline plus verification sweeps; returns a certificate whose
    reports cover (a) tuple mapping, (b) order preservation, (c) the index
    law for high differing indices, (d) agreement with the emitted word."""
    ctx = fam.ctx
    rng = random.Random(seed)
    nf = normalize_family(fam)
    bm = build_beta(nf)
    failures: List[str] = []
    reports: Dict[str, dict] = {}

    # (a) the map sends the i-th member to the j-th, componentwise
    mapped = sum(
        1
        for a, b in zip(bm.member_i, bm.member_j)
        if apply_beta(bm, a) == b
    )
    reports["tuple_mapping"] = {"components_ok": mapped, "of": fam.arity}
    if mapped != fam.arity:
        failures.append("tuple_mapping")

    l, l_prime = min_word_levels(bm)

    # (b) order preservation on the enumeration prefix and random pairs
    ordered = 0
    prefix = ctx.enumerate(depth)
    images = [apply_beta(bm, x) for x in prefix]
    for a, b in zip(images, images[1:]):
        if ctx.compare(a, b) == -1:
            ordered += 1
    pair_checks = 0
    law_checks = 0
    law_ok = 0
    for _ in range(10 * depth):
        x = _random_supported(ctx, rng, l_prime)
        y = _random_supported(ctx, rng, l_prime)
        cmp_xy = ctx.compare(x, y)
        if cmp_xy == 0:
            continue
        if cmp_xy > 0:
            x, y = y, x
        bx, by = apply_beta(bm, x), apply_beta(bm, y)
        pair_checks += 1
        if ctx.compare(bx, by) == -1:
            ordered += 1
        # (c) index law when the top differing index clears l_i
        t0 = _max_diff_index(ctx, x, y)
        if t0 > bm.l_i:
            law_checks += 1
            if _max_diff_index(ctx, bx, by) == t0 + bm.shift:
                law_ok += 1
    expected_ordered = (depth - 1) + pair_checks
    reports["order_preservation"] = {
        "ordered": ordered,
        "of": expected_ordered,
    }
    if ordered != expected_ordered:
        failures.append("order_preservation")
    reports["index_law"] = {"ok": law_ok, "of": law_checks}
    if law_ok != law_checks:
        failures.append("index_law")

    # (d) the emitted word agrees on everything supported within l'
    word = beta_as_word(bm, l, l_prime)
    agree = 0
    total = 0
    for coord in range(l_prime + 1):
        for val in range(ctx.group.order):
            x = ctx.embed(val, coord)
            total += 1
            if apply_word(ctx, word, x) == apply_beta(bm, x):
                agree += 1
    for _ in range(50):
        x = _random_supported(ctx, rng, l_prime)
        total += 1
        if apply_word(ctx, word, x) == apply_beta(bm, x):
            agree += 1
    reports["word_agreement"] = {"agree": agree, "of": total}
    if agree != total:
        failures.append("word_agreement")

    return Certificate(
        ok=not failures,
        i=bm.i,
        j=bm.j,
        f=bm.f.image,
        i_s=bm.i_s,
        I_s=bm.I_s,
        levels=(l, l_prime),
        word=word,
        reports=reports,
        seed=seed,
        depth=depth,
        failures=failures,
    )
