"""Subword orders on finite words: the classical deletion order, the
strengthened order with the covering condition, pair-finders over word
streams, and the column coding that reduces the strong order to the
classical one.

Positions are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

from .errors import InputError

Letter = Hashable


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...]

    def __len__(self) -> int:
        return len(self.letters)

    @staticmethod
    def of(seq: Iterable[Letter]) -> "Word":
        return Word(tuple(seq))


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing target positions, one per source position."""

    image: Tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.image, self.image[1:])):
            raise InputError("embedding positions must strictly increase")

    def is_subword_witness(self, w1: Word, w2: Word) -> bool:
        return (
            len(self.image) == len(w1)
            and all(0 <= p < len(w2) for p in self.image)
            and all(w1.letters[i] == w2.letters[p] for i, p in enumerate(self.image))
        )

    def is_star_witness(self, w1: Word, w2: Word) -> bool:
        if not self.is_subword_witness(w1, w2):
            return False
        # covering: every target position is dominated by a same-letter image
        covered = [False] * len(w2)
        for p in self.image:
            letter = w2.letters[p]
            for i in range(p + 1):
                if w2.letters[i] == letter:
                    covered[i] = True
        return all(covered)

    def compose(self, outer: "Embedding") -> "Embedding":
        """self into the middle word, outer middle-into-target."""
        return Embedding(tuple(outer.image[p] for p in self.image))


def is_subword(w1: Word, w2: Word) -> Optional[Embedding]:
    """Greedy left-to-right deletion-order witness."""
    image = []
    pos = 0
    for letter in w1.letters:
        while pos < len(w2) and w2.letters[pos] != letter:
            pos += 1
        if pos >= len(w2):
            return None
        image.append(pos)
        pos += 1
    return Embedding(tuple(image))


def rightmost_embedding(w1: Word, w2: Word) -> Optional[Embedding]:
    """The pointwise-maximal subword witness (greedy from the right)."""
    image: List[int] = []
    pos = len(w2) - 1
    for letter in reversed(w1.letters):
        while pos >= 0 and w2.letters[pos] != letter:
            pos -= 1
        if pos < 0:
            return None
        image.append(pos)
        pos -= 1
    return Embedding(tuple(reversed(image)))


def is_star_embedded(w1: Word, w2: Word) -> Optional[Embedding]:
    """Decide the strong order: a subword witness such that every target
    position is dominated by a same-letter image position.

    The rightmost witness dominates every witness pointwise, so the
    covering condition holds for some witness iff it holds for the
    rightmost one; the search collapses to one greedy pass plus a
    per-letter last-occurrence check.
    """
    emb = rightmost_embedding(w1, w2)
    if emb is None:
        return None
    return emb if emb.is_star_witness(w1, w2) else None


# ---------------------------------------------------------------------------
# Column coding
# ---------------------------------------------------------------------------


class _Pad:
    __slots__ = ()

    def __repr__(self):
        return "x"


PAD = _Pad()


def last_appearance_order(w: Word) -> Tuple[Letter, ...]:
    """The word's letters, ordered by their last occurrence."""
    last: Dict[Letter, int] = {}
    for i, letter in enumerate(w.letters):
        last[letter] = i
    return tuple(sorted(last, key=last.get))


def block_split(w: Word) -> Tuple[List[Tuple[Letter, ...]], Letter]:
    """Split into k blocks plus the trailing final letter.

    With letters ordered by last appearance, block 0 is the prefix before
    the last occurrence of the first letter and block l starts at the last
    occurrence of letter l-1; the final letter (the last occurrence of the
    last letter) is kept separate.
    """
    if len(w) == 0:
        raise InputError("cannot block-split the empty word")
    order = last_appearance_order(w)
    cuts = [max(i for i, x in enumerate(w.letters) if x == letter) for letter in order]
    blocks = []
    start = 0
    for cut in cuts[:-1]:
        blocks.append(w.letters[start:cut])
        start = cut
    blocks.append(w.letters[start : cuts[-1]])
    return blocks, w.letters[cuts[-1]]


def column_word(w: Word) -> Word:
    """The coded word: position t carries the tuple of t-th letters of all
    blocks, padded with the out-of-alphabet sentinel."""
    blocks, _ = block_split(w)
    height = max((len(b) for b in blocks), default=0)
    return Word(
        tuple(
            tuple(b[t] if t < len(b) else PAD for b in blocks)
            for t in range(height)
        )
    )


def decode_column_embedding(w1: Word, w2: Word, fprime: Embedding) -> Embedding:
    """Turn a deletion-order witness between the coded words into a strong
    witness between the originals (blockwise position arithmetic; the
    trailing letters map to each other)."""
    blocks1, _ = block_split(w1)
    blocks2, _ = block_split(w2)
    if len(blocks1) != len(blocks2):
        raise InputError("words have different block counts")
    offsets2 = [0]
    for b in blocks2[:-1]:
        offsets2.append(offsets2[-1] + len(b))
    image = []
    for q, b in enumerate(blocks1):
        for r in range(len(b)):
            image.append(offsets2[q] + fprime.image[r])
    image.append(len(w2) - 1)
    return Embedding(tuple(image))


# ---------------------------------------------------------------------------
# Pair finders over word streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairResult:
    i: int
    j: int
    embedding: Embedding


def _signature(w: Word):
    return (frozenset(w.letters), last_appearance_order(w))


def find_increasing_pair(words: Iterable[Word], mode: str) -> Optional[PairResult]:
    """First (i, j) with i < j and w_i below w_j in the requested order.

    Deletion mode keeps the frontier of words seen so far (an antichain,
    since any domination would have ended the search) and tests each
    newcomer against it. Strong mode first buckets words by (letter set,
    last-appearance order) — the pigeonhole normalizations — and within a
    bucket tries the column coding first, falling back to the direct
    decision, which accepts pairs the coding alone misses.
    """
    if mode == "higman":
        frontier: List[Tuple[int, Word]] = []
        for j, w in enumerate(words):
            for i, earlier in frontier:
                emb = is_subword(earlier, w)
                if emb is not None:
                    return PairResult(i, j, emb)
            frontier.append((j, w))
        return None
    if mode == "star":
        buckets: Dict[object, List[Tuple[int, Word, Word]]] = {}
        for j, w in enumerate(words):
            if len(w) == 0:
                continue
            col = column_word(w)
            bucket = buckets.setdefault(_signature(w), [])
            for i, earlier, earlier_col in bucket:
                fprime = is_subword(earlier_col, col)
                if fprime is not None:
                    emb = decode_column_embedding(earlier, w, fprime)
                    if not emb.is_star_witness(earlier, w):
                        raise AssertionError("decoded witness failed validation")
                    return PairResult(i, j, emb)
                emb = is_star_embedded(earlier, w)
                if emb is not None:
                    return PairResult(i, j, emb)
            bucket.append((j, w, col))
        return None
    raise InputError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Text interface ("a,b,c" words; files with one word per line)
# ---------------------------------------------------------------------------


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return Word(())
    return Word(tuple(item.strip() for item in text.split(",")))


def format_word(w: Word) -> str:
    return ",".join(str(x) for x in w.letters)
