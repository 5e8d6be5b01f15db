"""Bounded-language machinery: bounds, blocks, conjugates, periodicity.

A language is *bounded* when it is a subset of w1* w2* ... wm* for a fixed
word sequence (the "bound"), and *strictly bounded* when the w_j are single,
pairwise distinct symbols.  This module holds the descriptors for both, block
decomposition of words, word rotations, the Fine-Wilf agreement threshold for
periodic sequences, and string oracles for the witness languages used by the
acceptor and benchmark suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class BoundDescriptor:
    """Word sequence w1, ..., wm describing the bound w1* w2* ... wm*."""

    words: tuple[str, ...]

    def __post_init__(self):
        if len(self.words) < 1:
            raise ValueError("a bound needs at least one word")
        for w in self.words:
            if not w:
                raise ValueError("bound words must be nonempty")

    @property
    def mu(self) -> int:
        """Length of the longest bound word."""
        return max(len(w) for w in self.words)

    @property
    def m(self) -> int:
        return len(self.words)

    def alphabet(self) -> set[str]:
        return set("".join(self.words))


@dataclass(frozen=True)
class StrictBound:
    """Pairwise distinct symbols a1, ..., am describing a1* a2* ... am*."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ValueError("a strict bound needs at least one symbol")
        for s in self.symbols:
            if len(s) != 1:
                raise ValueError("strict bound entries must be single symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("strict bound symbols must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.symbols)

    def as_bound(self) -> BoundDescriptor:
        return BoundDescriptor(self.symbols)

    def matches(self, word: str) -> bool:
        """True iff word lies in a1* a2* ... am*."""
        i = 0
        for ch in word:
            while i < len(self.symbols) and self.symbols[i] != ch:
                i += 1
            if i >= len(self.symbols):
                return False
        return True


@dataclass(frozen=True)
class Block:
    """Maximal run of one symbol within a word."""

    symbol: str
    length: int
    start: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("blocks have length >= 1")


def decompose_blocks(word: str) -> list[Block]:
    """Split a word into its maximal same-symbol runs, in order."""
    blocks: list[Block] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        blocks.append(Block(word[i], j - i, i))
        i = j
    return blocks


def matches_bound(word: str, bound: BoundDescriptor) -> bool:
    """Decide word in w1^k1 ... wm^km for some exponents k_j >= 0.

    Dynamic programming over (position, bound index) so that ambiguous
    bounds (shared symbols, overlapping words) are handled correctly.
    """
    n = len(word)
    # reachable[i] = set of positions coverable using words w1..wi
    reachable = {0}
    for w in bound.words:
        step = len(w)
        closed = set(reachable)
        frontier = sorted(closed)
        while frontier:
            nxt = []
            for pos in frontier:
                end = pos + step
                if end <= n and word[pos:end] == w and end not in closed:
                    closed.add(end)
                    nxt.append(end)
            frontier = nxt
        reachable = closed
    return n in reachable


def conjugates(word: str) -> list[str]:
    """All distinct rotations of a word, in rotation order from the word itself."""
    if not word:
        raise ValueError("the empty word has no rotations")
    seen: list[str] = []
    for i in range(len(word)):
        rot = word[i:] + word[:i]
        if rot not in seen:
            seen.append(rot)
    return seen


def fine_wilf_threshold(h: int, k: int) -> int:
    """Agreement length forcing an h-periodic and a k-periodic sequence to coincide.

    Two periodic sequences of periods h and k that agree on this many
    consecutive positions agree everywhere: h + k - gcd(h, k).
    """
    if h < 1 or k < 1:
        raise ValueError("periods must be positive")
    return h + k - math.gcd(h, k)


# Witness-language identifiers.  MARKED_PALINDROME is x$x^T over {0,1},
# PADDED_PALINDROME adds an all-zero middle of length |x| per side, and
# LOG_PADDED(m) shrinks the information content to a logarithmic part:
# x 0^(2^(|x|/m)-|x|) $ 0^(2^(|x|/m)-|x|) x^T.  SQUARES is {ww} over {0,1}.
MARKED_PALINDROME = "L"
PADDED_PALINDROME = "Lprime"
LOG_PADDED = "Lm"
SQUARES = "WW"

_BITS = frozenset("01")


@dataclass(frozen=True)
class LanguageId:
    tag: str
    m: int = 1

    def __post_init__(self):
        if self.tag not in (MARKED_PALINDROME, PADDED_PALINDROME, LOG_PADDED, SQUARES):
            raise ValueError(f"unknown language tag {self.tag!r}")
        if self.m < 1:
            raise ValueError("parameter m must be >= 1")


def _is_marked_palindrome(word: str) -> bool:
    if word.count("$") != 1:
        return False
    x, _, y = word.partition("$")
    if not set(x) <= _BITS or not set(y) <= _BITS:
        return False
    return y == x[::-1]


def _is_padded_palindrome(word: str) -> bool:
    if word.count("$") != 1:
        return False
    u, _, v = word.partition("$")
    if not set(u) <= _BITS or not set(v) <= _BITS:
        return False
    if len(u) != len(v) or len(u) % 2 != 0:
        return False
    half = len(u) // 2
    x = u[:half]
    return (
        u[half:] == "0" * half
        and v[:half] == "0" * half
        and v[half:] == x[::-1]
    )


def log_padded_member_length(x_len: int, m: int) -> int | None:
    """Total word length 2 * 2^(|x|/m) + 1 for an embedded x, or None if malformed.

    Membership requires m to divide |x| and the padding exponent to be large
    enough that 2^(|x|/m) - |x| is nonnegative.
    """
    if x_len % m != 0:
        return None
    half = 2 ** (x_len // m)
    if half < x_len:
        return None
    return 2 * half + 1


def _is_log_padded(word: str, m: int) -> bool:
    if word.count("$") != 1:
        return False
    u, _, v = word.partition("$")
    if not set(u) <= _BITS or not set(v) <= _BITS:
        return False
    h = len(u)
    if len(v) != h:
        return False
    # h must be an exact power of two, and the embedded x has |x| = m * log2(h).
    if h < 1 or h & (h - 1):
        return False
    q = h.bit_length() - 1
    x_len = m * q
    if h < x_len:
        return False
    x = u[:x_len]
    pad = "0" * (h - x_len)
    return u[x_len:] == pad and v[: h - x_len] == pad and v[h - x_len:] == x[::-1]


def _is_square(word: str) -> bool:
    if not set(word) <= _BITS:
        return False
    if len(word) % 2 != 0:
        return False
    half = len(word) // 2
    return word[:half] == word[half:]


def oracle_membership(lang: LanguageId, word: str) -> bool:
    """Direct string-predicate evaluation of a witness-language definition."""
    if lang.tag == MARKED_PALINDROME:
        return _is_marked_palindrome(word)
    if lang.tag == PADDED_PALINDROME:
        return _is_padded_palindrome(word)
    if lang.tag == LOG_PADDED:
        return _is_log_padded(word, lang.m)
    return _is_square(word)


def enumerate_bounded_inputs(
    bound: BoundDescriptor | StrictBound, max_len: int
) -> Iterator[str]:
    """Yield every word of the bound up to max_len, once, in length-lex order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    if isinstance(bound, StrictBound):
        bound = bound.as_bound()
    by_length: dict[int, set[str]] = {i: set() for i in range(max_len + 1)}
    # Breadth over exponent vectors; dedupe because distinct vectors can
    # produce the same string for general bounds.
    frontier = {""}
    by_length[0].add("")
    for w in bound.words:
        grown = set(frontier)
        layer = list(frontier)
        while layer:
            nxt = []
            for word in layer:
                cand = word + w
                if len(cand) <= max_len and cand not in grown:
                    grown.add(cand)
                    nxt.append(cand)
            layer = nxt
        frontier = grown
    for word in frontier:
        by_length[len(word)].add(word)
    for length in range(max_len + 1):
        for word in sorted(by_length[length]):
            yield word
