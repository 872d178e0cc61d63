"""7-card hand evaluation for hold'em showdowns.

`strength7` computes a single comparable integer (higher is better)
directly from rank/suit bit masks, without enumerating the 21 five-card
subsets; `evaluate7` wraps it in a `HandRank` with a named category and
the ordered tiebreak ranks. Comparing two results is equivalent to
comparing the best five-card subsets of the two seven-card hands.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cards import card, distinct

HIGH_CARD = 0
PAIR = 1
TWO_PAIR = 2
TRIPS = 3
STRAIGHT = 4
FLUSH = 5
FULL_HOUSE = 6
QUADS = 7
STRAIGHT_FLUSH = 8

CATEGORY_NAMES = (
    "high-card",
    "pair",
    "two-pair",
    "trips",
    "straight",
    "flush",
    "full-house",
    "quads",
    "straight-flush",
)

# number of tiebreak ranks that matter per category
_TIEBREAK_LEN = (5, 4, 3, 3, 1, 5, 2, 2, 1)

_WHEEL = 0x100F  # A-5-4-3-2 rank bits


@dataclass(frozen=True, slots=True, order=True)
class HandRank:
    """Category plus ordered tiebreak ranks; total order matches hand strength."""

    category: int
    tiebreak: tuple[int, ...]

    @property
    def name(self) -> str:
        return CATEGORY_NAMES[self.category]

    @classmethod
    def from_key(cls, key: int) -> "HandRank":
        category = key >> 20
        n = _TIEBREAK_LEN[category]
        ranks = tuple((key >> (4 * (4 - i))) & 0xF for i in range(n))
        return cls(category, ranks)


def _key(category: int, ranks: Iterable[int]) -> int:
    key = category << 20
    shift = 16
    for r in ranks:
        key |= r << shift
        shift -= 4
    return key


def _straight_high(rank_mask: int) -> int:
    """Highest straight top rank in the mask, or -1; the wheel tops at the five."""
    m = rank_mask & (rank_mask >> 1)
    m &= m >> 2
    m &= rank_mask >> 4
    if m:
        return m.bit_length() + 3  # top card of the run
    if rank_mask & _WHEEL == _WHEEL:
        return 3
    return -1


def _top_ranks(rank_mask: int, k: int, exclude: int = 0) -> list[int]:
    out = []
    m = rank_mask & ~exclude
    while m and len(out) < k:
        r = m.bit_length() - 1
        out.append(r)
        m &= ~(1 << r)
    return out


def strength7(cards7: Iterable[int]) -> int:
    """Packed strength of the best 5-card hand within the 7 cards."""
    counts = [0] * 13
    suit_masks = [0, 0, 0, 0]
    rank_mask = 0
    for c in cards7:
        r = c >> 2
        counts[r] += 1
        suit_masks[c & 3] |= 1 << r
        rank_mask |= 1 << r

    for sm in suit_masks:
        if sm.bit_count() >= 5:
            hi = _straight_high(sm)
            if hi >= 0:
                return _key(STRAIGHT_FLUSH, (hi,))
            return _key(FLUSH, _top_ranks(sm, 5))

    quad = -1
    trips: list[int] = []
    pairs: list[int] = []
    for r in range(12, -1, -1):
        n = counts[r]
        if n == 4:
            quad = r
        elif n == 3:
            trips.append(r)
        elif n == 2:
            pairs.append(r)

    if quad >= 0:
        kicker = _top_ranks(rank_mask, 1, exclude=1 << quad)
        return _key(QUADS, (quad, kicker[0]))
    if trips and (len(trips) > 1 or pairs):
        pair = trips[1] if len(trips) > 1 else pairs[0]
        return _key(FULL_HOUSE, (trips[0], pair))

    hi = _straight_high(rank_mask)
    if hi >= 0:
        return _key(STRAIGHT, (hi,))

    if trips:
        t = trips[0]
        return _key(TRIPS, (t, *_top_ranks(rank_mask, 2, exclude=1 << t)))
    if len(pairs) >= 2:
        p1, p2 = pairs[0], pairs[1]
        kick = _top_ranks(rank_mask, 1, exclude=(1 << p1) | (1 << p2))
        return _key(TWO_PAIR, (p1, p2, kick[0]))
    if pairs:
        p = pairs[0]
        return _key(PAIR, (p, *_top_ranks(rank_mask, 3, exclude=1 << p)))
    return _key(HIGH_CARD, _top_ranks(rank_mask, 5))


def evaluate7(cards7: Iterable[int | str]) -> HandRank:
    """Rank the best 5-card hand among 7 distinct cards.

    Accepts int-encoded cards or two-character strings like ``Ts``.
    """
    cs = [card(c) if isinstance(c, str) else int(c) for c in cards7]
    if len(cs) != 7:
        raise ValueError(f"expected 7 cards, got {len(cs)}")
    if not all(0 <= c < 52 for c in cs):
        raise ValueError("card out of range")
    if not distinct(cs):
        raise ValueError("duplicate cards")
    return HandRank.from_key(strength7(cs))
