"""Cards, seeded deal scripts, and big-blind amount formatting.

A card is a small int in [0, 52): ``rank * 4 + suit`` with ranks indexed
2..A and suits in ``cdhs`` order. All chip amounts elsewhere in the
package are integers in tenths of a big blind, formatted through
:func:`format_bb`.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

RANKS = "23456789TJQKA"
SUITS = "cdhs"

CARD_NAMES: tuple[str, ...] = tuple(f"{r}{s}" for r in RANKS for s in SUITS)
_CARD_INDEX: dict[str, int] = {name: i for i, name in enumerate(CARD_NAMES)}


def card(text: str) -> int:
    """Parse a two-character card like ``Ts`` into its int encoding."""
    try:
        return _CARD_INDEX[text]
    except KeyError:
        raise ValueError(f"not a card: {text!r}") from None


def cards(text: str) -> tuple[int, ...]:
    """Parse concatenated two-character cards, e.g. ``4h7s6c``."""
    if len(text) % 2 != 0:
        raise ValueError(f"odd-length card string: {text!r}")
    return tuple(card(text[i : i + 2]) for i in range(0, len(text), 2))


def card_name(c: int) -> str:
    return CARD_NAMES[c]


def card_rank(c: int) -> int:
    """Rank index 0..12 (deuce..ace)."""
    return c >> 2


def card_suit(c: int) -> int:
    return c & 3


class DealScript:
    """A full 52-card deal order, fixed before the hand starts.

    Seat ``i`` (counting live seats in seat order) receives cards
    ``order[2i]`` and ``order[2i+1]``; the board is drawn from
    ``order[2 * n_seats:]``. Replaying the same script with the players
    permuted over the seats therefore reuses the identical card sequence.
    """

    __slots__ = ("order", "label")

    def __init__(self, order: Sequence[int], label: str = "adhoc"):
        order = tuple(int(c) for c in order)
        if len(order) != 52 or len(set(order)) != 52 or not all(0 <= c < 52 for c in order):
            raise ValueError("deal script must be a permutation of the 52 cards")
        self.order = order
        self.label = label

    @classmethod
    def _trusted(cls, order: tuple[int, ...], label: str) -> "DealScript":
        ds = object.__new__(cls)
        ds.order = order
        ds.label = label
        return ds

    def hole_cards(self, seat: int) -> tuple[int, int]:
        return self.order[2 * seat], self.order[2 * seat + 1]

    def board_cards(self, n_seats: int) -> tuple[int, ...]:
        start = 2 * n_seats
        return self.order[start : start + 5]

    def permuted(self, perm: Sequence[int]) -> "DealScript":
        """Reassign hole-card blocks: new seat ``j`` gets old seat ``perm[j]``'s cards."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of seat indexes")
        order = list(self.order)
        for j, src in enumerate(perm):
            order[2 * j : 2 * j + 2] = self.order[2 * src : 2 * src + 2]
        return DealScript(order, label=f"{self.label}~perm{tuple(perm)}")


_MASK64 = 0xFFFFFFFFFFFFFFFF
_local = threading.local()


def _stream_words(master_seed: int, path: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """(counter, key) words for Philox: the path rides in the counter.

    The 256-bit counter only ever advances its low word during draws, so
    the three high words can carry a stream path without collisions; the
    path length goes into the key so (7,) and (7, 0) stay distinct.
    Explicit uint64 arrays: a plain int list would round-trip through
    float64 inside the constructor and mangle values above 2**63.
    """
    if len(path) > 3:
        raise ValueError("stream path supports at most 3 components")
    counter = np.array(
        [0] + [path[i] & _MASK64 if i < len(path) else 0 for i in range(3)], dtype=np.uint64
    )
    key = np.array([master_seed & _MASK64, len(path)], dtype=np.uint64)
    return counter, key


def deal_stream(master_seed: int, *path: int) -> np.random.Generator:
    """Independent generator fully determined by (master_seed, path).

    Counter-based streams let deals run in any order (or in parallel)
    without changing the cards any one deal sees.
    """
    counter, key = _stream_words(master_seed, path)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def _fast_philox(master_seed: int, path: tuple[int, ...]) -> np.random.Philox:
    """Re-key a thread-local Philox to the (master_seed, path) stream.

    Identical stream to :func:`deal_stream`, minus the constructor cost.
    Only for use that consumes the draws before the next re-key.
    """
    bg = getattr(_local, "philox", None)
    if bg is None:
        bg = np.random.Philox(key=0)
        _local.philox = bg
    counter, key = _stream_words(master_seed, path)
    state = bg.state
    state["state"]["counter"][:] = counter
    state["state"]["key"][:] = key
    state["buffer_pos"] = 4  # force a refill on the first draw
    state["has_uint32"] = 0
    state["uinteger"] = 0
    bg.state = state
    return bg


def make_deal(master_seed: int, *path: int) -> DealScript:
    """Shuffle one deck from the (master_seed, path) stream."""
    rng = np.random.Generator(_fast_philox(master_seed, path))
    label = f"philox:{master_seed}/{'.'.join(str(p) for p in path)}"
    return DealScript._trusted(tuple(rng.permutation(52).tolist()), label)


def format_bb(tenths: int) -> str:
    """Render tenths of a BB: ``250 -> "25"``, ``65 -> "6.5"`` (no trailing .0)."""
    if tenths < 0:
        return "-" + format_bb(-tenths)
    whole, frac = divmod(tenths, 10)
    return str(whole) if frac == 0 else f"{whole}.{frac}"


def format_bb_fixed(tenths: int) -> str:
    """Render tenths of a BB always with one decimal: ``190 -> "19.0"``."""
    if tenths < 0:
        return "-" + format_bb_fixed(-tenths)
    whole, frac = divmod(tenths, 10)
    return f"{whole}.{frac}"


def bb_float(tenths: int) -> float:
    """Tenths of a BB as a float BB value (exact for one decimal)."""
    return tenths / 10.0


def distinct(cs: Iterable[int]) -> bool:
    seen = set()
    for c in cs:
        if c in seen:
            return False
        seen.add(c)
    return True
