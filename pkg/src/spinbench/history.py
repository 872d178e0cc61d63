"""Hand-history ingest: canonical text format -> decision records.

One hand per blank-line-separated block:

    HAND id=<id> sb=<num> bb=<num> btn=<name>
    SEAT <name> <stack>            (2 or 3, in seat order)
    DEALT <name> <c1><c2>          (any hands known to the file)
    PRE
    <name> fold|check|call|bet <amt>|raise <amt>|allin
    FLOP <c> <c> <c>
    ...
    TURN <c>
    RIVER <c>

Amounts and stacks are in the site's raw units and are normalized to
big blinds (rounded to a tenth) on conversion; ``raise`` amounts are
raise-to totals. Lines that match no directive (timestamps, chat) are
ignored; a malformed known directive rejects the whole block with its
line number.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import engine
from .cards import card
from .codec import encode_prompt
from .engine import (
    ActionToken,
    BB,
    BTN,
    DealScript,
    EngineError,
    ROLES_2,
    ROLES_3,
    SB,
    apply_action,
    new_cash_hand,
)

SOURCES = ("professional", "solver", "synthetic")


@dataclass(frozen=True, slots=True)
class DecisionRecord:
    """One labeled decision point, ready for evaluation or training."""

    prompt: str
    truth: str
    source: str
    scenario: str | None
    hand_id: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "prompt": self.prompt,
                "truth": self.truth,
                "source": self.source,
                "scenario": self.scenario,
                "hand_id": self.hand_id,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "DecisionRecord":
        d = json.loads(line)
        return cls(d["prompt"], d["truth"], d["source"], d.get("scenario"), d["hand_id"])


@dataclass(slots=True)
class RawAction:
    name: str
    verb: str
    amount_raw: float | None


@dataclass(slots=True)
class RawStreet:
    street: str
    cards: tuple[int, ...]
    actions: list[RawAction] = field(default_factory=list)


@dataclass(slots=True)
class SeatEntry:
    name: str
    stack_raw: float
    cards: tuple[int, int] | None = None


@dataclass(slots=True)
class StructuredHand:
    hand_id: str
    sb_raw: float
    bb_raw: float
    button_name: str
    seats: list[SeatEntry]
    streets: list[RawStreet]

    def seat_index(self, name: str) -> int:
        for i, s in enumerate(self.seats):
            if s.name == name:
                return i
        raise KeyError(name)

    def roles(self) -> list[str]:
        """Role per seat, derived from the button and seat order."""
        n = len(self.seats)
        btn = self.seat_index(self.button_name)
        order = ROLES_2 if n == 2 else ROLES_3
        roles = [""] * n
        for k, role in enumerate(order):
            roles[(btn + k) % n] = role
        return roles


@dataclass(frozen=True, slots=True)
class IngestIssue:
    line_no: int
    message: str


class HandRejected(Exception):
    """Structured hand that fails replay (corrupt or illegal history)."""


_HAND_RE = re.compile(r"HAND\s+id=(\S+)\s+sb=(\d+(?:\.\d+)?)\s+bb=(\d+(?:\.\d+)?)\s+btn=(\S+)(?:\s+.*)?$")
_SEAT_RE = re.compile(r"SEAT\s+(\S+)\s+(\d+(?:\.\d+)?)\s*$")
_DEALT_RE = re.compile(r"DEALT\s+(\S+)\s+([2-9TJQKA][cdhs])([2-9TJQKA][cdhs])\s*$")
_BOARD_RES = {
    "FLOP": re.compile(r"FLOP\s+([2-9TJQKA][cdhs])\s+([2-9TJQKA][cdhs])\s+([2-9TJQKA][cdhs])\s*$"),
    "TURN": re.compile(r"TURN\s+([2-9TJQKA][cdhs])\s*$"),
    "RIVER": re.compile(r"RIVER\s+([2-9TJQKA][cdhs])\s*$"),
}
_ACTION_RE = re.compile(r"(\S+)\s+(fold|check|call|bet|raise|allin)(?:\s+(\S+))?\s*$")
_STREET_OF = {"PRE": engine.PRE, "FLOP": engine.FLOP, "TURN": engine.TURN, "RIVER": engine.RIVER}


def _parse_block(lines: list[tuple[int, str]]) -> StructuredHand:
    header = None
    seats: list[SeatEntry] = []
    streets: list[RawStreet] = []
    seen_names: set[str] = set()

    for line_no, line in lines:
        word = line.split(None, 1)[0] if line.split() else ""
        if word == "HAND":
            m = _HAND_RE.match(line)
            if not m:
                raise HandRejected(f"line {line_no}: malformed HAND line")
            if header is not None:
                raise HandRejected(f"line {line_no}: duplicate HAND line")
            header = (m.group(1), float(m.group(2)), float(m.group(3)), m.group(4))
        elif word == "SEAT":
            m = _SEAT_RE.match(line)
            if not m:
                raise HandRejected(f"line {line_no}: malformed SEAT line")
            if streets:
                raise HandRejected(f"line {line_no}: SEAT after actions started")
            name = m.group(1)
            if name in seen_names:
                raise HandRejected(f"line {line_no}: duplicate seat {name}")
            seen_names.add(name)
            seats.append(SeatEntry(name, float(m.group(2))))
        elif word == "DEALT":
            m = _DEALT_RE.match(line)
            if not m:
                raise HandRejected(f"line {line_no}: malformed DEALT line")
            name = m.group(1)
            if name not in seen_names:
                raise HandRejected(f"line {line_no}: DEALT for unknown seat {name}")
            for s in seats:
                if s.name == name:
                    s.cards = (card(m.group(2)), card(m.group(3)))
        elif word in ("PRE", "FLOP", "TURN", "RIVER"):
            expected = ("PRE", "FLOP", "TURN", "RIVER")[len(streets)] if len(streets) < 4 else None
            if word != expected:
                raise HandRejected(f"line {line_no}: street {word} out of order")
            if word == "PRE":
                if line.strip() != "PRE":
                    raise HandRejected(f"line {line_no}: malformed PRE line")
                streets.append(RawStreet(engine.PRE, ()))
            else:
                m = _BOARD_RES[word].match(line)
                if not m:
                    raise HandRejected(f"line {line_no}: malformed {word} line")
                streets.append(RawStreet(_STREET_OF[word], tuple(card(c) for c in m.groups())))
        else:
            m = _ACTION_RE.match(line)
            if m and m.group(1) in seen_names:
                if not streets:
                    raise HandRejected(f"line {line_no}: action before PRE")
                verb, amt = m.group(2), m.group(3)
                amount = None
                if verb in ("bet", "raise"):
                    if amt is None or not re.fullmatch(r"\d+(?:\.\d+)?", amt):
                        raise HandRejected(f"line {line_no}: {verb} needs a numeric amount")
                    amount = float(amt)
                elif amt is not None:
                    raise HandRejected(f"line {line_no}: {verb} takes no amount")
                streets[-1].actions.append(RawAction(m.group(1), verb, amount))
            # anything else: chat/timestamps, ignored

    if header is None:
        raise HandRejected(f"line {lines[0][0]}: block has no HAND line")
    hand_id, sb_raw, bb_raw, btn = header
    if not 2 <= len(seats) <= 3:
        raise HandRejected(f"line {lines[0][0]}: need 2 or 3 SEAT lines, got {len(seats)}")
    if btn not in seen_names:
        raise HandRejected(f"line {lines[0][0]}: button {btn} is not seated")
    if bb_raw <= 0 or sb_raw <= 0 or sb_raw > bb_raw:
        raise HandRejected(f"line {lines[0][0]}: bad blinds {sb_raw}/{bb_raw}")
    if not streets:
        raise HandRejected(f"line {lines[0][0]}: no streets")
    return StructuredHand(hand_id, sb_raw, bb_raw, btn, seats, streets)


def parse_history(text: str) -> tuple[list[StructuredHand], list[IngestIssue]]:
    """Parse canonical hand-history text; skipped blocks come back as issues."""
    hands: list[StructuredHand] = []
    issues: list[IngestIssue] = []
    block: list[tuple[int, str]] = []

    def flush() -> None:
        if not block:
            return
        try:
            hands.append(_parse_block(block))
        except HandRejected as exc:
            issues.append(IngestIssue(block[0][0], str(exc)))
        block.clear()

    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            block.append((line_no, line.rstrip()))
        else:
            flush()
    flush()
    return hands, issues


def anonymize(hand: StructuredHand) -> StructuredHand:
    """Replace player names by role labels; deterministic, non-reversible."""
    roles = hand.roles()
    mapping = {s.name: roles[i] for i, s in enumerate(hand.seats)}
    return StructuredHand(
        hand_id=hand.hand_id,
        sb_raw=hand.sb_raw,
        bb_raw=hand.bb_raw,
        button_name=mapping[hand.button_name],
        seats=[SeatEntry(mapping[s.name], s.stack_raw, s.cards) for s in hand.seats],
        streets=[
            RawStreet(st.street, st.cards, [RawAction(mapping[a.name], a.verb, a.amount_raw) for a in st.actions])
            for st in hand.streets
        ],
    )


def _to_tenths(amount_raw: float, bb_raw: float) -> int:
    return round(amount_raw / bb_raw * 10)


def _build_deal(hand: StructuredHand) -> DealScript:
    n = len(hand.seats)
    slots: dict[int, int] = {}
    used: set[int] = set()
    for i, seat in enumerate(hand.seats):
        if seat.cards is not None:
            slots[2 * i], slots[2 * i + 1] = seat.cards
            used.update(seat.cards)
    board = [c for st in hand.streets for c in st.cards]
    for j, c in enumerate(board):
        slots[2 * n + j] = c
        used.add(c)
    if len(used) != len(slots):
        raise HandRejected(f"hand {hand.hand_id}: duplicate cards in history")
    filler = (c for c in range(52) if c not in used)
    return DealScript([slots[i] if i in slots else next(filler) for i in range(52)], label="history")


def _scenario(hand: StructuredHand) -> str | None:
    roles = hand.roles()
    if len(hand.seats) == 2:
        return "HU"
    folded_pre = {a.name for a in hand.streets[0].actions if a.verb == "fold"}
    reached = [roles[i] for i, s in enumerate(hand.seats) if s.name not in folded_pre]
    if len(hand.streets) > 1 and len(reached) == 2:
        pair = frozenset(reached)
        return {
            frozenset({SB, BB}): "SBvBB",
            frozenset({SB, BTN}): "SBvBTN",
            frozenset({BB, BTN}): "BBvBTN",
        }[pair]
    return None


def to_records(hand: StructuredHand, hero: str, source: str = "professional") -> list[DecisionRecord]:
    """Replay the hand and emit one record per hero decision point.

    ``hero`` is a seat name or a role label. Each prompt reflects only
    what the hero can see at that instant; the truth action is the
    engine-normalized token actually taken. Replay failures reject the
    whole hand.
    """
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}")
    roles = hand.roles()
    hero_idx = None
    for i, seat in enumerate(hand.seats):
        if seat.name == hero or roles[i] == hero:
            hero_idx = i
            break
    if hero_idx is None:
        raise HandRejected(f"hand {hand.hand_id}: no seat or role named {hero}")
    if hand.seats[hero_idx].cards is None:
        raise HandRejected(f"hand {hand.hand_id}: hero hole cards unknown")
    hero_role = roles[hero_idx]

    deal = _build_deal(hand)
    try:
        state = new_cash_hand(
            stacks=[s.stack_raw / hand.bb_raw for s in hand.seats],
            blinds=(hand.sb_raw / hand.bb_raw, 1.0),
            button=hand.seat_index(hand.button_name),
            deal=deal,
            names=[s.name for s in hand.seats],
        )
    except EngineError as exc:
        raise HandRejected(f"hand {hand.hand_id}: {exc}") from exc

    scenario = _scenario(hand)
    records: list[DecisionRecord] = []
    for street in hand.streets:
        if state.street != street.street:
            raise HandRejected(
                f"hand {hand.hand_id}: history at {street.street} but replay at {state.street}"
            )
        for action in street.actions:
            seat_idx = hand.seat_index(action.name)
            token = _token_of(action, hand.bb_raw)
            prompt = None
            if seat_idx == hero_idx:
                prompt = encode_prompt(state, hero_role)
            log = state.history[-1]
            n_before = len(log.actions)
            try:
                apply_action(state, roles[seat_idx], token)
            except EngineError as exc:
                raise HandRejected(f"hand {hand.hand_id}: {exc}") from exc
            if prompt is not None:
                truth = log.actions[n_before][1]
                records.append(DecisionRecord(prompt, truth.serialize(), source, scenario, hand.hand_id))
    return records


def _token_of(action: RawAction, bb_raw: float) -> ActionToken:
    if action.verb == "fold":
        return engine.fold()
    if action.verb == "check":
        return engine.check()
    if action.verb == "call":
        return engine.call()
    if action.verb == "allin":
        return engine.allin()
    tenths = _to_tenths(action.amount_raw, bb_raw)  # type: ignore[arg-type]
    if tenths <= 0:
        raise HandRejected(f"{action.verb} of {action.amount_raw} rounds to zero BB")
    return engine.bet(tenths) if action.verb == "bet" else engine.raise_to(tenths)


def ingest_text(text: str, hero: str, source: str = "professional") -> tuple[list[DecisionRecord], list[IngestIssue]]:
    """parse_history + to_records over a whole file's text."""
    hands, issues = parse_history(text)
    records: list[DecisionRecord] = []
    for hand in hands:
        try:
            records.extend(to_records(hand, hero, source))
        except HandRejected as exc:
            issues.append(IngestIssue(0, str(exc)))
    return records, issues


def split(
    records: Sequence[DecisionRecord], ratios: Sequence[float], seed: int
) -> list[list[DecisionRecord]]:
    """Partition records by hand so no hand straddles two partitions."""
    if not records:
        raise ValueError("no records to split")
    if abs(sum(ratios) - 1.0) > 1e-9 or any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive and sum to 1")
    hand_ids: list[str] = []
    seen: set[str] = set()
    for r in records:
        if r.hand_id not in seen:
            seen.add(r.hand_id)
            hand_ids.append(r.hand_id)
    rng = random.Random(seed)
    rng.shuffle(hand_ids)
    n = len(hand_ids)
    cuts = [0]
    acc = 0.0
    for ratio in ratios:
        acc += ratio
        cuts.append(round(acc * n))
    assignment: dict[str, int] = {}
    for part in range(len(ratios)):
        for hid in hand_ids[cuts[part] : cuts[part + 1]]:
            assignment[hid] = part
    out: list[list[DecisionRecord]] = [[] for _ in ratios]
    for r in records:
        out[assignment[r.hand_id]].append(r)
    return out


def write_records(records: Iterable[DecisionRecord], path: str) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
            n += 1
    return n


def read_records(path: str) -> list[DecisionRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(DecisionRecord.from_json(line))
    return out
