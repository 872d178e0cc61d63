"""Decision-point text codec and action-token parsing/repair.

One decision point renders as a single line:

    pos:H=<ROLE> stacks:H=<NUM>,<ROLE>=<NUM>... hand:<c><c> | pre:<acts>
        [ | flop:<ccc> <acts>] [ | turn:<c> <acts>] [ | river:<c> <acts>] H:

* ``<acts>`` is ``<actor> <token>`` pairs joined by commas; the actor is
  ``H`` for the focal seat ("hero") and the role label otherwise. Only
  the last street may have no actions (hero opens it); its header is
  then followed directly by `` H:``.
* Tokens are ``f c x a b<amt> r<amt>``; amounts are in big blinds with
  at most one decimal and never a trailing ``.0``. A raise amount is the
  raise-to total for the street. Any action that puts a seat's whole
  stack in is written ``a``.
* Stacks are start-of-hand values before blinds, in big blinds. The
  hero's entry comes first; the remaining seats follow in ascending
  stack order (ties in BTN, SB, BB order). If any listed stack has a
  fractional part the whole list is written with one decimal
  (``19.0``), otherwise all entries are integers (``25``).
* Blind posts are implicit, only streets already reached appear, and no
  opponent hole card ever appears.

Decoding enforces the same canonical choices, so
``encode(decode(text)) == text`` byte-for-byte for every accepted text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cards import card_name, format_bb, format_bb_fixed
from .engine import (
    BB,
    BETTING_STREETS,
    BTN,
    FLOP,
    PRE,
    RIVER,
    ROLES_2,
    ROLES_3,
    SB,
    TURN,
    ActionToken,
    BET,
    CALL,
    CHECK,
    DealScript,
    LegalActionSet,
    RAISE,
    TableState,
    apply_action,
    new_cash_hand,
)
from . import engine

_ROLE_PRIORITY = {BTN: 0, SB: 1, BB: 2}
_STREET_ORDER = (PRE, FLOP, TURN, RIVER)
_BOARD_COUNT = {FLOP: 3, TURN: 1, RIVER: 1}

RULE_RAISE_TO_BET = "raise->bet"
RULE_BET_TO_RAISE = "bet->raise"
RULE_CALL_TO_CHECK = "call->check"
RULE_CHECK_TO_CALL = "check->call"
RULE_AMOUNT_CLAMPED = "amount-clamped"
RULE_FALLBACK = "fallback"


class CodecError(Exception):
    """Prompt-format violation; ``pos`` is the first offending byte offset."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at byte {pos})"
        super().__init__(message)
        self.pos = pos


class ParseError(CodecError):
    """Model output that is not a single action token."""


@dataclass(frozen=True, slots=True)
class RepairNote:
    """Record of one legality repair applied to a predicted action."""

    original: ActionToken | str
    repaired: ActionToken
    rule: str


@dataclass(slots=True)
class StreetActions:
    street: str
    cards: tuple[int, ...]
    actions: list[tuple[str, ActionToken]] = field(default_factory=list)


@dataclass(slots=True)
class DecisionContext:
    """Everything a decision-point line carries, in prompt order."""

    hero: str
    stacks: dict[str, int]  # role -> start-of-hand stack, tenths of a BB
    hole: tuple[int, int]
    streets: list[StreetActions]


# ---------------------------------------------------------------------------
# Encoding


def encode_prompt(state: TableState, hero: str) -> str:
    """Render the hero's current decision point as a prompt line."""
    if state.street not in BETTING_STREETS or state.to_act is None:
        raise CodecError(f"hand is not at a decision point (street={state.street})")
    hero_seat = state.seat_of_role(hero)
    if state.to_act != hero_seat:
        raise CodecError(f"{hero} is not to act")
    hole = state.seats[hero_seat].hole
    if hole is None:
        raise CodecError("hero hole cards unknown")

    live = state.live_seats()
    entries = [(state.role_of(i), state.units_to_tenths(state.seats[i].stack_start)) for i in live]
    by_role = dict(entries)
    rest = sorted(
        (r for r in by_role if r != hero),
        key=lambda r: (by_role[r], _ROLE_PRIORITY[r]),
    )
    fmt = format_bb_fixed if any(t % 10 for _, t in entries) else format_bb
    stack_list = ",".join([f"H={fmt(by_role[hero])}"] + [f"{r}={fmt(by_role[r])}" for r in rest])

    sections = []
    for log in state.history:
        acts = ",".join(
            f"{'H' if state.seats[i].role == hero else state.seats[i].role} {tok.serialize()}"
            for i, tok in log.actions
        )
        head = log.street + ":" + "".join(card_name(c) for c in log.cards)
        sep = "" if log.street == PRE else " "  # pre acts attach to the colon
        sections.append(head + (sep + acts if acts else ""))

    hand = "".join(card_name(c) for c in hole)
    return f"pos:H={hero} stacks:{stack_list} hand:{hand} | " + " | ".join(sections) + " H:"


# ---------------------------------------------------------------------------
# Decoding

_CARD_RE = re.compile(r"[2-9TJQKA][cdhs]")
_STACK_NUM_RE = re.compile(r"(0|[1-9]\d*)(\.\d)?")
_AMOUNT_NUM_RE = re.compile(r"(0|[1-9]\d*)(\.\d)?")


class _Cursor:
    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, what: str) -> CodecError:
        return CodecError(f"expected {what}", self.pos)

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            raise self.fail(repr(literal))
        self.pos += len(literal)

    def startswith(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def peek(self) -> str:
        return self.text[self.pos : self.pos + 1]

    def take(self, regex: re.Pattern, what: str) -> re.Match:
        m = regex.match(self.text, self.pos)
        if m is None:
            raise self.fail(what)
        self.pos = m.end()
        return m

    def take_one_of(self, options: tuple[str, ...], what: str) -> str:
        for opt in sorted(options, key=len, reverse=True):
            if self.startswith(opt):
                self.pos += len(opt)
                return opt
        raise self.fail(what)

    def at_end(self) -> bool:
        return self.pos == len(self.text)


def _take_card(cur: _Cursor, seen: set[int]) -> int:
    pos = cur.pos
    m = cur.take(_CARD_RE, "a card")
    from .cards import card as card_of

    c = card_of(m.group(0))
    if c in seen:
        raise CodecError(f"duplicate card {m.group(0)}", pos)
    seen.add(c)
    return c


def _take_stack_num(cur: _Cursor) -> tuple[int, bool]:
    m = cur.take(_STACK_NUM_RE, "a number")
    whole = int(m.group(1))
    frac = m.group(2)
    tenths = whole * 10 + (int(frac[1]) if frac else 0)
    return tenths, frac is not None


def _take_action_token(cur: _Cursor) -> ActionToken:
    pos = cur.pos
    ch = cur.peek()
    if ch in "fcxa":
        cur.pos += 1
        return {"f": engine.fold(), "c": engine.call(), "x": engine.check(), "a": engine.allin()}[ch]
    if ch in "br":
        cur.pos += 1
        m = cur.take(_AMOUNT_NUM_RE, "an amount")
        if m.group(2) == ".0":
            raise CodecError("amount with trailing .0", pos + 1)
        tenths = int(m.group(1)) * 10 + (int(m.group(2)[1]) if m.group(2) else 0)
        if tenths <= 0:
            raise CodecError("non-positive amount", pos + 1)
        return engine.bet(tenths) if ch == "b" else engine.raise_to(tenths)
    raise cur.fail("an action token")


def _take_acts(cur: _Cursor, roles: set[str], hero: str, folded: set[str]) -> list[tuple[str, ActionToken]]:
    acts: list[tuple[str, ActionToken]] = []
    while True:
        pos = cur.pos
        actor = cur.take_one_of(("H", BTN, SB, BB), "an actor")
        role = hero if actor == "H" else actor
        if actor == hero:
            raise CodecError("hero actions must use the actor H", pos)
        if role not in roles:
            raise CodecError(f"actor {role} is not at the table", pos)
        if role in folded:
            raise CodecError(f"action by folded player {role}", pos)
        cur.expect(" ")
        token = _take_action_token(cur)
        if token.kind == "fold":
            folded.add(role)
        acts.append((role, token))
        if cur.peek() == ",":
            cur.pos += 1
            continue
        return acts


def decode_prompt(text: str, replay: bool = True) -> DecisionContext:
    """Parse a prompt line back into its decision context.

    Grammar violations report the first offending byte; structural
    inconsistencies (duplicate cards, action by a folded player, any
    illegal or non-canonical action found on replay) also raise
    :class:`CodecError`. With ``replay=False`` only the cheap structural
    checks run.
    """
    cur = _Cursor(text)
    cur.expect("pos:H=")
    hero = cur.take_one_of((BTN, SB, BB), "a role")
    cur.expect(" stacks:H=")
    stacks_pos = cur.pos
    hero_tenths, hero_dec = _take_stack_num(cur)
    stacks: dict[str, int] = {hero: hero_tenths}
    decimals = [hero_dec]
    while cur.peek() == ",":
        cur.pos += 1
        pos = cur.pos
        role = cur.take_one_of((BTN, SB, BB), "a role")
        if role in stacks:
            raise CodecError(f"duplicate stack entry for {role}", pos)
        cur.expect("=")
        tenths, dec = _take_stack_num(cur)
        stacks[role] = tenths
        decimals.append(dec)

    n = len(stacks)
    if n not in (2, 3):
        raise CodecError(f"{n} seats listed; expected 2 or 3", stacks_pos)
    expect_roles = set(ROLES_2 if n == 2 else ROLES_3)
    if set(stacks) != expect_roles:
        raise CodecError(f"roles must be exactly {sorted(expect_roles)}", stacks_pos)
    if any(t == 0 for t in stacks.values()):
        raise CodecError("zero stack", stacks_pos)
    if any(decimals) != all(decimals):
        raise CodecError("stack list mixes integer and decimal forms", stacks_pos)
    if all(decimals) and not any(t % 10 for t in stacks.values()):
        raise CodecError("all-integer stacks must not carry .0", stacks_pos)
    rest = [r for r in stacks if r != hero]
    canonical = sorted(rest, key=lambda r: (stacks[r], _ROLE_PRIORITY[r]))
    if rest != canonical:
        raise CodecError("stack list not in canonical order", stacks_pos)

    seen_cards: set[int] = set()
    cur.expect(" hand:")
    hole = (_take_card(cur, seen_cards), _take_card(cur, seen_cards))

    cur.expect(" | pre:")
    folded: set[str] = set()
    streets: list[StreetActions] = []
    if cur.peek() == " ":
        cur.expect(" H:")
        if not cur.at_end():
            raise CodecError("content after final H:", cur.pos)
        streets.append(StreetActions(PRE, ()))
        ctx = DecisionContext(hero, stacks, hole, streets)
        if replay:
            replay_context(ctx)
        return ctx
    streets.append(StreetActions(PRE, (), _take_acts(cur, set(stacks), hero, folded)))

    while True:
        if cur.startswith(" H:"):
            cur.pos += 3
            if not cur.at_end():
                raise CodecError("content after final H:", cur.pos)
            break
        cur.expect(" | ")
        if len(streets) == 4:
            raise CodecError("no street after the river", cur.pos)
        name = _STREET_ORDER[len(streets)]
        cur.expect(name + ":")
        board = tuple(_take_card(cur, seen_cards) for _ in range(_BOARD_COUNT[name]))
        cur.expect(" ")
        if cur.startswith("H:"):
            cur.pos += 2
            if not cur.at_end():
                raise CodecError("content after final H:", cur.pos)
            streets.append(StreetActions(name, board))
            break
        streets.append(StreetActions(name, board, _take_acts(cur, set(stacks), hero, folded)))

    ctx = DecisionContext(hero, stacks, hole, streets)
    if replay:
        replay_context(ctx)
    return ctx


# ---------------------------------------------------------------------------
# Replay: context -> engine state


def _build_deal(ctx: DecisionContext, seat_roles: tuple[str, ...]) -> DealScript:
    n = len(seat_roles)
    hero_seat = seat_roles.index(ctx.hero)
    board = [c for street in ctx.streets for c in street.cards]
    slots: dict[int, int] = {
        2 * hero_seat: ctx.hole[0],
        2 * hero_seat + 1: ctx.hole[1],
    }
    for i, c in enumerate(board):
        slots[2 * n + i] = c
    used = set(slots.values())
    filler = (c for c in range(52) if c not in used)
    order = [slots[i] if i in slots else next(filler) for i in range(52)]
    return DealScript(order, label="replay")


def replay_context(ctx: DecisionContext) -> TableState:
    """Rebuild the hand through the rules engine, validating every action.

    Opponent hole cards are unknown, so distinct placeholder cards fill
    their slots; nothing downstream may reveal them.
    """
    seat_roles = ROLES_2 if len(ctx.stacks) == 2 else ROLES_3
    deal = _build_deal(ctx, seat_roles)
    try:
        state = new_cash_hand(
            stacks=[(r, ctx.stacks[r] / 10.0) for r in seat_roles],
            blinds=(0.5, 1.0),
            seed=0,
            deal=deal,
            names=list(seat_roles),
        )
    except engine.EngineError as exc:
        raise CodecError(f"inconsistent context: {exc}") from exc

    for street in ctx.streets:
        if state.street != street.street:
            raise CodecError(
                f"inconsistent context: text is at {street.street} but replay is at {state.street}"
            )
        if tuple(state.board[-len(street.cards):] if street.cards else ()) != street.cards:
            raise CodecError("inconsistent context: board mismatch on replay")
        for role, token in street.actions:
            log = state.history[-1]
            idx = len(log.actions)
            try:
                apply_action(state, role, token)
            except engine.EngineError as exc:
                raise CodecError(f"inconsistent context: {exc}") from exc
            recorded = log.actions[idx][1]
            if recorded != token:
                raise CodecError(
                    f"non-canonical action {token.serialize()}; the full stack goes in, write a"
                )

    if state.street != ctx.streets[-1].street:
        raise CodecError("inconsistent context: betting closed before the hero acted")
    if state.to_act is None or state.role_of(state.to_act) != ctx.hero:
        raise CodecError("inconsistent context: hero is not to act")
    return state


# ---------------------------------------------------------------------------
# Model-output parsing and legality repair

_MODEL_TOKEN_RE = re.compile(r"([fcxa])$|([br])(\d+(?:\.\d+)?)$")


def parse_action(text: str) -> ActionToken:
    """Parse raw model output into an action token.

    Surrounding whitespace is tolerated; anything else must be exactly
    one token. Amounts are decimal big blinds, rounded to one decimal.
    """
    stripped = text.strip()
    m = _MODEL_TOKEN_RE.fullmatch(stripped)
    if m is None:
        raise ParseError(f"not an action token: {text!r}")
    if m.group(1):
        return {"f": engine.fold(), "c": engine.call(), "x": engine.check(), "a": engine.allin()}[m.group(1)]
    tenths = int(round(float(m.group(3)) * 10))
    if tenths <= 0:
        raise ParseError(f"non-positive amount in {stripped!r}")
    kind = BET if m.group(2) == "b" else RAISE
    return ActionToken(kind, tenths)


def _clamp(amount: int, rng: tuple[int, int]) -> int:
    return min(max(amount, rng[0]), rng[1])


def repair_action(token: ActionToken, legal: LegalActionSet) -> tuple[ActionToken, RepairNote | None]:
    """Map a predicted action to its closest legal equivalent.

    Applied in order: semantic swap (raise<->bet, call<->check), amount
    clamping into the legal range, and finally check-if-legal-else-fold.
    Total: the returned token is always in the legal set.
    """
    if legal.is_legal(token):
        return token, None
    if token.kind == RAISE and legal.raise_to_range is None and legal.bet_range is not None:
        repaired = engine.bet(_clamp(token.amount, legal.bet_range))  # type: ignore[arg-type]
        return repaired, RepairNote(token, repaired, RULE_RAISE_TO_BET)
    if token.kind == BET and legal.bet_range is None and legal.raise_to_range is not None:
        repaired = engine.raise_to(_clamp(token.amount, legal.raise_to_range))  # type: ignore[arg-type]
        return repaired, RepairNote(token, repaired, RULE_BET_TO_RAISE)
    if token.kind == CALL and legal.may_check:
        repaired = engine.check()
        return repaired, RepairNote(token, repaired, RULE_CALL_TO_CHECK)
    if token.kind == CHECK and legal.call_cost is not None:
        repaired = engine.call()
        return repaired, RepairNote(token, repaired, RULE_CHECK_TO_CALL)
    if token.kind == BET and legal.bet_range is not None:
        repaired = engine.bet(_clamp(token.amount, legal.bet_range))  # type: ignore[arg-type]
        return repaired, RepairNote(token, repaired, RULE_AMOUNT_CLAMPED)
    if token.kind == RAISE and legal.raise_to_range is not None:
        repaired = engine.raise_to(_clamp(token.amount, legal.raise_to_range))  # type: ignore[arg-type]
        return repaired, RepairNote(token, repaired, RULE_AMOUNT_CLAMPED)
    repaired = engine.check() if legal.may_check else engine.fold()
    return repaired, RepairNote(token, repaired, RULE_FALLBACK)


def fallback_action(legal: LegalActionSet) -> ActionToken:
    """Passive default when model output cannot be parsed at all."""
    return engine.check() if legal.may_check else engine.fold()
