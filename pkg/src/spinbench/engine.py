"""No-limit hold'em table engine for 2-3 seats.

Covers blind posting (with escalation for tournaments), betting rounds
with full/short-raise reopening rules, all-in runouts, side pots, and
showdown settlement. All chip amounts are integer "units" of one tenth
of a level-1 big blind; the public action/legality surface speaks tenths
of the *current* big blind so tokens stay stable as blinds escalate.

Heads-up the button posts the small blind (role label SB) and acts first
preflop; three-handed the roles are BTN/SB/BB and the button opens
preflop. Postflop action always starts left of the button.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cards import DealScript, card, card_name, deal_stream, format_bb, make_deal
from .handeval import strength7

BTN = "BTN"
SB = "SB"
BB = "BB"
ROLES_3 = (BTN, SB, BB)
ROLES_2 = (SB, BB)

PRE = "pre"
FLOP = "flop"
TURN = "turn"
RIVER = "river"
SHOWDOWN = "showdown"
SETTLED = "settled"
BETTING_STREETS = (PRE, FLOP, TURN, RIVER)

SERIALIZATION_VERSION = "spinbench-table/1"

FOLD = "fold"
CALL = "call"
CHECK = "check"
ALLIN = "allin"
BET = "bet"
RAISE = "raise"
_KINDS = (FOLD, CALL, CHECK, ALLIN, BET, RAISE)
_SIZED = (BET, RAISE)
_TOKEN_CHAR = {FOLD: "f", CALL: "c", CHECK: "x", ALLIN: "a", BET: "b", RAISE: "r"}


class EngineError(Exception):
    """Rule violation or misuse of the table engine."""


class OutOfTurnError(EngineError):
    pass


class IllegalActionError(EngineError):
    """Action not in the legal set; carries the set so callers can repair."""

    def __init__(self, message: str, legal: "LegalActionSet"):
        super().__init__(message)
        self.legal = legal


@dataclass(frozen=True, slots=True)
class ActionToken:
    """One action in the compact vocabulary f/c/x/a/b{amt}/r{amt}.

    ``amount`` is in tenths of the current big blind; bets carry the bet
    size, raises the raise-to total for the street.
    """

    kind: str
    amount: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown action kind: {self.kind!r}")
        if self.kind in _SIZED:
            if self.amount is None or self.amount <= 0:
                raise ValueError(f"{self.kind} needs a positive amount")
        elif self.amount is not None:
            raise ValueError(f"{self.kind} carries no amount")

    def serialize(self) -> str:
        c = _TOKEN_CHAR[self.kind]
        if self.kind in _SIZED:
            return c + format_bb(self.amount)  # type: ignore[arg-type]
        return c


def fold() -> ActionToken:
    return ActionToken(FOLD)


def call() -> ActionToken:
    return ActionToken(CALL)


def check() -> ActionToken:
    return ActionToken(CHECK)


def allin() -> ActionToken:
    return ActionToken(ALLIN)


def bet(amount_tenths: int) -> ActionToken:
    return ActionToken(BET, amount_tenths)


def raise_to(amount_tenths: int) -> ActionToken:
    return ActionToken(RAISE, amount_tenths)


@dataclass(frozen=True, slots=True)
class LegalActionSet:
    """Options open to the seat to act; amounts in tenths of the current BB."""

    may_fold: bool
    may_check: bool
    call_cost: int | None
    bet_range: tuple[int, int] | None
    raise_to_range: tuple[int, int] | None
    may_allin: bool

    def is_legal(self, token: ActionToken) -> bool:
        k = token.kind
        if k == FOLD:
            return self.may_fold
        if k == CHECK:
            return self.may_check
        if k == CALL:
            return self.call_cost is not None
        if k == ALLIN:
            return self.may_allin
        if k == BET:
            return self.bet_range is not None and self.bet_range[0] <= token.amount <= self.bet_range[1]
        return (
            self.raise_to_range is not None
            and self.raise_to_range[0] <= token.amount <= self.raise_to_range[1]
        )

    def to_dict(self) -> dict:
        return {
            "may_fold": self.may_fold,
            "may_check": self.may_check,
            "call_cost": None if self.call_cost is None else self.call_cost / 10.0,
            "bet_range": None if self.bet_range is None else [self.bet_range[0] / 10.0, self.bet_range[1] / 10.0],
            "raise_to_range": None
            if self.raise_to_range is None
            else [self.raise_to_range[0] / 10.0, self.raise_to_range[1] / 10.0],
            "may_allin": self.may_allin,
        }


class Seat:
    __slots__ = (
        "name",
        "role",
        "stack",
        "stack_start",
        "committed_street",
        "committed_total",
        "hole",
        "folded",
        "out",
        "can_raise",
    )

    def __init__(self, name: str, stack: int):
        self.name = name
        self.role: str | None = None
        self.stack = stack  # units behind, excludes anything committed
        self.stack_start = stack
        self.committed_street = 0
        self.committed_total = 0
        self.hole: tuple[int, int] | None = None
        self.folded = False
        self.out = False
        self.can_raise = True


class StreetLog:
    __slots__ = ("street", "cards", "actions")

    def __init__(self, street: str, cards: tuple[int, ...]):
        self.street = street
        self.cards = cards
        self.actions: list[tuple[int, ActionToken]] = []  # (seat index, normalized token)


class TableState:
    """Authoritative state of one hand (plus cross-hand table config)."""

    __slots__ = (
        "mode",
        "hand_no",
        "level",
        "sb",
        "bb",
        "seats",
        "button",
        "street",
        "board",
        "deck",
        "_next_card",
        "to_act",
        "_queue",
        "current_bet",
        "last_full_raise",
        "history",
        "payouts",
        "showdown_reveal",
        "seed",
        "config",
    )

    def __init__(self) -> None:
        self.mode = "cash"
        self.hand_no = 1
        self.level = 0
        self.sb = 5
        self.bb = 10
        self.seats: list[Seat] = []
        self.button = 0
        self.street = PRE
        self.board: list[int] = []
        self.deck: DealScript | None = None
        self._next_card = 0
        self.to_act: int | None = None
        self._queue: list[int] = []
        self.current_bet = 0  # units, this street
        self.last_full_raise = 0  # units
        self.history: list[StreetLog] = []
        self.payouts: list[int] | None = None
        self.showdown_reveal: list[int] = []  # seat indexes whose cards were shown
        self.seed = 0
        self.config: dict = {}

    # -- lookups ------------------------------------------------------

    def live_seats(self) -> list[int]:
        return [i for i, s in enumerate(self.seats) if not s.out]

    def seat_of_role(self, role: str) -> int:
        for i, s in enumerate(self.seats):
            if not s.out and s.role == role:
                return i
        raise EngineError(f"no live seat with role {role}")

    def role_of(self, seat: int) -> str:
        role = self.seats[seat].role
        if role is None:
            raise EngineError(f"seat {seat} has no role this hand")
        return role

    def pot_units(self) -> int:
        return sum(s.committed_total for s in self.seats)

    def units_to_tenths(self, units: int) -> int:
        """Units -> tenths of the current big blind (exact when bb % 10 == 0)."""
        return _div_round_half_up(units * 10, self.bb)

    def tenths_to_units(self, tenths: int) -> int:
        return _div_round_half_up(tenths * self.bb, 10)

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": SERIALIZATION_VERSION,
            "mode": self.mode,
            "hand_no": self.hand_no,
            "level": self.level,
            "blinds": [self.sb, self.bb],
            "button": self.button,
            "street": self.street,
            "board": [card_name(c) for c in self.board],
            "seats": [
                {
                    "name": s.name,
                    "role": s.role,
                    "stack": s.stack,
                    "stack_start": s.stack_start,
                    "committed_street": s.committed_street,
                    "committed_total": s.committed_total,
                    "hole": None if s.hole is None else [card_name(c) for c in s.hole],
                    "folded": s.folded,
                    "out": s.out,
                    "can_raise": s.can_raise,
                }
                for s in self.seats
            ],
            "to_act": self.to_act,
            "queue": list(self._queue),
            "current_bet": self.current_bet,
            "last_full_raise": self.last_full_raise,
            "history": [
                {
                    "street": log.street,
                    "cards": [card_name(c) for c in log.cards],
                    "actions": [[self.seats[i].role, tok.serialize()] for i, tok in log.actions],
                }
                for log in self.history
            ],
            "payouts": self.payouts,
            "showdown_reveal": list(self.showdown_reveal),
            "deck": None if self.deck is None else [card_name(c) for c in self.deck.order],
            "next_card": self._next_card,
            "seed": self.seed,
            "config": self.config,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def deserialize(cls, text: str) -> "TableState":
        d = json.loads(text)
        if d.get("version") != SERIALIZATION_VERSION:
            raise EngineError(f"unsupported serialization version: {d.get('version')!r}")
        st = cls()
        st.mode = d["mode"]
        st.hand_no = d["hand_no"]
        st.level = d["level"]
        st.sb, st.bb = d["blinds"]
        st.button = d["button"]
        st.street = d["street"]
        st.board = [card(c) for c in d["board"]]
        st.seats = []
        role_to_idx: dict[str, int] = {}
        for i, sd in enumerate(d["seats"]):
            seat = Seat(sd["name"], sd["stack"])
            seat.role = sd["role"]
            seat.stack_start = sd["stack_start"]
            seat.committed_street = sd["committed_street"]
            seat.committed_total = sd["committed_total"]
            seat.hole = None if sd["hole"] is None else (card(sd["hole"][0]), card(sd["hole"][1]))
            seat.folded = sd["folded"]
            seat.out = sd["out"]
            seat.can_raise = sd["can_raise"]
            st.seats.append(seat)
            if seat.role is not None and not seat.out:
                role_to_idx[seat.role] = i
        st.to_act = d["to_act"]
        st._queue = list(d["queue"])
        st.current_bet = d["current_bet"]
        st.last_full_raise = d["last_full_raise"]
        st.history = []
        for hd in d["history"]:
            log = StreetLog(hd["street"], tuple(card(c) for c in hd["cards"]))
            from .codec import parse_action  # local import to avoid a cycle at module load

            log.actions = [(role_to_idx[role], parse_action(tok)) for role, tok in hd["actions"]]
            st.history.append(log)
        st.payouts = d["payouts"]
        st.showdown_reveal = list(d["showdown_reveal"])
        st.deck = None if d["deck"] is None else DealScript([card(c) for c in d["deck"]], label="restored")
        st._next_card = d["next_card"]
        st.seed = d["seed"]
        st.config = d["config"]
        return st


def _div_round_half_up(num: int, den: int) -> int:
    return (2 * num + den) // (2 * den)


# ---------------------------------------------------------------------------
# Hand construction


def _assign_roles(state: TableState) -> None:
    live = state.live_seats()
    n = len(live)
    order = live[live.index(state.button):] + live[: live.index(state.button)]
    roles = ROLES_2 if n == 2 else ROLES_3
    for seat in state.seats:
        seat.role = None
    for idx, role in zip(order, roles):
        state.seats[idx].role = role


def _ring_after(state: TableState, start: int, candidates: Iterable[int]) -> list[int]:
    cand = set(candidates)
    n = len(state.seats)
    return [(start + k) % n for k in range(1, n + 1) if (start + k) % n in cand]


def _post_blind(state: TableState, seat_idx: int, amount: int) -> None:
    seat = state.seats[seat_idx]
    paid = min(amount, seat.stack)
    seat.stack -= paid
    seat.committed_street += paid
    seat.committed_total += paid


def _begin_hand(state: TableState, deal: DealScript) -> TableState:
    live = state.live_seats()
    _assign_roles(state)
    state.deck = deal
    state.board = []
    state.street = PRE
    state.payouts = None
    state.showdown_reveal = []
    for s in state.seats:
        s.stack_start = s.stack
        s.committed_street = 0
        s.committed_total = 0
        s.folded = False
        s.can_raise = True
        s.hole = None
    for j, idx in enumerate(live):
        state.seats[idx].hole = deal.hole_cards(j)
    state._next_card = 2 * len(live)

    _post_blind(state, state.seat_of_role(SB), state.sb)
    _post_blind(state, state.seat_of_role(BB), state.bb)
    # the big blind is the nominal preflop bet even when posted short
    state.current_bet = state.bb
    state.last_full_raise = state.bb
    state.history = [StreetLog(PRE, ())]

    queue = [i for i in (live[live.index(state.button):] + live[: live.index(state.button)]) if state.seats[i].stack > 0]
    state._queue = queue
    state.to_act = queue[0] if queue else None
    if not queue:
        _close_betting(state)
    return state


def new_cash_hand(
    stacks: Sequence[float] | Mapping[str, float],
    blinds: tuple[float, float] = (0.5, 1.0),
    button: int = 0,
    seed: int = 0,
    deal: DealScript | None = None,
    names: Sequence[str] | None = None,
) -> TableState:
    """Fresh cash hand at the first decision point.

    ``stacks`` is either a per-seat sequence in BB (``button`` picks the
    seat index) or a role-keyed mapping; blinds are posted automatically,
    capped at the short stack.
    """
    if isinstance(stacks, Mapping):
        stacks = list(stacks.items())
    if stacks and isinstance(stacks[0], tuple):
        pairs = [(str(r), float(x)) for r, x in stacks]  # type: ignore[misc]
        roles = [r for r, _ in pairs]
        if len(roles) != len(set(roles)):
            raise EngineError("duplicate roles")
        expect = ROLES_2 if len(roles) == 2 else ROLES_3
        if set(roles) != set(expect):
            raise EngineError(f"roles must be exactly {list(expect)}")
        by_role = dict(pairs)
        stack_list = [by_role[r] for r in expect]
        button = 0  # BTN (3-handed) / SB (heads-up) first in the canonical order
    else:
        stack_list = [float(x) for x in stacks]
    n = len(stack_list)
    if not 2 <= n <= 3:
        raise EngineError(f"2 or 3 seats required, got {n}")
    if any(x <= 0 for x in stack_list):
        raise EngineError("all stacks must be positive")
    if not 0 <= button < n:
        raise EngineError(f"button index out of range: {button}")
    sb_bb, bb_bb = blinds
    if not 0 < sb_bb <= bb_bb:
        raise EngineError("blinds must satisfy 0 < sb <= bb")

    st = TableState()
    st.mode = "cash"
    st.seed = seed
    st.sb = round(sb_bb * 10)
    st.bb = round(bb_bb * 10)
    if names is None:
        names = [f"P{i}" for i in range(n)]
    st.seats = [Seat(str(names[i]), round(stack_list[i] * 10)) for i in range(n)]
    st.button = button
    st.config = {
        "reset_stacks": [round(x * 10) for x in stack_list],
        "blinds": [st.sb, st.bb],
    }
    if deal is None:
        deal = make_deal(seed, 0, 0)
    return _begin_hand(st, deal)


@dataclass(frozen=True, slots=True)
class TournamentConfig:
    """Winner-take-all 3-seat tournament settings.

    The blind schedule is in level-1 BB; past the last entry the blinds
    keep doubling so every tournament terminates.
    """

    starting_stack_bb: float = 25.0
    schedule: tuple[tuple[float, float], ...] = ((0.5, 1.0),)
    hands_per_level: int = 10

    def blinds_at(self, level: int) -> tuple[int, int]:
        if not self.schedule:
            raise EngineError("empty blind schedule")
        if level < len(self.schedule):
            sb_bb, bb_bb = self.schedule[level]
            return round(sb_bb * 10), round(bb_bb * 10)
        sb_bb, bb_bb = self.schedule[-1]
        factor = 2 ** (level - len(self.schedule) + 1)
        return round(sb_bb * 10) * factor, round(bb_bb * 10) * factor


def new_tournament(
    config: TournamentConfig | None = None,
    seed: int = 0,
    names: Sequence[str] | None = None,
    deal: DealScript | None = None,
    button: int | None = None,
) -> TableState:
    """Hand 1 of a 3-player tournament; button drawn from the seed unless given."""
    cfg = config or TournamentConfig()
    if not cfg.schedule:
        raise EngineError("empty blind schedule")
    if cfg.hands_per_level < 1:
        raise EngineError("hands_per_level must be >= 1")
    if cfg.starting_stack_bb <= 0:
        raise EngineError("starting stack must be positive")

    st = TableState()
    st.mode = "tournament"
    st.seed = seed
    st.level = 0
    st.sb, st.bb = cfg.blinds_at(0)
    if names is None:
        names = [f"P{i}" for i in range(3)]
    stack = round(cfg.starting_stack_bb * 10)
    st.seats = [Seat(str(names[i]), stack) for i in range(3)]
    if button is None:
        button = int(deal_stream_button(seed))
    st.button = button
    st.config = {
        "starting_stack_bb": cfg.starting_stack_bb,
        "schedule": [list(x) for x in cfg.schedule],
        "hands_per_level": cfg.hands_per_level,
    }
    if deal is None:
        deal = make_deal(seed, 0, 0)
    return _begin_hand(st, deal)


def deal_stream_button(seed: int) -> int:
    return int(deal_stream(seed, 1).integers(0, 3))


def tournament_winner(state: TableState) -> int | None:
    """Winning seat index once all chips sit in one stack, else None."""
    if state.mode != "tournament" or state.street != SETTLED:
        return None
    with_chips = [i for i in state.live_seats() if state.seats[i].stack > 0]
    return with_chips[0] if len(with_chips) == 1 else None


def next_hand(state: TableState, deal: DealScript | None = None) -> TableState:
    """Advance the table to the following hand (stacks carried or reset)."""
    if state.street != SETTLED:
        raise EngineError("current hand is not settled")
    if state.mode == "cash":
        for seat, units in zip(state.seats, state.config["reset_stacks"]):
            seat.stack = units
    else:
        for seat in state.seats:
            if seat.stack == 0:
                seat.out = True
        if len(state.live_seats()) < 2:
            raise EngineError("tournament is over")
    state.hand_no += 1
    if state.mode == "tournament":
        state.level = (state.hand_no - 1) // state.config["hands_per_level"]
        cfg = TournamentConfig(
            starting_stack_bb=state.config["starting_stack_bb"],
            schedule=tuple(tuple(x) for x in state.config["schedule"]),
            hands_per_level=state.config["hands_per_level"],
        )
        state.sb, state.bb = cfg.blinds_at(state.level)
    live = state.live_seats()
    n = len(state.seats)
    for k in range(1, n + 1):
        nxt = (state.button + k) % n
        if nxt in live:
            state.button = nxt
            break
    if deal is None:
        deal = make_deal(state.seed, 0, state.hand_no - 1)
    return _begin_hand(state, deal)


# ---------------------------------------------------------------------------
# Legality


def _legal_units(state: TableState) -> dict:
    """Legal options for the seat to act, all amounts in units."""
    seat = state.seats[state.to_act]  # type: ignore[index]
    to_call = max(0, state.current_bet - seat.committed_street)
    own_total = seat.committed_street + seat.stack
    opp_total = max(
        s.committed_street + s.stack
        for i, s in enumerate(state.seats)
        if i != state.to_act and not s.folded and not s.out
    )
    cap = min(own_total, opp_total)

    bet_rng = None
    raise_rng = None
    if state.current_bet == 0:
        lo = min(state.bb, seat.stack)
        hi = min(seat.stack, cap)
        if lo <= hi:
            bet_rng = (lo, hi)
    elif seat.can_raise:
        lo = state.current_bet + state.last_full_raise
        hi = cap
        if lo <= hi:
            raise_rng = (lo, hi)
    return {
        "to_call": to_call,
        "call_cost": min(to_call, seat.stack) if to_call > 0 else None,
        "bet": bet_rng,
        "raise_to": raise_rng,
        "own_total": own_total,
    }


def legal_actions(state: TableState) -> LegalActionSet:
    """Options for the seat to act, in tenths of the current big blind."""
    if state.street not in BETTING_STREETS or state.to_act is None:
        raise EngineError(f"no action pending (street={state.street})")
    lu = _legal_units(state)

    def rng_tenths(rng: tuple[int, int] | None) -> tuple[int, int] | None:
        if rng is None:
            return None
        lo = -(-rng[0] * 10 // state.bb)  # ceil
        hi = rng[1] * 10 // state.bb  # floor
        return (lo, hi) if lo <= hi else None

    call_cost = lu["call_cost"]
    return LegalActionSet(
        may_fold=True,
        may_check=lu["to_call"] == 0,
        call_cost=None if call_cost is None else state.units_to_tenths(call_cost),
        bet_range=rng_tenths(lu["bet"]),
        raise_to_range=rng_tenths(lu["raise_to"]),
        may_allin=True,
    )


# ---------------------------------------------------------------------------
# Action application


def apply_action(state: TableState, role: str, token: ActionToken) -> TableState:
    """Apply one action by ``role``; mutates and returns the state.

    Raises OutOfTurnError / IllegalActionError (the latter carrying the
    legal set) without touching the state.
    """
    if state.street not in BETTING_STREETS or state.to_act is None:
        raise EngineError(f"hand is not awaiting action (street={state.street})")
    actor = state.to_act
    seat = state.seats[actor]
    if seat.role != role:
        raise OutOfTurnError(f"{role} acted but {seat.role} is to act")

    lu = _legal_units(state)
    kind = token.kind
    committed_delta = 0
    is_full_raise = False
    is_aggression = False

    if kind == FOLD:
        seat.folded = True
    elif kind == CHECK:
        if lu["to_call"] != 0:
            raise IllegalActionError("cannot check facing a bet", legal_actions(state))
        committed_delta = 0
    elif kind == CALL:
        if lu["call_cost"] is None:
            raise IllegalActionError("nothing to call", legal_actions(state))
        committed_delta = lu["call_cost"]
    elif kind == BET:
        units = state.tenths_to_units(token.amount)  # type: ignore[arg-type]
        if lu["bet"] is None or not lu["bet"][0] <= units <= lu["bet"][1]:
            raise IllegalActionError(f"illegal bet of {token.amount} tenths", legal_actions(state))
        committed_delta = units
        state.current_bet = seat.committed_street + units
        state.last_full_raise = units
        is_full_raise = True
        is_aggression = True
    elif kind == RAISE:
        target = state.tenths_to_units(token.amount)  # type: ignore[arg-type]
        if state.current_bet == 0:
            raise IllegalActionError("raise with no bet outstanding", legal_actions(state))
        if not seat.can_raise:
            raise IllegalActionError("betting not reopened for this seat", legal_actions(state))
        if lu["raise_to"] is None or not lu["raise_to"][0] <= target <= lu["raise_to"][1]:
            raise IllegalActionError(f"illegal raise to {token.amount} tenths", legal_actions(state))
        committed_delta = target - seat.committed_street
        state.last_full_raise = target - state.current_bet
        state.current_bet = target
        is_full_raise = True
        is_aggression = True
    elif kind == ALLIN:
        total = seat.committed_street + seat.stack
        committed_delta = seat.stack
        if total > state.current_bet:
            is_aggression = True
            increment = total - state.current_bet
            if state.current_bet == 0 or increment >= state.last_full_raise:
                is_full_raise = True
                state.last_full_raise = increment
            state.current_bet = total
        # else: calling all-in for less, no level change
    else:  # pragma: no cover - kinds validated in ActionToken
        raise IllegalActionError(f"unknown kind {kind}", legal_actions(state))

    if committed_delta > seat.stack:
        raise IllegalActionError("action exceeds stack", legal_actions(state))
    seat.stack -= committed_delta
    seat.committed_street += committed_delta
    seat.committed_total += committed_delta
    seat.can_raise = False

    recorded = ActionToken(ALLIN) if (seat.stack == 0 and not seat.folded) else token
    state.history[-1].actions.append((actor, recorded))

    if is_aggression:
        others = [
            i
            for i, s in enumerate(state.seats)
            if i != actor and not s.folded and not s.out and s.stack > 0
        ]
        if is_full_raise:
            for i in others:
                state.seats[i].can_raise = True
        state._queue = _ring_after(state, actor, others)
    else:
        state._queue.pop(0)

    non_folded = [i for i in state.live_seats() if not state.seats[i].folded]
    if len(non_folded) == 1:
        state._queue = []
        state.to_act = None
        _settle(state)
        return state

    if state._queue:
        state.to_act = state._queue[0]
    else:
        state.to_act = None
        _close_betting(state)
    return state


def _deal_board(state: TableState, n: int) -> tuple[int, ...]:
    assert state.deck is not None
    cards_out = state.deck.order[state._next_card : state._next_card + n]
    state._next_card += n
    state.board.extend(cards_out)
    return tuple(cards_out)


_NEXT_STREET = {PRE: FLOP, FLOP: TURN, TURN: RIVER}
_STREET_CARDS = {FLOP: 3, TURN: 1, RIVER: 1}


def _close_betting(state: TableState) -> None:
    """End the current betting round: advance streets, run out, or settle."""
    while True:
        if state.street == RIVER:
            state.street = SHOWDOWN
            _settle(state)
            return
        state.street = _NEXT_STREET[state.street]
        dealt = _deal_board(state, _STREET_CARDS[state.street])
        state.history.append(StreetLog(state.street, dealt))
        state.current_bet = 0
        state.last_full_raise = state.bb
        for s in state.seats:
            s.committed_street = 0
            s.can_raise = True
        actives = [i for i in state.live_seats() if not state.seats[i].folded and state.seats[i].stack > 0]
        if len(actives) >= 2:
            state._queue = _ring_after(state, state.button, actives)
            state.to_act = state._queue[0]
            return
        # all-in runout: keep dealing, nobody can act


# ---------------------------------------------------------------------------
# Settlement


def settle_showdown(state: TableState) -> list[int]:
    """Award main/side pots (and refunds); returns per-seat payouts in units.

    Callable once the hand has ended: at showdown, or earlier when all
    but one seat folded. `apply_action` calls this automatically.
    """
    non_folded = [i for i in state.live_seats() if not state.seats[i].folded]
    if state.street == SETTLED:
        raise EngineError("hand already settled")
    if state.street != SHOWDOWN and len(non_folded) > 1:
        raise EngineError("hand has not ended")

    commits = [s.committed_total for s in state.seats]
    strengths: dict[int, int] = {}
    if len(non_folded) > 1:
        board = tuple(state.board)
        for i in non_folded:
            hole = state.seats[i].hole
            assert hole is not None and len(board) == 5
            strengths[i] = strength7(hole + board)

    payouts = [0] * len(state.seats)
    levels = sorted({c for c in commits if c > 0})
    prev = 0
    ring = _ring_after(state, state.button, range(len(state.seats)))
    for level in levels:
        amount = sum(min(c, level) - min(c, prev) for c in commits)
        eligible = [i for i in non_folded if commits[i] >= level]
        if len(eligible) == 1:
            payouts[eligible[0]] += amount
        else:
            best = max(strengths[i] for i in eligible)
            winners = [i for i in eligible if strengths[i] == best]
            share, rem = divmod(amount, len(winners))
            for i in winners:
                payouts[i] += share
            for i in ring:  # odd tenths to the first seats left of the button
                if rem == 0:
                    break
                if i in winners:
                    payouts[i] += 1
                    rem -= 1
            state.showdown_reveal = sorted(set(state.showdown_reveal) | set(winners))
        prev = level

    for i, p in enumerate(payouts):
        state.seats[i].stack += p
    state.payouts = payouts
    state.street = SETTLED
    state.to_act = None
    state._queue = []
    return payouts


def _settle(state: TableState) -> None:
    settle_showdown(state)


def net_winnings(state: TableState) -> list[int]:
    """Per-seat chip delta for the settled hand, in units."""
    if state.street != SETTLED:
        raise EngineError("hand not settled")
    return [s.stack - s.stack_start for s in state.seats]
