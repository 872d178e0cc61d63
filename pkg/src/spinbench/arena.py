"""Match execution: heads-up cash matches and 3-player tournaments.

Duplicate dealing replays each deal script with the players exchanged
over the seats (the cards stay attached to the seats), which cancels
card luck; results report BB/100 with a normal-approximation 95% CI,
computed over per-pair means when the match is paired.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass

from .agents import Agent, make_view
from .codec import repair_action
from .engine import (
    IllegalActionError,
    SETTLED,
    TableState,
    TournamentConfig,
    apply_action,
    legal_actions,
    net_winnings,
    new_cash_hand,
    new_tournament,
    next_hand,
    tournament_winner,
)
from .cards import deal_stream, make_deal

_MAX_TOURNAMENT_HANDS = 100_000


def bb_per_100(winnings: list[float]) -> float:
    """100 x the mean of per-hand winnings (in BB)."""
    if not winnings:
        raise ValueError("no hands")
    return 100.0 * statistics.fmean(winnings)


def ci95(winnings: list[float], paired: bool = False) -> float:
    """Half-width of the 95% CI on BB/100: 1.96 * s / sqrt(n) * 100.

    ``s`` is the sample standard deviation of per-hand winnings; in
    paired mode it is taken over the means of consecutive pairs and
    ``n`` is the pair count.
    """
    if len(winnings) < 2:
        raise ValueError("need at least 2 hands")
    samples = winnings
    if paired:
        if len(winnings) % 2 != 0:
            raise ValueError("paired CI needs an even number of hands")
        samples = [(winnings[i] + winnings[i + 1]) / 2.0 for i in range(0, len(winnings), 2)]
        if len(samples) < 2:
            raise ValueError("need at least 2 pairs")
    s = statistics.stdev(samples)
    return 1.96 * s / math.sqrt(len(samples)) * 100.0


def play_hand(state: TableState, seat_agents: list[Agent], audit=None) -> int:
    """Drive one hand to settlement; returns the count of safety repairs.

    Agents are expected to return legal tokens; if one does not, its
    action is repaired in place rather than aborting the match. With an
    ``audit`` callable every decision is logged as one line in the
    prompt grammar with the chosen token appended after the ``H:``.
    """
    repairs = 0
    while state.street != SETTLED:
        seat = state.to_act
        assert seat is not None
        role = state.role_of(seat)
        view = make_view(state, role)
        token = seat_agents[seat].decide(view)
        if audit is not None:
            prompt = view.prompt  # render before the action lands
            log = state.history[-1]
            n_before = len(log.actions)
        try:
            apply_action(state, role, token)
        except IllegalActionError:
            token, _ = repair_action(token, legal_actions(state))
            apply_action(state, role, token)
            repairs += 1
        if audit is not None:
            audit(prompt + log.actions[n_before][1].serialize())
    return repairs


@dataclass(slots=True)
class MatchResult:
    mode: str
    n_hands: int
    agent_names: dict[str, str]  # side -> agent name
    winnings: dict[str, list[float]]  # side -> per-hand net BB
    bb_per_100: dict[str, float]
    ci95_halfwidth: dict[str, float]
    master_seed: int
    duplicate: bool
    stack_bb: float
    blinds: tuple[float, float]
    n_safety_repairs: int = 0

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n_hands": self.n_hands,
            "agents": self.agent_names,
            "bb_per_100": self.bb_per_100,
            "ci95_halfwidth": self.ci95_halfwidth,
            "master_seed": self.master_seed,
            "duplicate": self.duplicate,
            "stack_bb": self.stack_bb,
            "blinds": list(self.blinds),
            "n_safety_repairs": self.n_safety_repairs,
            "winnings": self.winnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def run_cash_match(
    agent_a: Agent,
    agent_b: Agent,
    n_deals: int,
    stack_bb: float = 200.0,
    blinds: tuple[float, float] = (0.5, 1.0),
    seed: int = 0,
    duplicate: bool = False,
    audit=None,
) -> MatchResult:
    """Heads-up cash match with stacks reset to ``stack_bb`` every hand.

    Seat 0 always holds the button; the two agents alternate seats, so
    positions balance. In duplicate mode each deal script is played
    twice back-to-back with the agents swapped over the seats.
    """
    if n_deals < 1:
        raise ValueError("n_deals must be >= 1")
    if stack_bb * 10 <= blinds[1] * 10:
        raise ValueError("stack must exceed the big blind")
    winnings: dict[str, list[float]] = {"a": [], "b": []}
    repairs = 0
    bb_units = round(blinds[1] * 10)

    def one_hand(deal, a_on_button: bool) -> None:
        nonlocal repairs
        state = new_cash_hand(
            (stack_bb, stack_bb), blinds=blinds, button=0, seed=seed, deal=deal,
            names=("a", "b") if a_on_button else ("b", "a"),
        )
        agents = [agent_a, agent_b] if a_on_button else [agent_b, agent_a]
        repairs += play_hand(state, agents, audit=audit)
        for seat, units in enumerate(net_winnings(state)):
            winnings[state.seats[seat].name].append(units / bb_units)

    for i in range(n_deals):
        deal = make_deal(seed, 0, i)
        if duplicate:
            one_hand(deal, True)
            one_hand(deal, False)
        else:
            one_hand(deal, i % 2 == 0)

    n_hands = len(winnings["a"])
    enough = n_hands >= (4 if duplicate else 2)  # paired CIs need two pairs
    return MatchResult(
        mode="cash-hu",
        n_hands=n_hands,
        agent_names={"a": agent_a.name, "b": agent_b.name},
        winnings=winnings,
        bb_per_100={side: bb_per_100(w) for side, w in winnings.items()},
        ci95_halfwidth={side: ci95(w, paired=duplicate) for side, w in winnings.items()}
        if enough
        else {},
        master_seed=seed,
        duplicate=duplicate,
        stack_bb=stack_bb,
        blinds=blinds,
        n_safety_repairs=repairs,
    )


@dataclass(slots=True)
class SpinResult:
    n_tournaments: int
    agent_names: dict[str, str]
    wins: dict[str, int]
    win_rate: dict[str, float]
    winnings: dict[str, list[float]]  # per-hand chip net, in level-1 BB
    chip_bb_per_100: dict[str, float]
    ci95_halfwidth: dict[str, float]
    hands_played: int
    master_seed: int
    rotate_seats: bool
    n_safety_repairs: int = 0

    def to_dict(self) -> dict:
        return {
            "mode": "spin-and-go",
            "n_tournaments": self.n_tournaments,
            "agents": self.agent_names,
            "wins": self.wins,
            "win_rate": self.win_rate,
            "chip_bb_per_100": self.chip_bb_per_100,
            "ci95_halfwidth": self.ci95_halfwidth,
            "hands_played": self.hands_played,
            "master_seed": self.master_seed,
            "rotate_seats": self.rotate_seats,
            "n_safety_repairs": self.n_safety_repairs,
            "winnings": self.winnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def run_spin_and_go(
    agents: tuple[Agent, Agent, Agent] | list[Agent],
    n_tournaments: int,
    config: TournamentConfig | None = None,
    seed: int = 0,
    rotate_seats: bool = True,
    audit=None,
) -> SpinResult:
    """Run 3-player tournaments; winner-take-all, chip results per hand.

    With seat rotation, tournaments come in triples that share the same
    deal scripts and starting button while the agents rotate through the
    seats, so positional and card luck cancel over each triple.
    """
    if len(agents) != 3:
        raise ValueError("exactly 3 agents required")
    if n_tournaments < 1:
        raise ValueError("n_tournaments must be >= 1")
    cfg = config or TournamentConfig()
    sides = ("a", "b", "c")
    wins = {s: 0 for s in sides}
    winnings: dict[str, list[float]] = {s: [] for s in sides}
    hands_played = 0
    repairs = 0

    for t in range(n_tournaments):
        if rotate_seats:
            group, rotation = divmod(t, 3)
        else:
            group, rotation = t, 0
        # seat j hosts agent (j - rotation) mod 3; cards stay with the seat
        seat_sides = [sides[(j - rotation) % 3] for j in range(3)]
        seat_agents = [agents[(j - rotation) % 3] for j in range(3)]
        button = int(deal_stream(seed, 3, group).integers(0, 3))
        state = new_tournament(
            cfg, seed=seed, names=seat_sides, deal=make_deal(seed, 2, group, 0), button=button
        )
        hand_index = 0
        while True:
            repairs += play_hand(state, seat_agents, audit=audit)
            hands_played += 1
            for seat, units in enumerate(net_winnings(state)):
                winnings[seat_sides[seat]].append(units / 10.0)
            winner = tournament_winner(state)
            if winner is not None:
                wins[seat_sides[winner]] += 1
                break
            hand_index += 1
            if hand_index > _MAX_TOURNAMENT_HANDS:
                raise RuntimeError("tournament failed to terminate")
            next_hand(state, deal=make_deal(seed, 2, group, hand_index))

    return SpinResult(
        n_tournaments=n_tournaments,
        agent_names={s: a.name for s, a in zip(sides, agents)},
        wins=wins,
        win_rate={s: wins[s] / n_tournaments for s in sides},
        winnings=winnings,
        chip_bb_per_100={s: bb_per_100(w) for s, w in winnings.items()},
        ci95_halfwidth={s: ci95(w) for s, w in winnings.items() if len(w) >= 2},
        hands_played=hands_played,
        master_seed=seed,
        rotate_seats=rotate_seats,
        n_safety_repairs=repairs,
    )
