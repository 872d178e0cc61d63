"""Evaluation and play harness for Spin & Go and heads-up no-limit hold'em agents."""

from .cards import DealScript, card, card_name, format_bb, make_deal
from .codec import (
    CodecError,
    DecisionContext,
    ParseError,
    RepairNote,
    decode_prompt,
    encode_prompt,
    parse_action,
    repair_action,
    replay_context,
)
from .engine import (
    ActionToken,
    EngineError,
    IllegalActionError,
    LegalActionSet,
    OutOfTurnError,
    TableState,
    TournamentConfig,
    apply_action,
    legal_actions,
    new_cash_hand,
    new_tournament,
    next_hand,
    settle_showdown,
    tournament_winner,
)
from .handeval import HandRank, evaluate7

__version__ = "0.1.0"
