"""HTTP service: table lifecycle, per-seat views, actions, batch matches.

Humans get strict legality (illegal input is rejected with the legal
set, never silently repaired); agent seats act through their own repair
pipeline. No response ever contains another live seat's hole cards;
only winners' cards are revealed at showdown and mucked hands stay
hidden.
"""

from __future__ import annotations

import os
import threading
import uuid
from typing import Literal

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import arena, engine
from .agents import Agent, make_view, resolve_agent
from .cards import card_name
from .codec import CodecError, parse_action
from .engine import (
    SETTLED,
    TableState,
    TournamentConfig,
    apply_action,
    legal_actions,
    new_cash_hand,
    new_tournament,
    next_hand,
    tournament_winner,
)

MAX_AUTO_HANDS_CASH = 100


class SeatSpec(BaseModel):
    type: Literal["human", "agent"]
    agent: str | None = None
    name: str | None = None


class CreateTableRequest(BaseModel):
    mode: Literal["cash-hu", "spin"]
    seats: list[SeatSpec]
    stack_bb: float = 200.0
    blinds: tuple[float, float] = (0.5, 1.0)
    starting_stack_bb: float = 25.0
    hands_per_level: int = 10
    seed: int | None = None
    spectator: bool = False
    max_hands: int = MAX_AUTO_HANDS_CASH


class ActionRequest(BaseModel):
    seat: int
    action: str
    key: str | None = None  # idempotency key for one decision


class MatchRequest(BaseModel):
    mode: Literal["cash-hu", "spin"]
    agent_a: str
    agent_b: str
    agent_c: str | None = None
    hands: int = Field(default=1000, ge=1)
    stack_bb: float = 200.0
    duplicate: bool = False
    seed: int = 0
    rotate_seats: bool = True


def _api_error(status: int, code: str, message: str, legal: engine.LegalActionSet | None = None):
    payload: dict = {"code": code, "message": message}
    if legal is not None:
        payload["legal_actions"] = legal.to_dict()
    return HTTPException(status_code=status, detail=payload)


class TableSession:
    """One live table: state, seat wiring, and an append-only event log."""

    def __init__(self, table_id: str, mode: str, state: TableState, agents: list[Agent | None],
                 spectator: bool, max_hands: int):
        self.id = table_id
        self.mode = mode
        self.state = state
        self.agents = agents  # per seat; None = human
        self.spectator = spectator
        self.max_hands = max_hands
        self.lock = threading.Lock()
        self.events: list[dict] = []
        self.finished = False
        self.audit: list[dict] = []  # per hand: initial serialized state + action list
        self._idempotency: dict[int, tuple[str, dict]] = {}
        self._begin_hand_bookkeeping()

    # -- events --------------------------------------------------------

    def _emit(self, type_: str, **data) -> dict:
        event = {"seq": len(self.events) + 1, "type": type_, **data}
        self.events.append(event)
        return event

    def _begin_hand_bookkeeping(self) -> None:
        st = self.state
        self.audit.append({"initial": st.serialize(), "actions": []})
        self._emit(
            "hand_started",
            hand_no=st.hand_no,
            button=st.button,
            blinds=[st.sb / 10.0, st.bb / 10.0],
            roles={i: s.role for i, s in enumerate(st.seats) if not s.out},
            stacks={i: s.stack_start / 10.0 for i, s in enumerate(st.seats) if not s.out},
        )

    def _emit_settlement(self) -> None:
        st = self.state
        revealed = {
            i: [card_name(c) for c in st.seats[i].hole]  # type: ignore[union-attr]
            for i in st.showdown_reveal
        }
        self._emit(
            "hand_settled",
            hand_no=st.hand_no,
            payouts=[p / 10.0 for p in (st.payouts or [])],
            net=[n / 10.0 for n in engine.net_winnings(st)],
            board=[card_name(c) for c in st.board],
            revealed=revealed,
        )

    # -- driving -------------------------------------------------------

    def _apply(self, seat: int, token: engine.ActionToken) -> None:
        st = self.state
        street_before = len(st.history)
        apply_action(st, st.role_of(seat), token)
        self.audit[-1]["actions"].append([st.seats[seat].role, token.serialize()])
        self._emit("action", hand_no=st.hand_no, seat=seat, role=st.seats[seat].role,
                   token=token.serialize())
        for log in st.history[street_before:]:
            self._emit("street", hand_no=st.hand_no, street=log.street,
                       cards=[card_name(c) for c in log.cards])
        if st.street == SETTLED:
            self._emit_settlement()

    def _advance(self, hand_budget: int | None = None) -> None:
        """Let agents act until a human decision, the budget, or table end.

        With live humans the loop always runs to their next decision (a
        hand can settle without them, e.g. folded to their blind). Once
        none are left, ``hand_budget`` caps how many further hands may
        play, so watched tables progress poll by poll instead of running
        a whole session inside one request.
        """
        st = self.state
        while not self.finished:
            if st.street == SETTLED:
                if self.mode == "spin":
                    winner = tournament_winner(st)
                    if winner is not None:
                        self._emit("tournament_over", winner_seat=winner, name=st.seats[winner].name)
                        self.finished = True
                        return
                elif st.hand_no >= self.max_hands:
                    self.finished = True
                    return
                if hand_budget is not None and not self._humans_alive():
                    hand_budget -= 1
                    if hand_budget < 0:
                        return
                next_hand(st)
                self._begin_hand_bookkeeping()
                continue
            seat = st.to_act
            assert seat is not None
            agent = self.agents[seat]
            if agent is None:
                return  # human decision pending
            view = make_view(st, st.role_of(seat))
            token = agent.decide(view)
            try:
                self._apply(seat, token)
            except engine.IllegalActionError:
                repaired = engine.check() if legal_actions(st).may_check else engine.fold()
                self._apply(seat, repaired)

    def _humans_alive(self) -> bool:
        return any(
            self.agents[i] is None and not self.state.seats[i].out
            for i in range(len(self.agents))
        )

    # -- views ----------------------------------------------------------

    def view(self, seat: int | None, since: int) -> dict:
        st = self.state
        hero_cards = None
        legal = None
        your_turn = False
        if seat is not None:
            s = st.seats[seat]
            if s.hole is not None:
                hero_cards = [card_name(c) for c in s.hole]
            your_turn = st.to_act == seat and st.street in engine.BETTING_STREETS
            if your_turn:
                legal = legal_actions(st).to_dict()
        seats_payload = []
        for i, s in enumerate(st.seats):
            cards = None
            if seat is not None and i == seat and s.hole is not None:
                cards = [card_name(c) for c in s.hole]
            elif st.street == SETTLED and i in st.showdown_reveal and s.hole is not None:
                cards = [card_name(c) for c in s.hole]
            seats_payload.append(
                {
                    "seat": i,
                    "name": s.name,
                    "role": s.role,
                    "stack": s.stack / 10.0,
                    "committed": s.committed_street / 10.0,
                    "committed_total": s.committed_total / 10.0,
                    "folded": s.folded,
                    "out": s.out,
                    "is_you": seat is not None and i == seat,
                    "cards": cards,
                }
            )
        history = [
            {
                "street": log.street,
                "cards": [card_name(c) for c in log.cards],
                "actions": [{"seat": i, "role": st.seats[i].role, "token": tok.serialize()} for i, tok in log.actions],
            }
            for log in st.history
        ]
        return {
            "table_id": self.id,
            "mode": self.mode,
            "seat": seat,
            "seq": len(self.events),
            "hand_no": st.hand_no,
            "street": st.street,
            "blinds": [st.sb / 10.0, st.bb / 10.0],
            "board": [card_name(c) for c in st.board],
            "pot": st.pot_units() / 10.0,
            "to_act_seat": st.to_act,
            "your_turn": your_turn,
            "hero_cards": hero_cards,
            "legal_actions": legal,
            "seats": seats_payload,
            "history": history,
            "finished": self.finished,
            "events": [e for e in self.events if e["seq"] > since],
        }

    def submit(self, seat: int, text: str, key: str | None) -> dict:
        st = self.state
        if key is not None and seat in self._idempotency:
            old_key, old_resp = self._idempotency[seat]
            if old_key == key:
                return old_resp
        if self.agents[seat] is not None:
            raise _api_error(403, "agent_seat", "this seat is driven by an agent")
        if self.finished or st.street not in engine.BETTING_STREETS or st.to_act != seat:
            raise _api_error(409, "out_of_turn", "seat is not to act")
        try:
            token = parse_action(text)
        except CodecError as exc:
            raise _api_error(422, "unparseable", str(exc), legal_actions(st))
        legal = legal_actions(st)
        if not legal.is_legal(token):
            raise _api_error(422, "illegal_action", f"{token.serialize()} is not legal here", legal)
        self._apply(seat, token)
        self._advance(hand_budget=0)
        resp = {"applied": token.serialize(), "seq": len(self.events)}
        if key is not None:
            self._idempotency[seat] = (key, resp)
        return resp

    def export(self) -> dict:
        """Full audit of settled hands; the in-flight hand stays hidden."""
        hands = self.audit if self.state.street == SETTLED else self.audit[:-1]
        return {"table_id": self.id, "hands": hands, "n_hands": len(hands)}


class MatchJob:
    def __init__(self, job_id: str):
        self.id = job_id
        self.status = "running"
        self.result: dict | None = None
        self.error: str | None = None


def create_app(auth_token: str | None = None) -> FastAPI:
    """Build the service; ``auth_token`` (or SPINBENCH_TOKEN) gates access."""
    app = FastAPI(title="spinbench", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    tables: dict[str, TableSession] = {}
    matches: dict[str, MatchJob] = {}
    registry_lock = threading.Lock()
    token = auth_token if auth_token is not None else os.environ.get("SPINBENCH_TOKEN")

    @app.exception_handler(HTTPException)
    async def http_error(_request: Request, exc: HTTPException):
        detail = exc.detail if isinstance(exc.detail, dict) else {"code": "error", "message": str(exc.detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    def check_auth(authorization: str | None) -> None:
        if token and authorization != f"Bearer {token}":
            raise _api_error(401, "unauthorized", "missing or bad bearer token")

    def get_table(table_id: str) -> TableSession:
        session = tables.get(table_id)
        if session is None:
            raise _api_error(404, "unknown_table", f"no table {table_id}")
        return session

    @app.post("/tables")
    def create_table(req: CreateTableRequest, authorization: str | None = Header(default=None)):
        check_auth(authorization)
        n = len(req.seats)
        expected = 2 if req.mode == "cash-hu" else 3
        if n != expected:
            raise _api_error(422, "bad_config", f"{req.mode} needs {expected} seats, got {n}")
        agents: list[Agent | None] = []
        names: list[str] = []
        for i, spec in enumerate(req.seats):
            names.append(spec.name or (f"seat{i}"))
            if spec.type == "agent":
                if not spec.agent:
                    raise _api_error(422, "bad_agent", "agent seat needs an agent spec")
                try:
                    agents.append(resolve_agent(spec.agent))
                except ValueError as exc:
                    raise _api_error(422, "bad_agent", str(exc))
            else:
                agents.append(None)
        if all(a is not None for a in agents) and not req.spectator:
            raise _api_error(422, "bad_config", "no human seat; set spectator=true to watch agents")
        seed = req.seed if req.seed is not None else int.from_bytes(os.urandom(4), "big")
        try:
            if req.mode == "cash-hu":
                state = new_cash_hand(
                    (req.stack_bb, req.stack_bb), blinds=req.blinds, button=0, seed=seed, names=names
                )
            else:
                cfg = TournamentConfig(
                    starting_stack_bb=req.starting_stack_bb, hands_per_level=req.hands_per_level
                )
                state = new_tournament(cfg, seed=seed, names=names)
        except engine.EngineError as exc:
            raise _api_error(422, "bad_config", str(exc))
        table_id = uuid.uuid4().hex[:12]
        session = TableSession(table_id, req.mode, state, agents, req.spectator, req.max_hands)
        with session.lock:
            session._advance(hand_budget=0)  # play to the first human turn or hand end
        with registry_lock:
            tables[table_id] = session
        humans = [i for i, a in enumerate(agents) if a is None]
        return {"table_id": table_id, "seed": seed, "human_seats": humans, "seq": len(session.events)}

    @app.get("/tables/{table_id}/view")
    def get_view(
        table_id: str,
        seat: int | None = Query(default=None),
        since: int = Query(default=0),
        authorization: str | None = Header(default=None),
    ):
        check_auth(authorization)
        session = get_table(table_id)
        with session.lock:
            if seat is not None and not 0 <= seat < len(session.state.seats):
                raise _api_error(404, "unknown_seat", f"no seat {seat}")
            if not session.finished and not session._humans_alive():
                # nobody left to wait on: the table progresses as it is watched
                session._advance(hand_budget=1)
            return session.view(seat, since)

    @app.post("/tables/{table_id}/actions")
    def post_action(table_id: str, req: ActionRequest, authorization: str | None = Header(default=None)):
        check_auth(authorization)
        session = get_table(table_id)
        with session.lock:
            if not 0 <= req.seat < len(session.state.seats):
                raise _api_error(404, "unknown_seat", f"no seat {req.seat}")
            return session.submit(req.seat, req.action, req.key)

    @app.get("/tables/{table_id}/export")
    def export_table(table_id: str, authorization: str | None = Header(default=None)):
        check_auth(authorization)
        session = get_table(table_id)
        with session.lock:
            return session.export()

    @app.post("/matches")
    def start_match(req: MatchRequest, authorization: str | None = Header(default=None)):
        check_auth(authorization)
        try:
            agent_a = resolve_agent(req.agent_a)
            agent_b = resolve_agent(req.agent_b)
            agent_c = resolve_agent(req.agent_c) if req.agent_c else None
        except ValueError as exc:
            raise _api_error(422, "bad_agent", str(exc))
        if req.mode == "spin" and agent_c is None:
            raise _api_error(422, "bad_config", "spin matches need agent_c")
        job = MatchJob(uuid.uuid4().hex[:12])
        with registry_lock:
            matches[job.id] = job

        def run() -> None:
            try:
                if req.mode == "cash-hu":
                    result = arena.run_cash_match(
                        agent_a, agent_b, n_deals=req.hands, stack_bb=req.stack_bb,
                        seed=req.seed, duplicate=req.duplicate,
                    )
                else:
                    result = arena.run_spin_and_go(
                        [agent_a, agent_b, agent_c], n_tournaments=req.hands,  # type: ignore[list-item]
                        seed=req.seed, rotate_seats=req.rotate_seats,
                    )
                job.result = result.to_dict()
                job.status = "done"
            except Exception as exc:  # surfaced through the job status
                job.error = str(exc)
                job.status = "error"

        threading.Thread(target=run, daemon=True).start()
        return {"match_id": job.id, "status": job.status}

    @app.get("/matches/{match_id}")
    def get_match(match_id: str, authorization: str | None = Header(default=None)):
        check_auth(authorization)
        job = matches.get(match_id)
        if job is None:
            raise _api_error(404, "unknown_match", f"no match {match_id}")
        out: dict = {"match_id": job.id, "status": job.status}
        if job.result is not None:
            out["result"] = job.result
        if job.error is not None:
            out["error"] = job.error
        return out

    return app
