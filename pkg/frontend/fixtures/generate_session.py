"""Regenerate spin_session.json by driving the real table service.

Run from the repository root:

    python3 frontend/fixtures/generate_session.py

The scripted human rotates through every control the UI offers (check,
call, bet at the slider minimum/maximum, raise, all-in, fold) picking
the first legal one, so the captured session exercises each control at
least once. Every raw payload is recorded for the browser-client
conformance tests.
"""

from __future__ import annotations

import json
import pathlib

from fastapi.testclient import TestClient

from spinbench.service import create_app

SEED = 1
OUT = pathlib.Path(__file__).with_name("spin_session.json")


def scripted_choice(turn_index: int, view: dict) -> str:
    """First legal pick from a rotating preference list.

    Tuned to keep the human alive for a while: min-sized bets and
    raises, folds only against real bets, and all-ins only once short.
    """
    legal = view["legal_actions"]
    hero = next(s for s in view["seats"] if s["is_you"])
    short = hero["stack"] + hero["committed"] <= 5.0
    rotations = [
        ["check", "call", "bet_min"],
        ["bet_min", "check", "call"],
        ["raise_min", "check", "call"],
        ["check", "fold", "call"],
        ["call", "check", "bet_min"],
        ["fold", "check", "call"],
    ]
    picks = rotations[turn_index % len(rotations)] + ["check", "call", "fold"]
    if short and legal["may_allin"]:
        picks = ["allin"] + picks
    for pick in picks:
        if pick == "check" and legal["may_check"]:
            return "x"
        if pick == "call" and legal["call_cost"] is not None and legal["call_cost"] <= 6.0:
            return "c"
        if pick == "fold" and legal["call_cost"] is not None:
            return "f"
        if pick == "allin" and legal["may_allin"]:
            return "a"
        if pick == "bet_min" and legal["bet_range"]:
            return "b" + format_bb(legal["bet_range"][0])
        if pick == "raise_min" and legal["raise_to_range"]:
            return "r" + format_bb(legal["raise_to_range"][0])
    # facing a huge bet with nothing scripted left: let it go
    return "f"


def format_bb(bb: float) -> str:
    tenths = round(bb * 10)
    whole, frac = divmod(tenths, 10)
    return str(whole) if frac == 0 else f"{whole}.{frac}"


def run_session(seed: int) -> tuple[dict, list[dict]]:
    steps: list[dict] = []
    with TestClient(create_app()) as client:
        created = client.post(
            "/tables",
            json={
                "mode": "spin",
                "seats": [
                    {"type": "human", "name": "you"},
                    {"type": "agent", "agent": "check_call", "name": "cc"},
                    {"type": "agent", "agent": "push_fold:10", "name": "pf"},
                ],
                "seed": seed,
            },
        ).json()
        table_id = created["table_id"]
        cursor = 0
        turn_index = 0
        for _ in range(3_000):
            view = client.get(
                f"/tables/{table_id}/view", params={"seat": 0, "since": cursor}
            ).json()
            steps.append({"type": "view", "payload": view})
            cursor = view["seq"]
            if view["finished"]:
                return created, steps
            if not view["your_turn"]:
                # the service only waits on the human, so poll again
                continue
            action = scripted_choice(turn_index, view)
            turn_index += 1
            key = f"{view['hand_no']}:{view['seq']}"
            resp = client.post(
                f"/tables/{table_id}/actions",
                json={"seat": 0, "action": action, "key": key},
            )
            steps.append(
                {
                    "type": "submit",
                    "request": {"seat": 0, "action": action, "key": key},
                    "status": resp.status_code,
                    "payload": resp.json(),
                }
            )
        raise AssertionError("session did not finish")


def main() -> None:
    created, steps = run_session(SEED)
    kinds = {s["request"]["action"][0] for s in steps if s["type"] == "submit"}
    if kinds != {"f", "c", "x", "a", "b", "r"}:
        raise AssertionError(f"session only exercised {sorted(kinds)}; pick another seed")
    OUT.write_text(
        json.dumps({"seed": SEED, "created": created, "steps": steps}, indent=1) + "\n",
        encoding="utf-8",
    )
    views = sum(1 for s in steps if s["type"] == "view")
    submits = sum(1 for s in steps if s["type"] == "submit")
    print(f"wrote {OUT.name}: {views} views, {submits} submits, seed {SEED}")


if __name__ == "__main__":
    main()
