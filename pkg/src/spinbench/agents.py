"""Decision agents: scripted baselines, an HTTP model client, and wrappers.

Every agent implements ``decide(view) -> ActionToken`` and must return a
legal token for any reachable view; the HTTP client composes parsing and
legality repair internally so that contract holds for arbitrary model
output.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
import zlib
from dataclasses import dataclass

import requests

from . import engine
from .codec import (
    ParseError,
    RepairNote,
    RULE_FALLBACK,
    encode_prompt,
    fallback_action,
    parse_action,
    repair_action,
)
from .engine import ActionToken, LegalActionSet, TableState, legal_actions


class AgentView:
    """What one seat may see at its decision point.

    Public fields never include another seat's hole cards. The view is a
    snapshot: it is only valid until the next action is applied to the
    underlying table.
    """

    __slots__ = (
        "hero",
        "street",
        "hole",
        "board",
        "legal",
        "pot",
        "to_call",
        "current_bet",
        "effective_stack",
        "hero_stack",
        "_state",
        "_prompt",
    )

    def __init__(self, state: TableState, hero: str):
        seat_idx = state.seat_of_role(hero)
        seat = state.seats[seat_idx]
        self.hero = hero
        self.street = state.street
        self.hole = seat.hole
        self.board = tuple(state.board)
        self.legal: LegalActionSet = legal_actions(state)
        self.pot = state.units_to_tenths(state.pot_units())
        self.to_call = state.units_to_tenths(max(0, state.current_bet - seat.committed_street))
        self.current_bet = state.units_to_tenths(state.current_bet)
        own_total = seat.committed_street + seat.stack
        opp_total = max(
            s.committed_street + s.stack
            for i, s in enumerate(state.seats)
            if i != seat_idx and not s.folded and not s.out
        )
        self.effective_stack = state.units_to_tenths(min(own_total, opp_total))
        self.hero_stack = state.units_to_tenths(seat.stack)
        self._state = state
        self._prompt: str | None = None

    @property
    def prompt(self) -> str:
        """Prompt line for this decision (rendered lazily, then cached)."""
        if self._prompt is None:
            self._prompt = encode_prompt(self._state, self.hero)
        return self._prompt


def make_view(state: TableState, hero: str) -> AgentView:
    return AgentView(state, hero)


class Agent:
    """Base decision agent; subclasses override :meth:`decide`."""

    name = "agent"

    def decide(self, view: AgentView) -> ActionToken:
        raise NotImplementedError


class AlwaysFold(Agent):
    name = "always_fold"

    def decide(self, view: AgentView) -> ActionToken:
        if view.legal.may_fold:
            return engine.fold()
        return engine.check()


class AlwaysAllin(Agent):
    name = "always_allin"

    def decide(self, view: AgentView) -> ActionToken:
        return engine.allin()


class CheckCall(Agent):
    name = "check_call"

    def decide(self, view: AgentView) -> ActionToken:
        return engine.check() if view.legal.may_check else engine.call()


class RandomLegal(Agent):
    """Uniform pick over legal options; a pure function of (seed, view)."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"random_legal:{seed}"

    def decide(self, view: AgentView) -> ActionToken:
        rng = random.Random((self.seed << 32) ^ zlib.crc32(view.prompt.encode("utf-8")))
        legal = view.legal
        kinds: list[str] = []
        kinds.append("check" if legal.may_check else "call")
        if legal.call_cost is not None:
            kinds.append("fold")
        if legal.bet_range is not None:
            kinds.append("bet")
        if legal.raise_to_range is not None:
            kinds.append("raise")
        kinds.append("allin")
        kind = rng.choice(kinds)
        if kind == "check":
            return engine.check()
        if kind == "call":
            return engine.call()
        if kind == "fold":
            return engine.fold()
        if kind == "allin":
            return engine.allin()
        rng_range = legal.bet_range if kind == "bet" else legal.raise_to_range
        amount = rng.randint(rng_range[0], rng_range[1])  # type: ignore[index]
        return engine.bet(amount) if kind == "bet" else engine.raise_to(amount)


class PushFold(Agent):
    """Preflop: shove at or below the threshold, else fold; postflop check-call."""

    def __init__(self, threshold_bb: float):
        self.threshold = round(threshold_bb * 10)
        self.name = f"push_fold:{threshold_bb:g}"

    def decide(self, view: AgentView) -> ActionToken:
        if view.street == engine.PRE:
            return engine.allin() if view.effective_stack <= self.threshold else engine.fold()
        return engine.check() if view.legal.may_check else engine.call()


def always_fold() -> Agent:
    return AlwaysFold()


def always_allin() -> Agent:
    return AlwaysAllin()


def check_call() -> Agent:
    return CheckCall()


def random_legal(seed: int) -> Agent:
    return RandomLegal(seed)


def push_fold(threshold_bb: float) -> Agent:
    return PushFold(threshold_bb)


# ---------------------------------------------------------------------------
# Deep-stack all-in patch


class DeepStackPatch(Agent):
    """Replace all-in shoves with a sized bet or raise.

    First to bet on a street: two-thirds of the pot, rounded to a tenth
    of a BB. Facing a bet: raise to three times that bet. If the sized
    amount reaches the effective stack (or no sized action is legal) the
    shove stands. Everything that is not an all-in passes through.
    """

    def __init__(self, inner: Agent):
        self.inner = inner
        self.name = f"deep_stack({inner.name})"

    def decide(self, view: AgentView) -> ActionToken:
        token = self.inner.decide(view)
        if token.kind != engine.ALLIN:
            return token
        legal = view.legal
        if legal.bet_range is not None:
            amount = (2 * view.pot * 2 + 3) // 6  # round-half-up of 2/3 pot, in tenths
            if amount >= legal.bet_range[1]:
                return token
            repaired, _ = repair_action(engine.bet(amount), legal)
            return repaired
        if legal.raise_to_range is not None:
            target = 3 * view.current_bet
            if target >= legal.raise_to_range[1]:
                return token
            repaired, _ = repair_action(engine.raise_to(target), legal)
            return repaired
        return token


def deep_stack_patch(inner: Agent) -> Agent:
    return DeepStackPatch(inner)


# ---------------------------------------------------------------------------
# HTTP model endpoint client


@dataclass(frozen=True, slots=True)
class EndpointConfig:
    """Connection settings for a text-completion endpoint.

    The request body is ``{"model", "prompt", "temperature", "max_tokens"}``
    and the response must carry the generated text under ``text`` (or the
    usual ``choices[0].text`` / ``choices[0].message.content`` shapes).
    """

    base_url: str
    model: str
    temperature: float = 0.0
    timeout_ms: int = 10_000
    max_retries: int = 2
    auth_env: str | None = None
    cache_enabled: bool = True
    cache_path: str | None = None
    max_tokens: int = 8
    max_concurrency: int = 4
    backoff_s: float = 0.25

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")


def _extract_text(payload: object) -> str:
    if isinstance(payload, dict):
        if isinstance(payload.get("text"), str):
            return payload["text"]
        choices = payload.get("choices")
        if isinstance(choices, list) and choices:
            first = choices[0]
            if isinstance(first, dict):
                if isinstance(first.get("text"), str):
                    return first["text"]
                msg = first.get("message")
                if isinstance(msg, dict) and isinstance(msg.get("content"), str):
                    return msg["content"]
    raise ValueError("no text field in endpoint response")


class LlmAgent(Agent):
    """Drives a remote model: prompt -> HTTP -> parse -> legality repair.

    Unparseable output or exhausted retries fall back to
    check-if-legal-else-fold. With the cache enabled, identical
    (model, prompt) requests are answered locally, which makes repeated
    evaluations reproducible.
    """

    def __init__(self, config: EndpointConfig):
        self.config = config
        self.name = f"llm:{config.model}"
        self._headers = {"Content-Type": "application/json"}
        if config.auth_env is not None:
            token = os.environ.get(config.auth_env)
            if token is None:
                raise ValueError(f"auth environment variable {config.auth_env} is not set")
            self._headers["Authorization"] = f"Bearer {token}"
        self._session = requests.Session()
        self._gate = threading.BoundedSemaphore(config.max_concurrency)
        self._lock = threading.Lock()
        self._cache: dict[str, str] = {}
        self.repair_notes: list[RepairNote] = []
        self.n_fallbacks = 0
        if config.cache_path and os.path.exists(config.cache_path):
            with open(config.cache_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entry = json.loads(line)
                        self._cache[entry["key"]] = entry["response"]

    def _cache_key(self, prompt: str) -> str:
        return hashlib.sha256(f"{self.config.model}\x00{prompt}".encode("utf-8")).hexdigest()

    def _remember(self, key: str, response: str) -> None:
        if not self.config.cache_enabled:
            return
        with self._lock:
            self._cache[key] = response
            if self.config.cache_path:
                with open(self.config.cache_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"key": key, "response": response}) + "\n")

    def _complete(self, prompt: str) -> str | None:
        key = self._cache_key(prompt)
        if self.config.cache_enabled:
            with self._lock:
                if key in self._cache:
                    return self._cache[key]
        body = {
            "model": self.config.model,
            "prompt": prompt,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        timeout = self.config.timeout_ms / 1000.0
        with self._gate:
            for attempt in range(self.config.max_retries + 1):
                try:
                    resp = self._session.post(
                        self.config.base_url, json=body, headers=self._headers, timeout=timeout
                    )
                    resp.raise_for_status()
                    text = _extract_text(resp.json())
                    self._remember(key, text)
                    return text
                except (requests.RequestException, ValueError):
                    if attempt < self.config.max_retries:
                        time.sleep(self.config.backoff_s * (2**attempt))
        return None

    def _note(self, note: RepairNote | None) -> None:
        if note is None:
            return
        with self._lock:
            self.repair_notes.append(note)
            if note.rule == RULE_FALLBACK:
                self.n_fallbacks += 1

    def decide(self, view: AgentView) -> ActionToken:
        text = self._complete(view.prompt)
        if text is None:
            token = fallback_action(view.legal)
            self._note(RepairNote("<no response>", token, RULE_FALLBACK))
            return token
        try:
            predicted = parse_action(text)
        except ParseError:
            token = fallback_action(view.legal)
            self._note(RepairNote(text, token, RULE_FALLBACK))
            return token
        token, note = repair_action(predicted, view.legal)
        self._note(note)
        return token


def llm_agent(config: EndpointConfig) -> Agent:
    return LlmAgent(config)


# ---------------------------------------------------------------------------
# Agent spec strings (CLI / service)


def resolve_agent(spec: str) -> Agent:
    """Build an agent from a spec string.

    ``always_fold`` | ``always_allin`` | ``check_call`` |
    ``random_legal:<seed>`` | ``push_fold:<bb>`` |
    ``llm:<url>[;model=..][;temperature=..][;timeout_ms=..][;retries=..]``
    ``[;auth_env=..][;cache=off][;cache_file=..]`` | ``deep_stack:<inner spec>``
    """
    spec = spec.strip()
    if spec == "always_fold":
        return always_fold()
    if spec == "always_allin":
        return always_allin()
    if spec == "check_call":
        return check_call()
    if spec.startswith("random_legal:"):
        return random_legal(int(spec.split(":", 1)[1]))
    if spec.startswith("push_fold:"):
        return push_fold(float(spec.split(":", 1)[1]))
    if spec.startswith("deep_stack:"):
        return deep_stack_patch(resolve_agent(spec.split(":", 1)[1]))
    if spec.startswith("llm:"):
        parts = spec[len("llm:"):].split(";")
        url = parts[0]
        opts: dict[str, str] = {}
        for part in parts[1:]:
            if "=" not in part:
                raise ValueError(f"bad llm option {part!r}")
            k, v = part.split("=", 1)
            opts[k] = v
        cfg = EndpointConfig(
            base_url=url,
            model=opts.get("model", "default"),
            temperature=float(opts.get("temperature", "0")),
            timeout_ms=int(opts.get("timeout_ms", "10000")),
            max_retries=int(opts.get("retries", "2")),
            auth_env=opts.get("auth_env"),
            cache_enabled=opts.get("cache", "on") != "off",
            cache_path=opts.get("cache_file"),
        )
        return llm_agent(cfg)
    raise ValueError(f"unknown agent spec {spec!r}")
