"""The action-token fixtures shared with the browser client must hold here."""

import json
from pathlib import Path

import pytest

from spinbench.codec import ParseError, parse_action
from spinbench.engine import ActionToken

FIXTURES = json.loads(
    (Path(__file__).resolve().parent.parent / "frontend" / "fixtures" / "action_tokens.json")
    .read_text(encoding="utf-8")
)


def test_valid_tokens_parse_identically():
    for case in FIXTURES["valid"]:
        token = parse_action(case["text"])
        assert token.kind == case["kind"], case
        assert token.amount == case["amount"], case


def test_canonical_serialization():
    for case in FIXTURES["canonical_serialization"]:
        token = ActionToken(case["kind"], case["amount"])
        assert token.serialize() == case["text"], case
        assert parse_action(case["text"]) == token


def test_invalid_strings_rejected():
    for text in FIXTURES["invalid"]:
        with pytest.raises(ParseError):
            parse_action(text)
