// @vitest-environment happy-dom
//
// Replays a full Spin & Go captured from the real table service
// (fixtures/generate_session.py) through the client model and renderer.
// This is the conformance proof that a human can complete a whole
// tournament through the UI: every legal action is reachable via a
// control, nothing illegal was ever accepted, and opponents' cards are
// never visible before showdown.

import { describe, expect, it } from "vitest";

import session from "../fixtures/spin_session.json";
import { applyView, choiceIsLegal, controlsEnabled, initialModel, type UiTableModel } from "../src/model.js";
import { renderTable } from "../src/render.js";
import { parseToken } from "../src/tokens.js";
import type { SubmitOk, TableView } from "../src/types.js";

interface ViewStep {
  type: "view";
  payload: TableView;
}

interface SubmitStep {
  type: "submit";
  request: { seat: number; action: string; key: string };
  status: number;
  payload: SubmitOk;
}

const steps = session.steps as unknown as (ViewStep | SubmitStep)[];
const views = steps.filter((s): s is ViewStep => s.type === "view").map((s) => s.payload);
const submits = steps.filter((s): s is SubmitStep => s.type === "submit");

function renderInto(model: UiTableModel): HTMLElement {
  const root = document.createElement("div");
  renderTable(root, model, { onAction: () => undefined });
  return root;
}

describe("captured spin & go session", () => {
  it("runs to completion with a winner", () => {
    const last = views[views.length - 1]!;
    expect(last.finished).toBe(true);
    expect(views[0]!.hand_no).toBe(1);
    expect(last.hand_no).toBeGreaterThan(1);
    const over = last.events.concat(views.flatMap((v) => v.events))
      .find((e) => e.type === "tournament_over");
    expect(over).toBeDefined();
  });

  it("exercised every control kind at least once", () => {
    const kinds = new Set(submits.map((s) => parseToken(s.request.action)!.kind));
    expect(kinds).toEqual(new Set(["fold", "call", "check", "allin", "bet", "raise"]));
  });

  it("folds every view into the model without regressing the cursor", () => {
    let model = initialModel(views[0]!.table_id, 0);
    let lastCursor = 0;
    for (const view of views) {
      model = applyView(model, view);
      expect(model.error).toBeNull();
      expect(model.cursor).toBeGreaterThanOrEqual(lastCursor);
      lastCursor = model.cursor;
      expect(controlsEnabled(model)).toBe(view.your_turn && !view.finished);
    }
    expect(model.finished).toBe(true);
  });

  it("every submitted action was legal and accepted", () => {
    let pendingLegal: TableView["legal_actions"] = null;
    for (const step of steps) {
      if (step.type === "view") {
        pendingLegal = step.payload.your_turn ? step.payload.legal_actions : null;
        continue;
      }
      expect(step.status).toBe(200);
      expect(pendingLegal).not.toBeNull();
      const choice = parseToken(step.request.action);
      expect(choice, step.request.action).not.toBeNull();
      expect(choiceIsLegal(pendingLegal!, choice!), step.request.action).toBe(true);
      // the engine may record a full-stack commitment as an all-in
      const applied = step.payload.applied;
      expect([step.request.action, "a"]).toContain(applied);
    }
  });

  it("never shows a live opponent's cards before showdown", () => {
    for (const view of views) {
      for (const seat of view.seats) {
        if (!seat.is_you && view.street !== "settled") {
          expect(seat.cards, `hand ${view.hand_no} street ${view.street}`).toBeNull();
        }
      }
      expect(view.hero_cards === null || view.hero_cards.length === 2).toBe(true);
    }
  });

  it("offers a control for every legal option at every decision point", () => {
    let model = initialModel(views[0]!.table_id, 0);
    for (const view of views) {
      model = applyView(model, view);
      if (!view.your_turn || view.finished) continue;
      const root = renderInto(model);
      const legal = view.legal_actions!;
      const buttons = [...root.querySelectorAll("button.action")].map((b) => b.className);
      expect(buttons.some((c) => c.includes("fold"))).toBe(legal.may_fold);
      expect(buttons.some((c) => c.includes("check"))).toBe(legal.may_check);
      expect(buttons.some((c) => c.includes("call"))).toBe(legal.call_cost !== null);
      expect(buttons.some((c) => c.includes("allin"))).toBe(legal.may_allin);
      const slider = root.querySelector("input.slider") as HTMLInputElement | null;
      const range = legal.bet_range ?? legal.raise_to_range;
      if (range) {
        expect(slider).not.toBeNull();
        expect(Number(slider!.min)).toBe(Math.round(range[0] * 10));
        expect(Number(slider!.max)).toBe(Math.round(range[1] * 10));
        expect(Number(slider!.step)).toBe(1); // 0.1 BB steps
      } else {
        expect(slider).toBeNull();
      }
    }
  });

  it("renders opponents' live cards as backs and settles with an overlay", () => {
    let model = initialModel(views[0]!.table_id, 0);
    let sawBacks = false;
    let sawOverlay = false;
    for (const view of views) {
      model = applyView(model, view);
      const root = renderInto(model);
      if (view.street !== "settled" && root.querySelector(".card.back")) sawBacks = true;
      if (view.street === "settled" && root.querySelector(".result-overlay")) sawOverlay = true;
      // the DOM never carries a hidden card: every rendered card face is
      // either the hero's, the board's, or a showdown reveal
      const faces = [...root.querySelectorAll(".card:not(.back)")].map((n) => n.textContent);
      const allowed = new Set<string>();
      for (const c of view.board) allowed.add(c);
      for (const c of view.hero_cards ?? []) allowed.add(c);
      for (const s of view.seats) for (const c of s.cards ?? []) allowed.add(c);
      for (const h of view.history) for (const c of h.cards) allowed.add(c);
      const glyphToSuit: Record<string, string> = { "♣": "c", "♦": "d", "♥": "h", "♠": "s" };
      for (const face of faces) {
        const name = face![0]! + glyphToSuit[face![1]!]!;
        expect(allowed.has(name), `rendered ${name}`).toBe(true);
      }
    }
    expect(sawBacks).toBe(true);
    expect(sawOverlay).toBe(true);
  });
});
