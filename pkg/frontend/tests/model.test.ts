import { describe, expect, it } from "vitest";

import {
  applyView,
  controlsEnabled,
  decisionKey,
  initialModel,
  showsCardBack,
  sliderSpec,
} from "../src/model.js";
import type { LegalActions, TableView } from "../src/types.js";

function makeView(overrides: Partial<TableView> = {}): TableView {
  return {
    table_id: "t1",
    mode: "spin",
    seat: 0,
    seq: 5,
    hand_no: 1,
    street: "pre",
    blinds: [0.5, 1.0],
    board: [],
    pot: 1.5,
    to_act_seat: 0,
    your_turn: true,
    hero_cards: ["As", "Kd"],
    legal_actions: {
      may_fold: true,
      may_check: false,
      call_cost: 0.5,
      bet_range: null,
      raise_to_range: [2.0, 25.0],
      may_allin: true,
    },
    seats: [
      { seat: 0, name: "you", role: "SB", stack: 24.5, committed: 0.5, committed_total: 0.5, folded: false, out: false, is_you: true, cards: ["As", "Kd"] },
      { seat: 1, name: "cc", role: "BB", stack: 24.0, committed: 1.0, committed_total: 1.0, folded: false, out: false, is_you: false, cards: null },
      { seat: 2, name: "pf", role: "BTN", stack: 25.0, committed: 0, committed_total: 0, folded: true, out: false, is_you: false, cards: null },
    ],
    history: [{ street: "pre", cards: [], actions: [] }],
    finished: false,
    events: [],
    ...overrides,
  };
}

describe("applyView", () => {
  it("accepts a good view and advances the cursor", () => {
    const model = applyView(initialModel("t1", 0), makeView());
    expect(model.view).not.toBeNull();
    expect(model.cursor).toBe(5);
    expect(model.error).toBeNull();
  });

  it("never regresses the cursor", () => {
    let model = applyView(initialModel("t1", 0), makeView({ seq: 9 }));
    model = applyView(model, makeView({ seq: 4 }));
    expect(model.cursor).toBe(9);
  });

  it("keeps the previous render on a malformed view", () => {
    let model = applyView(initialModel("t1", 0), makeView());
    const good = model.view;
    model = applyView(model, { nope: true } as unknown as TableView);
    expect(model.error).toMatch(/malformed/);
    expect(model.view).toBe(good); // no partial render
  });

  it("flags a view that claims a turn but offers no legal actions", () => {
    const broken = makeView({ legal_actions: null });
    const model = applyView(initialModel("t1", 0), broken);
    expect(model.error).toMatch(/legal/);
  });

  it("collects settle events for the result overlay", () => {
    const view = makeView({
      street: "settled",
      your_turn: false,
      legal_actions: null,
      seq: 11,
      events: [
        { seq: 10, type: "action", hand_no: 1 },
        { seq: 11, type: "hand_settled", hand_no: 1, payouts: [3.0, 0, 0], net: [1.5, -1.0, -0.5], board: [], revealed: {} },
      ],
    });
    const model = applyView(initialModel("t1", 0), view);
    expect(model.lastResult?.handNo).toBe(1);
    expect(model.lastResult?.payouts).toEqual([3.0, 0, 0]);
  });

  it("ignores stale events at or below the cursor", () => {
    let model = applyView(initialModel("t1", 0), makeView({ seq: 20 }));
    const replay = makeView({
      seq: 21,
      events: [{ seq: 12, type: "hand_settled", hand_no: 1, payouts: [9], net: [9], board: [], revealed: {} }],
    });
    model = applyView(model, replay);
    expect(model.lastResult).toBeNull();
  });
});

describe("controlsEnabled", () => {
  it("is true exactly at the hero's decision point", () => {
    const model = applyView(initialModel("t1", 0), makeView());
    expect(controlsEnabled(model)).toBe(true);
    const notYours = applyView(initialModel("t1", 0), makeView({ your_turn: false, legal_actions: null, to_act_seat: 1 }));
    expect(controlsEnabled(notYours)).toBe(false);
  });

  it("is false while an action is pending or after the table finished", () => {
    const model = applyView(initialModel("t1", 0), makeView());
    expect(controlsEnabled({ ...model, pendingAction: true })).toBe(false);
    expect(controlsEnabled({ ...model, finished: true })).toBe(false);
  });
});

describe("sliderSpec", () => {
  it("binds to the bet range in tenths with 0.1 steps", () => {
    const legal: LegalActions = {
      may_fold: true, may_check: true, call_cost: null,
      bet_range: [1.0, 24.5], raise_to_range: null, may_allin: true,
    };
    expect(sliderSpec(legal)).toEqual({ kind: "bet", minTenths: 10, maxTenths: 245, stepTenths: 1 });
  });

  it("falls back to the raise-to range", () => {
    const legal: LegalActions = {
      may_fold: true, may_check: false, call_cost: 2.0,
      bet_range: null, raise_to_range: [4.0, 30.0], may_allin: true,
    };
    expect(sliderSpec(legal)).toEqual({ kind: "raise", minTenths: 40, maxTenths: 300, stepTenths: 1 });
    expect(sliderSpec(null)).toBeNull();
  });
});

describe("decisionKey / card backs", () => {
  it("keys one decision per (hand, seq)", () => {
    const model = applyView(initialModel("t1", 0), makeView({ hand_no: 3, seq: 17 }));
    expect(decisionKey(model)).toBe("3:17");
  });

  it("shows backs only for live hidden opponents", () => {
    const model = applyView(initialModel("t1", 0), makeView());
    expect(showsCardBack(model, 0)).toBe(false); // you
    expect(showsCardBack(model, 1)).toBe(true); // live opponent
    expect(showsCardBack(model, 2)).toBe(false); // folded
  });
});
