// @vitest-environment happy-dom

import { describe, expect, it, vi } from "vitest";

import { applyView, initialModel } from "../src/model.js";
import { renderTable } from "../src/render.js";
import type { TableView } from "../src/types.js";

function view(overrides: Partial<TableView> = {}): TableView {
  return {
    table_id: "t1",
    mode: "cash-hu",
    seat: 0,
    seq: 3,
    hand_no: 1,
    street: "flop",
    blinds: [0.5, 1.0],
    board: ["4h", "7s", "6c"],
    pot: 4.0,
    to_act_seat: 0,
    your_turn: true,
    hero_cards: ["Ts", "Qs"],
    legal_actions: {
      may_fold: true,
      may_check: true,
      call_cost: null,
      bet_range: [1.0, 198.0],
      raise_to_range: null,
      may_allin: true,
    },
    seats: [
      { seat: 0, name: "you", role: "BB", stack: 198, committed: 0, committed_total: 2, folded: false, out: false, is_you: true, cards: ["Ts", "Qs"] },
      { seat: 1, name: "bot", role: "SB", stack: 198, committed: 0, committed_total: 2, folded: false, out: false, is_you: false, cards: null },
    ],
    history: [
      { street: "pre", cards: [], actions: [{ seat: 1, role: "SB", token: "c" }, { seat: 0, role: "BB", token: "x" }] },
      { street: "flop", cards: ["4h", "7s", "6c"], actions: [] },
    ],
    finished: false,
    events: [],
    ...overrides,
  };
}

function render(v: TableView, onAction = vi.fn()) {
  const model = applyView(initialModel("t1", 0), v);
  const root = document.createElement("div");
  renderTable(root, model, { onAction });
  return { root, onAction };
}

describe("renderTable", () => {
  it("shows stacks and amounts in BB and history tokens beside words", () => {
    const { root } = render(view());
    expect(root.textContent).toContain("198 BB");
    expect(root.textContent).toContain("pot 4 BB");
    expect(root.textContent).toContain("SB c (call)");
    expect(root.textContent).toContain("BB x (check)");
  });

  it("fires the bet handler with the slider amount", () => {
    const { root, onAction } = render(view());
    const slider = root.querySelector("input.slider") as HTMLInputElement;
    slider.value = "20";
    slider.dispatchEvent(new Event("input"));
    (root.querySelector("button.action.sized") as HTMLButtonElement).click();
    expect(onAction).toHaveBeenCalledWith({ kind: "bet", amount: 20 });
  });

  it("disables controls when it is not your turn", () => {
    const { root, onAction } = render(view({ your_turn: false, to_act_seat: 1, legal_actions: null }));
    for (const b of root.querySelectorAll("button.action")) {
      expect((b as HTMLButtonElement).disabled).toBe(true);
    }
    // nothing wired to fire anyway
    expect(onAction).not.toHaveBeenCalled();
  });

  it("renders the opponent's hand as card backs pre-showdown", () => {
    const { root } = render(view());
    expect(root.querySelectorAll(".card.back").length).toBe(2);
  });

  it("shows the error banner and no partial render on malformed views", () => {
    const model = applyView(initialModel("t1", 0), { junk: 1 } as unknown as TableView);
    const root = document.createElement("div");
    renderTable(root, model, { onAction: vi.fn() });
    expect(root.querySelector(".error-banner")).not.toBeNull();
    expect(root.querySelector(".table")).toBeNull();
  });

  it("overlays the pot distribution once the hand settles", () => {
    const settled = view({
      street: "settled",
      your_turn: false,
      legal_actions: null,
      seq: 9,
      events: [
        { seq: 9, type: "hand_settled", hand_no: 1, payouts: [4.0, 0.0], net: [2.0, -2.0], board: ["4h", "7s", "6c", "8d", "9c"], revealed: {} },
      ],
    });
    const { root } = render(settled);
    const overlay = root.querySelector(".result-overlay");
    expect(overlay).not.toBeNull();
    expect(overlay!.textContent).toContain("you: pot share 4 BB, net +2 BB");
    expect(overlay!.textContent).toContain("bot: pot share 0 BB, net -2 BB");
  });
});
