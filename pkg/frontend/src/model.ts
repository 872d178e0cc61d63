/** Pure table-screen state: a function of (last good view, cursor). */

import type { LegalActions, TableView } from "./types.js";

export interface HandResult {
  handNo: number;
  payouts: number[]; // BB per seat
  net: number[];
  board: string[];
  revealed: Record<string, string[]>;
}

export interface UiTableModel {
  tableId: string;
  seat: number;
  /** event cursor; only ever moves forward */
  cursor: number;
  view: TableView | null;
  error: string | null;
  /** an action request is in flight; controls stay disabled */
  pendingAction: boolean;
  lastResult: HandResult | null;
  finished: boolean;
}

export function initialModel(tableId: string, seat: number): UiTableModel {
  return {
    tableId,
    seat,
    cursor: 0,
    view: null,
    error: null,
    pendingAction: false,
    lastResult: null,
    finished: false,
  };
}

function malformed(view: unknown): string | null {
  const v = view as Partial<TableView> | null;
  if (v === null || typeof v !== "object") return "empty view";
  if (typeof v.seq !== "number" || typeof v.hand_no !== "number") return "missing sequence fields";
  if (!Array.isArray(v.seats) || v.seats.length < 2) return "missing seats";
  if (!Array.isArray(v.board) || !Array.isArray(v.events)) return "missing board or events";
  if (typeof v.street !== "string") return "missing street";
  if (v.your_turn && !v.legal_actions) return "to act but no legal actions";
  return null;
}

/** Fold a fresh server view into the model.
 *
 * Malformed payloads set the error banner and keep the previous render
 * intact; the cursor never regresses even if the server replays old
 * events.
 */
export function applyView(model: UiTableModel, view: TableView): UiTableModel {
  const problem = malformed(view);
  if (problem !== null) {
    return { ...model, error: `malformed view: ${problem}` };
  }
  let lastResult = model.lastResult;
  for (const event of view.events) {
    if (event.seq <= model.cursor) continue; // stale replay, ignore
    if (event.type === "hand_settled") {
      lastResult = {
        handNo: event.hand_no as number,
        payouts: event.payouts as number[],
        net: event.net as number[],
        board: event.board as string[],
        revealed: (event.revealed as Record<string, string[]>) ?? {},
      };
    }
  }
  return {
    ...model,
    view,
    error: null,
    cursor: Math.max(model.cursor, view.seq),
    lastResult,
    finished: view.finished,
  };
}

/** Action controls are live only at the hero's own decision point. */
export function controlsEnabled(model: UiTableModel): boolean {
  return (
    !model.pendingAction &&
    !model.finished &&
    model.view !== null &&
    model.view.your_turn &&
    model.view.legal_actions !== null
  );
}

export interface SliderSpec {
  kind: "bet" | "raise";
  minTenths: number;
  maxTenths: number;
  stepTenths: number;
}

/** Slider bounds straight from the legal set (0.1 BB steps). */
export function sliderSpec(legal: LegalActions | null): SliderSpec | null {
  if (!legal) return null;
  const range = legal.bet_range ?? legal.raise_to_range;
  if (!range) return null;
  return {
    kind: legal.bet_range ? "bet" : "raise",
    minTenths: Math.round(range[0] * 10),
    maxTenths: Math.round(range[1] * 10),
    stepTenths: 1,
  };
}

/** Every decision point gets one idempotency key: retries reuse it. */
export function decisionKey(model: UiTableModel): string {
  const v = model.view;
  return v ? `${v.hand_no}:${v.seq}` : "0:0";
}

/** Seat card backs: true when a live opponent's cards are face-down. */
export function showsCardBack(model: UiTableModel, seatIndex: number): boolean {
  const v = model.view;
  if (!v) return false;
  const seat = v.seats[seatIndex];
  if (!seat || seat.is_you || seat.out || seat.folded) return false;
  return seat.cards === null;
}

export function settledOverlay(model: UiTableModel): HandResult | null {
  if (!model.view) return null;
  if (model.view.street !== "settled" && !model.finished) return null;
  return model.lastResult;
}

/** Client-side mirror of the server's legality check (amounts in tenths). */
export function choiceIsLegal(
  legal: LegalActions,
  choice: { kind: string; amount?: number },
): boolean {
  switch (choice.kind) {
    case "fold":
      return legal.may_fold;
    case "check":
      return legal.may_check;
    case "call":
      return legal.call_cost !== null;
    case "allin":
      return legal.may_allin;
    case "bet": {
      if (!legal.bet_range || choice.amount === undefined) return false;
      return (
        choice.amount >= Math.round(legal.bet_range[0] * 10) &&
        choice.amount <= Math.round(legal.bet_range[1] * 10)
      );
    }
    case "raise": {
      if (!legal.raise_to_range || choice.amount === undefined) return false;
      return (
        choice.amount >= Math.round(legal.raise_to_range[0] * 10) &&
        choice.amount <= Math.round(legal.raise_to_range[1] * 10)
      );
    }
    default:
      return false;
  }
}
