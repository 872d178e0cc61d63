/** DOM rendering: the screen is rebuilt from the model on every change. */

import {
  controlsEnabled,
  settledOverlay,
  showsCardBack,
  sliderSpec,
  type UiTableModel,
} from "./model.js";
import { describeToken, formatBb, toTenths, type ActionChoice } from "./tokens.js";
import type { SeatView } from "./types.js";

export interface RenderHandlers {
  onAction(choice: ActionChoice): void;
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardNode(card: string | null): HTMLElement {
  if (card === null) return el("span", "card back", "🂠");
  const suit = card[1]!;
  const glyph = { c: "♣", d: "♦", h: "♥", s: "♠" }[suit] ?? "?";
  const node = el("span", `card suit-${suit}`, `${card[0]}${glyph}`);
  return node;
}

function bbText(bb: number): string {
  return `${formatBb(toTenths(bb))} BB`;
}

function renderSeat(model: UiTableModel, seat: SeatView): HTMLElement {
  const box = el("div", "seat" + (seat.is_you ? " you" : "") + (seat.folded ? " folded" : ""));
  if (seat.out) {
    box.classList.add("busted");
  }
  const title = `${seat.name}${seat.role ? ` (${seat.role})` : ""}${seat.is_you ? " — you" : ""}`;
  box.appendChild(el("div", "seat-name", title));
  box.appendChild(el("div", "seat-stack", seat.out ? "out" : bbText(seat.stack)));
  const cards = el("div", "seat-cards");
  if (seat.cards) {
    for (const c of seat.cards) cards.appendChild(cardNode(c));
  } else if (showsCardBack(model, seat.seat)) {
    cards.appendChild(cardNode(null));
    cards.appendChild(cardNode(null));
  }
  box.appendChild(cards);
  if (seat.committed > 0) {
    box.appendChild(el("div", "seat-committed", bbText(seat.committed)));
  }
  if (model.view && model.view.to_act_seat === seat.seat && !model.finished) {
    box.classList.add("to-act");
  }
  return box;
}

function renderHistory(model: UiTableModel): HTMLElement {
  const list = el("div", "history");
  const view = model.view!;
  for (const street of view.history) {
    const row = el("div", "history-street");
    row.appendChild(el("span", "street-name", street.street));
    if (street.cards.length) {
      const cards = el("span", "street-cards");
      for (const c of street.cards) cards.appendChild(cardNode(c));
      row.appendChild(cards);
    }
    for (const action of street.actions) {
      const who = action.role ?? `seat ${action.seat}`;
      row.appendChild(
        el("span", "history-action", `${who} ${action.token} (${describeToken(action.token)})`),
      );
    }
    list.appendChild(row);
  }
  return list;
}

function renderControls(model: UiTableModel, handlers: RenderHandlers): HTMLElement {
  const bar = el("div", "controls");
  const enabled = controlsEnabled(model);
  const legal = model.view?.legal_actions ?? null;

  const button = (label: string, choice: ActionChoice, cls = "") => {
    const b = el("button", `action ${cls}`.trim(), label) as HTMLButtonElement;
    b.disabled = !enabled;
    b.addEventListener("click", () => handlers.onAction(choice));
    bar.appendChild(b);
    return b;
  };

  if (legal?.may_fold) button("fold (f)", { kind: "fold" }, "fold");
  if (legal?.may_check) button("check (x)", { kind: "check" }, "check");
  if (legal && legal.call_cost !== null) {
    button(`call ${bbText(legal.call_cost)} (c)`, { kind: "call" }, "call");
  }

  const spec = sliderSpec(legal);
  if (spec) {
    const wrap = el("div", "sizer");
    const slider = el("input", "slider") as HTMLInputElement;
    slider.type = "range";
    slider.min = String(spec.minTenths);
    slider.max = String(spec.maxTenths);
    slider.step = String(spec.stepTenths);
    slider.value = String(spec.minTenths);
    slider.disabled = !enabled;
    const verb = spec.kind === "bet" ? "bet" : "raise to";
    const label = el("span", "sizer-label");
    const prefix = spec.kind === "bet" ? "b" : "r";
    const update = () => {
      const tenths = Number(slider.value);
      label.textContent = `${verb} ${formatBb(tenths)} BB (${prefix}${formatBb(tenths)})`;
    };
    slider.addEventListener("input", update);
    update();
    const go = el("button", "action sized", verb) as HTMLButtonElement;
    go.disabled = !enabled;
    go.addEventListener("click", () =>
      handlers.onAction({ kind: spec.kind, amount: Number(slider.value) }),
    );
    wrap.appendChild(slider);
    wrap.appendChild(label);
    wrap.appendChild(go);
    bar.appendChild(wrap);
  }

  if (legal?.may_allin) button("all-in (a)", { kind: "allin" }, "allin");
  return bar;
}

function renderOverlay(model: UiTableModel): HTMLElement | null {
  const result = settledOverlay(model);
  if (!result || !model.view) return null;
  const overlay = el("div", "result-overlay");
  overlay.appendChild(el("div", "result-title", model.finished ? "table finished" : `hand ${result.handNo} settled`));
  const rows = el("div", "result-rows");
  result.payouts.forEach((payout, i) => {
    const seat = model.view!.seats[i];
    if (!seat || (seat.out && payout === 0)) return;
    const net = result.net[i] ?? 0;
    const sign = net > 0 ? "+" : "";
    rows.appendChild(
      el("div", "result-row", `${seat.name}: pot share ${bbText(payout)}, net ${sign}${formatBb(toTenths(net))} BB`),
    );
  });
  overlay.appendChild(rows);
  return overlay;
}

/** Rebuild the screen. Renders only data present in the view. */
export function renderTable(root: HTMLElement, model: UiTableModel, handlers: RenderHandlers): void {
  root.textContent = "";
  if (model.error) {
    root.appendChild(el("div", "error-banner", model.error));
    if (!model.view) return; // nothing trustworthy to draw
  }
  const view = model.view;
  if (!view) {
    root.appendChild(el("div", "loading", "waiting for the table…"));
    return;
  }
  const table = el("div", "table");
  const status = el(
    "div",
    "status",
    `hand ${view.hand_no} · ${view.street} · blinds ${formatBb(toTenths(view.blinds[0]))}/${formatBb(
      toTenths(view.blinds[1]),
    )} · pot ${bbText(view.pot)}`,
  );
  table.appendChild(status);

  const board = el("div", "board");
  for (const c of view.board) board.appendChild(cardNode(c));
  table.appendChild(board);

  const seats = el("div", "seats");
  for (const seat of view.seats) seats.appendChild(renderSeat(model, seat));
  table.appendChild(seats);

  table.appendChild(renderHistory(model));
  table.appendChild(renderControls(model, handlers));

  const overlay = renderOverlay(model);
  if (overlay) table.appendChild(overlay);
  if (model.pendingAction) table.appendChild(el("div", "pending", "sending…"));
  root.appendChild(table);
}
