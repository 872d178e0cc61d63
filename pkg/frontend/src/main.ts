/** Bootstrap: lobby form -> table page with a single-writer poll loop. */

import { ApiClient } from "./api.js";
import { applyView, controlsEnabled, decisionKey, initialModel, type UiTableModel } from "./model.js";
import { renderTable } from "./render.js";
import { serializeChoice, type ActionChoice } from "./tokens.js";

const POLL_MS = 400;

class TablePage {
  private model: UiTableModel;
  private pollScheduled = false;
  private pollInFlight = false;
  private retry: { action: string; key: string } | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    tableId: string,
    private readonly seat: number,
  ) {
    this.model = initialModel(tableId, seat);
  }

  start(): void {
    this.draw();
    void this.poll();
  }

  private draw(): void {
    renderTable(this.root, this.model, { onAction: (c) => void this.submit(c) });
    if (this.retry) {
      const banner = document.createElement("div");
      banner.className = "retry-banner";
      banner.textContent = "network hiccup — the action was not confirmed";
      const again = document.createElement("button");
      again.textContent = "retry";
      again.addEventListener("click", () => void this.resubmit());
      banner.appendChild(again);
      this.root.appendChild(banner);
    }
  }

  private schedulePoll(): void {
    if (this.pollScheduled || this.model.finished) return;
    this.pollScheduled = true;
    setTimeout(() => {
      this.pollScheduled = false;
      void this.poll();
    }, POLL_MS);
  }

  private async poll(): Promise<void> {
    if (this.pollInFlight) return; // one in-flight poll, ever
    this.pollInFlight = true;
    try {
      const view = await this.api.getView(this.model.tableId, this.seat, this.model.cursor);
      this.model = applyView(this.model, view);
    } catch (err) {
      this.model = { ...this.model, error: `connection problem: ${String(err)}` };
    } finally {
      this.pollInFlight = false;
    }
    this.draw();
    this.schedulePoll();
  }

  private async submit(choice: ActionChoice): Promise<void> {
    if (!controlsEnabled(this.model)) return; // out-of-turn clicks go nowhere
    const action = serializeChoice(choice);
    const key = decisionKey(this.model);
    await this.send(action, key);
  }

  private async resubmit(): Promise<void> {
    if (!this.retry) return;
    const { action, key } = this.retry;
    await this.send(action, key); // same idempotency key: no double submit
  }

  private async send(action: string, key: string): Promise<void> {
    this.model = { ...this.model, pendingAction: true };
    this.draw();
    try {
      const result = await this.api.submitAction(this.model.tableId, this.seat, action, key);
      this.retry = null;
      if (!result.ok && result.code !== "busy") {
        this.model = {
          ...this.model,
          pendingAction: false,
          error: `${result.message}${result.legal_actions ? " — pick one of the offered actions" : ""}`,
        };
      } else {
        this.model = { ...this.model, pendingAction: false, error: null };
      }
    } catch {
      this.retry = { action, key };
      this.model = { ...this.model, pendingAction: false };
    }
    this.draw();
    void this.poll();
  }
}

function lobby(root: HTMLElement): void {
  root.textContent = "";
  const form = document.createElement("form");
  form.className = "lobby";
  form.innerHTML = `
    <h1>spinbench table</h1>
    <label>server <input name="server" value="${location.origin}" /></label>
    <label>mode
      <select name="mode">
        <option value="spin">Spin &amp; Go (3 seats)</option>
        <option value="cash-hu">heads-up cash</option>
      </select>
    </label>
    <label>opponent 1 <input name="agent1" value="check_call" /></label>
    <label>opponent 2 <input name="agent2" value="push_fold:10" /></label>
    <label>seed <input name="seed" value="" placeholder="random" /></label>
    <button type="submit">deal me in</button>
    <div class="lobby-error"></div>
  `;
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = new FormData(form);
    const mode = data.get("mode") as "spin" | "cash-hu";
    const api = new ApiClient(String(data.get("server")));
    const seats: { type: "human" | "agent"; agent?: string }[] = [
      { type: "human" },
      { type: "agent", agent: String(data.get("agent1")) },
    ];
    if (mode === "spin") seats.push({ type: "agent", agent: String(data.get("agent2")) });
    const seedRaw = String(data.get("seed")).trim();
    void api
      .createTable({ mode, seats, ...(seedRaw ? { seed: Number(seedRaw) } : {}) })
      .then((created) => {
        const page = new TablePage(api, root, created.table_id, created.human_seats[0] ?? 0);
        page.start();
      })
      .catch((err) => {
        form.querySelector(".lobby-error")!.textContent = String(err);
      });
  });
  root.appendChild(form);
}

const rootElement = document.getElementById("app");
if (rootElement) lobby(rootElement);
