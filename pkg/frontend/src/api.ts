/** Thin fetch client for the table service, with submit discipline:
 * at most one action request in flight, and a per-decision idempotency
 * key so a retry after a network failure can never double-submit.
 */

import type { CreateTableResponse, SubmitResult, TableView } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface CreateTableRequest {
  mode: "cash-hu" | "spin";
  seats: { type: "human" | "agent"; agent?: string; name?: string }[];
  seed?: number;
  stack_bb?: number;
  starting_stack_bb?: number;
  spectator?: boolean;
}

export class ApiClient {
  private actionInFlight = false;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post(path: string, body: unknown): Promise<Response> {
    return this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async createTable(req: CreateTableRequest): Promise<CreateTableResponse> {
    const resp = await this.post("/tables", req);
    if (!resp.ok) {
      const detail = await resp.json().catch(() => ({}));
      throw new Error(detail.message ?? `create failed (${resp.status})`);
    }
    return (await resp.json()) as CreateTableResponse;
  }

  async getView(tableId: string, seat: number, since: number): Promise<TableView> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/tables/${tableId}/view?seat=${seat}&since=${since}`,
    );
    if (!resp.ok) throw new Error(`view failed (${resp.status})`);
    return (await resp.json()) as TableView;
  }

  get busy(): boolean {
    return this.actionInFlight;
  }

  /** Submit one action string; rejections come back as data, not throws.
   * Network failures throw so the caller can offer a retry with the
   * same key.
   */
  async submitAction(
    tableId: string,
    seat: number,
    action: string,
    key: string,
  ): Promise<SubmitResult> {
    if (this.actionInFlight) {
      return { ok: false, status: 0, code: "busy", message: "an action is already in flight" };
    }
    this.actionInFlight = true;
    try {
      const resp = await this.post(`/tables/${tableId}/actions`, { seat, action, key });
      const body = await resp.json().catch(() => ({}));
      if (resp.ok) {
        return { ok: true, applied: body.applied, seq: body.seq };
      }
      return {
        ok: false,
        status: resp.status,
        code: body.code ?? "error",
        message: body.message ?? `submit failed (${resp.status})`,
        legal_actions: body.legal_actions,
      };
    } finally {
      this.actionInFlight = false;
    }
  }
}
