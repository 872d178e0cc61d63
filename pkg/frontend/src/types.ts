/** Payload shapes of the spinbench table service. */

export interface LegalActions {
  may_fold: boolean;
  may_check: boolean;
  call_cost: number | null; // BB
  bet_range: [number, number] | null; // BB
  raise_to_range: [number, number] | null; // BB
  may_allin: boolean;
}

export interface SeatView {
  seat: number;
  name: string;
  role: string | null;
  stack: number; // BB
  committed: number;
  committed_total: number;
  folded: boolean;
  out: boolean;
  is_you: boolean;
  cards: string[] | null; // only your own, or showdown reveals
}

export interface HistoryAction {
  seat: number;
  role: string | null;
  token: string;
}

export interface StreetHistory {
  street: string;
  cards: string[];
  actions: HistoryAction[];
}

export interface TableEvent {
  seq: number;
  type: string;
  hand_no?: number;
  [key: string]: unknown;
}

export interface TableView {
  table_id: string;
  mode: string;
  seat: number | null;
  seq: number;
  hand_no: number;
  street: string;
  blinds: [number, number];
  board: string[];
  pot: number;
  to_act_seat: number | null;
  your_turn: boolean;
  hero_cards: string[] | null;
  legal_actions: LegalActions | null;
  seats: SeatView[];
  history: StreetHistory[];
  finished: boolean;
  events: TableEvent[];
}

export interface CreateTableResponse {
  table_id: string;
  seed: number;
  human_seats: number[];
  seq: number;
}

export interface SubmitOk {
  ok: true;
  applied: string;
  seq: number;
}

export interface SubmitRejected {
  ok: false;
  status: number;
  code: string;
  message: string;
  legal_actions?: LegalActions;
}

export type SubmitResult = SubmitOk | SubmitRejected;
