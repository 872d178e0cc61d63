/** Action-token grammar: f c x a b{amt} r{amt}, amounts in BB tenths. */

export type ActionKind = "fold" | "call" | "check" | "allin" | "bet" | "raise";

export interface ActionChoice {
  kind: ActionKind;
  /** tenths of a big blind; present only for bet/raise */
  amount?: number;
}

const CHAR_OF: Record<ActionKind, string> = {
  fold: "f",
  call: "c",
  check: "x",
  allin: "a",
  bet: "b",
  raise: "r",
};

const KIND_OF: Record<string, ActionKind> = {
  f: "fold",
  c: "call",
  x: "check",
  a: "allin",
  b: "bet",
  r: "raise",
};

/** Tenths of a BB as the wire number: 20 -> "2", 65 -> "6.5" (never ".0"). */
export function formatBb(tenths: number): string {
  if (tenths < 0) return "-" + formatBb(-tenths);
  const whole = Math.floor(tenths / 10);
  const frac = tenths % 10;
  return frac === 0 ? String(whole) : `${whole}.${frac}`;
}

/** BB float from the server into exact tenths. */
export function toTenths(bb: number): number {
  return Math.round(bb * 10);
}

export function serializeChoice(choice: ActionChoice): string {
  const c = CHAR_OF[choice.kind];
  if (choice.kind === "bet" || choice.kind === "raise") {
    if (choice.amount === undefined || choice.amount <= 0) {
      throw new Error(`${choice.kind} needs a positive amount`);
    }
    return c + formatBb(choice.amount);
  }
  return c;
}

const TOKEN_RE = /^([fcxa])$|^([br])((?:0|[1-9]\d*)(?:\.\d)?)$/;

/** Parse a canonical token; null when the text is not one. */
export function parseToken(text: string): ActionChoice | null {
  const m = TOKEN_RE.exec(text);
  if (!m) return null;
  if (m[1]) return { kind: KIND_OF[m[1]]! };
  const raw = m[3]!;
  if (raw.endsWith(".0")) return null;
  const [whole, frac] = raw.split(".");
  const tenths = Number(whole) * 10 + (frac ? Number(frac) : 0);
  if (tenths <= 0) return null;
  return { kind: KIND_OF[m[2]!]!, amount: tenths };
}

/** Plain-language label shown beside the token string. */
export function describeToken(text: string): string {
  const choice = parseToken(text);
  if (!choice) return text;
  switch (choice.kind) {
    case "fold":
      return "fold";
    case "call":
      return "call";
    case "check":
      return "check";
    case "allin":
      return "all-in";
    case "bet":
      return `bet ${formatBb(choice.amount!)} BB`;
    case "raise":
      return `raise to ${formatBb(choice.amount!)} BB`;
  }
}
