"""Imitation-quality metrics over (predicted, truth) action pairs.

Exact accuracy requires the action type and the amount (at one-decimal
precision) to match. Tolerant accuracy accepts sized actions within
+/-0.5 BB of the truth. Macro F1 averages per-class F1 over the action
classes; MAE/MAPE measure sizing error over class-matching sized pairs
only, so sizing error is never conflated with classification error.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .agents import Agent, make_view
from .codec import CodecError, decode_prompt, parse_action, replay_context
from .engine import ActionToken

Pair = tuple[ActionToken, ActionToken]  # (predicted, truth)

CLASSES_FIVE = ("bet", "call", "check", "fold", "raise")
CLASSES_SIX = ("bet", "call", "check", "fold", "raise", "allin")

TOLERANCE_BB = 0.5


def action_class(token: ActionToken) -> str:
    """Action class of a token; amounts are ignored."""
    return token.kind


def _exact(pred: ActionToken, truth: ActionToken) -> bool:
    return pred.kind == truth.kind and pred.amount == truth.amount


def _tolerant(pred: ActionToken, truth: ActionToken, tol_tenths: int) -> bool:
    if pred.kind != truth.kind:
        return False
    if pred.amount is None and truth.amount is None:
        return True
    if pred.amount is None or truth.amount is None:
        return False
    return abs(pred.amount - truth.amount) <= tol_tenths


def exact_accuracy(pairs: list[Pair]) -> float:
    if not pairs:
        raise ValueError("no pairs")
    return sum(_exact(p, t) for p, t in pairs) / len(pairs)


def tolerant_accuracy(pairs: list[Pair], tol_bb: float = TOLERANCE_BB) -> float:
    """Class match with sized amounts within +/-tol of the truth (boundary counts)."""
    if not pairs:
        raise ValueError("no pairs")
    tol_tenths = round(tol_bb * 10)
    return sum(_tolerant(p, t, tol_tenths) for p, t in pairs) / len(pairs)


@dataclass(slots=True)
class Confusion:
    """Counts with truth on rows and prediction on columns."""

    classes: tuple[str, ...]
    counts: list[list[int]]
    n_dropped: int = 0  # pairs whose class is outside the class set

    def row_percentages(self) -> list[list[float]]:
        out = []
        for row in self.counts:
            total = sum(row)
            out.append([100.0 * c / total if total else 0.0 for c in row])
        return out

    def diagonal_rate(self) -> float:
        total = sum(sum(row) for row in self.counts)
        diag = sum(self.counts[i][i] for i in range(len(self.classes)))
        return diag / total if total else 0.0


def confusion_matrix(pairs: list[Pair], classes: tuple[str, ...] = CLASSES_SIX) -> Confusion:
    if not pairs:
        raise ValueError("no pairs")
    index = {c: i for i, c in enumerate(classes)}
    counts = [[0] * len(classes) for _ in classes]
    dropped = 0
    for pred, truth in pairs:
        pi = index.get(action_class(pred))
        ti = index.get(action_class(truth))
        if pi is None or ti is None:
            dropped += 1
            continue
        counts[ti][pi] += 1
    return Confusion(tuple(classes), counts, dropped)


def f1_from_counts(classes: tuple[str, ...], counts: list[list[int]]) -> tuple[dict[str, float | None], float]:
    """Per-class F1 and the macro average from a confusion matrix.

    A class absent from both truth and prediction is excluded from the
    macro average (None per class); present on only one side scores 0.
    """
    per_class: dict[str, float | None] = {}
    scores = []
    for i, cls in enumerate(classes):
        true_n = sum(counts[i])
        pred_n = sum(row[i] for row in counts)
        if true_n == 0 and pred_n == 0:
            per_class[cls] = None
            continue
        tp = counts[i][i]
        precision = tp / pred_n if pred_n else 0.0
        recall = tp / true_n if true_n else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = f1
        scores.append(f1)
    if not scores:
        raise ValueError("no class has any instances")
    return per_class, sum(scores) / len(scores)


def macro_f1(pairs: list[Pair], classes: tuple[str, ...] = CLASSES_SIX) -> tuple[dict[str, float | None], float]:
    conf = confusion_matrix(pairs, classes)
    return f1_from_counts(conf.classes, conf.counts)


def size_errors(pairs: list[Pair]) -> tuple[float | None, float | None, int]:
    """(MAE in BB, MAPE fraction, count) over class-matching sized pairs."""
    abs_err = 0
    pct_err = 0.0
    n = 0
    for pred, truth in pairs:
        if pred.kind == truth.kind and pred.amount is not None and truth.amount is not None:
            abs_err += abs(pred.amount - truth.amount)
            pct_err += abs(pred.amount - truth.amount) / truth.amount
            n += 1
    if n == 0:
        return None, None, 0
    return abs_err / n / 10.0, pct_err / n, n


@dataclass(slots=True)
class MetricsReport:
    n: int
    n_skipped: int
    exact_accuracy: float
    tolerant_accuracy: float
    per_class_f1: dict[str, float | None]
    macro_f1: float
    confusion: Confusion
    mae_bb: float | None
    mape: float | None
    n_sized_pairs: int
    skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n_skipped": self.n_skipped,
            "exact_accuracy": self.exact_accuracy,
            "tolerant_accuracy": self.tolerant_accuracy,
            "per_class_f1": self.per_class_f1,
            "macro_f1": self.macro_f1,
            "confusion": {
                "classes": list(self.confusion.classes),
                "counts": self.confusion.counts,
                "row_percentages": [[round(p, 1) for p in row] for row in self.confusion.row_percentages()],
                "n_dropped": self.confusion.n_dropped,
            },
            "mae_bb": self.mae_bb,
            "mape": self.mape,
            "n_sized_pairs": self.n_sized_pairs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def render_text(self) -> str:
        lines = [
            f"pairs scored        {self.n}  (skipped {self.n_skipped})",
            f"exact accuracy      {self.exact_accuracy:.4f}",
            f"tolerant accuracy   {self.tolerant_accuracy:.4f}",
            f"macro F1            {self.macro_f1:.4f}",
        ]
        for cls in self.confusion.classes:
            f1 = self.per_class_f1.get(cls)
            lines.append(f"  F1[{cls:<5}]        " + ("-" if f1 is None else f"{f1:.4f}"))
        if self.mae_bb is None:
            lines.append(f"sizing              no sized pairs")
        else:
            lines.append(f"MAE                 {self.mae_bb:.3f} BB over {self.n_sized_pairs} sized pairs")
            lines.append(f"MAPE                {self.mape:.1%}")
        width = max(len(c) for c in self.confusion.classes) + 2
        header = " " * width + "".join(f"{c:>8}" for c in self.confusion.classes) + "   (pred)"
        lines.append("confusion (rows = truth):")
        lines.append(header)
        for cls, row in zip(self.confusion.classes, self.confusion.counts):
            lines.append(f"{cls:<{width}}" + "".join(f"{c:>8}" for c in row))
        return "\n".join(lines)


def score_pairs(pairs: list[Pair], classes: tuple[str, ...] = CLASSES_SIX, n_skipped: int = 0,
                skipped: list[str] | None = None) -> MetricsReport:
    conf = confusion_matrix(pairs, classes)
    per_class, macro = f1_from_counts(conf.classes, conf.counts)
    mae, mape, n_sized = size_errors(pairs)
    return MetricsReport(
        n=len(pairs),
        n_skipped=n_skipped,
        exact_accuracy=exact_accuracy(pairs),
        tolerant_accuracy=tolerant_accuracy(pairs),
        per_class_f1=per_class,
        macro_f1=macro,
        confusion=conf,
        mae_bb=mae,
        mape=mape,
        n_sized_pairs=n_sized,
        skipped=skipped or [],
    )


def evaluate_dataset(agent: Agent, records, classes: tuple[str, ...] = CLASSES_SIX,
                     workers: int = 1) -> MetricsReport:
    """Query the agent at every record's decision point and score the pairs.

    Undecodable records are skipped and counted. With ``workers > 1``
    agent queries fan out over a thread pool; aggregation stays in
    record order, so a deterministic agent yields an identical report.
    """
    records = list(records)
    if not records:
        raise ValueError("no records")

    def one(record) -> Pair | str:
        try:
            ctx = decode_prompt(record.prompt, replay=False)
            state = replay_context(ctx)
            truth = parse_action(record.truth)
        except (CodecError, ValueError) as exc:
            return f"{record.hand_id}: {exc}"
        view = make_view(state, ctx.hero)
        return agent.decide(view), truth

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, records))
    else:
        outcomes = [one(r) for r in records]

    pairs = [o for o in outcomes if isinstance(o, tuple)]
    skipped = [o for o in outcomes if isinstance(o, str)]
    if not pairs:
        raise ValueError("every record was skipped")
    return score_pairs(pairs, classes, n_skipped=len(skipped), skipped=skipped[:20])
