"""Note-level BLEU and ROUGE-N.

A token is one whole 4-character note. The per-n BLEU value reported in
tables is the clipped (modified) n-gram precision; :func:`bleu_cumulative`
gives the usual geometric-mean BLEU with brevity penalty.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .text import YNoteSyntaxError, format_note, parse_stream, repair_summary

Tokens = Sequence[str]


def tokenize(text) -> list[str]:
    """Split valid YNote text into note tokens; raises on invalid streams."""
    score, diags = parse_stream(text)
    if diags:
        raise YNoteSyntaxError(diags)
    return [format_note(n) for n in score.notes]


def ngrams(tokens: Tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_ngram_precision(candidate: Tokens, references: Sequence[Tokens], n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = ngrams(candidate, n)
    total = sum(cand.values())
    if total == 0:
        return 0.0
    max_ref: Counter = Counter()
    for ref in references:
        max_ref |= ngrams(ref, n)
    clipped = sum(min(c, max_ref[g]) for g, c in cand.items())
    return clipped / total


def brevity_penalty(candidate_len: int, reference_lens: Sequence[int]) -> float:
    if candidate_len == 0:
        return 0.0
    # closest reference length, shorter on ties
    r = min(reference_lens, key=lambda x: (abs(x - candidate_len), x))
    return min(1.0, math.exp(1 - r / candidate_len))


def bleu_cumulative(candidate: Tokens, references: Sequence[Tokens], max_n: int = 4) -> float:
    precisions = [bleu_ngram_precision(candidate, references, n) for n in range(1, max_n + 1)]
    if min(precisions) == 0:
        return 0.0
    log_mean = sum(math.log(p) for p in precisions) / max_n
    return math.exp(log_mean) * brevity_penalty(len(candidate), [len(r) for r in references])


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: int, candidate_total: int, reference_total: int) -> RougeScore:
        p = overlap / candidate_total if candidate_total else 0.0
        r = overlap / reference_total if reference_total else 0.0
        f = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        return cls(p, r, f)


def rouge_counts(candidate: Tokens, reference: Tokens, n: int) -> tuple[int, int, int]:
    """``(overlap, candidate n-grams, reference n-grams)``."""
    cand, ref = ngrams(candidate, n), ngrams(reference, n)
    return sum((cand & ref).values()), sum(cand.values()), sum(ref.values())


def rouge_n(candidate: Tokens, reference: Tokens, n: int) -> RougeScore:
    if n < 1:
        raise ValueError("n must be >= 1")
    return RougeScore.from_counts(*rouge_counts(candidate, reference, n))


# -- reports -----------------------------------------------------------------

BLEU_ORDERS = (1, 2, 3, 4)
ROUGE_ORDERS = (1, 2)
# which ROUGE component the summary table shows
ROUGE_TABLE_FIELD = "f1"


@dataclass
class EvaluationRecord:
    sample: str
    bleu: dict[int, float]
    rouge: dict[int, RougeScore]
    bleu_cumulative: float
    repair_ratio: Optional[float] = None
    chars_modified: Optional[int] = None
    chars_total: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "sample": self.sample,
            "bleu": {f"{n}-gram": v for n, v in self.bleu.items()},
            "bleu_cumulative": self.bleu_cumulative,
            "rouge": {f"{n}-gram": asdict(v) for n, v in self.rouge.items()},
            "repair_ratio": self.repair_ratio,
            "chars_modified": self.chars_modified,
            "chars_total": self.chars_total,
        }
        out.update(self.extra)
        return out


def evaluate(sample: str, candidate: Tokens, references: Sequence[Tokens], **kw) -> EvaluationRecord:
    return EvaluationRecord(
        sample=sample,
        bleu={n: bleu_ngram_precision(candidate, references, n) for n in BLEU_ORDERS},
        rouge={n: rouge_n(candidate, references[0], n) for n in ROUGE_ORDERS},
        bleu_cumulative=bleu_cumulative(candidate, references),
        **kw,
    )


def _table(title: str, columns: list[str], rows: list[tuple[str, list[float]]]) -> str:
    width = max([len("Sample")] + [len(r[0]) for r in rows])
    head = " " * width + " | " + " | ".join(f"{c:>6}" for c in columns)
    lines = [title, head, "-" * len(head)]
    for name, values in rows:
        lines.append(f"{name:<{width}} | " + " | ".join(f"{v:6.3f}" for v in values))
    return "\n".join(lines)


def format_report(records: Sequence[EvaluationRecord]) -> str:
    """Plain-text BLEU (1-4 gram) and ROUGE (1-2 gram) tables, one row per sample."""
    bleu = _table(
        "BLEU Scores (clipped n-gram precision)",
        [f"{n}-gram" for n in BLEU_ORDERS],
        [(r.sample, [r.bleu[n] for n in BLEU_ORDERS]) for r in records],
    )
    rouge = _table(
        f"ROUGE Scores (ROUGE-N {ROUGE_TABLE_FIELD})",
        [f"{n}-gram" for n in ROUGE_ORDERS],
        [(r.sample, [getattr(r.rouge[n], ROUGE_TABLE_FIELD) for n in ROUGE_ORDERS]) for r in records],
    )
    parts = [bleu, "", rouge]
    repaired = [r for r in records if r.chars_total is not None]
    if repaired:
        modified = sum(r.chars_modified for r in repaired)
        total = sum(r.chars_total for r in repaired)
        parts += ["", "Normalization: " + repair_summary(modified, total)]
    return "\n".join(parts) + "\n"


def write_records(records: Sequence[EvaluationRecord], fp) -> None:
    """One JSON object per line."""
    for r in records:
        fp.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
