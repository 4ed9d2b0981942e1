"""Prompt extraction and a seeded n-gram baseline generator.

The generator stands in for a fine-tuned language model: it continues a
prompt one note token at a time, and its raw output is passed through
:func:`ynote.text.normalize` before anything downstream reads it.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core import TICKS_PER_BAR, Score, YNoteError
from .metrics import EvaluationRecord, evaluate, tokenize
from .text import format_note, loads, normalize, serialize_tokens

DEFAULT_ORDER = 2


class PromptMode(str, Enum):
    FIRST_BAR = "first_bar"
    BAR_ENDPOINTS = "bar_endpoints"


@dataclass(frozen=True)
class Prompt:
    mode: PromptMode
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def to_text(self) -> str:
        return serialize_tokens(self.tokens)


class EmptyScoreError(YNoteError):
    pass


def _tokens(s: Score) -> list[str]:
    return [format_note(n) for n in s.notes]


def extract_first_bar(s: Score) -> Prompt:
    """Notes that start inside the first 1920-tick bar (never split)."""
    if not s.notes:
        raise EmptyScoreError("cannot take a prompt from an empty score")
    tokens = _tokens(s)
    onsets = s.onsets()
    count = sum(1 for t in onsets if t < TICKS_PER_BAR)
    return Prompt(PromptMode.FIRST_BAR, tuple(tokens[:max(1, count)]))


def bars(s: Score) -> list[list[int]]:
    """Note indices grouped by the bar containing each note's onset."""
    groups: dict[int, list[int]] = {}
    for i, t in enumerate(s.onsets()):
        groups.setdefault(int(t // TICKS_PER_BAR), []).append(i)
    return [groups[k] for k in sorted(groups)]


def extract_bar_endpoints(s: Score) -> Prompt:
    """First and last note of every bar, bar by bar."""
    if not s.notes:
        raise EmptyScoreError("cannot take a prompt from an empty score")
    tokens = _tokens(s)
    out = []
    for members in bars(s):
        out.append(tokens[members[0]])
        if len(members) > 1:
            out.append(tokens[members[-1]])
    return Prompt(PromptMode.BAR_ENDPOINTS, tuple(out))


def extract_prompt(s: Score, mode) -> Prompt:
    if not isinstance(mode, PromptMode):
        mode = PromptMode(mode.replace("-", "_"))
    if mode is PromptMode.FIRST_BAR:
        return extract_first_bar(s)
    return extract_bar_endpoints(s)


# -- Markov baseline -----------------------------------------------------------


class CorpusTooShort(YNoteError):
    pass


class EmptyModel(YNoteError):
    pass


Context = tuple[str, ...]


@dataclass
class MarkovModel:
    order: int
    transitions: dict[Context, Counter]
    vocabulary: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        for ctx, counts in self.transitions.items():
            if len(ctx) != self.order:
                raise ValueError(f"context {ctx} does not have length {self.order}")
            if any(c <= 0 for c in counts.values()):
                raise ValueError(f"non-positive count under context {ctx}")
        if not self.vocabulary:
            vocab = set()
            for ctx, counts in self.transitions.items():
                vocab.update(ctx)
                vocab.update(counts)
            self.vocabulary = frozenset(vocab)
        self._backoff = self._marginals()

    def _marginals(self) -> list[dict[Context, Counter]]:
        # tables[k] maps a k-token context to next-token counts, k = 0..order
        tables: list[dict[Context, Counter]] = [dict() for _ in range(self.order + 1)]
        tables[self.order] = self.transitions
        for ctx, counts in self.transitions.items():
            for k in range(self.order):
                tables[k].setdefault(ctx[self.order - k:], Counter()).update(counts)
        return tables

    def distribution(self, history: Sequence[str]) -> Counter:
        """Next-token counts for the longest known suffix of ``history``."""
        for k in range(min(self.order, len(history)), -1, -1):
            ctx = tuple(history[len(history) - k:]) if k else ()
            counts = self._backoff[k].get(ctx)
            if counts:
                return counts
        raise EmptyModel("model has no transitions")

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "vocabulary": sorted(self.vocabulary),
            "transitions": [
                {"context": list(ctx), "next": dict(sorted(counts.items()))}
                for ctx, counts in sorted(self.transitions.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> MarkovModel:
        transitions = {
            tuple(rec["context"]): Counter({k: int(v) for k, v in rec["next"].items()})
            for rec in data["transitions"]
        }
        return cls(int(data["order"]), transitions, frozenset(data.get("vocabulary", ())))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> MarkovModel:
        return cls.from_json(json.loads(Path(path).read_text()))


def train_markov(corpus: Iterable[Sequence[str]], order: int = DEFAULT_ORDER) -> MarkovModel:
    corpus = [list(seq) for seq in corpus]
    if not corpus:
        raise CorpusTooShort("corpus is empty")
    transitions: dict[Context, Counter] = {}
    vocab = set()
    for seq in corpus:
        if len(seq) <= order:
            raise CorpusTooShort(f"sequence of {len(seq)} tokens is too short for order {order}")
        vocab.update(seq)
        for i in range(order, len(seq)):
            transitions.setdefault(tuple(seq[i - order:i]), Counter())[seq[i]] += 1
    return MarkovModel(order, transitions, frozenset(vocab))


def generate(model: MarkovModel, prompt: Prompt | Sequence[str], target_notes: int, seed: int) -> str:
    """Continue ``prompt`` to ``target_notes`` tokens; returns raw YNote text."""
    tokens = list(prompt.tokens if isinstance(prompt, Prompt) else prompt)
    if target_notes < len(tokens):
        raise ValueError(f"target_notes={target_notes} is shorter than the prompt ({len(tokens)})")
    if not model.transitions:
        raise EmptyModel("model has no transitions")
    rng = random.Random(seed)
    while len(tokens) < target_notes:
        counts = model.distribution(tokens)
        choices = sorted(counts)
        tokens.append(rng.choices(choices, weights=[counts[c] for c in choices])[0])
    return serialize_tokens(tokens)


# -- end-to-end ------------------------------------------------------------------


def load_corpus(directory) -> list[tuple[str, Score]]:
    """All ``*.ynote`` files in a directory, sorted by name."""
    paths = sorted(Path(directory).glob("*.ynote"))
    return [(p.stem, loads(p.read_text())) for p in paths]


def bundled_corpus_dir() -> Path:
    return Path(__file__).parent / "data" / "corpus"


@dataclass
class GenerationResult:
    prompt: Prompt
    raw: str
    text: str
    record: EvaluationRecord


def generate_and_evaluate(
    model: MarkovModel,
    reference: Score,
    mode,
    seed: int,
    sample: str = "Sample 1",
    target_notes: Optional[int] = None,
) -> GenerationResult:
    """Prompt from ``reference``, generate, normalize, score against ``reference``."""
    prompt = extract_prompt(reference, mode)
    target = max(len(reference) if target_notes is None else target_notes, len(prompt))
    raw = generate(model, prompt, target, seed)
    fixed, report = normalize(raw)
    record = evaluate(
        sample,
        tokenize(fixed),
        [_tokens(reference)],
        repair_ratio=report.ratio,
        chars_modified=report.chars_modified,
        chars_total=report.chars_total,
        extra={"prompt_mode": prompt.mode.value, "seed": seed},
    )
    return GenerationResult(prompt, raw, fixed, record)


def run_experiment(
    corpus: Sequence[tuple[str, Score]],
    held_out: Sequence[str],
    mode,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
) -> list[GenerationResult]:
    """Train on every piece not in ``held_out``; generate one sample per held-out piece."""
    held = set(held_out)
    train = [_tokens(s) for name, s in corpus if name not in held]
    model = train_markov(train, order)
    results = []
    for i, (name, score) in enumerate((n, s) for n, s in corpus if n in held):
        results.append(generate_and_evaluate(model, score, mode, seed + i, sample=f"Sample {i + 1}"))
    return results

