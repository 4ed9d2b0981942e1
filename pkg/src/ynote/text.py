"""YNote text: parsing, diagnostics, canonical serialization and repair.

A YNote stream is a sequence of 4-character tokens, two characters of
pitch followed by two of duration. ASCII whitespace between tokens is
layout only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    REST,
    Base,
    Duration,
    Modifier,
    Note,
    Pitch,
    PitchClass,
    PITCH_LETTERS,
    Score,
    YNoteError,
)

WHITESPACE = frozenset(" \t\n\r\f\v")
NOTES_PER_LINE = 16

_BASE_CHARS = {
    Base.WHOLE: "1",
    Base.HALF: "2",
    Base.QUARTER: "4",
    Base.EIGHTH: "8",
    Base.SIXTEENTH: "S",
    Base.THIRTYSECOND: "T",
    Base.SIXTYFOURTH: "U",
}
_PLAIN_CODES = {
    Base.WHOLE: "01",
    Base.HALF: "02",
    Base.QUARTER: "04",
    Base.EIGHTH: "08",
    Base.SIXTEENTH: "16",
    Base.THIRTYSECOND: "32",
    Base.SIXTYFOURTH: "64",
}
_MODIFIER_CHARS = {Modifier.DOTTED: ".", Modifier.DOUBLEDOTTED: ":", Modifier.TRIPLET: "3"}


def _build_codes() -> dict[Duration, str]:
    codes = {}
    for base in Base:
        codes[Duration(base)] = _PLAIN_CODES[base]
        for mod, ch in _MODIFIER_CHARS.items():
            codes[Duration(base, mod)] = _BASE_CHARS[base] + ch
    return codes


DURATION_CODES: dict[Duration, str] = _build_codes()
CODE_TO_DURATION: dict[str, Duration] = {c: d for d, c in DURATION_CODES.items()}
assert len(CODE_TO_DURATION) == 28


class DiagnosticKind:
    BAD_PITCH_LETTER = "bad_pitch_letter"
    BAD_OCTAVE = "bad_octave"
    BAD_DURATION_CODE = "bad_duration_code"
    TRUNCATED_NOTE = "truncated_note"
    STRAY_CHARACTER = "stray_character"


@dataclass(frozen=True, order=True)
class Diagnostic:
    byte_offset: int
    length: int
    kind: str
    message: str = ""

    def __str__(self) -> str:
        return f"{self.byte_offset}: {self.kind}: {self.message}"


class YNoteSyntaxError(YNoteError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "invalid YNote")


def format_duration(d: Duration) -> str:
    return DURATION_CODES[d]


def format_note(n: Note) -> str:
    return str(n.pitch) + DURATION_CODES[n.duration]


def _token_diagnostics(token: str, offsets: list[int]) -> list[Diagnostic]:
    """Check one 4-character token; ``offsets`` are the byte offsets of its chars."""
    diags = []
    stray = {i for i, ch in enumerate(token) if not ("!" <= ch <= "~")}
    for i in sorted(stray):
        diags.append(
            Diagnostic(offsets[i], len(token[i].encode()), DiagnosticKind.STRAY_CHARACTER,
                       f"{token[i]!r} is not a printable ASCII character")
        )
    letter, octave, code = token[0], token[1], token[2:4]
    if stray & {0, 1}:
        pass
    elif letter == "0":
        if octave != "0":
            diags.append(
                Diagnostic(offsets[0], 2, DiagnosticKind.BAD_PITCH_LETTER,
                           f"pitch field {token[:2]!r} is neither a rest nor letter+octave")
            )
    elif letter not in PITCH_LETTERS:
        diags.append(
            Diagnostic(offsets[0], 1, DiagnosticKind.BAD_PITCH_LETTER,
                       f"{letter!r} is not a pitch letter")
        )
    elif not ("0" <= octave <= "9"):
        diags.append(
            Diagnostic(offsets[1], 1, DiagnosticKind.BAD_OCTAVE,
                       f"{octave!r} is not an octave digit")
        )
    if not stray & {2, 3} and code not in CODE_TO_DURATION:
        diags.append(
            Diagnostic(offsets[2], offsets[3] - offsets[2] + len(token[3].encode()),
                       DiagnosticKind.BAD_DURATION_CODE,
                       f"{code!r} is not a duration code")
        )
    return sorted(diags)


def _decode(token: str) -> Note:
    if token[:2] == "00":
        pitch = REST
    else:
        pitch = Pitch(PitchClass.from_letter(token[0]), int(token[1]))
    return Note(pitch, CODE_TO_DURATION[token[2:]])


def parse_note(token: str) -> Note:
    if len(token) != 4:
        raise YNoteSyntaxError(
            [Diagnostic(0, len(token.encode()), DiagnosticKind.TRUNCATED_NOTE,
                        f"a note is 4 characters, got {len(token)}")]
        )
    offsets, pos = [], 0
    for ch in token:
        offsets.append(pos)
        pos += len(ch.encode())
    diags = _token_diagnostics(token, offsets)
    if diags:
        raise YNoteSyntaxError(diags)
    return _decode(token)


def _strip_layout(text: str) -> tuple[str, list[int]]:
    """Drop whitespace; return the remaining chars and their byte offsets."""
    chars, offsets, pos = [], [], 0
    for ch in text:
        if ch not in WHITESPACE:
            chars.append(ch)
            offsets.append(pos)
        pos += len(ch.encode())
    return "".join(chars), offsets


def _as_text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return bytes(data).decode("utf-8", errors="replace")
    return data


def parse_stream(text, tempo_bpm: Optional[float] = None) -> tuple[Optional[Score], list[Diagnostic]]:
    """Strictly parse a YNote stream.

    Returns ``(score, [])`` on success and ``(None, diagnostics)`` if any
    token is malformed. Diagnostics are sorted by byte offset.
    """
    text = _as_text(text)
    body, offsets = _strip_layout(text)
    diags: list[Diagnostic] = []
    notes = []
    whole = len(body) - len(body) % 4
    for i in range(0, whole, 4):
        token = body[i:i + 4]
        token_diags = _token_diagnostics(token, offsets[i:i + 4])
        if token_diags:
            diags.extend(token_diags)
        elif not diags:
            notes.append(_decode(token))
    if whole < len(body):
        start = offsets[whole]
        end = offsets[-1] + len(body[-1].encode())
        diags.append(
            Diagnostic(start, end - start, DiagnosticKind.TRUNCATED_NOTE,
                       f"trailing fragment of {len(body) - whole} characters")
        )
    if diags:
        return None, sorted(diags)
    kwargs = {} if tempo_bpm is None else {"tempo_bpm": tempo_bpm}
    return Score(tuple(notes), **kwargs), []


def loads(text, tempo_bpm: Optional[float] = None) -> Score:
    """Like :func:`parse_stream` but raises :class:`YNoteSyntaxError`."""
    score, diags = parse_stream(text, tempo_bpm)
    if diags:
        raise YNoteSyntaxError(diags)
    return score


def serialize_tokens(tokens) -> str:
    tokens = list(tokens)
    lines = [
        " ".join(tokens[i:i + NOTES_PER_LINE])
        for i in range(0, len(tokens), NOTES_PER_LINE)
    ]
    return "".join(line + "\n" for line in lines)


def serialize(s: Score) -> str:
    return serialize_tokens(format_note(n) for n in s.notes)


dumps = serialize


# -- normalization -----------------------------------------------------------


@dataclass(frozen=True)
class Edit:
    offset: int  # byte offset in the input; for dropped chars the char's own offset
    old: str
    new: str  # empty when the character was dropped
    rule: str


@dataclass
class RepairReport:
    chars_modified: int = 0
    chars_total: int = 0
    edits: list[Edit] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.chars_modified / self.chars_total if self.chars_total else 0.0

    def summary(self) -> str:
        return repair_summary(self.chars_modified, self.chars_total)


@dataclass(frozen=True)
class NormalizeResult:
    text: str
    report: RepairReport

    def __iter__(self):
        return iter((self.text, self.report))


def repair_summary(modified: int, total: int) -> str:
    """``modified M of N characters (P%)``, P truncated to one decimal."""
    permille = modified * 1000 // total if total else 0
    return f"modified {modified} of {total} characters ({permille // 10}.{permille % 10}%)"


def _repair_token(token: str) -> tuple[str, list[str]]:
    """Repair one window; return the fixed token and the rule for each position."""
    letter, octave, code = token[0], token[1], token[2:]
    rules = [""] * 4
    if letter == "0" or letter not in PITCH_LETTERS and letter not in "eb":
        if token[:2] != "00":
            letter, octave = "0", "0"
            rules[0] = rules[1] = DiagnosticKind.BAD_PITCH_LETTER
    else:
        if not ("0" <= octave <= "9"):
            octave = "4"
            rules[1] = DiagnosticKind.BAD_OCTAVE
        if letter == "e":
            # E sharp is F
            letter = "F"
            rules[0] = DiagnosticKind.BAD_PITCH_LETTER
        elif letter == "b":
            # B sharp is C of the next octave; B9 has no next octave
            rules[0] = DiagnosticKind.BAD_PITCH_LETTER
            if octave == "9":
                letter = "B"
            else:
                letter, octave = "C", str(int(octave) + 1)
                rules[1] = rules[1] or DiagnosticKind.BAD_PITCH_LETTER
    if code not in CODE_TO_DURATION:
        code = "04"
        rules[2] = rules[3] = DiagnosticKind.BAD_DURATION_CODE
    return letter + octave + code, rules


def normalize(text) -> NormalizeResult:
    """Repair an arbitrary string into canonical, valid YNote.

    Whitespace is layout and is neither counted nor edited. The remaining
    characters are taken in 4-character windows and repaired field by
    field; a trailing fragment shorter than 4 characters is dropped. Each
    changed or dropped character is one edit.
    """
    text = _as_text(text)
    body, offsets = _strip_layout(text)
    report = RepairReport(chars_total=len(body))
    tokens = []
    whole = len(body) - len(body) % 4
    for i in range(0, whole, 4):
        token = body[i:i + 4]
        fixed, rules = _repair_token(token)
        for j in range(4):
            if fixed[j] != token[j]:
                report.edits.append(Edit(offsets[i + j], token[j], fixed[j], rules[j]))
        tokens.append(fixed)
    for i in range(whole, len(body)):
        report.edits.append(Edit(offsets[i], body[i], "", DiagnosticKind.TRUNCATED_NOTE))
    report.chars_modified = len(report.edits)
    return NormalizeResult(serialize_tokens(tokens), report)
