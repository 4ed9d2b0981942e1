"""ABC notation import for a single-voice subset in C major.

Supported: header fields (K:C only, L:, M:, Q:), notes with ``,``/``'``
octave marks and ``^ _ =`` accidentals, length multipliers and divisors,
rests (``z``/``x``), bar lines, tuplets ``(p``, broken rhythm ``> <``.
Chords, repeats, ties and grace notes raise ``unsupported-construct``.

Accidentals apply to their own note only; they do not carry through the
bar. Durations must land exactly on a YNote duration.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from ..core import (
    REST,
    MidiRangeError,
    Note,
    Score,
    DEFAULT_TEMPO_BPM,
    TICKS_PER_BAR,
    duration_from_ticks,
    pitch_from_semitone,
)
from ._common import ConversionError, LossReport

_FIELD = re.compile(r"^([A-Za-z+]):(.*)$")
_LENGTH = re.compile(r"(\d*)(/*)(\d*)")
_NATURAL = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
_C_MAJOR = {"c", "cmaj", "cmajor", "cion", "cionian"}
_DECORATION_CHARS = set(".~HLMOPSTuv")
# default q for tuplet (p: for simple meters
_TUPLET_Q = {2: 3, 3: 2, 4: 3, 6: 2, 8: 3}


def _unsupported(what: str, pos: Optional[int] = None) -> ConversionError:
    where = f" at body offset {pos}" if pos is not None else ""
    return ConversionError("unsupported-construct", what + where)


def _check_key(value: str) -> None:
    words = value.split()
    if not words:
        raise ConversionError("unsupported-key", "empty K: field")
    key = words[0].lower()
    if len(words) > 1 and words[1].lower() in ("major", "maj", "ionian"):
        key += "major"
    if key not in _C_MAJOR:
        raise ConversionError("unsupported-key", f"only K:C is supported, got K:{value.strip()}")


def _parse_fraction(value: str, field: str) -> Fraction:
    value = value.strip()
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ConversionError("unsupported-construct", f"cannot read {field}:{value}") from None


def _meter(value: str) -> Optional[Fraction]:
    value = value.strip()
    if value == "C":
        return Fraction(4, 4)
    if value == "C|":
        return Fraction(2, 2)
    if value.lower() == "none":
        return None
    return _parse_fraction(value, "M")


def _tempo(value: str, unit: Fraction) -> float:
    """Quarter-note BPM from a Q: field."""
    m = re.search(r"(\d+)\s*/\s*(\d+)\s*=\s*(\d+(?:\.\d+)?)", value)
    if m:
        beat = Fraction(int(m.group(1)), int(m.group(2)))
        rate = float(m.group(3))
    else:
        m = re.search(r"(\d+(?:\.\d+)?)", value)
        if not m:
            raise ConversionError("unsupported-construct", f"cannot read Q:{value}")
        beat, rate = unit, float(m.group(1))
    return rate * float(beat / Fraction(1, 4))


def _read_length(body: str, pos: int) -> tuple[Fraction, int]:
    m = _LENGTH.match(body, pos)
    num, slashes, den = m.groups()
    value = Fraction(int(num) if num else 1)
    if slashes:
        if den:
            if len(slashes) > 1:
                raise _unsupported(f"length {m.group(0)!r}", pos)
            value /= int(den)
        else:
            value /= 2 ** len(slashes)
    elif den:
        raise _unsupported(f"length {m.group(0)!r}", pos)
    return value, m.end()


class _Tune:
    def __init__(self, report: LossReport):
        self.report = report
        self.unit: Optional[Fraction] = None
        self.meter: Optional[Fraction] = Fraction(4, 4)
        self.tempo: Optional[str] = None
        self.has_key = False
        # each entry: [pitch, length as fraction of a whole note, body offset]
        self.events: list[list] = []

    def field(self, name: str, value: str, in_body: bool) -> None:
        if name == "K":
            _check_key(value)
            self.has_key = True
        elif name == "L":
            self.unit = _parse_fraction(value, "L")
        elif name == "M":
            self.meter = _meter(value)
        elif name == "Q":
            self.tempo = value
        elif name == "V" and in_body:
            raise _unsupported("multiple voices (V:)")
        elif name in ("w", "W") or not in_body:
            pass
        else:
            self.report.drop(f"field-{name}")

    def unit_length(self) -> Fraction:
        if self.unit is not None:
            return self.unit
        if self.meter is not None and self.meter < Fraction(3, 4):
            return Fraction(1, 16)
        return Fraction(1, 8)

    def body(self, body: str, base: int = 0) -> None:
        pos = 0
        tuplet_left, tuplet_factor = 0, Fraction(1)
        broken_next = Fraction(1)
        n = len(body)
        while pos < n:
            ch = body[pos]
            here = base + pos
            if ch in " \t\\`y":
                pos += 1
            elif ch == "|" or (ch == "[" and body.startswith("[|", pos)):
                end = pos + 1
                while end < n and body[end] in "|[]":
                    end += 1
                if (end < n and body[end] in ":0123456789") or (pos > 0 and body[pos - 1] == ":"):
                    raise _unsupported("repeat", here)
                pos = end
            elif ch == ":":
                raise _unsupported("repeat", here)
            elif ch == "]":
                pos += 1
            elif ch == "[":
                m = re.match(r"\[([A-Za-z]):([^\]]*)\]", body[pos:])
                if m:
                    self.field(m.group(1), m.group(2), True)
                    pos += m.end()
                elif pos + 1 < n and body[pos + 1].isdigit():
                    raise _unsupported("repeat ending", here)
                else:
                    raise _unsupported("chord", here)
            elif ch == '"':
                end = body.find('"', pos + 1)
                if end < 0:
                    raise _unsupported("unterminated annotation", here)
                self.report.drop("annotation")
                pos = end + 1
            elif ch in "!+":
                end = body.find(ch, pos + 1)
                if end < 0:
                    raise _unsupported("unterminated decoration", here)
                self.report.drop("decoration")
                pos = end + 1
            elif ch in _DECORATION_CHARS:
                self.report.drop("decoration")
                pos += 1
            elif ch == "{":
                raise _unsupported("grace notes", here)
            elif ch == "-":
                raise _unsupported("tie", here)
            elif ch == "&":
                raise _unsupported("voice overlay", here)
            elif ch == "(":
                m = re.match(r"\((\d+)(?::(\d*))?(?::(\d*))?", body[pos:])
                if not m:
                    self.report.drop("slur")
                    pos += 1
                    continue
                p = int(m.group(1))
                q = int(m.group(2)) if m.group(2) else _TUPLET_Q.get(p)
                if q is None:
                    raise _unsupported(f"tuplet ({p}", here)
                tuplet_left = int(m.group(3)) if m.group(3) else p
                tuplet_factor = Fraction(q, p)
                pos += m.end()
            elif ch == ")":
                pos += 1
            elif ch in "<>":
                end = pos
                while end < n and body[end] == ch:
                    end += 1
                if not self.events:
                    raise _unsupported("broken rhythm without a preceding note", here)
                short = Fraction(1, 2 ** (end - pos))
                long_ = 2 - short
                self.events[-1][1] *= long_ if ch == ">" else short
                broken_next = short if ch == ">" else long_
                pos = end
            elif ch in "^_=" or ch.upper() in _NATURAL or ch in "zx":
                pitch, length, pos = self._note(body, pos, base)
                length *= self.unit_length()
                if tuplet_left:
                    length *= tuplet_factor
                    tuplet_left -= 1
                length *= broken_next
                broken_next = Fraction(1)
                self.events.append([pitch, length, here])
            elif ch == "Z":
                raise _unsupported("multi-measure rest", here)
            else:
                raise _unsupported(f"character {ch!r}", here)

    def _note(self, body: str, pos: int, base: int):
        start = pos
        if body[pos] in "zx":
            length, pos = _read_length(body, pos + 1)
            return REST, length, pos
        accidental = 0
        while pos < len(body) and body[pos] in "^_=":
            accidental += {"^": 1, "_": -1, "=": 0}[body[pos]]
            pos += 1
        if pos >= len(body) or body[pos].upper() not in _NATURAL:
            raise _unsupported("accidental without a note", base + start)
        letter = body[pos]
        octave = 4 if letter.isupper() else 5
        pos += 1
        while pos < len(body) and body[pos] in ",'":
            octave += 1 if body[pos] == "'" else -1
            pos += 1
        semitone = 12 * (octave + 1) + _NATURAL[letter.upper()] + accidental
        try:
            pitch = pitch_from_semitone(semitone)
        except MidiRangeError:
            raise _unsupported("pitch outside octaves 0-9", base + start) from None
        length, pos = _read_length(body, pos)
        return pitch, length, pos


def _strip_comment(line: str) -> str:
    i = line.find("%")
    while i > 0 and line[i - 1] == "\\":
        i = line.find("%", i + 1)
    return line if i < 0 else line[:i]


def abc_import(text: str) -> tuple[Score, LossReport]:
    """Parse the first tune of an ABC file into a score."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    report = LossReport("abc")
    tune = _Tune(report)
    in_body = False
    offset = 0
    for raw in text.splitlines():
        line = _strip_comment(raw).rstrip()
        m = _FIELD.match(line)
        if m and m.group(1) != "+":
            name, value = m.group(1), m.group(2)
            if name == "X" and in_body:
                report.drop("additional-tune")
                break
            tune.field(name, value, in_body)
            if name == "K" and not in_body:
                in_body = True
        elif in_body and line.strip():
            tune.body(line, offset)
        offset += len(raw) + 1
    if not tune.has_key:
        raise ConversionError("unsupported-key", "tune has no K: field")

    notes = []
    for pitch, length, where in tune.events:
        d = duration_from_ticks(length * TICKS_PER_BAR)
        if d is None:
            raise ConversionError(
                "unrepresentable-duration",
                f"length {length} of a whole note (offset {where}) has no YNote duration",
            )
        notes.append(Note(pitch, d))
    tempo = _tempo(tune.tempo, tune.unit_length()) if tune.tempo else DEFAULT_TEMPO_BPM
    return Score(tuple(notes), tempo_bpm=tempo), report
