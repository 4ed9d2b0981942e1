"""MusicXML (score-partwise) import for the first part of a score."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

from ..core import (
    REST,
    TICKS_PER_QUARTER,
    MidiRangeError,
    Note,
    Score,
    duration_from_ticks,
    pitch_from_semitone,
)
from ._common import ConversionError, LossReport

_STEPS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _child(el: ET.Element, name: str):
    for c in el:
        if _local(c.tag) == name:
            return c
    return None


def _children(el: ET.Element, name: str):
    return [c for c in el if _local(c.tag) == name]


def _text(el: ET.Element, name: str):
    c = _child(el, name)
    return c.text.strip() if c is not None and c.text else None


def _pitch(el: ET.Element):
    step = _text(el, "step")
    octave = _text(el, "octave")
    if step not in _STEPS or octave is None:
        raise ConversionError("malformed-xml", "pitch needs <step> and <octave>")
    alter_text = _text(el, "alter") or "0"
    try:
        alter = Fraction(alter_text)
        octave_n = int(octave)
    except ValueError:
        raise ConversionError("malformed-xml", f"bad pitch {step}{alter_text}/{octave}") from None
    if alter.denominator != 1:
        raise ConversionError("unsupported-alter", f"microtonal alter {alter_text}")
    try:
        return pitch_from_semitone(12 * (octave_n + 1) + _STEPS[step] + int(alter))
    except MidiRangeError:
        raise ConversionError("unsupported-pitch", f"{step}{octave} is outside octaves 0-9") from None


def musicxml_import(text) -> tuple[Score, LossReport]:
    """Read notes of the first part; every duration must be an exact YNote value.

    Durations come from ``<duration>`` (in ``<divisions>`` per quarter);
    ``<dot/>`` and ``<type>`` are display hints and are not consulted
    beyond a sanity check on the dot count.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ConversionError("malformed-xml", str(exc)) from None
    tag = _local(root.tag)
    if tag == "score-timewise":
        raise ConversionError("timewise-root-unsupported", "convert to score-partwise first")
    if tag != "score-partwise":
        raise ConversionError("malformed-xml", f"unexpected root <{tag}>")

    report = LossReport("musicxml")
    parts = _children(root, "part")
    if not parts:
        raise ConversionError("malformed-xml", "score has no <part>")
    if len(parts) > 1:
        report.drop(f"parts-after-first x{len(parts) - 1}")

    divisions = None
    voice = None
    notes = []
    for measure in _children(parts[0], "measure"):
        for el in measure:
            name = _local(el.tag)
            if name == "attributes":
                d = _text(el, "divisions")
                if d is not None:
                    try:
                        divisions = int(d)
                    except ValueError:
                        raise ConversionError("malformed-xml", f"bad divisions {d!r}") from None
                    if divisions <= 0:
                        raise ConversionError("malformed-xml", "divisions must be positive")
            elif name == "note":
                if _child(el, "chord") is not None:
                    raise ConversionError("chord-unsupported", f"chord in measure {measure.get('number')}")
                if _child(el, "grace") is not None or _child(el, "cue") is not None:
                    report.drop("grace-note")
                    continue
                v = _text(el, "voice")
                if voice is None:
                    voice = v
                elif v != voice:
                    report.drop("other-voice")
                    continue
                if len(_children(el, "dot")) > 2:
                    raise ConversionError("exact-duration-mismatch", "more than two dots")
                if divisions is None:
                    raise ConversionError("malformed-xml", "<note> before <divisions>")
                dur_text = _text(el, "duration")
                try:
                    amount = int(dur_text)
                except (TypeError, ValueError):
                    raise ConversionError("malformed-xml", f"bad <duration> {dur_text!r}") from None
                ticks = Fraction(amount * TICKS_PER_QUARTER, divisions)
                d = duration_from_ticks(ticks)
                if d is None:
                    raise ConversionError(
                        "exact-duration-mismatch",
                        f"{amount}/{divisions} quarter in measure {measure.get('number')}",
                    )
                pitch_el = _child(el, "pitch")
                if pitch_el is not None:
                    pitch = _pitch(pitch_el)
                elif _child(el, "rest") is not None:
                    pitch = REST
                else:
                    report.drop("unpitched-note")
                    continue
                if _child(el, "tie") is not None:
                    report.drop("tie")
                notes.append(Note(pitch, d))
            elif name in ("backup", "forward"):
                report.drop(name)
    return Score(tuple(notes)), report
