"""YNote: a fixed-width, four-characters-per-note music notation."""

from .core import (
    REST,
    Base,
    Duration,
    Modifier,
    Note,
    Pitch,
    PitchClass,
    Score,
    YNoteError,
    duration_ticks,
    midi_number,
    pitch_frequency,
    score_total_ticks,
)
from .text import Diagnostic, RepairReport, normalize, parse_note, parse_stream, serialize

__version__ = "0.1.0"

__all__ = [
    "REST",
    "Base",
    "Diagnostic",
    "Duration",
    "Modifier",
    "Note",
    "Pitch",
    "PitchClass",
    "RepairReport",
    "Score",
    "YNoteError",
    "duration_ticks",
    "midi_number",
    "normalize",
    "parse_note",
    "parse_stream",
    "pitch_frequency",
    "score_total_ticks",
    "serialize",
]
