"""Converters between YNote scores and MIDI, ABC and MusicXML."""

from ._common import ConversionError, LossReport
from .abc import abc_import
from .midi import midi_export, midi_import, nearest_duration
from .musicxml import musicxml_import

__all__ = [
    "ConversionError",
    "LossReport",
    "abc_import",
    "midi_export",
    "midi_import",
    "musicxml_import",
    "nearest_duration",
]
