"""Pitches, durations, notes and scores with exact tick arithmetic.

Time is measured in ticks (quarter note = 480, whole note = 1920). Every
legal duration is an integral number of half-ticks, so durations store
half-ticks internally and expose ticks as :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Iterable, Optional

TICKS_PER_QUARTER = 480
TICKS_PER_BAR = 4 * TICKS_PER_QUARTER
HALF_TICKS_PER_QUARTER = 2 * TICKS_PER_QUARTER
DEFAULT_TEMPO_BPM = 120.0

A4_FREQUENCY = 440.0
A4_MIDI = 69


class YNoteError(ValueError):
    """Base class for domain errors raised by this package."""


class RestHasNoFrequency(YNoteError):
    pass


class MidiRangeError(YNoteError):
    pass


class PitchClass(IntEnum):
    """The twelve semitone classes, C = 0 through B = 11."""

    C = 0
    Cs = 1
    D = 2
    Ds = 3
    E = 4
    F = 5
    Fs = 6
    G = 7
    Gs = 8
    A = 9
    As = 10
    B = 11

    @property
    def letter(self) -> str:
        """Single-character YNote spelling; raised classes are lowercase."""
        return _LETTERS[self.value]

    @property
    def is_raised(self) -> bool:
        return self.letter.islower()

    @classmethod
    def from_letter(cls, letter: str) -> PitchClass:
        try:
            return cls(_LETTERS.index(letter))
        except ValueError:
            raise YNoteError(f"not a pitch letter: {letter!r}") from None


_LETTERS = "CcDdEFfGgAaB"
PITCH_LETTERS = frozenset(_LETTERS)


@dataclass(frozen=True, order=True)
class Pitch:
    """A pitched sound (class + single-digit octave) or a rest.

    Use :data:`REST` for rests; ``Pitch(PitchClass.A, 4)`` for A4.
    """

    pitch_class: Optional[PitchClass] = None
    octave: Optional[int] = None

    def __post_init__(self):
        if (self.pitch_class is None) != (self.octave is None):
            raise YNoteError("a rest has neither pitch class nor octave")
        if self.pitch_class is not None:
            object.__setattr__(self, "pitch_class", PitchClass(self.pitch_class))
            if not (isinstance(self.octave, int) and 0 <= self.octave <= 9):
                raise YNoteError(f"octave must be a single digit, got {self.octave!r}")

    @property
    def is_rest(self) -> bool:
        return self.pitch_class is None

    @property
    def semitone(self) -> int:
        """Semitone number on the MIDI scale, unbounded (B9 is 131)."""
        if self.pitch_class is None:
            raise RestHasNoFrequency("rest has no pitch")
        return 12 * (self.octave + 1) + int(self.pitch_class)

    def __str__(self) -> str:
        if self.pitch_class is None:
            return "00"
        return f"{self.pitch_class.letter}{self.octave}"


REST = Pitch()


def pitch_from_semitone(number: int) -> Pitch:
    """Inverse of :attr:`Pitch.semitone`; raises if the octave is not 0..9."""
    octave, index = divmod(number, 12)
    octave -= 1
    if not 0 <= octave <= 9:
        raise MidiRangeError(f"semitone {number} has no single-digit octave")
    return Pitch(PitchClass(index), octave)


def midi_number(p: Pitch) -> int:
    if p.is_rest:
        raise RestHasNoFrequency("rest has no MIDI number")
    m = p.semitone
    if m > 127:
        raise MidiRangeError(f"{p} is above the MIDI range (G9 = 127)")
    return m


def pitch_frequency(p: Pitch) -> float:
    """Equal-tempered frequency in Hz, A4 = 440."""
    if p.is_rest:
        raise RestHasNoFrequency("rest has no frequency")
    return A4_FREQUENCY * 2.0 ** ((p.semitone - A4_MIDI) / 12)


def transpose_octave(p: Pitch, octaves: int) -> Pitch:
    if p.is_rest:
        return p
    return Pitch(p.pitch_class, p.octave + octaves)


class Base(Enum):
    """Note value; the enum value is the plain length in half-ticks."""

    WHOLE = 3840
    HALF = 1920
    QUARTER = 960
    EIGHTH = 480
    SIXTEENTH = 240
    THIRTYSECOND = 120
    SIXTYFOURTH = 60


class Modifier(Enum):
    PLAIN = Fraction(1)
    DOTTED = Fraction(3, 2)
    DOUBLEDOTTED = Fraction(7, 4)
    TRIPLET = Fraction(2, 3)


@dataclass(frozen=True)
class Duration:
    base: Base
    modifier: Modifier = Modifier.PLAIN

    @property
    def half_ticks(self) -> int:
        return _HALF_TICKS[(self.base, self.modifier)]

    @property
    def ticks(self) -> Fraction:
        return Fraction(self.half_ticks, 2)

    def __lt__(self, other: Duration) -> bool:
        return self.half_ticks < other.half_ticks


def _half_ticks(base: Base, modifier: Modifier) -> int:
    value = base.value * modifier.value
    assert value.denominator == 1, (base, modifier)
    return int(value)


_HALF_TICKS = {(b, m): _half_ticks(b, m) for b in Base for m in Modifier}

ALL_DURATIONS: tuple[Duration, ...] = tuple(
    sorted((Duration(b, m) for b in Base for m in Modifier), key=lambda d: d.half_ticks)
)
DURATION_BY_HALF_TICKS = {d.half_ticks: d for d in ALL_DURATIONS}


def duration_ticks(d: Duration) -> Fraction:
    return d.ticks


def duration_from_ticks(ticks) -> Optional[Duration]:
    """Return the duration whose length is exactly ``ticks``, else None."""
    half = Fraction(ticks) * 2
    if half.denominator != 1:
        return None
    return DURATION_BY_HALF_TICKS.get(int(half))


@dataclass(frozen=True)
class Note:
    pitch: Pitch
    duration: Duration

    @property
    def ticks(self) -> Fraction:
        return self.duration.ticks

    @property
    def is_rest(self) -> bool:
        return self.pitch.is_rest


@dataclass(frozen=True)
class Score:
    """Monophonic note sequence in 4/4 with a playback tempo."""

    notes: tuple[Note, ...] = ()
    tempo_bpm: float = DEFAULT_TEMPO_BPM
    meter: tuple[int, int] = field(default=(4, 4), init=False)

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(self.notes))
        if not self.tempo_bpm > 0:
            raise YNoteError(f"tempo must be positive, got {self.tempo_bpm!r}")

    def __len__(self) -> int:
        return len(self.notes)

    def __iter__(self):
        return iter(self.notes)

    @property
    def total_ticks(self) -> Fraction:
        return score_total_ticks(self)

    def onsets(self) -> list[Fraction]:
        """Start tick of every note."""
        out, t = [], Fraction(0)
        for n in self.notes:
            out.append(t)
            t += n.ticks
        return out


def score_total_ticks(s: Score | Iterable[Note]) -> Fraction:
    notes = s.notes if isinstance(s, Score) else s
    return Fraction(sum(n.duration.half_ticks for n in notes), 2)
