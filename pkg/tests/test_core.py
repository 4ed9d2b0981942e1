from fractions import Fraction

import pytest
from hypothesis import given

from conftest import durations, pitches
from oracles import tick_oracle
from ynote.core import (
    ALL_DURATIONS,
    REST,
    Base,
    Duration,
    MidiRangeError,
    Modifier,
    Note,
    Pitch,
    PitchClass,
    RestHasNoFrequency,
    Score,
    YNoteError,
    duration_ticks,
    midi_number,
    pitch_frequency,
    score_total_ticks,
    transpose_octave,
)

Q = Duration(Base.QUARTER)


@pytest.mark.parametrize(
    "base, modifier, expected",
    [
        (Base.QUARTER, Modifier.PLAIN, 480),
        (Base.WHOLE, Modifier.PLAIN, 1920),
        (Base.QUARTER, Modifier.DOTTED, 720),
        (Base.QUARTER, Modifier.TRIPLET, 320),
        (Base.SIXTYFOURTH, Modifier.DOUBLEDOTTED, Fraction(105, 2)),
    ],
)
def test_duration_ticks_examples(base, modifier, expected):
    assert duration_ticks(Duration(base, modifier)) == expected


def test_all_28_durations_match_oracle():
    assert len(ALL_DURATIONS) == 28
    for d in ALL_DURATIONS:
        assert d.ticks == tick_oracle(d.base.name.lower(), d.modifier.name.lower())
        assert (d.ticks * 2).denominator == 1
    assert len({d.half_ticks for d in ALL_DURATIONS}) == 28


@pytest.mark.parametrize("base", list(Base))
def test_triplets_sum_to_duple_parent(base):
    assert 3 * duration_ticks(Duration(base, Modifier.TRIPLET)) == 2 * duration_ticks(Duration(base))


def test_pitch_letters():
    assert "".join(pc.letter for pc in PitchClass) == "CcDdEFfGgAaB"
    raised = {pc.letter for pc in PitchClass if pc.is_raised}
    assert raised == set("cdfga")
    with pytest.raises(YNoteError):
        PitchClass.from_letter("e")
    with pytest.raises(YNoteError):
        PitchClass.from_letter("b")


def test_pitch_validation():
    with pytest.raises(YNoteError):
        Pitch(PitchClass.C, 10)
    with pytest.raises(YNoteError):
        Pitch(PitchClass.C, None)
    assert REST.is_rest and str(REST) == "00"
    assert str(Pitch(PitchClass.Cs, 5)) == "c5"


def test_midi_numbers():
    assert midi_number(Pitch(PitchClass.C, 4)) == 60
    assert midi_number(Pitch(PitchClass.A, 4)) == 69
    assert midi_number(Pitch(PitchClass.Cs, 0)) == 13
    assert midi_number(Pitch(PitchClass.G, 9)) == 127
    with pytest.raises(MidiRangeError):
        midi_number(Pitch(PitchClass.Gs, 9))
    with pytest.raises(RestHasNoFrequency):
        midi_number(REST)


def test_midi_number_strictly_increasing():
    ordered = [Pitch(pc, o) for o in range(10) for pc in PitchClass]
    semis = [p.semitone for p in ordered]
    assert all(b - a == 1 for a, b in zip(semis, semis[1:]))


def test_frequency_examples():
    assert pitch_frequency(Pitch(PitchClass.A, 4)) == 440.0
    assert pitch_frequency(Pitch(PitchClass.A, 5)) == 880.0
    assert pitch_frequency(Pitch(PitchClass.C, 4)) == pytest.approx(261.6256, abs=1e-4)
    with pytest.raises(RestHasNoFrequency):
        pitch_frequency(REST)


@given(pitches)
def test_octave_doubles_frequency(p):
    if p.is_rest or p.octave == 9:
        return
    up = transpose_octave(p, 1)
    assert pitch_frequency(up) == pytest.approx(2 * pitch_frequency(p), rel=1e-9)


@given(durations)
def test_half_tick_integrality(d):
    assert d.half_ticks == d.ticks * 2 and d.half_ticks > 0


def test_score_total_ticks():
    q = Note(Pitch(PitchClass.C, 4), Q)
    h = Note(Pitch(PitchClass.C, 4), Duration(Base.HALF))
    t = Note(REST, Duration(Base.QUARTER, Modifier.TRIPLET))
    assert score_total_ticks(Score()) == 0
    assert score_total_ticks(Score((q, q, h))) == 1920
    assert Score((t, t, t)).total_ticks == 960
    assert Score((q, q, h)).onsets() == [0, 480, 960]


def test_score_defaults_and_tempo():
    s = Score()
    assert s.tempo_bpm == 120 and s.meter == (4, 4)
    with pytest.raises(YNoteError):
        Score((), tempo_bpm=0)
