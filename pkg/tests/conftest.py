import random

import pytest
from hypothesis import strategies as st

from ynote.core import ALL_DURATIONS, REST, Note, Pitch, PitchClass, Score

pitches = st.one_of(
    st.just(REST),
    st.builds(Pitch, st.sampled_from(list(PitchClass)), st.integers(0, 9)),
)
midi_pitches = st.one_of(
    st.just(REST),
    st.builds(Pitch, st.sampled_from(list(PitchClass)), st.integers(0, 8)),
)
durations = st.sampled_from(ALL_DURATIONS)
notes = st.builds(Note, pitches, durations)
scores = st.builds(Score, st.lists(notes, max_size=40).map(tuple))
midi_scores = st.builds(
    Score, st.lists(st.builds(Note, midi_pitches, durations), min_size=1, max_size=40).map(tuple)
)


def random_score(rng: random.Random, n: int, octaves=range(10)) -> Score:
    out = []
    for _ in range(n):
        if rng.random() < 0.1:
            p = REST
        else:
            p = Pitch(PitchClass(rng.randrange(12)), rng.choice(octaves))
        out.append(Note(p, rng.choice(ALL_DURATIONS)))
    return Score(tuple(out))


@pytest.fixture
def rng():
    return random.Random(1234)
