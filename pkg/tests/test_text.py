import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_score, scores
from ynote.core import REST, Base, Duration, Modifier, Note, Pitch, PitchClass, Score
from ynote.text import (
    CODE_TO_DURATION,
    DURATION_CODES,
    YNoteSyntaxError,
    normalize,
    parse_note,
    parse_stream,
    serialize,
)

C4 = Pitch(PitchClass.C, 4)


def test_duration_code_table():
    assert set(CODE_TO_DURATION) == {
        "01", "02", "04", "08", "16", "32", "64",
        "1.", "2.", "4.", "8.", "S.", "T.", "U.",
        "1:", "2:", "4:", "8:", "S:", "T:", "U:",
        "13", "23", "43", "83", "S3", "T3", "U3",
    }
    assert CODE_TO_DURATION["S."] == Duration(Base.SIXTEENTH, Modifier.DOTTED)
    assert CODE_TO_DURATION["T:"] == Duration(Base.THIRTYSECOND, Modifier.DOUBLEDOTTED)
    assert all(len(c) == 2 for c in DURATION_CODES.values())


@pytest.mark.parametrize(
    "token, note",
    [
        ("C404", Note(C4, Duration(Base.QUARTER))),
        ("0001", Note(REST, Duration(Base.WHOLE))),
        ("c54.", Note(Pitch(PitchClass.Cs, 5), Duration(Base.QUARTER, Modifier.DOTTED))),
        ("B9U3", Note(Pitch(PitchClass.B, 9), Duration(Base.SIXTYFOURTH, Modifier.TRIPLET))),
    ],
)
def test_parse_note(token, note):
    assert parse_note(token) == note


@pytest.mark.parametrize(
    "token, kind",
    [("e404", "bad_pitch_letter"), ("b404", "bad_pitch_letter"), ("X404", "bad_pitch_letter"),
     ("05 4", "bad_pitch_letter"), ("CX04", "bad_octave"), ("C4Z4", "bad_duration_code"),
     ("C416.", "truncated_note")],
)
def test_parse_note_errors(token, kind):
    with pytest.raises(YNoteSyntaxError) as info:
        parse_note(token)
    assert info.value.diagnostics[0].kind == kind


def test_parse_stream_examples():
    score, diags = parse_stream("C404 D404")
    assert diags == [] and len(score) == 2
    assert score.notes[1].pitch == Pitch(PitchClass.D, 4)

    score, diags = parse_stream("C40")
    assert score is None
    assert [(d.byte_offset, d.kind) for d in diags] == [(0, "truncated_note")]

    _, diags = parse_stream("C404X404")
    assert [(d.byte_offset, d.kind) for d in diags] == [(4, "bad_pitch_letter")]


def test_diagnostic_offsets_count_whitespace():
    _, diags = parse_stream("C404\n  C4ZZ")
    assert [(d.byte_offset, d.length, d.kind) for d in diags] == [(9, 2, "bad_duration_code")]


def test_stray_character():
    _, diags = parse_stream("C\x0104")
    assert [d.kind for d in diags] == ["stray_character"]
    _, diags = parse_stream("Cé04")
    assert diags[0].kind == "stray_character" and diags[0].length == 2


def test_serialize_examples():
    a4 = Note(Pitch(PitchClass.A, 4), Duration(Base.QUARTER))
    assert serialize(Score((a4,))) == "A404\n"
    assert serialize(Score()) == ""
    text = serialize(Score((a4,) * 17))
    lines = text.split("\n")
    assert text.endswith("\n") and len(lines) == 3 and lines[2] == ""
    assert lines[0] == " ".join(["A404"] * 16) and lines[1] == "A404"


@settings(max_examples=300)
@given(scores)
def test_round_trip(score):
    assert parse_stream(serialize(score)) == (score, [])


@given(st.lists(st.sampled_from([" ", "\n", "\t", "  "]), min_size=3, max_size=3))
def test_whitespace_is_layout(seps):
    score, diags = parse_stream(seps[0] + "C4" + "04" + seps[1] + "D404" + seps[2])
    assert not diags and len(score) == 2


# -- normalize ----------------------------------------------------------------


def test_normalize_examples():
    text, report = normalize("C404")
    assert text == "C404\n" and report.chars_modified == 0

    text, report = normalize("C4ZZ")
    assert text == "C404\n"
    assert report.chars_modified == 2
    assert {e.rule for e in report.edits} == {"bad_duration_code"}


@pytest.mark.parametrize(
    "raw, fixed, edits",
    [
        ("e404", "F404", 1),       # E sharp -> F
        ("b404", "C504", 2),       # B sharp -> C of next octave
        ("b904", "B904", 1),       # no octave 10
        ("X404", "0004", 2),       # unknown letter -> rest
        ("0504", "0004", 1),
        ("CZ04", "C404", 1),       # bad octave -> 4
        ("eZ04", "F404", 2),
        ("bZ04", "C504", 2),
        ("C4.4", "C404", 1),
        ("C404C4", "C404", 2),     # trailing fragment dropped
    ],
)
def test_normalize_rules(raw, fixed, edits):
    text, report = normalize(raw)
    assert text == fixed + "\n"
    assert report.chars_modified == edits
    assert report.chars_total == len(raw)


def test_report_summary_format():
    from ynote.text import RepairReport

    assert RepairReport(125, 7569).summary() == "modified 125 of 7569 characters (1.6%)"
    assert round(RepairReport(125, 7569).ratio, 4) == 0.0165
    assert RepairReport(149, 6485).summary() == "modified 149 of 6485 characters (2.2%)"
    assert RepairReport(0, 0).summary() == "modified 0 of 0 characters (0.0%)"


def test_normalize_empty_and_whitespace():
    for raw in ("", "   \n\t"):
        text, report = normalize(raw)
        assert text == "" and report.chars_total == 0 and report.chars_modified == 0


printable = st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126), max_size=80)


@settings(max_examples=500)
@given(printable)
def test_normalize_total_valid_idempotent(raw):
    text, report = normalize(raw)
    assert parse_stream(text)[1] == []
    assert 0 <= report.chars_modified <= report.chars_total
    again = normalize(text)
    assert again.report.chars_modified == 0 and again.text == text


@given(st.text(max_size=40))
def test_normalize_arbitrary_unicode(raw):
    assert parse_stream(normalize(raw).text)[1] == []


def corrupt(text: str, k: int, rng: random.Random) -> str:
    """Replace k distinct non-whitespace characters with other printable characters."""
    positions = [i for i, ch in enumerate(text) if not ch.isspace()]
    chars = list(text)
    for i in rng.sample(positions, k):
        chars[i] = rng.choice([c for c in map(chr, range(33, 127)) if c != chars[i]])
    return "".join(chars)


@settings(max_examples=200)
@given(st.integers(0, 2**32), st.integers(1, 60), st.integers(0, 10))
def test_repair_count_bounded_by_corruptions(seed, n, k):
    rng = random.Random(seed)
    text = serialize(random_score(rng, n))
    k = min(k, 4 * n)
    bad = corrupt(text, k, rng)
    assert normalize(bad).report.chars_modified <= 2 * k
