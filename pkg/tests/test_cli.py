import subprocess
import sys

import pytest

from ynote.cli import main
from ynote.pipeline import bundled_corpus_dir
from ynote.text import parse_stream

MELODY = "C404 D404 E404 F404 G404 A404 B404 C504\n"


@pytest.fixture
def melody(tmp_path):
    p = tmp_path / "melody.ynote"
    p.write_text(MELODY)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, tmp_path, melody):
    assert run(capsys, "validate", melody) == (0, "", "")
    bad = tmp_path / "bad.ynote"
    bad.write_text("C40")
    code, out, err = run(capsys, "validate", bad)
    assert code == 1 and out == "" and err.startswith("0: truncated_note")
    assert run(capsys, "validate", tmp_path / "missing.ynote")[0] == 2


def test_usage_error_exit_3(capsys):
    with pytest.raises(SystemExit) as info:
        main(["convert", "--from", "ynote"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["nosuchcommand"])
    assert info.value.code == 3


def test_normalize(capsys, tmp_path, melody):
    out_path = tmp_path / "out.ynote"
    code, out, err = run(capsys, "normalize", melody, "--out", out_path)
    assert code == 0 and "modified 0 of 32 characters (0.0%)" in err
    assert out_path.read_text() == MELODY

    bad = tmp_path / "bad.ynote"
    bad.write_text("C4ZZ e404 X4")
    report = tmp_path / "report.txt"
    code, out, err = run(capsys, "normalize", bad, "--report", report)
    assert code == 0 and out == "C404 F404\n"
    assert report.read_text().startswith("modified 5 of 10 characters (50.0%)")
    fixed = tmp_path / "fixed.ynote"
    fixed.write_text(out)
    assert run(capsys, "validate", fixed)[0] == 0

    empty = tmp_path / "empty.ynote"
    empty.write_text("")
    assert run(capsys, "normalize", empty) == (0, "", "modified 0 of 0 characters (0.0%)\n")


def test_convert_midi_round_trip(capsys, tmp_path, melody):
    mid = tmp_path / "m.mid"
    back = tmp_path / "back.ynote"
    assert run(capsys, "convert", "--from", "ynote", "--to", "midi", melody, "--out", mid)[0] == 0
    assert mid.read_bytes()[:4] == b"MThd"
    code, _, err = run(capsys, "convert", "--from", "midi", "--to", "ynote", mid, "--out", back)
    assert code == 0 and "0 dropped events, 0 quantized notes" in err
    assert back.read_bytes() == melody.read_bytes()


def test_convert_to_wav(capsys, tmp_path, melody):
    wav = tmp_path / "m.wav"
    assert run(capsys, "convert", "--from", "ynote", "--to", "wav", melody, "--out", wav)[0] == 0
    data = wav.read_bytes()
    assert data[:4] == b"RIFF" and data[8:12] == b"WAVE"


def test_convert_abc_and_errors(capsys, tmp_path):
    abc = tmp_path / "t.abc"
    abc.write_text("X:1\nL:1/8\nK:C\nC2 D2 E4|\n")
    assert run(capsys, "convert", "--from", "abc", "--to", "ynote", abc) [:2] == (0, "C404 D404 E402\n")
    abc.write_text("X:1\nL:1/8\nK:C\n[CEG]2|\n")
    code, out, err = run(capsys, "convert", "--from", "abc", "--to", "ynote", abc)
    assert code == 2 and "unsupported-construct" in err and out == ""


def test_convert_musicxml(capsys, tmp_path):
    xml = tmp_path / "s.musicxml"
    xml.write_text("<score-partwise><part id='P1'><measure><attributes><divisions>2</divisions></attributes>"
                   "<note><pitch><step>A</step><octave>4</octave></pitch><duration>2</duration></note>"
                   "</measure></part></score-partwise>")
    assert run(capsys, "convert", "--from", "musicxml", "--to", "ynote", xml)[:2] == (0, "A404\n")


def test_invalid_ynote_input_is_validation_failure(capsys, tmp_path):
    bad = tmp_path / "bad.ynote"
    bad.write_text("C4ZZ")
    assert run(capsys, "convert", "--from", "ynote", "--to", "midi", bad)[0] == 1


def test_prompt(capsys, melody):
    assert run(capsys, "prompt", "--mode", "first-bar", melody)[:2] == (0, "C404 D404 E404 F404\n")
    assert run(capsys, "prompt", "--mode", "bar-endpoints", melody)[:2] == (0, "C404 F404 G404 C504\n")


def test_train_generate_evaluate(capsys, tmp_path, melody):
    model = tmp_path / "model.json"
    assert run(capsys, "train", bundled_corpus_dir(), "--out", model)[0] == 0
    prompt = tmp_path / "prompt.ynote"
    prompt.write_text("C404 D404\n")
    outs = []
    for _ in range(2):
        code, out, err = run(capsys, "generate", "--model", model, "--prompt", prompt,
                             "--length", 24, "--seed", 11)
        assert code == 0 and "modified 0 of" in err
        outs.append(out)
    assert outs[0] == outs[1] and outs[0].startswith("C404 D404 ")
    assert parse_stream(outs[0])[1] == [] and len(outs[0].split()) == 24

    assert run(capsys, "generate", "--model", model, "--prompt", prompt, "--length", 1)[0] == 3

    records = tmp_path / "records.jsonl"
    code, out, _ = run(capsys, "evaluate", melody, "--reference", melody, "--records", records)
    assert code == 0
    assert "Sample 1 |  1.000 |  1.000 |  1.000 |  1.000" in out
    assert "Sample 1 |  1.000 |  1.000" in out.split("ROUGE Scores")[1]
    assert records.read_text().count("\n") == 1


def test_evaluate_three_token_example(capsys, tmp_path):
    cand, ref = tmp_path / "c.ynote", tmp_path / "r.ynote"
    cand.write_text("C404 D404 E404\n")
    ref.write_text("C404 D404 G404\n")
    code, out, _ = run(capsys, "evaluate", cand, "--reference", ref)
    assert code == 0 and "Sample 1 |  0.667 |  0.500" in out


def test_train_missing_corpus(capsys, tmp_path):
    assert run(capsys, "train", tmp_path / "nope", "--out", tmp_path / "m.json")[0] == 2


def test_console_script_module_entry(tmp_path, melody):
    proc = subprocess.run([sys.executable, "-m", "ynote.cli", "validate", str(melody)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
