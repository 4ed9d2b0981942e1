"""Standard MIDI File export and import.

Export writes a format-0 file at 960 PPQN, so one PPQN tick equals one
YNote half-tick. Rest onsets are marked with ``rest`` marker meta events
so that adjacent rests survive a round trip; rests never emit notes.

Import reduces the first track that sounds any note to a single melodic
line and quantizes every note and gap to the nearest legal duration.
"""

from __future__ import annotations

import bisect
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..core import (
    ALL_DURATIONS,
    Base,
    HALF_TICKS_PER_QUARTER,
    REST,
    Duration,
    MidiRangeError,
    Note,
    Score,
    midi_number,
    pitch_from_semitone,
)
from ._common import ConversionError, LossReport

PPQN = HALF_TICKS_PER_QUARTER
VELOCITY = 64
REST_MARKER = b"rest"

_META_END_OF_TRACK = 0x2F
_META_TEMPO = 0x51
_META_MARKER = 0x06

# gaps shorter than half a 64th note (30 half-ticks) are absorbed
ABSORB_BELOW = Fraction(Base.SIXTYFOURTH.value, 2)

_SORTED_HALF_TICKS = [d.half_ticks for d in ALL_DURATIONS]


def nearest_duration(half_ticks) -> Duration:
    """Legal duration nearest to ``half_ticks``; ties go to the shorter one."""
    x = Fraction(half_ticks)
    i = bisect.bisect_left(_SORTED_HALF_TICKS, x)
    if i == 0:
        return ALL_DURATIONS[0]
    if i == len(ALL_DURATIONS):
        return ALL_DURATIONS[-1]
    lo, hi = ALL_DURATIONS[i - 1], ALL_DURATIONS[i]
    if hi.half_ticks - x < x - lo.half_ticks:
        return hi
    return lo


# -- writing -----------------------------------------------------------------


def _vlq(value: int) -> bytes:
    if value < 0:
        raise ValueError("negative delta time")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def tempo_to_us(bpm: float) -> int:
    return max(1, min(0xFFFFFF, round(60_000_000 / bpm)))


def midi_export(s: Score) -> bytes:
    """Encode a score as a format-0 SMF.

    Raises :class:`ConversionError` (``pitch-out-of-midi-range``) for pitches above G9.
    """
    events: list[tuple[int, bytes]] = [
        (0, bytes([0xFF, _META_TEMPO, 3]) + tempo_to_us(s.tempo_bpm).to_bytes(3, "big"))
    ]
    t = 0
    for note in s.notes:
        length = note.duration.half_ticks * PPQN // HALF_TICKS_PER_QUARTER
        if note.is_rest:
            events.append((t, bytes([0xFF, _META_MARKER, len(REST_MARKER)]) + REST_MARKER))
        else:
            try:
                key = midi_number(note.pitch)
            except MidiRangeError as exc:
                raise ConversionError("pitch-out-of-midi-range", str(exc)) from None
            events.append((t, bytes([0x90, key, VELOCITY])))
            events.append((t + length, bytes([0x80, key, 0])))
        t += length
    events.sort(key=lambda e: e[0])  # stable: note-off precedes the next note-on

    track = bytearray()
    now = 0
    for when, data in events:
        track += _vlq(when - now) + data
        now = when
    track += _vlq(t - now) + bytes([0xFF, _META_END_OF_TRACK, 0])

    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, PPQN)
    return header + b"MTrk" + struct.pack(">I", len(track)) + bytes(track)


# -- reading -----------------------------------------------------------------


@dataclass
class _Track:
    notes: list[tuple[int, int, int]]  # (start, end, key)
    markers: list[int]
    tempos: list[tuple[int, int]]  # (time, microseconds per quarter)
    end: int


def _chunks(data: bytes) -> Iterator[tuple[bytes, bytes]]:
    pos = 0
    while pos < len(data):
        if pos + 8 > len(data):
            raise ConversionError("malformed-smf", "truncated chunk header")
        kind = data[pos:pos + 4]
        (size,) = struct.unpack(">I", data[pos + 4:pos + 8])
        body = data[pos + 8:pos + 8 + size]
        if len(body) != size:
            raise ConversionError("malformed-smf", f"chunk {kind!r} is truncated")
        yield kind, body
        pos += 8 + size


def _read_vlq(buf: bytes, pos: int) -> tuple[int, int]:
    value = 0
    for _ in range(4):
        if pos >= len(buf):
            raise ConversionError("malformed-smf", "truncated variable-length quantity")
        b = buf[pos]
        pos += 1
        value = (value << 7) | (b & 0x7F)
        if not b & 0x80:
            return value, pos
    raise ConversionError("malformed-smf", "variable-length quantity too long")


def _parse_track(buf: bytes) -> _Track:
    notes, markers, tempos = [], [], []
    sounding: dict[tuple[int, int], int] = {}
    pos, now, status = 0, 0, None
    try:
        while pos < len(buf):
            delta, pos = _read_vlq(buf, pos)
            now += delta
            b = buf[pos]
            if b & 0x80:
                status = b
                pos += 1
            elif status is None or status >= 0xF0:
                raise ConversionError("malformed-smf", "data byte without running status")
            if status == 0xFF:
                kind = buf[pos]
                size, pos = _read_vlq(buf, pos + 1)
                payload = buf[pos:pos + size]
                pos += size
                status = None
                if kind == _META_END_OF_TRACK:
                    break
                if kind == _META_TEMPO and size == 3:
                    tempos.append((now, int.from_bytes(payload, "big")))
                elif kind == _META_MARKER and payload == REST_MARKER:
                    markers.append(now)
            elif status in (0xF0, 0xF7):
                size, pos = _read_vlq(buf, pos)
                pos += size
                status = None
            elif status >= 0xF0:
                raise ConversionError("malformed-smf", f"unexpected status {status:#x}")
            else:
                kind, channel = status & 0xF0, status & 0x0F
                width = 1 if kind in (0xC0, 0xD0) else 2
                data = buf[pos:pos + width]
                if len(data) != width:
                    raise ConversionError("malformed-smf", "truncated channel message")
                pos += width
                if kind == 0x90 and data[1] > 0:
                    key = (channel, data[0])
                    if key in sounding:
                        notes.append((sounding.pop(key), now, data[0]))
                    sounding[key] = now
                elif kind == 0x80 or kind == 0x90:
                    start = sounding.pop((channel, data[0]), None)
                    if start is not None:
                        notes.append((start, now, data[0]))
    except IndexError:
        raise ConversionError("malformed-smf", "track ends mid-event") from None
    for (_, key), start in sounding.items():
        notes.append((start, now, key))
    notes.sort(key=lambda n: n[0])
    return _Track(notes, markers, tempos, now)


def read_smf(data: bytes) -> tuple[int, int, list[_Track]]:
    """Return ``(format, division, tracks)`` for a standard MIDI file."""
    chunks = list(_chunks(bytes(data)))
    if not chunks or chunks[0][0] != b"MThd" or len(chunks[0][1]) < 6:
        raise ConversionError("malformed-smf", "missing MThd header")
    fmt, ntracks, division = struct.unpack(">HHH", chunks[0][1][:6])
    if fmt not in (0, 1):
        raise ConversionError("malformed-smf", f"SMF format {fmt} is not supported")
    if division & 0x8000 or division == 0:
        raise ConversionError("malformed-smf", "SMPTE time division is not supported")
    tracks = [_parse_track(body) for kind, body in chunks[1:] if kind == b"MTrk"]
    if len(tracks) != ntracks:
        raise ConversionError("malformed-smf", f"header declares {ntracks} tracks, found {len(tracks)}")
    return fmt, division, tracks


def midi_import(data: bytes, policy: str = "nearest") -> tuple[Score, LossReport]:
    """Decode an SMF into a monophonic score.

    ``policy`` is ``"nearest"`` (quantize to the closest legal duration)
    or ``"strict"`` (raise ``exact-duration-mismatch`` instead).
    """
    if policy not in ("nearest", "strict"):
        raise ValueError(f"unknown quantization policy {policy!r}")
    _, division, tracks = read_smf(data)
    report = LossReport("midi")
    track = next((t for t in tracks if t.notes), None)
    if track is None:
        # a rest-only score exported by midi_export carries only rest markers
        track = next((t for t in tracks if t.markers), None)
    if track is None:
        raise ConversionError("no-note-events", "no track contains a note")

    tempo_us = min((t for tr in tracks for t in tr.tempos), default=(0, 500_000))[1]
    tempo_bpm = round(60_000_000 / tempo_us, 3)

    def half(ticks: int) -> Fraction:
        return Fraction(ticks * HALF_TICKS_PER_QUARTER, division)

    # items: [pitch, start, end] in PPQN ticks
    items: list[list] = []
    kept_end = kept_start = None
    for start, end, key in track.notes:
        if kept_end is not None and (start < kept_end or start == kept_start):
            report.drop("overlapping-note")
            continue
        try:
            pitch = pitch_from_semitone(key)
        except MidiRangeError:
            report.drop("pitch-below-octave-0")
            continue
        items.append([pitch, start, end])
        kept_start, kept_end = start, end

    markers = sorted(set(track.markers))
    timeline: list[list] = []  # [pitch, exact half-ticks]

    def fill_gap(a: int, b: int) -> None:
        cuts = [a] + [m for m in markers if a < m < b] + [b]
        for lo, hi in zip(cuts, cuts[1:]):
            length = half(hi - lo)
            if length >= ABSORB_BELOW:
                timeline.append([REST, length])
            elif timeline:
                timeline[-1][1] += length

    cursor = 0
    for pitch, start, end in items:
        fill_gap(cursor, start)
        timeline.append([pitch, half(end - start)])
        cursor = end
    fill_gap(cursor, max(track.end, cursor))

    notes = []
    for pitch, length in timeline:
        d = nearest_duration(length)
        if d.half_ticks != length:
            if policy == "strict":
                raise ConversionError("exact-duration-mismatch",
                                      f"{float(length) / 2:g} ticks is not a legal duration")
            report.quantized_notes += 1
        notes.append(Note(pitch, d))
    return Score(tuple(notes), tempo_bpm=tempo_bpm), report


def note_events(data: bytes) -> list[tuple[int, int, int]]:
    """``(start, end, key)`` of every note in the first sounding track."""
    _, _, tracks = read_smf(data)
    track = next((t for t in tracks if t.notes), None)
    return list(track.notes) if track else []


def first_tempo(data: bytes) -> Optional[int]:
    _, _, tracks = read_smf(data)
    tempos = sorted(t for tr in tracks for t in tr.tempos)
    return tempos[0][1] if tempos else None
