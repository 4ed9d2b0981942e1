"""Sine-tone rendering of scores to 16-bit mono PCM WAV."""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import TICKS_PER_QUARTER, Score, YNoteError, pitch_frequency

FULL_SCALE = 32767


@dataclass(frozen=True)
class RenderConfig:
    sample_rate: int = 44100
    amplitude: float = 0.5
    fade_ms: float = 5.0
    tempo_bpm: Optional[float] = None  # overrides Score.tempo_bpm

    def __post_init__(self):
        if int(self.sample_rate) != self.sample_rate or self.sample_rate < 8000:
            raise YNoteError(f"sample_rate must be an integer >= 8000, got {self.sample_rate}")
        if not 0 <= self.amplitude <= 1:
            raise YNoteError(f"amplitude must lie in [0, 1], got {self.amplitude}")
        if self.fade_ms < 0:
            raise YNoteError("fade_ms must be non-negative")
        if self.tempo_bpm is not None and not self.tempo_bpm > 0:
            raise YNoteError("tempo override must be positive")


def seconds_per_tick(tempo_bpm: float) -> Fraction:
    return Fraction(60) / (Fraction(tempo_bpm) * TICKS_PER_QUARTER)


def note_boundaries(s: Score, cfg: RenderConfig) -> list[int]:
    """Sample index at which each note starts, plus the end index.

    Boundaries are rounded from exact cumulative time, so rounding error
    never accumulates across notes.
    """
    per_tick = seconds_per_tick(cfg.tempo_bpm or s.tempo_bpm) * cfg.sample_rate
    out, t = [0], Fraction(0)
    for n in s.notes:
        t += n.ticks
        out.append(round(t * per_tick))
    return out


def _tone(freq: float, count: int, cfg: RenderConfig) -> np.ndarray:
    k = np.arange(count, dtype=np.float64)
    wave_ = np.sin(2 * np.pi * freq * k / cfg.sample_rate)
    fade = min(cfg.fade_ms * cfg.sample_rate / 1000.0, count / 2.0)
    if fade > 0:
        env = np.minimum(1.0, np.minimum(k, count - 1 - k) / fade)
        wave_ *= env
    return wave_ * (cfg.amplitude * FULL_SCALE)


def render_samples(s: Score, cfg: RenderConfig = RenderConfig()) -> np.ndarray:
    bounds = note_boundaries(s, cfg)
    out = np.zeros(bounds[-1], dtype=np.float64)
    for note, a, b in zip(s.notes, bounds, bounds[1:]):
        if not note.is_rest and b > a:
            out[a:b] = _tone(pitch_frequency(note.pitch), b - a, cfg)
    return np.round(out).astype(np.int16)


def render_wav(s: Score, cfg: RenderConfig = RenderConfig()) -> bytes:
    samples = render_samples(s, cfg)
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(cfg.sample_rate)
        w.writeframes(samples.astype("<i2").tobytes())
    return buf.getvalue()
