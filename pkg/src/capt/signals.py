"""Deterministic signal synthesis used by fixtures, demos and tests."""

from __future__ import annotations

import numpy as np

from .audio import INTERNAL_RATE, AudioBuffer


def silence(duration_ms: float, rate: int = INTERNAL_RATE) -> AudioBuffer:
    n = int(round(rate * duration_ms / 1000.0))
    return AudioBuffer(np.zeros(n), rate)


def sine(freq_hz: float, duration_ms: float, amplitude: float = 0.5,
         rate: int = INTERNAL_RATE) -> AudioBuffer:
    n = int(round(rate * duration_ms / 1000.0))
    t = np.arange(n) / rate
    return AudioBuffer(amplitude * np.sin(2.0 * np.pi * freq_hz * t), rate)


def sawtooth(freq_hz: float, duration_ms: float, amplitude: float = 0.5,
             rate: int = INTERNAL_RATE) -> AudioBuffer:
    """Rising sawtooth: harmonically rich, so pitch trackers lock on cleanly."""
    n = int(round(rate * duration_ms / 1000.0))
    t = np.arange(n) / rate
    phase = t * freq_hz
    return AudioBuffer(amplitude * (2.0 * (phase - np.floor(phase + 0.5))), rate)


def square(freq_hz: float, duration_ms: float, amplitude: float = 1.0,
           rate: int = INTERNAL_RATE) -> AudioBuffer:
    n = int(round(rate * duration_ms / 1000.0))
    t = np.arange(n) / rate
    return AudioBuffer(amplitude * np.sign(np.sin(2.0 * np.pi * freq_hz * t) + 1e-12), rate)


def white_noise(duration_ms: float, amplitude: float = 0.5, seed: int = 0,
                rate: int = INTERNAL_RATE) -> AudioBuffer:
    n = int(round(rate * duration_ms / 1000.0))
    rng = np.random.default_rng(seed)
    samples = rng.uniform(-amplitude, amplitude, size=n)
    return AudioBuffer(samples, rate)


def concat(*buffers: AudioBuffer) -> AudioBuffer:
    if not buffers:
        raise ValueError("concat needs at least one buffer")
    rate = buffers[0].sample_rate
    for b in buffers:
        if b.sample_rate != rate:
            raise ValueError("cannot concatenate buffers with different rates")
    return AudioBuffer(np.concatenate([b.samples for b in buffers]), rate)


def scale_for_rms_db(level_db: float, crest_ratio: float) -> float:
    """Amplitude that puts a waveform with the given peak/RMS ratio at level_db."""
    return (10.0 ** (level_db / 20.0)) * crest_ratio


# Peak/RMS ratios of the ideal waveforms above.
SAWTOOTH_CREST = np.sqrt(3.0)
SINE_CREST = np.sqrt(2.0)
