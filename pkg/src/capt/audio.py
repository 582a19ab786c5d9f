"""WAV decoding, resampling, framing and frame-level energy.

Everything downstream runs on 16 kHz mono float buffers; the functions here
turn an uploaded WAV blob into that shape and provide the per-frame RMS
measurements used by validation and prosody.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

# Processing rate every pipeline stage assumes after ingest.
INTERNAL_RATE = 16000

# Keeps log of digital silence finite: 20*log10(1e-9) = -180 dBFS.
DB_EPSILON = 1e-9


class WavFormatError(ValueError):
    """Byte blob is not a decodable RIFF/WAVE file."""


@dataclass(frozen=True)
class AudioBuffer:
    """Mono PCM signal, samples in [-1, 1], immutable once constructed."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64, copy=True)
        if samples.ndim != 1:
            raise ValueError("AudioBuffer samples must be one-dimensional")
        if samples.size and np.max(np.abs(samples)) > 1.0 + 1e-9:
            raise ValueError("AudioBuffer samples must lie in [-1, +1]")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if not isinstance(self.sample_rate, (int, np.integer)) or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_ms(self) -> float:
        return 1000.0 * len(self) / self.sample_rate


@dataclass(frozen=True)
class FrameSeries:
    """Fixed-length windows cut from a buffer at a regular hop."""

    frames: np.ndarray  # (frame_count, window_samples)
    window_ms: float
    hop_ms: float
    sample_rate: int

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])


def _parse_fmt_chunk(body: bytes) -> tuple[int, int, int, int]:
    if len(body) < 16:
        raise WavFormatError("fmt chunk too short")
    format_tag, channels, sample_rate, _byte_rate, _block_align, bits = struct.unpack_from(
        "<HHIIHH", body, 0
    )
    return format_tag, channels, sample_rate, bits


def decode_wav(data: bytes) -> AudioBuffer:
    """Decode a RIFF/WAVE blob to a mono buffer with samples in [-1, 1].

    Accepts 16-bit PCM and 32-bit IEEE float, 1 or 2 channels. Stereo is
    downmixed by per-sample averaging. Unknown chunks are skipped.
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError("not a RIFF/WAVE file")

    fmt: bytes | None = None
    pcm: bytes | None = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise WavFormatError(f"chunk {chunk_id!r} truncated")
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            pcm = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise WavFormatError("missing fmt chunk")
    if pcm is None:
        raise WavFormatError("missing data chunk")
    if len(pcm) == 0:
        raise WavFormatError("empty data chunk")

    format_tag, channels, sample_rate, bits = _parse_fmt_chunk(fmt)
    if channels not in (1, 2):
        raise WavFormatError(f"unsupported channel count {channels}")
    if sample_rate <= 0:
        raise WavFormatError(f"invalid sample rate {sample_rate}")

    if format_tag == 1 and bits == 16:
        raw = np.frombuffer(pcm[: len(pcm) - len(pcm) % 2], dtype="<i2")
        samples = raw.astype(np.float64) / 32768.0
    elif format_tag == 3 and bits == 32:
        raw = np.frombuffer(pcm[: len(pcm) - len(pcm) % 4], dtype="<f4")
        samples = np.clip(raw.astype(np.float64), -1.0, 1.0)
    else:
        raise WavFormatError(f"unsupported codec: format tag {format_tag}, {bits}-bit")

    if samples.size == 0:
        raise WavFormatError("data chunk holds no complete samples")
    if channels == 2:
        samples = samples[: samples.size - samples.size % 2].reshape(-1, 2).mean(axis=1)
    return AudioBuffer(samples, int(sample_rate))


def encode_wav(buffer: AudioBuffer) -> bytes:
    """Serialize a buffer as mono 16-bit PCM WAV."""
    quantized = np.clip(np.round(buffer.samples * 32768.0), -32768, 32767).astype("<i2")
    pcm = quantized.tobytes()
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(pcm)),
            b"WAVE",
            b"fmt ",
            struct.pack("<IHHIIHH", 16, 1, 1, buffer.sample_rate, buffer.sample_rate * 2, 2, 16),
            b"data",
            struct.pack("<I", len(pcm)),
        ]
    )
    return header + pcm


def resample(buffer: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Linear-interpolation resampling; returns the input untouched when rates match."""
    if target_rate <= 0:
        raise ValueError(f"target_rate must be positive, got {target_rate}")
    if target_rate == buffer.sample_rate:
        return buffer
    n_in = len(buffer)
    n_out = int(round(n_in * target_rate / buffer.sample_rate))
    if n_in == 0 or n_out == 0:
        return AudioBuffer(np.zeros(n_out), target_rate)
    positions = np.arange(n_out) * (buffer.sample_rate / target_rate)
    out = np.interp(positions, np.arange(n_in), buffer.samples)
    return AudioBuffer(out, target_rate)


def frame_signal(buffer: AudioBuffer, window_ms: float, hop_ms: float) -> FrameSeries:
    """Cut the buffer into contiguous windows; a trailing partial window is dropped.

    frame_count = 1 + floor((N - W) / H) for N >= W, else 0.
    """
    if not (window_ms >= hop_ms > 0):
        raise ValueError("need window_ms >= hop_ms > 0")
    window = int(buffer.sample_rate * window_ms / 1000)
    hop = int(buffer.sample_rate * hop_ms / 1000)
    if window <= 0 or hop <= 0:
        raise ValueError("window and hop must span at least one sample")
    n = len(buffer)
    if n < window:
        frames = np.empty((0, window), dtype=np.float64)
    else:
        frames = np.lib.stride_tricks.sliding_window_view(buffer.samples, window)[::hop]
    return FrameSeries(frames, window_ms, hop_ms, buffer.sample_rate)


def rms_db(frame: np.ndarray) -> float:
    """RMS level of one window in dBFS; a full-scale square wave reads 0.0."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size == 0:
        raise ValueError("rms_db needs a nonempty frame")
    rms = float(np.sqrt(np.mean(frame * frame)))
    return float(20.0 * np.log10(rms + DB_EPSILON))
