"""Audio core: WAV decode/encode, resampling, framing, RMS level."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capt.audio import (
    AudioBuffer,
    WavFormatError,
    decode_wav,
    encode_wav,
    frame_signal,
    resample,
    rms_db,
)
from capt.signals import sine, square


def pcm16_wav(samples: np.ndarray, rate: int, channels: int = 1) -> bytes:
    import struct

    pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2").tobytes()
    block = 2 * channels
    return b"".join([
        b"RIFF", struct.pack("<I", 36 + len(pcm)), b"WAVE",
        b"fmt ", struct.pack("<IHHIIHH", 16, 1, channels, rate, rate * block, block, 16),
        b"data", struct.pack("<I", len(pcm)), pcm,
    ])


class TestDecodeWav:
    def test_one_second_mono_16k(self):
        data = pcm16_wav(np.zeros(16000), 16000)
        buf = decode_wav(data)
        assert len(buf) == 16000
        assert buf.sample_rate == 16000

    def test_stereo_downmix_cancels(self):
        interleaved = np.empty(2000)
        interleaved[0::2] = 0.5
        interleaved[1::2] = -0.5
        buf = decode_wav(pcm16_wav(interleaved, 8000, channels=2))
        assert len(buf) == 1000
        assert np.all(buf.samples == 0.0)

    def test_rifx_is_malformed(self):
        data = b"RIFX" + pcm16_wav(np.zeros(100), 8000)[4:]
        with pytest.raises(WavFormatError):
            decode_wav(data)

    def test_unsupported_codec(self):
        import struct

        data = pcm16_wav(np.zeros(100), 8000)
        # flip the format tag to ADPCM (2)
        broken = data[:20] + struct.pack("<H", 2) + data[22:]
        with pytest.raises(WavFormatError, match="unsupported codec"):
            decode_wav(broken)

    def test_zero_length_data_chunk(self):
        import struct

        header = b"".join([
            b"RIFF", struct.pack("<I", 36), b"WAVE",
            b"fmt ", struct.pack("<IHHIIHH", 16, 1, 1, 8000, 16000, 2, 16),
            b"data", struct.pack("<I", 0),
        ])
        with pytest.raises(WavFormatError, match="empty data chunk"):
            decode_wav(header)

    def test_float32_wav(self):
        import struct

        samples = np.linspace(-1, 1, 64).astype("<f4")
        pcm = samples.tobytes()
        data = b"".join([
            b"RIFF", struct.pack("<I", 36 + len(pcm)), b"WAVE",
            b"fmt ", struct.pack("<IHHIIHH", 16, 3, 1, 16000, 64000, 4, 32),
            b"data", struct.pack("<I", len(pcm)), pcm,
        ])
        buf = decode_wav(data)
        assert np.allclose(buf.samples, samples.astype(np.float64))

    def test_skips_unknown_chunks(self):
        import struct

        data = pcm16_wav(np.ones(10) * 0.25, 8000)
        junk = b"LIST" + struct.pack("<I", 4) + b"info"
        with_junk = data[:12] + junk + data[12:]
        fixed = with_junk[:4] + struct.pack("<I", len(with_junk) - 8) + with_junk[8:]
        buf = decode_wav(fixed)
        assert len(buf) == 10


class TestResample:
    def test_identity(self):
        buf = sine(100, 500, 0.5, rate=16000)
        assert resample(buf, 16000) is buf

    def test_upsample_length(self):
        buf = sine(100, 1000, 0.5, rate=8000)
        out = resample(buf, 16000)
        assert abs(len(out) - 16000) <= 1
        assert out.sample_rate == 16000

    def test_spectral_peak_preserved(self):
        # independent oracle: discrete-Fourier peak location on both buffers
        buf = sine(100, 1000, 0.5, rate=8000)
        out = resample(buf, 16000)

        def peak_hz(b):
            spectrum = np.abs(np.fft.rfft(b.samples))
            return np.argmax(spectrum) * b.sample_rate / len(b)

        bin_hz = 16000 / len(out)
        assert abs(peak_hz(out) - peak_hz(buf)) <= bin_hz

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6))
    def test_down_up_roundtrip_correlates(self, k):
        rate = 16000
        # band-limited: content well below (rate/2)/4
        rng = np.random.default_rng(k)
        t = np.arange(8000) / rate
        x = sum(np.sin(2 * np.pi * f * t + rng.random())
                for f in rng.integers(50, rate // 8, size=3))
        x = x / np.max(np.abs(x))
        buf = AudioBuffer(x, rate)
        back = resample(resample(buf, rate // 2), rate)
        n = min(len(back), len(buf))
        corr = np.corrcoef(back.samples[:n], buf.samples[:n])[0, 1]
        assert corr > 0.99


class TestFraming:
    def test_spec_example(self):
        buf = AudioBuffer(np.zeros(16000), 16000)
        assert frame_signal(buf, 40, 10).frame_count == 97

    def test_short_buffer_no_frames(self):
        buf = AudioBuffer(np.zeros(100), 16000)
        assert frame_signal(buf, 40, 10).frame_count == 0

    def test_exact_window_one_frame(self):
        buf = AudioBuffer(np.zeros(640), 16000)
        assert frame_signal(buf, 40, 10).frame_count == 1

    def test_rejects_hop_above_window(self):
        buf = AudioBuffer(np.zeros(640), 16000)
        with pytest.raises(ValueError):
            frame_signal(buf, 10, 40)

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(0, 1_000_000),
        st.integers(1, 4000),
        st.integers(1, 4000),
    )
    def test_frame_count_formula(self, n, w, h):
        if w < h:
            w, h = h, w
        rate = 1000  # 1 sample per ms keeps window/hop in samples == ms
        buf = AudioBuffer(np.zeros(n), rate)
        series = frame_signal(buf, w, h)
        expected = 1 + (n - w) // h if n >= w else 0
        assert series.frame_count == expected


class TestRmsDb:
    def test_silence_epsilon_floor(self):
        assert rms_db(np.zeros(160)) == pytest.approx(-180.0, abs=0.1)

    def test_full_scale_square(self):
        buf = square(100, 100, 1.0, rate=16000)
        assert rms_db(buf.samples) == pytest.approx(0.0, abs=1e-6)

    def test_half_amplitude_sine(self):
        buf = sine(100, 1000, 0.5, rate=16000)  # whole periods: rms = 0.5/sqrt(2)
        assert rms_db(buf.samples) == pytest.approx(-9.03, abs=0.01)

    def test_empty_frame_rejected(self):
        with pytest.raises(ValueError):
            rms_db(np.array([]))


class TestRoundTrip:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_encode_decode_within_one_lsb(self, seed):
        rng = np.random.default_rng(seed)
        samples = rng.uniform(-1, 1, size=400)
        buf = AudioBuffer(samples, 16000)
        back = decode_wav(encode_wav(buf))
        assert back.sample_rate == 16000
        assert np.max(np.abs(back.samples - buf.samples)) <= 1.0 / 32768.0
