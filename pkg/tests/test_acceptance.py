"""Acceptance suite: every primary criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Each criterion is implemented at its stated tolerance; nothing is
deferred to calibration.
"""

import json
import threading
import time
from pathlib import Path

import numpy as np
import pytest

from capt.alignment import forced_align, free_decode, levenshtein
from capt.audio import encode_wav
from capt.exercises import flatten_expected, load_exercise_catalog
from capt.phones import DEFAULT_INVENTORY as INV
from capt.posteriors import demo_provide, synth_posteriorgram
from capt.prosody import detect_pauses_and_groups, syllable_prominence, word_stress, yin_f0
from capt.scoring import gop, verdict
from capt.signals import concat, silence, sine
from capt.validation import validate

from conftest import (
    brute_force_alignment_score,
    idx,
    make_exercise,
    noise_segment,
    random_expected,
    random_posteriorgram,
    voiced_segment,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def criterion(name, body):
    try:
        body()
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def test_alignment_oracle_equivalence():
    def body():
        rng = np.random.default_rng(20240601)
        extra_cap = {1: 20, 2: 12, 3: 8, 4: 6, 5: 5}
        started = time.monotonic()
        for _ in range(200):
            n = int(rng.integers(1, 6))
            frames = 2 * n + int(rng.integers(0, extra_cap[n] + 1))
            assert frames <= 30
            expected = random_expected(rng, n)
            ppg = random_posteriorgram(rng, frames)
            got = forced_align(ppg, expected).total_log_score
            oracle = brute_force_alignment_score(ppg, expected)
            assert got == oracle, f"score {got!r} != enumeration optimum {oracle!r}"
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"took {elapsed:.1f} s"

    criterion("alignment oracle equivalence (200 cases, exact, <10 s)", body)


def test_synthesis_round_trip():
    def body():
        rng = np.random.default_rng(7771)
        hop = 20
        for _ in range(100):
            count = int(rng.integers(1, 7))
            symbols, prev = [], None
            while len(symbols) < count:
                s = INV.symbol_of(int(rng.integers(1, len(INV))))
                if s != prev:
                    symbols.append(s)
                    prev = s
            word_breaks = [True] + [bool(rng.random() < 0.3) for _ in symbols[1:]]
            lead = int(rng.integers(0, 4)) * hop
            segments, flat, t = [], [], float(lead)
            word = -1
            for s, brk in zip(symbols, word_breaks):
                if brk:
                    word += 1
                    if word > 0 and rng.random() < 0.5:
                        t += float(rng.integers(1, 6)) * hop  # silence gap at boundary
                duration = float(rng.integers(2, 7)) * hop
                segments.append((s, t, t + duration))
                flat.append((idx(s), word, brk))
                t += duration
            trail = int(rng.integers(0, 4)) * hop
            ppg = synth_posteriorgram(segments, hop_ms=hop, peak=0.9, total_ms=t + trail)

            from capt.exercises import FlatPhone

            expected = [FlatPhone(*f) for f in flat]
            result = forced_align(ppg, expected)
            assert len(result.segments) == len(segments)
            for seg, (s, a, b) in zip(result.segments, segments):
                assert seg.start_frame == int(a // hop), (seg, s, a, b)
                assert seg.end_frame == int(b // hop) - 1, (seg, s, a, b)
                assert gop(ppg, seg).value == 0.0

    criterion("synthesis round-trip (100 cases, exact boundaries, gop 0)", body)


def test_pitch_tracking():
    def body():
        for freq in np.linspace(100.0, 400.0, 20):
            track = yin_f0(sine(float(freq), 500, 0.6))
            voiced = track.voiced
            assert voiced.any(), f"{freq:.0f} Hz: nothing voiced"
            median = float(np.median(track.f0_hz[voiced]))
            relative = abs(median - freq) / freq
            assert relative <= 0.02, f"{freq:.0f} Hz off by {relative:.1%}"
        noise_track = yin_f0(noise_segment(1000, -12.0, seed=42))
        assert (~noise_track.voiced).mean() >= 0.90
        silent_track = yin_f0(silence(1000))
        assert not silent_track.voiced.any()

    criterion("pitch: 20 tones within 2%, noise >=90% unvoiced, silence unvoiced", body)


def _ten_phoneme_exercise():
    return make_exercise(
        id="accept-10",
        text="matcha tea please",
        words=[
            {"text": "matcha", "phonemes": ["M", "AE", "CH", "AH"],
             "syllables": [[0, 1], [2, 3]], "primary_stress": 0, "content_word": True},
            {"text": "tea", "phonemes": ["T", "IY"], "syllables": [[0, 1]],
             "primary_stress": 0, "content_word": True},
            {"text": "please", "phonemes": ["P", "L", "IY", "Z"], "syllables": [[0, 3]],
             "primary_stress": 0, "content_word": True},
        ],
        sentence_stress_words=[2],
        breath_groups=[[0, 1], [2, 2]],
        minimal_pairs=[{"word_index": 0, "phoneme_index": 1, "target": "AE", "contrast": "AH"}],
    )


def test_validation_gate():
    def body():
        script = _ten_phoneme_exercise()
        assert len(flatten_expected(script)) == 10

        clip = sine(220, 100, 0.5)
        report = validate(clip, demo_provide(clip, script), script)
        assert report.failed_code == "duration", report

        quiet = silence(2500)
        report = validate(quiet, demo_provide(quiet, script), script)
        assert report.failed_code == "voicing", report

        spoken = concat(silence(200), voiced_segment(220, 1800, -15.0), silence(200))
        other = ["R", "UW", "G", "OW", "NG", "SH", "OY", "W", "EH", "JH"]
        span = spoken.duration_ms / len(other)
        wrong_ppg = synth_posteriorgram(
            [(s, i * span, (i + 1) * span) for i, s in enumerate(other)],
            total_ms=spoken.duration_ms)
        expected = [fp.phone for fp in flatten_expected(script)]
        per = levenshtein(free_decode(wrong_ppg), expected) / len(expected)
        assert per > 0.6, f"constructed PER {per} not above the gate"
        report = validate(spoken, wrong_ppg, script)
        assert report.failed_code == "proximity", report

        good = concat(silence(200), voiced_segment(250, 220, -10.0),
                      noise_segment(120, -25.0, 1), voiced_segment(190, 140, -19.0),
                      noise_segment(100, -26.0, 2), voiced_segment(230, 200, -13.0),
                      noise_segment(100, -26.0, 3), voiced_segment(140, 120, -22.0),
                      voiced_segment(260, 260, -8.0), noise_segment(120, -24.0, 4),
                      silence(200))
        report = validate(good, demo_provide(good, script), script)
        assert report.overall and report.failed_code is None, report

    criterion("validation gate: duration / voicing / proximity / accept", body)


def test_scoring_hand_cases():
    def body():
        from conftest import INV as _inv  # noqa: F401  (keep import surface local)
        from test_scoring import constant_row_ppg, segment_over

        one_hot = synth_posteriorgram([("AE", 0, 100)], peak=1.0)
        assert gop(one_hot, segment_over(one_hot, "AE")).value == pytest.approx(0.0, abs=1e-4)

        competitor = constant_row_ppg(5, {"AE": 0.2, "AH": 0.7})
        seg = segment_over(competitor, "AE")
        score = gop(competitor, seg)
        assert score.value == pytest.approx(-1.2528, abs=1e-4)

        kinds = []
        for tau in np.linspace(-3.0, 0.0, 61):
            kinds.append(verdict(seg, score, tau=float(tau)).kind)
        first_not_correct = next((i for i, k in enumerate(kinds) if k != "correct"), len(kinds))
        assert all(k == "correct" for k in kinds[:first_not_correct])
        assert all(k != "correct" for k in kinds[first_not_correct:])

    criterion("scoring: gop hand values to 1e-4, verdict monotone in tau", body)


def test_prosody_stress_and_pauses():
    def body():
        from capt.exercises import parse_exercise

        script = parse_exercise({
            "id": "accept-stress", "text": "naida",
            "words": [{"text": "naida", "phonemes": ["AA", "IY"],
                       "syllables": [[0, 0], [1, 1]], "primary_stress": 0,
                       "content_word": True}],
        })
        ppg = synth_posteriorgram([("AA", 200, 400), ("IY", 400, 520)], total_ms=720)
        alignment = forced_align(ppg, flatten_expected(script))
        audio = concat(silence(200), voiced_segment(250, 200, -10.0),
                       voiced_segment(180, 120, -20.0), silence(200))
        prominences = syllable_prominence(alignment, yin_f0(audio), script)
        v = word_stress(0, script.words[0], prominences)
        assert v.detected_syllable == 0 and v.ok

        from capt.exercises import parse_exercise as pe

        two_word = pe({
            "id": "accept-pause", "text": "aa ee",
            "words": [{"text": "aa", "phonemes": ["AA"], "syllables": [[0, 0]],
                       "primary_stress": 0, "content_word": True},
                      {"text": "ee", "phonemes": ["IY"], "syllables": [[0, 0]],
                       "primary_stress": 0, "content_word": True}],
            "breath_groups": [[0, 0], [1, 1]],
        })
        with_gap = synth_posteriorgram([("AA", 200, 500), ("IY", 900, 1200)], total_ms=1400)
        report = detect_pauses_and_groups(
            forced_align(with_gap, flatten_expected(two_word)), two_word)
        assert len(report.pauses) == 1 and report.boundary_matches[0].matched

        short_gap = synth_posteriorgram([("AA", 200, 500), ("IY", 600, 900)], total_ms=1100)
        report = detect_pauses_and_groups(
            forced_align(short_gap, flatten_expected(two_word)), two_word)
        assert report.pauses == () and not report.boundary_matches[0].matched

    criterion("prosody: stressed syllable detected, 400 ms pause matched, 100 ms ignored", body)


def test_end_to_end_golden(tmp_path):
    def body():
        from capt.cli import main

        golden = (FIXTURES / "golden" / "ex-002.analysis.json").read_bytes()
        outputs = []
        for run in range(2):
            out = tmp_path / f"run{run}.json"
            status = main([
                "analyze",
                "--exercise", str(FIXTURES / "ex-002.exercise.json"),
                "--audio", str(FIXTURES / "ex-002.wav"),
                "--ppg", str(FIXTURES / "ex-002.ppg.json"),
                "--out", str(out),
            ])
            assert status == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == golden, "first run differs from committed golden"
        assert outputs[1] == golden, "second run not byte-identical"

    criterion("end-to-end golden: cli_analyze byte-identical twice", body)


def test_service_request_matrix(tmp_path):
    def body():
        import httpx
        import uvicorn

        from capt.config import ProviderConfig, ServiceConfig
        from capt.service import create_app

        config = ServiceConfig(
            catalog_path=str(FIXTURES / "catalog.json"),
            attempts_dir=str(tmp_path / "attempts"),
            provider=ProviderConfig(kind="demo"),
        )
        app = create_app(config)
        server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0,
                                               log_level="warning"))
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                raise TimeoutError("gateway did not start")
            time.sleep(0.02)
        port = server.servers[0].sockets[0].getsockname()[1]
        base = f"http://127.0.0.1:{port}"
        try:
            wav = (FIXTURES / "ex-001.wav").read_bytes()

            listing = httpx.get(f"{base}/v1/exercises")
            assert listing.status_code == 200
            assert len(listing.json()["exercises"]) == 2

            ok = httpx.post(f"{base}/v1/attempts", data={"exercise_id": "ex-001"},
                            files={"audio": ("a.wav", wav, "audio/wav")})
            assert ok.status_code == 200, ok.text
            attempt_id = ok.json()["attempt_id"]

            bad_audio = httpx.post(f"{base}/v1/attempts", data={"exercise_id": "ex-001"},
                                   files={"audio": ("a.wav", b"not audio", "audio/wav")})
            assert bad_audio.status_code == 400

            missing = httpx.post(f"{base}/v1/attempts", data={"exercise_id": "nope"},
                                 files={"audio": ("a.wav", wav, "audio/wav")})
            assert missing.status_code == 404

            short = encode_wav(sine(220, 100, 0.5))
            rejected = httpx.post(f"{base}/v1/attempts", data={"exercise_id": "ex-001"},
                                  files={"audio": ("a.wav", short, "audio/wav")})
            assert rejected.status_code == 422
            assert rejected.json()["validation"]["failed_code"] == "duration"

            stored = httpx.get(f"{base}/v1/attempts/{attempt_id}")
            assert stored.status_code == 200
            assert stored.json()["result"] == ok.json()["analysis"]
        finally:
            server.should_exit = True
            thread.join(timeout=10)

    criterion("service matrix 200/400/404/422 + attempt GET round-trip", body)
