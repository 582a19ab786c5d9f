#!/usr/bin/env python3
"""Regenerate the committed fixtures: catalog, recordings, posteriorgrams, goldens.

Fixture recordings are synthetic "spoken" audio: sawtooth vowels and seeded
noise consonants following a millisecond plan. The same plan drives the
fixture posteriorgram, so alignment recovers the planned timings and the
goldens freeze the full pipeline output. Run from the repository root:

    python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from capt.audio import encode_wav  # noqa: E402
from capt.cli import main as cli_main  # noqa: E402
from capt.posteriors import store_ppg, synth_posteriorgram  # noqa: E402
from capt.signals import (  # noqa: E402
    SAWTOOTH_CREST,
    concat,
    sawtooth,
    scale_for_rms_db,
    silence,
    white_noise,
)

FIXTURES = ROOT / "fixtures"

CATALOG = {
    "exercises": [
        {
            "id": "ex-001",
            "text": "repeat after me",
            "words": [
                {"text": "repeat", "phonemes": ["R", "IH", "P", "IY", "T"],
                 "syllables": [[0, 1], [2, 4]], "primary_stress": 1, "content_word": True},
                {"text": "after", "phonemes": ["AE", "F", "T", "ER"],
                 "syllables": [[0, 1], [2, 3]], "primary_stress": 0, "content_word": True},
                {"text": "me", "phonemes": ["M", "IY"],
                 "syllables": [[0, 1]], "primary_stress": 0, "content_word": False},
            ],
            "sentence_stress_words": [0],
            "breath_groups": [[0, 2]],
            "minimal_pairs": [
                {"word_index": 1, "phoneme_index": 0, "target": "AE", "contrast": "AH"}
            ],
            "reference_audio": ["ref/ex-001-a.wav"],
        },
        {
            "id": "ex-002",
            "text": "matcha tea, please",
            "words": [
                {"text": "matcha", "phonemes": ["M", "AE", "CH", "AH"],
                 "syllables": [[0, 1], [2, 3]], "primary_stress": 0, "content_word": True},
                {"text": "tea", "phonemes": ["T", "IY"],
                 "syllables": [[0, 1]], "primary_stress": 0, "content_word": True},
                {"text": "please", "phonemes": ["P", "L", "IY", "Z"],
                 "syllables": [[0, 3]], "primary_stress": 0, "content_word": True},
            ],
            "sentence_stress_words": [2],
            "breath_groups": [[0, 1], [2, 2]],
            "minimal_pairs": [
                {"word_index": 0, "phoneme_index": 1, "target": "AE", "contrast": "AH"}
            ],
            "reference_audio": ["ref/ex-002-a.wav"],
        },
    ]
}

# (phoneme, kind, f0_hz, level_db, duration_ms); "gap" inserts scripted silence.
PLAN_EX001 = [
    ("R", "noise", 0, -28, 120),
    ("IH", "voiced", 200, -18, 120),
    ("P", "noise", 0, -30, 120),
    ("IY", "voiced", 260, -10, 120),
    ("T", "noise", 0, -30, 120),
    ("AE", "voiced", 250, -10, 120),
    ("F", "noise", 0, -28, 120),
    ("T", "noise", 0, -30, 120),
    ("ER", "voiced", 180, -20, 120),
    ("M", "noise", 0, -28, 120),
    ("IY", "voiced", 210, -17, 120),
]

PLAN_EX002 = [
    ("M", "noise", 0, -28, 100),
    ("AE", "voiced", 250, -10, 220),
    ("CH", "noise", 0, -25, 120),
    ("AH", "voiced", 190, -19, 140),
    ("T", "noise", 0, -26, 100),
    ("IY", "voiced", 230, -13, 200),
    (None, "gap", 0, 0, 400),
    ("P", "noise", 0, -26, 100),
    ("L", "voiced", 140, -22, 120),
    ("IY", "voiced", 260, -8, 260),
    ("Z", "noise", 0, -24, 120),
]

PAD_MS = {"ex-001": 200, "ex-002": 240}


def render_plan(plan, pad_ms):
    parts = [silence(pad_ms)]
    segments = []
    t = float(pad_ms)
    for seed, (phoneme, kind, f0, level_db, duration) in enumerate(plan):
        if kind == "voiced":
            parts.append(sawtooth(f0, duration, scale_for_rms_db(level_db, SAWTOOTH_CREST)))
        elif kind == "noise":
            amplitude = (10.0 ** (level_db / 20.0)) * np.sqrt(3.0)
            parts.append(white_noise(duration, amplitude, seed=seed))
        else:
            parts.append(silence(duration))
        if phoneme is not None:
            segments.append((phoneme, t, t + duration))
        t += duration
    parts.append(silence(pad_ms))
    return concat(*parts), segments, t + pad_ms


def single_exercise_file(entry, path):
    path.write_text(json.dumps(entry, indent=2) + "\n", encoding="utf-8")


def main() -> int:
    FIXTURES.mkdir(exist_ok=True)
    (FIXTURES / "golden").mkdir(exist_ok=True)

    (FIXTURES / "catalog.json").write_text(
        json.dumps(CATALOG, indent=2) + "\n", encoding="utf-8")

    for entry, plan in ((CATALOG["exercises"][0], PLAN_EX001),
                        (CATALOG["exercises"][1], PLAN_EX002)):
        exercise_id = entry["id"]
        audio, segments, total_ms = render_plan(plan, PAD_MS[exercise_id])
        (FIXTURES / f"{exercise_id}.wav").write_bytes(encode_wav(audio))
        ppg = synth_posteriorgram(segments, hop_ms=20, peak=0.9, total_ms=total_ms)
        store_ppg(ppg, FIXTURES / f"{exercise_id}.ppg.json")
        single_exercise_file(entry, FIXTURES / f"{exercise_id}.exercise.json")
        status = cli_main([
            "analyze",
            "--exercise", str(FIXTURES / f"{exercise_id}.exercise.json"),
            "--audio", str(FIXTURES / f"{exercise_id}.wav"),
            "--ppg", str(FIXTURES / f"{exercise_id}.ppg.json"),
            "--out", str(FIXTURES / "golden" / f"{exercise_id}.analysis.json"),
        ])
        if status != 0:
            print(f"pipeline failed for {exercise_id} (exit {status})", file=sys.stderr)
            return 1
        print(f"{exercise_id}: wav {total_ms:.0f} ms, ppg {ppg.frame_count} frames, golden written")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
