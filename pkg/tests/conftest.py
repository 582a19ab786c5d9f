"""Shared test helpers: signal shorthands, script factories, alignment oracle."""

from __future__ import annotations

import numpy as np
import pytest

from capt.exercises import ExerciseScript, FlatPhone, parse_exercise
from capt.phones import DEFAULT_INVENTORY
from capt.posteriors import POSTERIOR_FLOOR, Posteriorgram
from capt.alignment import MIN_PHONE_FRAMES, MIN_SIL_FRAMES
from capt.signals import SAWTOOTH_CREST, sawtooth, scale_for_rms_db, white_noise

INV = DEFAULT_INVENTORY


def idx(symbol: str) -> int:
    return INV.index_of(symbol)


def flat(*specs: tuple[str, int, bool]) -> list[FlatPhone]:
    return [FlatPhone(idx(s), w, b) for s, w, b in specs]


def voiced_segment(freq_hz: float, duration_ms: float, level_db: float):
    return sawtooth(freq_hz, duration_ms, scale_for_rms_db(level_db, SAWTOOTH_CREST))


def noise_segment(duration_ms: float, level_db: float, seed: int = 0):
    amplitude = (10.0 ** (level_db / 20.0)) * np.sqrt(3.0)
    return white_noise(duration_ms, amplitude, seed=seed)


def random_posteriorgram(rng: np.random.Generator, frames: int,
                         hop_ms: int = 20) -> Posteriorgram:
    matrix = rng.random((frames, len(INV)))
    matrix /= matrix.sum(axis=1, keepdims=True)
    return Posteriorgram(matrix, INV, hop_ms)


def random_expected(rng: np.random.Generator, count: int) -> list[FlatPhone]:
    out = []
    word = 0
    for j in range(count):
        start = j == 0 or rng.random() < 0.4
        if start and j > 0:
            word += 1
        out.append(FlatPhone(int(rng.integers(1, len(INV))), word, start))
    return out


def brute_force_alignment_score(ppg: Posteriorgram, expected: list[FlatPhone]) -> float:
    """Exhaustively enumerate every legal segmentation and return the best score.

    Scores accumulate frame by frame in time order, the same float association
    the Viterbi pass uses, so the optimum matches it bit-for-bit.
    """
    logp = np.log(np.maximum(ppg.matrix, POSTERIOR_FLOOR)).tolist()
    total = ppg.frame_count
    sil = ppg.inventory.silence_index
    slots: list[tuple[int, int, bool]] = []
    for j, fp in enumerate(expected):
        if fp.word_start:
            slots.append((sil, MIN_SIL_FRAMES, True))
        slots.append((fp.phone, MIN_PHONE_FRAMES, False))
    slots.append((sil, MIN_SIL_FRAMES, True))
    required_after = [0] * (len(slots) + 1)
    for i in range(len(slots) - 1, -1, -1):
        phone, min_d, optional = slots[i]
        required_after[i] = required_after[i + 1] + (0 if optional else min_d)

    best = -np.inf

    def recurse(slot_index: int, t: int, score: float) -> None:
        nonlocal best
        if slot_index == len(slots):
            if t == total and score > best:
                best = score
            return
        phone, min_d, optional = slots[slot_index]
        if optional:
            recurse(slot_index + 1, t, score)
        max_d = total - t - required_after[slot_index + 1]
        running = score
        for d in range(1, max_d + 1):
            running = running + logp[t + d - 1][phone]
            if d >= min_d:
                recurse(slot_index + 1, t + d, running)

    recurse(0, 0, 0.0)
    return best


def make_exercise(**overrides) -> ExerciseScript:
    """A small three-word exercise with one pair, stress marks and one group."""
    raw = {
        "id": "ex-test",
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
        "reference_audio": ["ref/ex-test-a.wav"],
    }
    raw.update(overrides)
    return parse_exercise(raw)


@pytest.fixture
def exercise() -> ExerciseScript:
    return make_exercise()
