"""Supra-segmental analysis: pitch, syllable and word prominence, pauses.

Pitch tracking runs on a 10 ms grid, finer than the 20 ms posteriorgram;
alignment timings are mapped onto it by flooring milliseconds. Prominence is
a weighted combination of z-scored pitch, energy and vowel duration, with the
z-scores taken across the syllables of a word (word stress) or across the
words of the utterance (sentence stress).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alignment import AlignmentResult, PhoneSegment
from .audio import AudioBuffer, frame_signal, rms_db
from .exercises import ExerciseScript, WordScript

SILENT_DB = -180.0


@dataclass(frozen=True)
class ProsodyConfig:
    """Knobs for pitch tracking, prominence weighting and pause detection."""

    window_ms: float = 40.0
    hop_ms: float = 10.0
    fmin_hz: float = 60.0
    fmax_hz: float = 500.0
    voicing_threshold: float = 0.2
    f0_weight: float = 0.4
    energy_weight: float = 0.3
    duration_weight: float = 0.3
    min_pause_ms: float = 250.0


DEFAULT_PROSODY = ProsodyConfig()


@dataclass(frozen=True)
class PitchTrack:
    """Per 10 ms frame: f0 (NaN when unvoiced), aperiodicity in [0,1], RMS dBFS."""

    f0_hz: np.ndarray
    aperiodicity: np.ndarray
    energy_db: np.ndarray
    hop_ms: float = 10.0

    @property
    def frame_count(self) -> int:
        return int(self.f0_hz.size)

    @property
    def voiced(self) -> np.ndarray:
        return ~np.isnan(self.f0_hz)


def yin_f0(audio: AudioBuffer, config: ProsodyConfig = DEFAULT_PROSODY) -> PitchTrack:
    """Difference-function pitch tracker with cumulative-mean normalization.

    Each 40 ms window is scored by the cumulative-mean-normalized difference
    function; the first lag dipping under the voicing threshold is refined by
    descending to its local minimum and parabolic interpolation. Frames where
    no lag in [sr/fmax, sr/fmin] dips under the threshold are unvoiced, and
    the reported aperiodicity is the best (lowest) normalized difference seen.
    """
    sr = audio.sample_rate
    series = frame_signal(audio, config.window_ms, config.hop_ms)
    n = series.frame_count
    f0 = np.full(n, np.nan)
    aperiodicity = np.ones(n)
    energy = np.full(n, SILENT_DB)

    window = series.frames.shape[1] if n else 0
    integration = window // 2
    tau_min = max(2, int(sr / config.fmax_hz))
    tau_max = min(int(sr / config.fmin_hz), window - integration - 1)

    for i in range(n):
        x = series.frames[i]
        energy[i] = rms_db(x)
        if tau_max <= tau_min:
            continue

        head = x[:integration]
        head_energy = float(np.dot(head, head))
        squared = np.concatenate(([0.0], np.cumsum(x * x)))
        lag_energy = squared[1 + np.arange(tau_max + 1) + integration - 1] - squared[
            1 + np.arange(tau_max + 1) - 1
        ]
        cross = np.correlate(x, head, mode="valid")[: tau_max + 1]
        diff = head_energy + lag_energy - 2.0 * cross
        diff[diff < 0.0] = 0.0  # numerical jitter on perfectly periodic input

        cumulative = np.cumsum(diff[1:])
        cmnd = np.ones(tau_max + 1)
        nonzero = cumulative > 0.0
        taus = np.arange(1, tau_max + 1)
        cmnd[1:][nonzero] = diff[1:][nonzero] * taus[nonzero] / cumulative[nonzero]

        search = cmnd[tau_min : tau_max + 1]
        aperiodicity[i] = float(np.clip(search.min(initial=1.0), 0.0, 1.0))
        below = np.flatnonzero(search < config.voicing_threshold)
        if below.size == 0:
            continue
        tau = tau_min + int(below[0])
        while tau + 1 <= tau_max and cmnd[tau + 1] < cmnd[tau]:
            tau += 1
        aperiodicity[i] = float(np.clip(cmnd[tau], 0.0, 1.0))

        refined = float(tau)
        if tau_min < tau < tau_max:
            left, mid, right = cmnd[tau - 1], cmnd[tau], cmnd[tau + 1]
            denom = left - 2.0 * mid + right
            if denom > 0.0:
                refined = tau + 0.5 * (left - right) / denom
        f0[i] = float(np.clip(sr / refined, config.fmin_hz, config.fmax_hz))

    f0.setflags(write=False)
    aperiodicity.setflags(write=False)
    energy.setflags(write=False)
    return PitchTrack(f0, aperiodicity, energy, config.hop_ms)


@dataclass(frozen=True)
class SyllableProminence:
    word_index: int
    syllable_index: int
    mean_f0: float
    mean_energy_db: float
    vowel_duration_ms: float
    score: float


@dataclass(frozen=True)
class WordStressVerdict:
    word_index: int
    detected_syllable: int
    expected_syllable: int
    ok: bool


@dataclass(frozen=True)
class SentenceStressVerdict:
    word_index: int
    score: float
    expected: bool
    detected: bool
    ok: bool


@dataclass(frozen=True)
class Pause:
    start_ms: int
    end_ms: int
    after_word_index: int


@dataclass(frozen=True)
class BoundaryMatch:
    after_word_index: int
    matched: bool


@dataclass(frozen=True)
class PauseReport:
    pauses: tuple[Pause, ...]
    detected_groups: tuple[tuple[int, int], ...]
    boundary_matches: tuple[BoundaryMatch, ...]
    spurious_pauses: tuple[int, ...]  # after-word indices of unscripted pauses

    @property
    def all_matched(self) -> bool:
        return all(m.matched for m in self.boundary_matches) and not self.spurious_pauses


def _track_frames(track: PitchTrack, start_ms: float, end_ms: float) -> np.ndarray:
    first = int(start_ms // track.hop_ms)
    last = int(end_ms // track.hop_ms)
    return np.arange(first, min(last, track.frame_count))


def _zscores(values: np.ndarray) -> np.ndarray:
    std = float(np.std(values))
    if std == 0.0:
        return np.zeros_like(values)
    return (values - np.mean(values)) / std


@dataclass
class _UnitFeatures:
    mean_f0: float
    mean_energy_db: float
    vowel_duration_ms: float


def _segment_features(
    segments: list[PhoneSegment],
    vowel_segments: list[PhoneSegment],
    track: PitchTrack,
    fallback_f0: float,
) -> _UnitFeatures:
    vowel_frames = (
        np.concatenate([_track_frames(track, s.start_ms, s.end_ms) for s in vowel_segments])
        if vowel_segments
        else np.empty(0, dtype=int)
    )
    voiced = vowel_frames[track.voiced[vowel_frames]] if vowel_frames.size else vowel_frames
    mean_f0 = float(np.mean(track.f0_hz[voiced])) if voiced.size else fallback_f0

    all_frames = (
        np.concatenate([_track_frames(track, s.start_ms, s.end_ms) for s in segments])
        if segments
        else np.empty(0, dtype=int)
    )
    mean_energy = float(np.mean(track.energy_db[all_frames])) if all_frames.size else SILENT_DB
    duration = float(sum(s.end_ms - s.start_ms for s in vowel_segments))
    return _UnitFeatures(mean_f0, mean_energy, duration)


def _word_fallback_f0(word_segments: list[PhoneSegment], track: PitchTrack) -> float:
    """Lowest voiced f0 inside the word; keeps unvoiced syllables from z-exploding."""
    frames = (
        np.concatenate([_track_frames(track, s.start_ms, s.end_ms) for s in word_segments])
        if word_segments
        else np.empty(0, dtype=int)
    )
    voiced = frames[track.voiced[frames]] if frames.size else frames
    return float(np.min(track.f0_hz[voiced])) if voiced.size else 0.0


def _combine(config: ProsodyConfig, feats: list[_UnitFeatures]) -> np.ndarray:
    z_f0 = _zscores(np.array([f.mean_f0 for f in feats]))
    z_energy = _zscores(np.array([f.mean_energy_db for f in feats]))
    z_duration = _zscores(np.array([f.vowel_duration_ms for f in feats]))
    return (
        config.f0_weight * z_f0
        + config.energy_weight * z_energy
        + config.duration_weight * z_duration
    )


def syllable_prominence(
    alignment: AlignmentResult,
    track: PitchTrack,
    script: ExerciseScript,
    config: ProsodyConfig = DEFAULT_PROSODY,
) -> list[SyllableProminence]:
    """Score each syllable of every multi-syllable word against its siblings."""
    inventory = script.inventory
    out: list[SyllableProminence] = []
    for w, word in enumerate(script.words):
        if word.syllable_count < 2:
            continue
        word_segments = [s for s in alignment.segments if s.word_index == w]
        fallback = _word_fallback_f0(word_segments, track)
        feats = []
        for first, last in word.syllables:
            syll_segments = word_segments[first : last + 1]
            vowels = [s for s in syll_segments if inventory.is_vowel(s.expected)]
            feats.append(_segment_features(syll_segments, vowels, track, fallback))
        scores = _combine(config, feats)
        for s, (feat, score) in enumerate(zip(feats, scores)):
            out.append(
                SyllableProminence(
                    word_index=w,
                    syllable_index=s,
                    mean_f0=feat.mean_f0,
                    mean_energy_db=feat.mean_energy_db,
                    vowel_duration_ms=feat.vowel_duration_ms,
                    score=float(score),
                )
            )
    return out


def word_stress(word_index: int, word: WordScript,
                prominences: list[SyllableProminence]) -> WordStressVerdict:
    """Pick the most prominent syllable (ties go earlier) and compare to script."""
    if word.syllable_count < 2:
        raise ValueError("word stress is only defined for words with 2+ syllables")
    mine = sorted(
        (p for p in prominences if p.word_index == word_index),
        key=lambda p: p.syllable_index,
    )
    if len(mine) != word.syllable_count:
        raise ValueError(f"expected {word.syllable_count} prominences for word {word_index}")
    detected = max(range(len(mine)), key=lambda s: (mine[s].score, -s))
    return WordStressVerdict(word_index, detected, word.primary_stress,
                             detected == word.primary_stress)


def sentence_stress(
    alignment: AlignmentResult,
    track: PitchTrack,
    script: ExerciseScript,
    config: ProsodyConfig = DEFAULT_PROSODY,
) -> list[SentenceStressVerdict]:
    """Top-k word prominence, k = number of scripted sentence-stress words."""
    inventory = script.inventory
    all_segments = list(alignment.segments)
    utterance_fallback = _word_fallback_f0(all_segments, track)
    feats = []
    for w in range(script.word_count):
        word_segments = [s for s in all_segments if s.word_index == w]
        vowels = [s for s in word_segments if inventory.is_vowel(s.expected)]
        feats.append(_segment_features(vowels, vowels, track, utterance_fallback))
    scores = _combine(config, feats)
    k = len(script.sentence_stress_words)
    order = sorted(range(script.word_count), key=lambda w: (-scores[w], w))
    detected_set = set(order[:k])
    verdicts = []
    for w in range(script.word_count):
        expected = w in script.sentence_stress_words
        detected = w in detected_set
        verdicts.append(
            SentenceStressVerdict(w, float(scores[w]), expected, detected,
                                  ok=detected if expected else True)
        )
    return verdicts


def detect_pauses_and_groups(
    alignment: AlignmentResult,
    script: ExerciseScript,
    config: ProsodyConfig = DEFAULT_PROSODY,
) -> PauseReport:
    """Silences >= min_pause_ms between words are pauses; word runs between them
    are the detected breath groups, compared against the scripted ones."""
    pauses = tuple(
        Pause(s.start_ms, s.end_ms, s.after_word)
        for s in alignment.silences
        if s.location == "between"
        and s.after_word is not None
        and (s.end_ms - s.start_ms) >= config.min_pause_ms
    )
    pause_boundaries = {p.after_word_index for p in pauses}

    groups: list[tuple[int, int]] = []
    start = 0
    for boundary in sorted(pause_boundaries):
        groups.append((start, boundary))
        start = boundary + 1
    groups.append((start, script.word_count - 1))

    expected_boundaries = [last for _, last in script.breath_groups[:-1]]
    matches = tuple(
        BoundaryMatch(b, b in pause_boundaries) for b in expected_boundaries
    )
    spurious = tuple(sorted(pause_boundaries - set(expected_boundaries)))
    return PauseReport(pauses, tuple(groups), matches, spurious)
