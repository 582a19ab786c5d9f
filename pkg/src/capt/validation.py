"""The three-gate check that a recording is a usable speech sample.

Checks run in a fixed order (duration, voicing, phonetic proximity) and stop
at the first failure; skipped checks are reported as not evaluated. Failures
are data for the client, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import free_decode, levenshtein
from .audio import AudioBuffer
from .exercises import ExerciseScript, flatten_expected
from .posteriors import Posteriorgram
from .prosody import DEFAULT_PROSODY, PitchTrack, ProsodyConfig, yin_f0


@dataclass(frozen=True)
class ValidationConfig:
    """Gate thresholds. Defaults bracket plausible learner speech generously."""

    min_phoneme_rate: float = 2.0   # phonemes per second
    max_phoneme_rate: float = 25.0
    energy_floor_db: float = -45.0
    min_voiced_fraction: float = 0.05
    min_voiced_frames: int = 10
    max_phoneme_error_rate: float = 0.6


DEFAULT_VALIDATION = ValidationConfig()


@dataclass(frozen=True)
class DurationCheck:
    phoneme_rate: float
    ok: bool


@dataclass(frozen=True)
class VoicingCheck:
    voiced_fraction: float
    voiced_frames: int
    ok: bool


@dataclass(frozen=True)
class ProximityCheck:
    phoneme_error_rate: float
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the gate; a None check was short-circuited, not run."""

    duration: DurationCheck | None
    voicing: VoicingCheck | None
    proximity: ProximityCheck | None
    overall: bool
    failed_code: str | None


def check_duration(expected_count: int, duration_ms: float,
                   config: ValidationConfig = DEFAULT_VALIDATION) -> DurationCheck:
    """Is the implied phoneme rate humanly plausible for this utterance?"""
    if expected_count < 1:
        raise ValueError("expected_count must be at least 1")
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    rate = expected_count / (duration_ms / 1000.0)
    return DurationCheck(rate, config.min_phoneme_rate <= rate <= config.max_phoneme_rate)


def check_voicing(audio: AudioBuffer,
                  config: ValidationConfig = DEFAULT_VALIDATION,
                  prosody_config: ProsodyConfig = DEFAULT_PROSODY,
                  track: PitchTrack | None = None) -> VoicingCheck:
    """Does the sample contain enough frames that are both pitched and audible?

    Reuses the prosody pitch tracker so the whole artifact shares one
    periodicity definition.
    """
    if track is None:
        track = yin_f0(audio, prosody_config)
    if track.frame_count == 0:
        return VoicingCheck(0.0, 0, False)
    voiced = track.voiced & (track.energy_db > config.energy_floor_db)
    count = int(voiced.sum())
    fraction = count / track.frame_count
    ok = fraction >= config.min_voiced_fraction and count >= config.min_voiced_frames
    return VoicingCheck(fraction, count, ok)


def check_proximity(ppg: Posteriorgram, expected: list[int],
                    config: ValidationConfig = DEFAULT_VALIDATION) -> ProximityCheck:
    """Is what was said close enough, by phoneme error rate, to what was scripted?"""
    if not expected:
        raise ValueError("expected phoneme list must be nonempty")
    decoded = free_decode(ppg)
    per = levenshtein(decoded, expected) / len(expected)
    return ProximityCheck(per, per <= config.max_phoneme_error_rate)


def validate(audio: AudioBuffer, ppg: Posteriorgram, script: ExerciseScript,
             config: ValidationConfig = DEFAULT_VALIDATION,
             prosody_config: ProsodyConfig = DEFAULT_PROSODY,
             track: PitchTrack | None = None) -> ValidationReport:
    """Run the three checks in order with short-circuit on first failure."""
    expected = [fp.phone for fp in flatten_expected(script)]

    duration = check_duration(len(expected), audio.duration_ms, config)
    if not duration.ok:
        return ValidationReport(duration, None, None, False, "duration")

    voicing = check_voicing(audio, config, prosody_config, track)
    if not voicing.ok:
        return ValidationReport(duration, voicing, None, False, "voicing")

    proximity = check_proximity(ppg, expected, config)
    if not proximity.ok:
        return ValidationReport(duration, voicing, proximity, False, "proximity")

    return ValidationReport(duration, voicing, proximity, True, None)
