"""Segmental scoring: goodness-of-pronunciation and minimal-pair verdicts.

GOP here is the posterior-ratio form: the mean over a segment's frames of
ln p(expected) - ln p(best competitor). It is 0 exactly when the expected
phoneme wins every frame and goes negative as competitors take over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alignment import PhoneSegment
from .exercises import MinimalPairSpec
from .phones import PhoneInventory
from .posteriors import POSTERIOR_FLOOR, Posteriorgram


@dataclass(frozen=True)
class ScoringConfig:
    """GOP acceptance threshold, optionally stricter or looser per phoneme class."""

    gop_tau: float = -1.0
    gop_tau_by_class: dict[str, float] = field(default_factory=dict)
    unclear_margin: float = 0.1

    def tau_for(self, inventory: PhoneInventory, phone: int) -> float:
        return self.gop_tau_by_class.get(inventory.class_of(phone), self.gop_tau)


DEFAULT_SCORING = ScoringConfig()


@dataclass(frozen=True)
class GopScore:
    value: float  # natural-log units, <= 0
    segment: PhoneSegment


@dataclass(frozen=True)
class PhonemeVerdict:
    kind: str  # "correct" | "mispronounced" | "substituted"
    substituted_by: int | None
    gop: GopScore
    predicted_posterior: float


@dataclass(frozen=True)
class MinimalPairResult:
    spec: MinimalPairSpec
    target_mean: float
    contrast_mean: float
    winner: str  # "target" | "contrast" | "unclear"


def gop(ppg: Posteriorgram, segment: PhoneSegment) -> GopScore:
    """Mean log ratio of the expected phoneme's posterior to the framewise max."""
    logs = np.log(np.maximum(ppg.matrix[segment.start_frame : segment.end_frame + 1],
                             POSTERIOR_FLOOR))
    value = float(np.mean(logs[:, segment.expected] - logs.max(axis=1)))
    return GopScore(value, segment)


def verdict(segment: PhoneSegment, score: GopScore, tau: float = DEFAULT_SCORING.gop_tau) -> PhonemeVerdict:
    """Classify one segment: correct above tau, otherwise substituted when a
    different phoneme clearly won, mispronounced when nothing did."""
    if score.value >= tau:
        return PhonemeVerdict("correct", None, score, segment.predicted_mean_posterior)
    if (
        segment.predicted != segment.expected
        and segment.predicted_mean_posterior > segment.expected_mean_posterior
    ):
        return PhonemeVerdict("substituted", segment.predicted, score,
                              segment.predicted_mean_posterior)
    return PhonemeVerdict("mispronounced", None, score, segment.predicted_mean_posterior)


def minimal_pair(
    ppg: Posteriorgram,
    segment: PhoneSegment,
    spec: MinimalPairSpec,
    margin: float = DEFAULT_SCORING.unclear_margin,
) -> MinimalPairResult:
    """Compare mean posteriors of the scripted target and its contrast phoneme."""
    if spec.target != segment.expected:
        raise ValueError("minimal pair target must equal the segment's expected phoneme")
    window = ppg.matrix[segment.start_frame : segment.end_frame + 1]
    target_mean = float(np.mean(window[:, spec.target]))
    contrast_mean = float(np.mean(window[:, spec.contrast]))
    if abs(target_mean - contrast_mean) < margin:
        winner = "unclear"
    elif target_mean > contrast_mean:
        winner = "target"
    else:
        winner = "contrast"
    return MinimalPairResult(spec, target_mean, contrast_mean, winner)
