"""End-to-end analysis: decode, validate, align, score, and build feedback.

This is the single code path behind both the HTTP service and the CLI, so
their outputs only ever differ in transport wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import forced_align
from .audio import INTERNAL_RATE, AudioBuffer, decode_wav, resample
from .config import ServiceConfig
from .exercises import ExerciseScript, flatten_expected
from .feedback import AnalysisResult, build_feedback
from .posteriors import Posteriorgram
from .prosody import (
    detect_pauses_and_groups,
    sentence_stress,
    syllable_prominence,
    word_stress,
    yin_f0,
)
from .scoring import gop, minimal_pair, verdict
from .validation import ValidationReport, validate


@dataclass(frozen=True)
class PipelineOutcome:
    """Either a full analysis or the validation report that stopped it."""

    validation: ValidationReport
    analysis: AnalysisResult | None

    @property
    def ok(self) -> bool:
        return self.analysis is not None


def ingest_wav(data: bytes) -> AudioBuffer:
    """Decode and bring any accepted WAV to the internal 16 kHz mono rate."""
    return resample(decode_wav(data), INTERNAL_RATE)


def run_pipeline(
    audio: AudioBuffer,
    ppg: Posteriorgram,
    script: ExerciseScript,
    config: ServiceConfig | None = None,
) -> PipelineOutcome:
    """Validate, then (if the gate passes) align, score and assemble feedback."""
    config = config or ServiceConfig()
    track = yin_f0(audio, config.prosody)
    report = validate(audio, ppg, script, config.validation, config.prosody, track)
    if not report.overall:
        return PipelineOutcome(report, None)

    expected = flatten_expected(script)
    alignment = forced_align(ppg, expected)

    inventory = script.inventory
    verdicts = []
    for segment in alignment.segments:
        score = gop(ppg, segment)
        verdicts.append(verdict(segment, score, config.scoring.tau_for(inventory, segment.expected)))

    segment_by_position = {}
    position = 0
    for w, word in enumerate(script.words):
        for p in range(len(word.phonemes)):
            segment_by_position[(w, p)] = alignment.segments[position]
            position += 1
    pair_results = [
        minimal_pair(ppg, segment_by_position[(spec.word_index, spec.phoneme_index)], spec,
                     config.scoring.unclear_margin)
        for spec in script.minimal_pairs
    ]

    prominences = syllable_prominence(alignment, track, script, config.prosody)
    stress_verdicts = [
        word_stress(w, word, prominences)
        for w, word in enumerate(script.words)
        if word.syllable_count >= 2
    ]
    sentence_verdicts = sentence_stress(alignment, track, script, config.prosody)
    pause_report = detect_pauses_and_groups(alignment, script, config.prosody)

    analysis = build_feedback(
        report, alignment, verdicts, pair_results, stress_verdicts,
        sentence_verdicts, pause_report, script,
    )
    return PipelineOutcome(report, analysis)
