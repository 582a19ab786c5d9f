"""JSON-ready dict views of the result types.

These dicts are the service's response schema and the CLI's file format, so
key order and float formatting must stay deterministic: identical inputs
serialize byte-identically via json.dumps(..., sort_keys=True).
"""

from __future__ import annotations

import json
from typing import Any

from .alignment import SilenceSpan
from .exercises import ExerciseScript
from .feedback import AnalysisResult, FeedbackCard
from .prosody import PauseReport
from .validation import ValidationReport


def validation_to_dict(report: ValidationReport) -> dict[str, Any]:
    return {
        "duration": None if report.duration is None else {
            "phoneme_rate": report.duration.phoneme_rate,
            "ok": report.duration.ok,
        },
        "voicing": None if report.voicing is None else {
            "voiced_fraction": report.voicing.voiced_fraction,
            "voiced_frames": report.voicing.voiced_frames,
            "ok": report.voicing.ok,
        },
        "proximity": None if report.proximity is None else {
            "phoneme_error_rate": report.proximity.phoneme_error_rate,
            "ok": report.proximity.ok,
        },
        "overall": report.overall,
        "failed_code": report.failed_code,
    }


def _card_to_dict(card: FeedbackCard) -> dict[str, Any]:
    return {
        "kind": card.kind,
        "word_index": card.word_index,
        "status": card.status,
        "detail": card.detail,
        "advice_key": card.advice_key,
    }


def _pauses_to_dict(report: PauseReport) -> dict[str, Any]:
    return {
        "pauses": [
            {"start_ms": p.start_ms, "end_ms": p.end_ms, "after_word_index": p.after_word_index}
            for p in report.pauses
        ],
        "detected_groups": [list(g) for g in report.detected_groups],
        "boundary_matches": [
            {"after_word_index": m.after_word_index, "matched": m.matched}
            for m in report.boundary_matches
        ],
        "spurious_pauses": list(report.spurious_pauses),
    }


def analysis_to_dict(result: AnalysisResult) -> dict[str, Any]:
    return {
        "validation": validation_to_dict(result.validation),
        "words": [
            {
                "word_index": w.word_index,
                "text": w.text,
                "phonemes": [
                    {
                        "expected": r.expected,
                        "predicted": r.predicted,
                        "start_ms": r.start_ms,
                        "end_ms": r.end_ms,
                        "expected_posterior": r.expected_posterior,
                        "predicted_posterior": r.predicted_posterior,
                        "verdict": r.verdict,
                        "substituted_by": r.substituted_by,
                        "gop": r.gop,
                    }
                    for r in w.phonemes
                ],
            }
            for w in result.words
        ],
        "prosody": {
            "word_stress": [
                {
                    "word_index": v.word_index,
                    "detected_syllable": v.detected_syllable,
                    "expected_syllable": v.expected_syllable,
                    "ok": v.ok,
                }
                for v in result.word_stress
            ],
            "sentence_stress": [
                {
                    "word_index": v.word_index,
                    "score": v.score,
                    "expected": v.expected,
                    "detected": v.detected,
                    "ok": v.ok,
                }
                for v in result.sentence_stress
            ],
            "pauses": _pauses_to_dict(result.pauses),
        },
        "cards": [_card_to_dict(c) for c in result.cards],
    }


def silences_to_list(silences: tuple[SilenceSpan, ...]) -> list[dict[str, Any]]:
    return [
        {
            "start_ms": s.start_ms,
            "end_ms": s.end_ms,
            "location": s.location,
            "after_word": s.after_word,
        }
        for s in silences
    ]


def exercise_summary(script: ExerciseScript) -> dict[str, Any]:
    return {"id": script.id, "text": script.text, "word_count": script.word_count}


def exercise_to_dict(script: ExerciseScript) -> dict[str, Any]:
    inventory = script.inventory
    return {
        "id": script.id,
        "text": script.text,
        "words": [
            {
                "text": w.text,
                "phonemes": [inventory.symbol_of(p) for p in w.phonemes],
                "syllables": [list(s) for s in w.syllables],
                "primary_stress": w.primary_stress,
                "content_word": w.content_word,
            }
            for w in script.words
        ],
        "sentence_stress_words": sorted(script.sentence_stress_words),
        "breath_groups": [list(g) for g in script.breath_groups],
        "minimal_pairs": [
            {
                "word_index": p.word_index,
                "phoneme_index": p.phoneme_index,
                "target": inventory.symbol_of(p.target),
                "contrast": inventory.symbol_of(p.contrast),
            }
            for p in script.minimal_pairs
        ],
        "reference_audio": list(script.reference_audio),
    }


def dumps_stable(payload: Any) -> str:
    """The one JSON formatting used for files and goldens."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
