"""Assemble analysis output into the card deck the client renders.

Cards are a pure function of the analysis inputs: same inputs, byte-identical
serialization. Positive cards are emitted alongside the ones that need work.
Advice texts live in a data file keyed by advice_key so pedagogy stays out of
code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .alignment import AlignmentResult
from .exercises import ExerciseScript
from .prosody import PauseReport, SentenceStressVerdict, WordStressVerdict
from .scoring import MinimalPairResult, PhonemeVerdict
from .validation import ValidationReport

CARD_KINDS = ("segmental_word", "minimal_pair", "word_stress", "sentence_stress", "breath_groups")

# advice_key prefixes; segmental_word cards shorten to "segmental".
_KIND_KEY = {"segmental_word": "segmental"}


def _load_advice_table() -> dict[str, str]:
    with resources.files("capt.data").joinpath("advice.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)


_ADVICE = _load_advice_table()


def advice_text(advice_key: str) -> str:
    """Exact key, else the kind's default, else empty."""
    if advice_key in _ADVICE:
        return _ADVICE[advice_key]
    kind = advice_key.split(":", 1)[0]
    return _ADVICE.get(f"{kind}:default", "")


@dataclass(frozen=True)
class FeedbackCard:
    kind: str
    word_index: int | None
    status: str  # "good" | "needs_work"
    detail: dict[str, Any]
    advice_key: str


@dataclass(frozen=True)
class PhonemeRow:
    """One line of the per-word table: what was expected vs what was heard."""

    expected: str
    predicted: str
    start_ms: int
    end_ms: int
    expected_posterior: float
    predicted_posterior: float
    verdict: str
    substituted_by: str | None
    gop: float


@dataclass(frozen=True)
class WordAnalysis:
    word_index: int
    text: str
    phonemes: tuple[PhonemeRow, ...]


@dataclass(frozen=True)
class AnalysisResult:
    validation: ValidationReport
    words: tuple[WordAnalysis, ...]
    word_stress: tuple[WordStressVerdict, ...]
    sentence_stress: tuple[SentenceStressVerdict, ...]
    pauses: PauseReport
    cards: tuple[FeedbackCard, ...]


def build_feedback(
    validation: ValidationReport,
    alignment: AlignmentResult,
    verdicts: list[PhonemeVerdict],
    minimal_pairs: list[MinimalPairResult],
    word_stress_verdicts: list[WordStressVerdict],
    sentence_stress_verdicts: list[SentenceStressVerdict],
    pause_report: PauseReport,
    script: ExerciseScript,
) -> AnalysisResult:
    """Compose the full result: per-word tables plus the ordered card deck."""
    if not validation.overall:
        raise ValueError("feedback is only built for samples that passed validation")
    if len(verdicts) != len(alignment.segments):
        raise ValueError("need one verdict per aligned segment")

    inventory = script.inventory
    words: list[WordAnalysis] = []
    for w, word in enumerate(script.words):
        rows = []
        for segment, v in zip(alignment.segments, verdicts):
            if segment.word_index != w:
                continue
            rows.append(
                PhonemeRow(
                    expected=inventory.symbol_of(segment.expected),
                    predicted=inventory.symbol_of(segment.predicted),
                    start_ms=segment.start_ms,
                    end_ms=segment.end_ms,
                    expected_posterior=segment.expected_mean_posterior,
                    predicted_posterior=segment.predicted_mean_posterior,
                    verdict=v.kind,
                    substituted_by=(
                        inventory.symbol_of(v.substituted_by) if v.substituted_by is not None else None
                    ),
                    gop=v.gop.value,
                )
            )
        words.append(WordAnalysis(w, word.text, tuple(rows)))

    cards: list[FeedbackCard] = []

    for w, analysis in enumerate(words):
        wrong = [r for r in analysis.phonemes if r.verdict != "correct"]
        status = "needs_work" if wrong else "good"
        key = f"segmental:{wrong[0].expected}" if wrong else "segmental:good"
        cards.append(
            FeedbackCard(
                kind="segmental_word",
                word_index=w,
                status=status,
                detail={
                    "word": analysis.text,
                    "wrong_phonemes": [r.expected for r in wrong],
                    "advice": advice_text(key),
                },
                advice_key=key,
            )
        )

    for result in minimal_pairs:
        spec = result.spec
        target = inventory.symbol_of(spec.target)
        contrast = inventory.symbol_of(spec.contrast)
        good = result.winner == "target"
        key = "minimal_pair:good" if good else f"minimal_pair:{target}~{contrast}"
        cards.append(
            FeedbackCard(
                kind="minimal_pair",
                word_index=spec.word_index,
                status="good" if good else "needs_work",
                detail={
                    "target": target,
                    "contrast": contrast,
                    "target_mean": result.target_mean,
                    "contrast_mean": result.contrast_mean,
                    "winner": result.winner,
                    "advice": advice_text(key),
                },
                advice_key=key,
            )
        )

    for v in word_stress_verdicts:
        key = "word_stress:good" if v.ok else "word_stress:misplaced"
        cards.append(
            FeedbackCard(
                kind="word_stress",
                word_index=v.word_index,
                status="good" if v.ok else "needs_work",
                detail={
                    "word": script.words[v.word_index].text,
                    "detected_syllable": v.detected_syllable,
                    "expected_syllable": v.expected_syllable,
                    "advice": advice_text(key),
                },
                advice_key=key,
            )
        )

    if sentence_stress_verdicts:
        missed = [v.word_index for v in sentence_stress_verdicts if v.expected and not v.detected]
        key = "sentence_stress:good" if not missed else "sentence_stress:missed"
        cards.append(
            FeedbackCard(
                kind="sentence_stress",
                word_index=None,
                status="good" if not missed else "needs_work",
                detail={
                    "expected_words": sorted(
                        v.word_index for v in sentence_stress_verdicts if v.expected
                    ),
                    "detected_words": sorted(
                        v.word_index for v in sentence_stress_verdicts if v.detected
                    ),
                    "missed_words": missed,
                    "advice": advice_text(key),
                },
                advice_key=key,
            )
        )

    missed_boundaries = [m.after_word_index for m in pause_report.boundary_matches if not m.matched]
    if missed_boundaries:
        key = "breath_groups:missed"
    elif pause_report.spurious_pauses:
        key = "breath_groups:spurious"
    else:
        key = "breath_groups:good"
    cards.append(
        FeedbackCard(
            kind="breath_groups",
            word_index=None,
            status="good" if key == "breath_groups:good" else "needs_work",
            detail={
                "missed_boundaries": missed_boundaries,
                "spurious_pauses": list(pause_report.spurious_pauses),
                "detected_groups": [list(g) for g in pause_report.detected_groups],
                "advice": advice_text(key),
            },
            advice_key=key,
        )
    )

    return AnalysisResult(
        validation=validation,
        words=tuple(words),
        word_stress=tuple(word_stress_verdicts),
        sentence_stress=tuple(sentence_stress_verdicts),
        pauses=pause_report,
        cards=tuple(cards),
    )
