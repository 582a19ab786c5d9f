"""Forced alignment and free phonetic decoding over posteriorgrams.

Alignment assigns every frame to one of the expected phonemes (or an optional
silence at utterance edges and word boundaries) so that the summed per-frame
log posterior is maximal. Free decoding reads out what was actually said,
frame by frame. Together they provide the per-phoneme timings, expected and
predicted labels, and posteriors the feedback layer reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exercises import FlatPhone
from .posteriors import POSTERIOR_FLOOR, Posteriorgram

# A phoneme must span at least two 20 ms frames; silences may be single-frame.
MIN_PHONE_FRAMES = 2
MIN_SIL_FRAMES = 1


class InfeasibleAlignmentError(ValueError):
    """Too few frames to give every expected phoneme its minimum duration."""


@dataclass(frozen=True)
class PhoneSegment:
    """One expected phoneme located in time, with its competing prediction."""

    expected: int
    word_index: int
    start_frame: int
    end_frame: int  # inclusive
    start_ms: int
    end_ms: int
    mean_log_posterior_expected: float
    expected_mean_posterior: float
    predicted: int
    predicted_mean_posterior: float


@dataclass(frozen=True)
class SilenceSpan:
    start_ms: int
    end_ms: int
    location: str  # "leading" | "trailing" | "between"
    after_word: int | None = None


@dataclass(frozen=True)
class AlignmentResult:
    segments: tuple[PhoneSegment, ...]
    silences: tuple[SilenceSpan, ...]
    total_log_score: float


@dataclass(frozen=True)
class _Slot:
    phone: int
    min_frames: int
    optional: bool
    expected_pos: int | None  # index into the flat expected sequence; None for SIL
    word_index: int | None
    sil_before_pos: int | None = None  # flat position this silence precedes; len(expected) = trailing


def _build_slots(expected: Sequence[FlatPhone], silence_index: int) -> list[_Slot]:
    slots: list[_Slot] = []
    for j, fp in enumerate(expected):
        if fp.word_start:
            slots.append(_Slot(silence_index, MIN_SIL_FRAMES, True, None, None, j))
        slots.append(_Slot(fp.phone, MIN_PHONE_FRAMES, False, j, fp.word_index))
    slots.append(_Slot(silence_index, MIN_SIL_FRAMES, True, None, None, len(expected)))
    return slots


def forced_align(ppg: Posteriorgram, expected: Sequence[FlatPhone]) -> AlignmentResult:
    """Viterbi pass over the expected phoneme sequence with optional silences.

    Optional silence states (min 1 frame) are allowed before the first
    phoneme, after the last, and at word boundaries; each phoneme state must
    hold for at least MIN_PHONE_FRAMES consecutive frames. Score ties are
    resolved toward the smallest total of segment start frames, which pushes
    every boundary as early as possible and makes results deterministic.
    """
    if not expected:
        raise ValueError("forced_align needs at least one expected phoneme")
    n_frames = ppg.frame_count
    if n_frames < MIN_PHONE_FRAMES * len(expected):
        raise InfeasibleAlignmentError(
            f"{n_frames} frames cannot host {len(expected)} phonemes "
            f"of {MIN_PHONE_FRAMES}+ frames each"
        )

    slots = _build_slots(expected, ppg.inventory.silence_index)
    logp = np.log(np.maximum(ppg.matrix, POSTERIOR_FLOOR))

    # Expand slots into substates: one per required frame, self-loop on the last.
    sub_slot: list[int] = []
    sub_pos: list[int] = []
    slot_first: list[int] = []
    slot_last: list[int] = []
    for i, slot in enumerate(slots):
        slot_first.append(len(sub_slot))
        for k in range(slot.min_frames):
            sub_slot.append(i)
            sub_pos.append(k)
        slot_last.append(len(sub_slot) - 1)
    n_sub = len(sub_slot)
    sub_phone = np.array([slots[i].phone for i in sub_slot])

    # Predecessor lists. Entering a slot's first substate is a "segment start":
    # the tie-break key charges the entry frame to it.
    preds: list[list[int]] = [[] for _ in range(n_sub)]
    entry: list[bool] = [False] * n_sub
    for s in range(n_sub):
        i, k = sub_slot[s], sub_pos[s]
        if k > 0:
            preds[s].append(s - 1)
        else:
            entry[s] = True
            j = i - 1
            while j >= 0:
                preds[s].append(slot_last[j])
                if not slots[j].optional:
                    break
                j -= 1
        if k == slots[i].min_frames - 1:
            preds[s].append(s)  # self-loop

    start_subs = [slot_first[0]]
    j = 0
    while slots[j].optional and j + 1 < len(slots):
        j += 1
        start_subs.append(slot_first[j])
        if not slots[j].optional:
            break
    end_subs = [slot_last[len(slots) - 1]]
    j = len(slots) - 1
    while slots[j].optional and j - 1 >= 0:
        j -= 1
        end_subs.append(slot_last[j])
        if not slots[j].optional:
            break

    neg_inf = -np.inf
    score = np.full((n_frames, n_sub), neg_inf)
    tie = np.full((n_frames, n_sub), np.inf)
    back = np.full((n_frames, n_sub), -1, dtype=np.int32)

    for s in start_subs:
        score[0, s] = logp[0, sub_phone[s]]
        tie[0, s] = 0.0

    for t in range(1, n_frames):
        prev_score = score[t - 1]
        prev_tie = tie[t - 1]
        for s in range(n_sub):
            best_score = neg_inf
            best_tie = np.inf
            best_p = -1
            charge = float(t) if entry[s] else 0.0
            for p in preds[s]:
                ps = prev_score[p]
                if ps == neg_inf:
                    continue
                pt = prev_tie[p] + charge
                if ps > best_score or (ps == best_score and pt < best_tie):
                    best_score, best_tie, best_p = ps, pt, p
            if best_p >= 0:
                score[t, s] = best_score + logp[t, sub_phone[s]]
                tie[t, s] = best_tie
                back[t, s] = best_p

    best_end = -1
    best_score = neg_inf
    best_tie = np.inf
    for s in end_subs:
        if score[n_frames - 1, s] > best_score or (
            score[n_frames - 1, s] == best_score and tie[n_frames - 1, s] < best_tie
        ):
            best_score = score[n_frames - 1, s]
            best_tie = tie[n_frames - 1, s]
            best_end = s
    if best_end < 0 or best_score == neg_inf:
        raise InfeasibleAlignmentError("no feasible state path")

    path = np.empty(n_frames, dtype=np.int32)
    s = best_end
    for t in range(n_frames - 1, -1, -1):
        path[t] = s
        s = back[t, s] if t > 0 else s

    return _materialize(ppg, logp, expected, slots, [sub_slot[s] for s in path], float(best_score))


def _materialize(
    ppg: Posteriorgram,
    logp: np.ndarray,
    expected: Sequence[FlatPhone],
    slots: list[_Slot],
    slot_path: list[int],
    total_log_score: float,
) -> AlignmentResult:
    hop = ppg.hop_ms
    spans: list[tuple[int, int, int]] = []  # (slot, start_frame, end_frame)
    start = 0
    for t in range(1, len(slot_path) + 1):
        if t == len(slot_path) or slot_path[t] != slot_path[t - 1]:
            spans.append((slot_path[start], start, t - 1))
            if t < len(slot_path):
                start = t
    segments: list[PhoneSegment] = []
    silences: list[SilenceSpan] = []
    for slot_idx, s_frame, e_frame in spans:
        slot = slots[slot_idx]
        if slot.expected_pos is None:
            pos = slot.sil_before_pos
            if pos == 0:
                location, after = "leading", None
            elif pos == len(expected):
                location, after = "trailing", None
            else:
                location, after = "between", expected[pos - 1].word_index
            silences.append(SilenceSpan(s_frame * hop, (e_frame + 1) * hop, location, after))
        else:
            phone = slot.phone
            predicted, predicted_mean = predicted_for_segment(ppg, s_frame, e_frame)
            segments.append(
                PhoneSegment(
                    expected=phone,
                    word_index=int(slot.word_index) if slot.word_index is not None else 0,
                    start_frame=s_frame,
                    end_frame=e_frame,
                    start_ms=s_frame * hop,
                    end_ms=(e_frame + 1) * hop,
                    mean_log_posterior_expected=float(np.mean(logp[s_frame : e_frame + 1, phone])),
                    expected_mean_posterior=float(np.mean(ppg.matrix[s_frame : e_frame + 1, phone])),
                    predicted=predicted,
                    predicted_mean_posterior=predicted_mean,
                )
            )
    return AlignmentResult(tuple(segments), tuple(silences), total_log_score)


def free_decode(ppg: Posteriorgram) -> list[int]:
    """Frame-wise argmax, collapse adjacent repeats, drop silence.

    Repeats separated by silence survive: [AE AE SIL AE] decodes to [AE, AE].
    """
    if ppg.frame_count == 0:
        return []
    best = np.argmax(ppg.matrix, axis=1)  # ties resolve to the lower index
    sil = ppg.inventory.silence_index
    out: list[int] = []
    prev = -1
    for idx in best:
        if idx != prev:
            if idx != sil:
                out.append(int(idx))
            prev = int(idx)
    return out


def levenshtein(a: Sequence[int], b: Sequence[int]) -> int:
    """Unit-cost edit distance between two phoneme sequences."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,          # deletion
                current[j - 1] + 1,       # insertion
                previous[j - 1] + (x != y),  # substitution
            ))
        previous = current
    return previous[len(b)]


def predicted_for_segment(ppg: Posteriorgram, start_frame: int, end_frame: int) -> tuple[int, float]:
    """Most probable non-silence phoneme over a frame range, by mean posterior."""
    if not (0 <= start_frame <= end_frame < ppg.frame_count):
        raise ValueError(f"bad frame range [{start_frame}, {end_frame}]")
    means = ppg.matrix[start_frame : end_frame + 1].mean(axis=0)
    means = means.copy()
    means[ppg.inventory.silence_index] = -1.0
    best = int(np.argmax(means))
    return best, float(means[best])
