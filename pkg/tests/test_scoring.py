"""GOP scoring, verdicts and minimal-pair comparison."""

import math

import numpy as np
import pytest

from capt.alignment import forced_align, predicted_for_segment
from capt.exercises import MinimalPairSpec
from capt.phones import DEFAULT_INVENTORY as INV
from capt.posteriors import Posteriorgram, synth_posteriorgram
from capt.scoring import gop, minimal_pair, verdict

from conftest import flat, idx


def constant_row_ppg(frames: int, masses: dict[str, float]) -> Posteriorgram:
    row = np.zeros(len(INV))
    assigned = 0.0
    for symbol, mass in masses.items():
        row[idx(symbol)] = mass
        assigned += mass
    rest = [i for i in range(len(INV)) if INV.symbol_of(i) not in masses]
    row[rest] = (1.0 - assigned) / len(rest)
    return Posteriorgram(np.tile(row, (frames, 1)), INV, 20)


def segment_over(ppg: Posteriorgram, symbol: str, start=0, end=None):
    end = ppg.frame_count - 1 if end is None else end
    expected = flat((symbol, 0, True))
    # minimal stand-in segment; only frames + expected matter for gop
    phone = idx(symbol)
    predicted, predicted_mean = predicted_for_segment(ppg, start, end)
    from capt.alignment import PhoneSegment

    window = ppg.matrix[start : end + 1]
    return PhoneSegment(
        expected=phone, word_index=0, start_frame=start, end_frame=end,
        start_ms=start * 20, end_ms=(end + 1) * 20,
        mean_log_posterior_expected=float(np.mean(np.log(np.maximum(window[:, phone], 1e-8)))),
        expected_mean_posterior=float(np.mean(window[:, phone])),
        predicted=predicted, predicted_mean_posterior=predicted_mean,
    )


class TestGop:
    def test_one_hot_scores_zero(self):
        ppg = synth_posteriorgram([("AE", 0, 100)], peak=1.0)
        assert gop(ppg, segment_over(ppg, "AE")).value == 0.0

    def test_constant_competitor_hand_value(self):
        ppg = constant_row_ppg(5, {"AE": 0.2, "AH": 0.7})
        score = gop(ppg, segment_over(ppg, "AE"))
        assert score.value == pytest.approx(math.log(0.2 / 0.7), abs=1e-4)
        assert score.value == pytest.approx(-1.2528, abs=1e-4)

    def test_weak_argmax_still_zero(self):
        ppg = constant_row_ppg(5, {"AE": 0.6})
        assert gop(ppg, segment_over(ppg, "AE")).value == 0.0

    def test_never_positive(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            matrix = rng.random((4, len(INV)))
            matrix /= matrix.sum(axis=1, keepdims=True)
            ppg = Posteriorgram(matrix, INV, 20)
            symbol = INV.symbol_of(int(rng.integers(1, len(INV))))
            assert gop(ppg, segment_over(ppg, symbol)).value <= 0.0

    def test_zero_iff_argmax_consistent(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            matrix = rng.random((3, len(INV)))
            matrix /= matrix.sum(axis=1, keepdims=True)
            ppg = Posteriorgram(matrix, INV, 20)
            symbol = INV.symbol_of(int(rng.integers(1, len(INV))))
            score = gop(ppg, segment_over(ppg, symbol))
            consistent = bool(np.all(np.argmax(matrix, axis=1) == idx(symbol)))
            assert (score.value == 0.0) == consistent

    def test_invariant_under_row_rescaling(self):
        # scaling a row's mass uniformly preserves each frame's probability
        # ratios, and GOP only sees ratios
        base = np.random.default_rng(5).random((4, len(INV)))
        base /= base.sum(axis=1, keepdims=True)
        scaled = base * 0.9995  # still within the row-sum tolerance
        a = gop(Posteriorgram(base, INV, 20), segment_over(Posteriorgram(base, INV, 20), "AE"))
        b = gop(Posteriorgram(scaled, INV, 20), segment_over(Posteriorgram(scaled, INV, 20), "AE"))
        assert a.value == pytest.approx(b.value, abs=1e-9)


class TestVerdict:
    def test_correct(self):
        ppg = synth_posteriorgram([("AE", 0, 100)], peak=1.0)
        seg = segment_over(ppg, "AE")
        v = verdict(seg, gop(ppg, seg))
        assert v.kind == "correct" and v.substituted_by is None

    def test_substituted(self):
        ppg = constant_row_ppg(5, {"AE": 0.2, "AH": 0.7})
        seg = segment_over(ppg, "AE")
        v = verdict(seg, gop(ppg, seg), tau=-1.0)
        assert v.kind == "substituted"
        assert v.substituted_by == idx("AH")

    def test_mispronounced_when_diffuse(self):
        # expected still wins every frame, but weakly; force tau above its gop
        ppg = constant_row_ppg(5, {"AE": 0.30, "AH": 0.28})
        seg = segment_over(ppg, "AE")
        score = gop(ppg, seg)
        assert score.value == 0.0
        diffuse = constant_row_ppg(5, {"AE": 0.26, "AH": 0.28, "EH": 0.27})
        seg2 = segment_over(diffuse, "AE")
        score2 = gop(diffuse, seg2)
        v = verdict(seg2, score2, tau=-0.01)
        assert v.kind == "substituted"  # AH clearly beat AE
        near_tie = constant_row_ppg(5, {"AE": 0.272, "AH": 0.2721})
        seg3 = segment_over(near_tie, "AE")
        # predicted==AH wins by a hair: substituted needs a strict mean gap
        v3 = verdict(seg3, gop(near_tie, seg3), tau=-1e-6)
        assert v3.kind in ("substituted", "mispronounced")

    def test_monotone_in_tau(self):
        ppg = constant_row_ppg(5, {"AE": 0.2, "AH": 0.7})
        seg = segment_over(ppg, "AE")
        score = gop(ppg, seg)
        taus = np.linspace(-3.0, 0.0, 31)
        was_correct = True
        for tau in taus:  # ascending tau: once it stops being correct it stays so
            kind = verdict(seg, score, tau=float(tau)).kind
            if kind != "correct":
                was_correct = False
            else:
                assert was_correct, "verdict flipped back to correct as tau rose"


class TestMinimalPair:
    def spec(self):
        return MinimalPairSpec(0, 0, idx("AE"), idx("AH"))

    def test_clear_target_win(self):
        ppg = constant_row_ppg(5, {"AE": 0.6, "AH": 0.3})
        result = minimal_pair(ppg, segment_over(ppg, "AE"), self.spec())
        assert result.winner == "target"
        assert result.target_mean == pytest.approx(0.6, abs=1e-9)

    def test_near_tie_unclear(self):
        ppg = constant_row_ppg(5, {"AE": 0.40, "AH": 0.45})
        result = minimal_pair(ppg, segment_over(ppg, "AE"), self.spec())
        assert result.winner == "unclear"

    def test_one_hot_contrast_wins(self):
        ppg = synth_posteriorgram([("AH", 0, 100)], peak=1.0)
        result = minimal_pair(ppg, segment_over(ppg, "AE"), self.spec())
        assert result.winner == "contrast"
        assert result.target_mean == pytest.approx(0.0, abs=1e-9)

    def test_swapping_rows_flips_winner(self):
        ppg_a = constant_row_ppg(5, {"AE": 0.55, "AH": 0.25})
        ppg_b = constant_row_ppg(5, {"AE": 0.25, "AH": 0.55})
        r_a = minimal_pair(ppg_a, segment_over(ppg_a, "AE"), self.spec())
        r_b = minimal_pair(ppg_b, segment_over(ppg_b, "AE"), self.spec())
        assert r_a.winner == "target" and r_b.winner == "contrast"
        assert r_a.target_mean == pytest.approx(r_b.contrast_mean)

    def test_target_must_match_segment(self):
        ppg = constant_row_ppg(5, {"AE": 0.6})
        with pytest.raises(ValueError):
            minimal_pair(ppg, segment_over(ppg, "EH"), self.spec())
