"""Phoneme posteriorgrams and the providers that produce them.

The acoustic model itself is out of scope; analysis only ever sees its
combined output, a frames-by-phonemes matrix of posterior probabilities.
Two reference providers are shipped: a deterministic demo synthesizer so the
whole service loop runs offline, and a fixture reader for posteriorgrams
computed elsewhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import numpy as np

from .audio import AudioBuffer, frame_signal, rms_db
from .exercises import ExerciseScript, flatten_expected
from .phones import DEFAULT_INVENTORY, PhoneInventory

# Probabilities are floored at this value before any log; keeps one-hot
# fixtures finite in alignment and scoring alike.
POSTERIOR_FLOOR = 1e-8

DEFAULT_HOP_MS = 20

# Demo provider constants; tests rely on both.
DEMO_PEAK = 0.9
DEMO_REGION_MARGIN_DB = 15.0

ROW_SUM_TOLERANCE = 1e-3


class PpgFormatError(ValueError):
    """Posteriorgram file or matrix violates the format contract."""


@dataclass(frozen=True)
class Posteriorgram:
    """Frames x phonemes posterior probabilities on a fixed hop grid."""

    matrix: np.ndarray
    inventory: PhoneInventory = DEFAULT_INVENTORY
    hop_ms: int = DEFAULT_HOP_MS

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2:
            raise PpgFormatError("posteriorgram matrix must be 2-D")
        if matrix.shape[1] != len(self.inventory):
            raise PpgFormatError(
                f"posteriorgram has {matrix.shape[1]} phones, inventory has {len(self.inventory)}"
            )
        if matrix.size:
            if float(matrix.min()) < 0.0 or float(matrix.max()) > 1.0:
                raise PpgFormatError("posterior probabilities must lie in [0, 1]")
            sums = matrix.sum(axis=1)
            bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)
            if bad.size:
                f = int(bad[0])
                raise PpgFormatError(f"row sum {sums[f]:.6f} at frame {f} is not 1 +/- {ROW_SUM_TOLERANCE}")
        if self.hop_ms <= 0:
            raise PpgFormatError(f"hop_ms must be positive, got {self.hop_ms}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def frame_count(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def duration_ms(self) -> float:
        return float(self.frame_count * self.hop_ms)

    def frame_start_ms(self, frame: int) -> int:
        return int(frame * self.hop_ms)


def load_ppg(path: str | Path, inventory: PhoneInventory = DEFAULT_INVENTORY) -> Posteriorgram:
    """Read a posteriorgram JSON file and validate it against the inventory."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PpgFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise PpgFormatError(f"{path}: expected a JSON object")
    phones = raw.get("phones")
    frames = raw.get("frames")
    hop_ms = raw.get("hop_ms", DEFAULT_HOP_MS)
    if not isinstance(phones, list) or not isinstance(frames, list):
        raise PpgFormatError(f"{path}: need 'phones' and 'frames' lists")
    if tuple(phones) != inventory.symbols:
        raise PpgFormatError(
            f"{path}: file lists {len(phones)} phones, inventory expects "
            f"{len(inventory)} ({inventory.symbols[:3]}...): inventory mismatch"
        )
    if not isinstance(hop_ms, int) or isinstance(hop_ms, bool):
        raise PpgFormatError(f"{path}: hop_ms must be an integer")
    try:
        matrix = np.array(frames, dtype=np.float64)
    except ValueError:
        raise PpgFormatError(f"{path}: ragged or non-numeric frame rows") from None
    if matrix.size == 0:
        matrix = matrix.reshape(0, len(inventory))
    if matrix.ndim != 2:
        raise PpgFormatError(f"{path}: ragged or non-numeric frame rows")
    return Posteriorgram(matrix, inventory, hop_ms)


def store_ppg(ppg: Posteriorgram, path: str | Path) -> None:
    """Write a posteriorgram as JSON; load_ppg(store_ppg(p)) round-trips bit-exactly."""
    payload = {
        "hop_ms": ppg.hop_ms,
        "phones": list(ppg.inventory.symbols),
        "frames": [[float(v) for v in row] for row in ppg.matrix],
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def _peaked_row(size: int, peak_index: int, peak: float) -> np.ndarray:
    """One row with `peak` mass on one phone, the rest spread evenly, sum exactly 1."""
    if size < 2:
        raise ValueError("inventory too small")
    row = np.full(size, (1.0 - peak) / (size - 1), dtype=np.float64)
    row[peak_index] = peak
    # Nudge the peak entry until the float sum is exactly 1.0.
    for _ in range(4):
        err = 1.0 - float(row.sum())
        if err == 0.0:
            break
        row[peak_index] += err
    return row


def synth_posteriorgram(
    segments: Sequence[tuple[str, float, float]],
    hop_ms: int = DEFAULT_HOP_MS,
    peak: float = DEMO_PEAK,
    inventory: PhoneInventory = DEFAULT_INVENTORY,
    total_ms: float | None = None,
) -> Posteriorgram:
    """Build a posteriorgram from (phoneme, start_ms, end_ms) segments.

    Frames whose start time falls inside a segment put `peak` mass on that
    phoneme; frames outside every segment peak on silence. Deterministic,
    which makes it the oracle generator for alignment tests and the demo
    provider's backend.
    """
    size = len(inventory)
    if not (1.0 / size < peak <= 1.0):
        raise ValueError(f"peak must be in (1/{size}, 1], got {peak}")
    resolved: list[tuple[int, float, float]] = []
    last_end = None
    for symbol, start_ms, end_ms in segments:
        if end_ms <= start_ms:
            raise ValueError(f"segment {symbol!r} has non-positive duration")
        if last_end is not None and start_ms < last_end:
            raise ValueError(f"segment {symbol!r} overlaps its predecessor")
        resolved.append((inventory.index_of(symbol), float(start_ms), float(end_ms)))
        last_end = end_ms
    if total_ms is None:
        total_ms = last_end if last_end is not None else 0.0
    n_frames = int(total_ms // hop_ms)

    rows = np.empty((n_frames, size), dtype=np.float64)
    sil_row = _peaked_row(size, inventory.silence_index, peak)
    seg_iter = 0
    for f in range(n_frames):
        t = f * hop_ms
        while seg_iter < len(resolved) and resolved[seg_iter][2] <= t:
            seg_iter += 1
        if seg_iter < len(resolved) and resolved[seg_iter][1] <= t < resolved[seg_iter][2]:
            rows[f] = _peaked_row(size, resolved[seg_iter][0], peak)
        else:
            rows[f] = sil_row
    return Posteriorgram(rows, inventory, hop_ms)


class PosteriorProvider(Protocol):
    """Anything that maps (audio, script) to a posteriorgram.

    Implementations must be deterministic for identical inputs and safe for
    concurrent calls; frame count tracks floor(duration_ms / hop_ms) +/- 1.
    """

    def provide(self, audio: AudioBuffer, script: ExerciseScript) -> Posteriorgram:
        ...


def demo_provide(
    audio: AudioBuffer,
    script: ExerciseScript,
    error_plan: Mapping[str, str] | None = None,
    hop_ms: int = DEFAULT_HOP_MS,
) -> Posteriorgram:
    """Synthesize the posteriorgram a perfect acoustic model would emit.

    The active speech region is bounded by the first and last hop-sized frame
    whose RMS level clears the quietest frame by 15 dB; the script's phonemes
    (after error_plan substitutions) are spread uniformly across it. All-silent
    audio yields an all-silence posteriorgram that validation then rejects.
    """
    inventory = script.inventory
    plan = dict(error_plan or {})
    series = frame_signal(audio, hop_ms, hop_ms)
    total_ms = len(audio) * 1000.0 / audio.sample_rate
    if series.frame_count == 0:
        return synth_posteriorgram([], hop_ms, DEMO_PEAK, inventory, total_ms)

    levels = np.array([rms_db(f) for f in series.frames])
    active = np.flatnonzero(levels > levels.min() + DEMO_REGION_MARGIN_DB)
    if active.size == 0:
        return synth_posteriorgram([], hop_ms, DEMO_PEAK, inventory, total_ms)

    region_start = float(active[0] * hop_ms)
    region_end = float((active[-1] + 1) * hop_ms)
    phones = [inventory.symbol_of(fp.phone) for fp in flatten_expected(script)]
    phones = [plan.get(p, p) for p in phones]
    span = (region_end - region_start) / len(phones)
    segments = [
        (p, region_start + k * span, region_start + (k + 1) * span)
        for k, p in enumerate(phones)
    ]
    return synth_posteriorgram(segments, hop_ms, DEMO_PEAK, inventory, total_ms)


@dataclass(frozen=True)
class DemoProvider:
    """Offline stand-in for the acoustic model; optionally injects mistakes."""

    error_plan: Mapping[str, str] = field(default_factory=dict)
    hop_ms: int = DEFAULT_HOP_MS

    def provide(self, audio: AudioBuffer, script: ExerciseScript) -> Posteriorgram:
        return demo_provide(audio, script, self.error_plan, self.hop_ms)


@dataclass(frozen=True)
class FixtureProvider:
    """Reads `<exercise_id>.ppg.json` from a directory of precomputed files."""

    directory: Path

    def provide(self, audio: AudioBuffer, script: ExerciseScript) -> Posteriorgram:
        path = Path(self.directory) / f"{script.id}.ppg.json"
        if not path.is_file():
            raise PpgFormatError(f"no posteriorgram fixture for exercise {script.id!r} at {path}")
        return load_ppg(path, script.inventory)
