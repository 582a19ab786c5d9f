"""Pronunciation-training backend.

Pipeline: decode a learner's WAV, obtain a phoneme posteriorgram from a
provider, gate the sample through validation, force-align the expected
phonemes, score segmental quality (GOP, minimal pairs) and prosody (stress,
pauses), and assemble feedback cards. Served over HTTP by `capt.service` and
on the command line by `capt.cli`.
"""

from .audio import AudioBuffer, decode_wav, encode_wav, frame_signal, resample, rms_db
from .exercises import ExerciseScript, MinimalPairSpec, WordScript, load_exercise_catalog
from .phones import DEFAULT_INVENTORY, PhoneInventory, parse_phoneme_string
from .posteriors import DemoProvider, FixtureProvider, Posteriorgram, load_ppg, store_ppg
from .alignment import AlignmentResult, PhoneSegment, forced_align, free_decode, levenshtein
from .validation import ValidationReport, validate
from .scoring import gop, minimal_pair, verdict
from .prosody import PitchTrack, yin_f0
from .feedback import AnalysisResult, FeedbackCard, build_feedback
from .pipeline import PipelineOutcome, ingest_wav, run_pipeline

__all__ = [
    "AudioBuffer", "decode_wav", "encode_wav", "frame_signal", "resample", "rms_db",
    "ExerciseScript", "MinimalPairSpec", "WordScript", "load_exercise_catalog",
    "DEFAULT_INVENTORY", "PhoneInventory", "parse_phoneme_string",
    "DemoProvider", "FixtureProvider", "Posteriorgram", "load_ppg", "store_ppg",
    "AlignmentResult", "PhoneSegment", "forced_align", "free_decode", "levenshtein",
    "ValidationReport", "validate",
    "gop", "minimal_pair", "verdict",
    "PitchTrack", "yin_f0",
    "AnalysisResult", "FeedbackCard", "build_feedback",
    "PipelineOutcome", "ingest_wav", "run_pipeline",
]

__version__ = "0.1.0"
