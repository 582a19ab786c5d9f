"""Service configuration: provider choice, store paths and threshold overrides.

Config files are strict: unknown keys are rejected and every threshold must
sit inside a documented sane range, so a typo fails fast instead of silently
skewing feedback.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .prosody import ProsodyConfig
from .scoring import ScoringConfig
from .validation import ValidationConfig


class ConfigError(ValueError):
    """Config file malformed, unknown key, or threshold out of range."""


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "demo"  # "demo" | "fixture" | "external"
    ppg_dir: str | None = None
    error_plan: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8000
    catalog_path: str = "fixtures/catalog.json"
    attempts_dir: str = "attempts"
    cors_origins: tuple[str, ...] = ("*",)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    validation: ValidationConfig = field(default_factory=ValidationConfig)
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    prosody: ProsodyConfig = field(default_factory=ProsodyConfig)


# Sane ranges for every numeric threshold reachable from a config file.
_RANGES = {
    ("port",): (1, 65535),
    ("validation", "min_phoneme_rate"): (0.1, 50.0),
    ("validation", "max_phoneme_rate"): (1.0, 100.0),
    ("validation", "energy_floor_db"): (-120.0, 0.0),
    ("validation", "min_voiced_fraction"): (0.0, 1.0),
    ("validation", "min_voiced_frames"): (0, 1000),
    ("validation", "max_phoneme_error_rate"): (0.0, 2.0),
    ("scoring", "gop_tau"): (-20.0, 0.0),
    ("scoring", "unclear_margin"): (0.0, 1.0),
    ("prosody", "window_ms"): (10.0, 200.0),
    ("prosody", "hop_ms"): (1.0, 100.0),
    ("prosody", "fmin_hz"): (30.0, 300.0),
    ("prosody", "fmax_hz"): (100.0, 2000.0),
    ("prosody", "voicing_threshold"): (0.01, 1.0),
    ("prosody", "f0_weight"): (0.0, 1.0),
    ("prosody", "energy_weight"): (0.0, 1.0),
    ("prosody", "duration_weight"): (0.0, 1.0),
    ("prosody", "min_pause_ms"): (50.0, 2000.0),
}


def _check_range(path: tuple[str, ...], value: float) -> None:
    bounds = _RANGES.get(path)
    if bounds is None:
        return
    lo, hi = bounds
    if not (lo <= value <= hi):
        raise ConfigError(f"{'.'.join(path)} = {value} outside sane range [{lo}, {hi}]")


def _build_section(cls, raw: dict, section: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in section {section!r}")
    for key, value in raw.items():
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            _check_range((section, key), float(value))
    return cls(**raw)


def validate_config(config: ServiceConfig) -> ServiceConfig:
    _check_range(("port",), config.port)
    for section in ("validation", "scoring", "prosody"):
        obj = getattr(config, section)
        for f in fields(obj):
            value = getattr(obj, f.name)
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                _check_range((section, f.name), float(value))
    if config.validation.min_phoneme_rate >= config.validation.max_phoneme_rate:
        raise ConfigError("validation.min_phoneme_rate must be below max_phoneme_rate")
    weights = (config.prosody.f0_weight, config.prosody.energy_weight,
               config.prosody.duration_weight)
    if sum(weights) <= 0:
        raise ConfigError("prosody prominence weights must sum above 0")
    if config.prosody.fmin_hz >= config.prosody.fmax_hz:
        raise ConfigError("prosody.fmin_hz must be below fmax_hz")
    if config.provider.kind not in ("demo", "fixture", "external"):
        raise ConfigError(f"unknown provider kind {config.provider.kind!r}")
    if config.provider.kind == "fixture" and not config.provider.ppg_dir:
        raise ConfigError("fixture provider needs provider.ppg_dir")
    return config


def load_service_config(path: str | Path) -> ServiceConfig:
    """Parse a config JSON file; unknown keys anywhere are an error."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: expected a JSON object")

    known_top = {"port", "catalog_path", "attempts_dir", "cors_origins",
                 "provider", "validation", "scoring", "prosody"}
    unknown = set(raw) - known_top
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {sorted(unknown)}")

    kwargs: dict = {}
    for key in ("port", "catalog_path", "attempts_dir"):
        if key in raw:
            kwargs[key] = raw[key]
    if "cors_origins" in raw:
        if not isinstance(raw["cors_origins"], list):
            raise ConfigError("cors_origins must be a list of origins")
        kwargs["cors_origins"] = tuple(raw["cors_origins"])
    if "provider" in raw:
        kwargs["provider"] = _build_section(ProviderConfig, raw["provider"], "provider")
    if "validation" in raw:
        kwargs["validation"] = _build_section(ValidationConfig, raw["validation"], "validation")
    if "scoring" in raw:
        section = dict(raw["scoring"])
        by_class = section.pop("gop_tau_by_class", None)
        config = _build_section(ScoringConfig, section, "scoring")
        if by_class is not None:
            if not isinstance(by_class, dict):
                raise ConfigError("scoring.gop_tau_by_class must be an object")
            for cls, tau in by_class.items():
                if cls not in ("vowel", "consonant"):
                    raise ConfigError(f"gop_tau_by_class key {cls!r} is not a phoneme class")
                _check_range(("scoring", "gop_tau"), float(tau))
            config = ScoringConfig(config.gop_tau, dict(by_class), config.unclear_margin)
        kwargs["scoring"] = config
    if "prosody" in raw:
        kwargs["prosody"] = _build_section(ProsodyConfig, raw["prosody"], "prosody")

    try:
        config = ServiceConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"config {path}: {exc}") from None
    return validate_config(config)
