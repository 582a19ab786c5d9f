"""Attempt persistence: one JSON file per attempt, written atomically.

Attempt ids are 26-character Crockford base32 strings, millisecond timestamp
first, so lexicographic order is arrival order. Unique ids make per-attempt
serialization trivial; writers never touch an existing file.
"""

from __future__ import annotations

import json
import os
import secrets
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


def new_attempt_id(now_ms: int | None = None) -> str:
    """48-bit timestamp + 80 random bits, Crockford base32, 26 chars, sortable."""
    if now_ms is None:
        now_ms = time.time_ns() // 1_000_000
    value = (now_ms & ((1 << 48) - 1)) << 80 | secrets.randbits(80)
    chars = []
    for shift in range(125, -1, -5):
        chars.append(_CROCKFORD[(value >> shift) & 0x1F])
    return "".join(chars)


@dataclass(frozen=True)
class AttemptRecord:
    attempt_id: str
    exercise_id: str
    received_at: str  # UTC ISO-8601
    audio_digest: str  # sha256 hex of the uploaded bytes
    provider_used: str  # "fixture" | "demo" | "external"
    status: str  # "analyzed" | "rejected"
    result: dict[str, Any]  # analysis dict or validation dict

    def to_dict(self) -> dict[str, Any]:
        return {
            "attempt_id": self.attempt_id,
            "exercise_id": self.exercise_id,
            "received_at": self.received_at,
            "audio_digest": self.audio_digest,
            "provider_used": self.provider_used,
            "status": self.status,
            "result": self.result,
        }

    @staticmethod
    def from_dict(raw: dict[str, Any]) -> "AttemptRecord":
        return AttemptRecord(
            attempt_id=raw["attempt_id"],
            exercise_id=raw["exercise_id"],
            received_at=raw["received_at"],
            audio_digest=raw["audio_digest"],
            provider_used=raw["provider_used"],
            status=raw["status"],
            result=raw["result"],
        )


class AttemptStore:
    """Directory of immutable attempt records."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, attempt_id: str) -> Path:
        return self.directory / f"{attempt_id}.json"

    def save(self, record: AttemptRecord) -> None:
        path = self._path(record.attempt_id)
        if path.exists():
            raise FileExistsError(f"attempt {record.attempt_id} already stored")
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n",
                       encoding="utf-8")
        os.replace(tmp, path)

    def load(self, attempt_id: str) -> AttemptRecord | None:
        path = self._path(attempt_id)
        if not path.is_file():
            return None
        return AttemptRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))
