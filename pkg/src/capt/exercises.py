"""Exercise scripts: the expected utterance and its curated analysis targets.

Stress marks, syllable boundaries, breath groups and minimal pairs are all
authored in the catalog file, never inferred. Catalog entries are validated
exhaustively at load time so the pipeline can trust every script it sees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple

from .phones import DEFAULT_INVENTORY, PhoneInventory, UnknownPhonemeError


class CatalogError(ValueError):
    """Catalog file malformed or an exercise violates a script invariant."""


@dataclass(frozen=True)
class WordScript:
    """One word: orthography, phonemes, syllable spans and lexical stress."""

    text: str
    phonemes: tuple[int, ...]
    syllables: tuple[tuple[int, int], ...]  # inclusive [first, last] phoneme indices
    primary_stress: int
    content_word: bool = True

    @property
    def syllable_count(self) -> int:
        return len(self.syllables)


@dataclass(frozen=True)
class MinimalPairSpec:
    """A contrast to test at one scripted phoneme position."""

    word_index: int
    phoneme_index: int
    target: int
    contrast: int


@dataclass(frozen=True)
class ExerciseScript:
    """A full utterance with the metadata every analysis stage consumes."""

    id: str
    text: str
    words: tuple[WordScript, ...]
    sentence_stress_words: frozenset[int]
    breath_groups: tuple[tuple[int, int], ...]  # inclusive [first, last] word indices
    minimal_pairs: tuple[MinimalPairSpec, ...]
    reference_audio: tuple[str, ...]
    inventory: PhoneInventory

    @property
    def word_count(self) -> int:
        return len(self.words)


class FlatPhone(NamedTuple):
    phone: int
    word_index: int
    word_start: bool


def flatten_expected(script: ExerciseScript) -> list[FlatPhone]:
    """Concatenate the words' phonemes; the flag marks each word's first phoneme."""
    flat: list[FlatPhone] = []
    for w, word in enumerate(script.words):
        for p, phone in enumerate(word.phonemes):
            flat.append(FlatPhone(phone, w, p == 0))
    return flat


def _require(condition: bool, exercise_id: str, field: str, message: str) -> None:
    if not condition:
        raise CatalogError(f"exercise {exercise_id!r}, field {field!r}: {message}")


def _parse_span_list(raw: object, exercise_id: str, field: str) -> tuple[tuple[int, int], ...]:
    _require(isinstance(raw, list), exercise_id, field, "must be a list of [first, last] pairs")
    spans = []
    for item in raw:  # type: ignore[union-attr]
        _require(
            isinstance(item, list) and len(item) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in item),
            exercise_id, field, f"bad span {item!r}",
        )
        spans.append((item[0], item[1]))
    return tuple(spans)


def _check_partition(spans: tuple[tuple[int, int], ...], size: int,
                     exercise_id: str, field: str) -> None:
    _require(len(spans) > 0, exercise_id, field, "must not be empty")
    expected_first = 0
    for first, last in spans:
        _require(first == expected_first, exercise_id, field,
                 f"span [{first}, {last}] leaves a gap or overlap at {expected_first}")
        _require(last >= first, exercise_id, field, f"span [{first}, {last}] is reversed")
        expected_first = last + 1
    _require(expected_first == size, exercise_id, field,
             f"spans cover {expected_first} items, expected {size}")


def _parse_word(raw: dict, exercise_id: str, word_pos: int,
                inventory: PhoneInventory) -> WordScript:
    where = f"words[{word_pos}]"
    _require(isinstance(raw, dict), exercise_id, where, "must be an object")
    text = raw.get("text")
    _require(isinstance(text, str) and text != "", exercise_id, f"{where}.text",
             "must be a nonempty string")

    raw_phonemes = raw.get("phonemes")
    _require(isinstance(raw_phonemes, list) and len(raw_phonemes) > 0,
             exercise_id, f"{where}.phonemes", "must be a nonempty list")
    phonemes = []
    for label in raw_phonemes:
        try:
            phonemes.append(inventory.index_of(str(label)))
        except UnknownPhonemeError as exc:
            raise CatalogError(
                f"exercise {exercise_id!r}, field '{where}.phonemes': {exc}"
            ) from None

    syllables = _parse_span_list(raw.get("syllables"), exercise_id, f"{where}.syllables")
    _check_partition(syllables, len(phonemes), exercise_id, f"{where}.syllables")

    primary_stress = raw.get("primary_stress")
    _require(isinstance(primary_stress, int) and not isinstance(primary_stress, bool),
             exercise_id, f"{where}.primary_stress", "must be an integer")
    _require(0 <= primary_stress < len(syllables), exercise_id, f"{where}.primary_stress",
             f"syllable index {primary_stress} out of range for {len(syllables)} syllables")

    word_has_vowel = any(inventory.is_vowel(p) for p in phonemes)
    if word_has_vowel:
        for s, (first, last) in enumerate(syllables):
            _require(any(inventory.is_vowel(p) for p in phonemes[first:last + 1]),
                     exercise_id, f"{where}.syllables",
                     f"syllable {s} contains no vowel")

    content_word = raw.get("content_word", True)
    _require(isinstance(content_word, bool), exercise_id, f"{where}.content_word",
             "must be a boolean")
    return WordScript(text, tuple(phonemes), syllables, primary_stress, content_word)


def parse_exercise(raw: dict, inventory: PhoneInventory = DEFAULT_INVENTORY) -> ExerciseScript:
    """Build one validated ExerciseScript from its JSON object."""
    exercise_id = raw.get("id") if isinstance(raw, dict) else None
    if not isinstance(exercise_id, str) or exercise_id == "":
        raise CatalogError(f"exercise with missing or empty 'id': {raw!r:.80}")

    text = raw.get("text")
    _require(isinstance(text, str) and text != "", exercise_id, "text",
             "must be a nonempty string")

    raw_words = raw.get("words")
    _require(isinstance(raw_words, list) and len(raw_words) > 0, exercise_id, "words",
             "must be a nonempty list")
    words = tuple(_parse_word(w, exercise_id, i, inventory) for i, w in enumerate(raw_words))

    raw_stress = raw.get("sentence_stress_words", [])
    _require(isinstance(raw_stress, list), exercise_id, "sentence_stress_words",
             "must be a list of word indices")
    for w in raw_stress:
        _require(isinstance(w, int) and not isinstance(w, bool) and 0 <= w < len(words),
                 exercise_id, "sentence_stress_words", f"word index {w!r} out of range")
    sentence_stress = frozenset(raw_stress)

    breath_groups = _parse_span_list(raw.get("breath_groups", [[0, len(words) - 1]]),
                                     exercise_id, "breath_groups")
    _check_partition(breath_groups, len(words), exercise_id, "breath_groups")

    raw_pairs = raw.get("minimal_pairs", [])
    _require(isinstance(raw_pairs, list), exercise_id, "minimal_pairs", "must be a list")
    pairs = []
    seen_pair_words = set()
    for p, raw_pair in enumerate(raw_pairs):
        where = f"minimal_pairs[{p}]"
        _require(isinstance(raw_pair, dict), exercise_id, where, "must be an object")
        word_index = raw_pair.get("word_index")
        phoneme_index = raw_pair.get("phoneme_index")
        _require(isinstance(word_index, int) and 0 <= word_index < len(words),
                 exercise_id, f"{where}.word_index", f"out of range: {word_index!r}")
        word = words[word_index]
        _require(isinstance(phoneme_index, int) and 0 <= phoneme_index < len(word.phonemes),
                 exercise_id, f"{where}.phoneme_index", f"out of range: {phoneme_index!r}")
        try:
            target = inventory.index_of(str(raw_pair.get("target")))
            contrast = inventory.index_of(str(raw_pair.get("contrast")))
        except UnknownPhonemeError as exc:
            raise CatalogError(f"exercise {exercise_id!r}, field {where!r}: {exc}") from None
        _require(target != contrast, exercise_id, where, "target equals contrast")
        _require(word.phonemes[phoneme_index] == target, exercise_id, f"{where}.target",
                 "target must equal the scripted phoneme at that position")
        # One pair per word keeps feedback cards unique per (kind, word).
        _require(word_index not in seen_pair_words, exercise_id, f"{where}.word_index",
                 f"word {word_index} already has a minimal pair")
        seen_pair_words.add(word_index)
        pairs.append(MinimalPairSpec(word_index, phoneme_index, target, contrast))

    raw_audio = raw.get("reference_audio", [])
    _require(isinstance(raw_audio, list) and all(isinstance(a, str) for a in raw_audio),
             exercise_id, "reference_audio", "must be a list of paths")

    known = {"id", "text", "words", "sentence_stress_words", "breath_groups",
             "minimal_pairs", "reference_audio"}
    unknown = set(raw) - known
    _require(not unknown, exercise_id, "unknown", f"unknown fields {sorted(unknown)}")

    return ExerciseScript(
        id=exercise_id,
        text=text,
        words=words,
        sentence_stress_words=sentence_stress,
        breath_groups=breath_groups,
        minimal_pairs=tuple(pairs),
        reference_audio=tuple(raw_audio),
        inventory=inventory,
    )


def load_exercise_catalog(path: str | Path,
                          inventory: PhoneInventory = DEFAULT_INVENTORY) -> list[ExerciseScript]:
    """Load and validate a UTF-8 JSON catalog; duplicate ids are rejected."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog {path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict) or not isinstance(raw.get("exercises"), list):
        raise CatalogError(f"catalog {path}: expected an object with an 'exercises' list")

    scripts: list[ExerciseScript] = []
    seen_ids: set[str] = set()
    for entry in raw["exercises"]:
        script = parse_exercise(entry, inventory)
        if script.id in seen_ids:
            raise CatalogError(f"duplicate exercise id {script.id!r}")
        seen_ids.add(script.id)
        scripts.append(script)
    return scripts


def iter_word_phonemes(script: ExerciseScript) -> Iterator[tuple[int, int, int]]:
    """Yield (word_index, position_in_word, phoneme) over the whole script."""
    for w, word in enumerate(script.words):
        for p, phone in enumerate(word.phonemes):
            yield w, p, phone
