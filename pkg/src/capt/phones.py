"""Phoneme inventory: the closed set of labels every other module speaks.

The default inventory is the 39-phoneme ARPAbet set plus a silence symbol at
index 0. The inventory object travels with posteriorgrams and exercise
scripts; any mismatch between the two is an error, never a remap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SILENCE = "SIL"

_ARPABET_VOWELS = (
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH",
    "IY", "OW", "OY", "UH", "UW",
)
_ARPABET_CONSONANTS = (
    "B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N",
    "NG", "P", "R", "S", "SH", "T", "TH", "V", "W", "Y", "Z", "ZH",
)


class UnknownPhonemeError(ValueError):
    """A label is not part of the inventory."""


@dataclass(frozen=True)
class PhoneInventory:
    """Ordered phoneme labels with a class (vowel/consonant/silence) per entry."""

    symbols: tuple[str, ...]
    classes: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.symbols) != len(self.classes):
            raise ValueError("symbols and classes must have equal length")
        if not self.symbols or self.symbols[0] != SILENCE or self.classes[0] != "silence":
            raise ValueError(f"inventory index 0 must be the silence symbol {SILENCE!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("inventory symbols must be unique")
        for cls in self.classes:
            if cls not in ("vowel", "consonant", "silence"):
                raise ValueError(f"unknown phoneme class {cls!r}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def silence_index(self) -> int:
        return 0

    def index_of(self, symbol: str) -> int:
        try:
            return self._index[symbol.upper()]
        except KeyError:
            raise UnknownPhonemeError(f"unknown phoneme {symbol!r}") from None

    def symbol_of(self, index: int) -> str:
        return self.symbols[index]

    def class_of(self, index: int) -> str:
        return self.classes[index]

    def is_vowel(self, index: int) -> bool:
        return self.classes[index] == "vowel"


def default_inventory() -> PhoneInventory:
    """39 ARPAbet phonemes plus SIL, 40 entries, silence at index 0."""
    symbols = [SILENCE]
    classes = ["silence"]
    for s in sorted(_ARPABET_VOWELS + _ARPABET_CONSONANTS):
        symbols.append(s)
        classes.append("vowel" if s in _ARPABET_VOWELS else "consonant")
    return PhoneInventory(tuple(symbols), tuple(classes))


DEFAULT_INVENTORY = default_inventory()


def parse_phoneme_string(text: str, inventory: PhoneInventory = DEFAULT_INVENTORY) -> list[int]:
    """Turn a space-separated label string into inventory indices, case-insensitively.

    Unknown labels raise UnknownPhonemeError naming the token and its 1-based
    position.
    """
    indices: list[int] = []
    for position, token in enumerate(text.split(), start=1):
        try:
            indices.append(inventory.index_of(token))
        except UnknownPhonemeError:
            raise UnknownPhonemeError(
                f"unknown phoneme {token!r} at token {position}"
            ) from None
    return indices
