"""Shared vocabulary types: array geometry, fixed-width bit vectors, node levels.

Bit index 0 is the first bit of a word, the one compared by the energizer
stage; it is rendered leftmost in text form and packed as the most
significant bit of the integer representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import BadDigit, InvalidConfig, WidthMismatch

# Energizer prefix width limits: one bit feeds the charge source, so at
# least two are needed; the series-device cost model is unsupported past 6.
MIN_MLE_BITS = 2
MAX_MLE_BITS = 6

_SEED_LIMIT = 2 ** 64

_BIN_DIGITS = frozenset("01")
_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


class Level(Enum):
    """Digital node level. The model is full swing: low or high, nothing between."""

    LOW = 0
    HIGH = 1

    @classmethod
    def from_bit(cls, bit: int) -> "Level":
        return cls.HIGH if bit else cls.LOW

    def as_bit(self) -> int:
        return self.value


class DriverMode(Enum):
    """Global write/search control shared by every cell driver in the array."""

    WRITE = "write"
    SEARCH = "search"


@dataclass(frozen=True)
class CamConfig:
    """Array geometry: ``num_words`` words of ``word_bits`` bits each, with the
    first ``mle_bits`` bits handled by the energizer stage.

    ``seed`` feeds the deterministic workload generators.
    """

    num_words: int
    word_bits: int
    mle_bits: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_words < 1:
            raise InvalidConfig(f"num_words must be >= 1, got {self.num_words}")
        if self.word_bits < 3:
            raise InvalidConfig(f"word_bits must be >= 3, got {self.word_bits}")
        if not MIN_MLE_BITS <= self.mle_bits <= MAX_MLE_BITS:
            raise InvalidConfig(
                f"mle_bits must be between {MIN_MLE_BITS} and {MAX_MLE_BITS}, "
                f"got {self.mle_bits}"
            )
        if self.mle_bits >= self.word_bits:
            raise InvalidConfig(
                f"mle_bits ({self.mle_bits}) must be smaller than word_bits "
                f"({self.word_bits})"
            )
        if not 0 <= self.seed < _SEED_LIMIT:
            raise InvalidConfig("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class BitWord:
    """Fixed-width bit vector, the unit of storage and query.

    Packed into an int with bit 0 as the most significant bit, which keeps
    whole-word and prefix comparisons cheap.
    """

    width: int
    value: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise WidthMismatch(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise WidthMismatch(
                f"value {self.value:#x} does not fit in {self.width} bits"
            )

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitWord":
        seq = tuple(bits)
        value = 0
        for b in seq:
            if b not in (0, 1):
                raise BadDigit(f"bit values must be 0 or 1, got {b!r}")
            value = (value << 1) | b
        return cls(len(seq), value)

    def bit(self, index: int) -> int:
        if not 0 <= index < self.width:
            raise IndexError(index)
        return (self.value >> (self.width - 1 - index)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(self.width))

    def prefix_int(self, k: int) -> int:
        """The first k bits as an integer (bit 0 still most significant)."""
        return self.value >> (self.width - k)

    def prefix_bits(self, k: int) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(k))

    def to_text(self, fmt: str = "bin") -> str:
        if fmt == "bin":
            return format(self.value, f"0{self.width}b")
        if fmt == "hex":
            if self.width % 4:
                raise WidthMismatch(
                    f"width {self.width} is not a whole number of hex digits"
                )
            return format(self.value, f"0{self.width // 4}X")
        raise ValueError(f"unknown word format {fmt!r}")

    def __len__(self) -> int:
        return self.width

    def __getitem__(self, index: int) -> int:
        return self.bit(index)


def parse_word(text: str, width: int, fmt: str = "bin") -> BitWord:
    """Decode a word from text. ``fmt`` is ``bin`` or ``hex``; the leftmost
    character carries bit 0 in its most significant position.

    Raises WidthMismatch when the decoded length differs from ``width`` and
    BadDigit for characters outside the alphabet.
    """
    if fmt not in ("bin", "hex"):
        raise ValueError(f"unknown word format {fmt!r}")
    text = text.strip()
    if fmt == "bin":
        if len(text) != width:
            raise WidthMismatch(
                f"expected {width} binary digits, got {len(text)} in {text!r}"
            )
        for ch in text:
            if ch not in _BIN_DIGITS:
                raise BadDigit(f"character {ch!r} is not a binary digit")
        return BitWord(width, int(text, 2))
    if 4 * len(text) != width:
        raise WidthMismatch(
            f"expected {width} bits ({width / 4:g} hex digits), "
            f"got {len(text)} digits in {text!r}"
        )
    for ch in text:
        if ch not in _HEX_DIGITS:
            raise BadDigit(f"character {ch!r} is not a hex digit")
    return BitWord(width, int(text, 16))


def hamming_prefix_match(a: BitWord, b: BitWord, k: int) -> bool:
    """True iff bits 0..k-1 of the two words are pairwise equal."""
    if a.width != b.width:
        raise WidthMismatch(f"word widths differ: {a.width} vs {b.width}")
    if not 0 <= k <= a.width:
        raise ValueError(f"prefix length {k} outside [0, {a.width}]")
    shift = a.width - k
    return (a.value >> shift) == (b.value >> shift)


@dataclass(frozen=True)
class WordTransitions:
    """Per-word transition counts for one search.

    ``sl_toggles`` is the number of searchline columns that changed level;
    the columns are shared by every word, so each word's cells see the same
    count.
    """

    ml_en_charges: int = 0
    ml_en_discharges: int = 0
    ml_charges: int = 0
    ml_discharges: int = 0
    sl_toggles: int = 0


@dataclass(frozen=True)
class WordTrace:
    """Node levels and transition events for one word during one search.

    ``m_nodes`` holds M0 (the energizer's charge source) followed by the
    mismatch-detect nodes M1..M_{k-1}. In the all-NOR baseline the energizer
    stage does not exist: ``m_nodes`` is empty and ``ml_en`` reads high
    because the precharge device is tied straight to the supply.

    ``discharging_bit`` is the lowest mismatching cell index when the
    precharged match line was pulled low (suffix indices for the gated
    variant, any index for the baseline); all mismatching cells conduct at
    once but the line swings only once.
    """

    addr: int
    m_nodes: tuple[Level, ...]
    ml_en: Level
    ml_precharged: bool
    ml_final: Level
    discharging_bit: Optional[int]
    transitions: WordTransitions
