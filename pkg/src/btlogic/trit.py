"""Balanced ternary values, gate algebra, voltage levels and the integer codec.

Trits are plain ``int`` values in ``{-1, 0, 1}``; every public operation
validates its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import ArityError, NumericError, RangeError, TritError

Trit = int
TRITS = (-1, 0, 1)

_SYMBOLS = {"-1": -1, "0": 0, "1": 1, "+1": 1, "N": -1, "Z": 0, "P": 1, "-": -1, "+": 1}


def check_trit(value) -> Trit:
    # bool is an int subclass; True would otherwise pass as +1
    if isinstance(value, bool) or not isinstance(value, int) or value not in TRITS:
        raise TritError(f"not a balanced trit: {value!r}")
    return value


def parse_trit(token: str) -> Trit:
    """Parse ``-1 0 1`` (also ``N Z P`` and ``- 0 +``)."""
    try:
        return _SYMBOLS[token.strip().upper()]
    except KeyError:
        raise TritError(f"cannot parse trit from {token!r}") from None


def format_trit(t: Trit) -> str:
    return str(check_trit(t))


def tmin(a: Trit, b: Trit) -> Trit:
    return min(check_trit(a), check_trit(b))


def tmax(a: Trit, b: Trit) -> Trit:
    return max(check_trit(a), check_trit(b))


def tmin_n(xs: Iterable[Trit]) -> Trit:
    xs = list(xs)
    if not xs:
        raise ArityError("tmin_n needs at least one input")
    return reduce(tmin, xs)


def tmax_n(xs: Iterable[Trit]) -> Trit:
    xs = list(xs)
    if not xs:
        raise ArityError("tmax_n needs at least one input")
    return reduce(tmax, xs)


def sti(a: Trit) -> Trit:
    return -check_trit(a)


def pti(a: Trit) -> Trit:
    return -1 if check_trit(a) == 1 else 1


def nti(a: Trit) -> Trit:
    return 1 if check_trit(a) == -1 else -1


@dataclass(frozen=True)
class LevelMap:
    """Logic -1/0/+1 mapped to -vdd/0/+vdd."""

    vdd: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.vdd) and self.vdd > 0):
            raise NumericError(f"vdd must be positive and finite, got {self.vdd!r}")


def trit_to_voltage(t: Trit, m: LevelMap = LevelMap()) -> float:
    return check_trit(t) * m.vdd


def voltage_to_trit(v: float, m: LevelMap = LevelMap()) -> Trit:
    """Quantize with thresholds at +/- vdd/2; the band edges belong to 0."""
    if not math.isfinite(v):
        raise NumericError(f"cannot quantize non-finite voltage {v!r}")
    half = m.vdd / 2
    if v < -half:
        return -1
    if v > half:
        return 1
    return 0


@dataclass(frozen=True)
class BalancedWord:
    """Balanced ternary word, least-significant trit first."""

    trits: tuple

    def __post_init__(self):
        object.__setattr__(self, "trits", tuple(check_trit(t) for t in self.trits))

    @property
    def width(self) -> int:
        return len(self.trits)

    def __int__(self):
        return word_to_int(self)

    def __str__(self):
        # most-significant first, the usual way to write numbers
        return "".join({-1: "T", 0: "0", 1: "1"}[t] for t in reversed(self.trits)) or "0"


def word_range(width: int) -> tuple[int, int]:
    half = (3 ** width - 1) // 2
    return -half, half


def int_to_word(n: int, width: int) -> BalancedWord:
    if width < 0:
        raise RangeError("width must be non-negative")
    lo, hi = word_range(width)
    if not lo <= n <= hi:
        raise RangeError(f"{n} does not fit in {width} balanced trits [{lo}, {hi}]")
    trits = []
    for _ in range(width):
        r = n % 3
        if r == 2:
            r = -1
        trits.append(r)
        n = (n - r) // 3
    return BalancedWord(tuple(trits))


def word_to_int(w: BalancedWord | Sequence[Trit]) -> int:
    trits = w.trits if isinstance(w, BalancedWord) else [check_trit(t) for t in w]
    return sum(t * 3 ** i for i, t in enumerate(trits))
