"""Words over the index set, shift maps and the code-space metric d_c.

Letters are 0-based integers naming the maps of a system.  Infinite words
are restricted to eventually periodic representatives (preperiod + repeated
period); they are dense in the full code space and make the metric d_c
exactly computable, because the letter-disagreement pattern of two such
words is itself eventually periodic and the weighted sum splits into a
finite part plus a geometric series.

d_c(a, b) = sum_{n>=1} c^n * [a_n != b_n], computed after embedding finite
words into infinite ones by padding with a reserved sentinel letter tau.
Note the indicator: positions where the letters DIFFER contribute.  An
equality indicator would give d_c(a, a) > 0 and not be a metric, so the
disagreement convention is the one implemented.

Text syntax (1-based letters, converted from/to the 0-based API):

    "@"           empty word
    "1.2.3"       finite word
    "(3.1)"       periodic word 3 1 3 1 ...
    "1.2:(3.1)"   preperiod 1 2, then period 3 1 repeating
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, WordSyntaxError

#: Sentinel letter used by the embedding of finite words; outside the
#: 0-based user letter range by construction.
TAU = -1


@dataclass(frozen=True)
class FiniteWord:
    """A finite (possibly empty) word; the empty word plays the role of the
    identity for concatenation."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if any((not isinstance(l, int)) or l < 0 for l in self.letters):
            raise DomainError("letters must be non-negative integers")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)


EMPTY_WORD = FiniteWord(())


def _primitive_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for length in range(1, n + 1):
        if n % length == 0 and period[:length] * (n // length) == period:
            return period[:length]
    return period


@dataclass(frozen=True)
class InfiniteWordSpec:
    """Eventually periodic infinite word ``preperiod . period period ...``.

    Construction normalizes to the canonical form with primitive period and
    minimal preperiod, which makes equality (and injectivity of the
    embedding) decidable.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __init__(self, preperiod=(), period=()):
        preperiod = tuple(int(l) for l in preperiod)
        period = tuple(int(l) for l in period)
        if not period:
            raise DomainError("period must be non-empty")
        if any(l < 0 for l in preperiod + period):
            raise DomainError("letters must be non-negative integers")
        period = _primitive_period(period)
        pre = list(preperiod)
        per = list(period)
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = [per[-1]] + per[:-1]
        object.__setattr__(self, "preperiod", tuple(pre))
        object.__setattr__(self, "period", tuple(per))

    def __str__(self) -> str:
        return format_word(self)


TotalWord = Union[FiniteWord, InfiniteWordSpec]


def letter_at(w: TotalWord, n: int) -> int:
    """Letter at (1-based) position n of the embedded word; TAU past the end
    of a finite word."""
    if n < 1:
        raise DomainError("positions are 1-based")
    if isinstance(w, FiniteWord):
        return w.letters[n - 1] if n <= len(w.letters) else TAU
    pre, per = w.preperiod, w.period
    if n <= len(pre):
        return pre[n - 1]
    return per[(n - len(pre) - 1) % len(per)]


def prefix(w: TotalWord, n: int) -> FiniteWord:
    """The word of the first n letters; a finite word shorter than n is
    returned whole."""
    if n < 0:
        raise DomainError("prefix length must be >= 0")
    if isinstance(w, FiniteWord):
        return FiniteWord(w.letters[:n])
    return FiniteWord(tuple(letter_at(w, k) for k in range(1, n + 1)))


def concat(a: FiniteWord, b: TotalWord) -> TotalWord:
    if isinstance(b, FiniteWord):
        return FiniteWord(a.letters + b.letters)
    return InfiniteWordSpec(a.letters + b.preperiod, b.period)


def shift_map(i: int, w: TotalWord) -> TotalWord:
    """Prepend the letter i (the shift F_i on code space)."""
    return concat(FiniteWord((int(i),)), w)


def word_eq_to_depth(a: TotalWord, b: TotalWord, n: int) -> bool:
    """True iff the embedded words agree on positions 1..n."""
    if n < 0:
        raise DomainError("depth must be >= 0")
    return all(letter_at(a, k) == letter_at(b, k) for k in range(1, n + 1))


def _embedded(w: TotalWord) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if isinstance(w, FiniteWord):
        return w.letters, (TAU,)
    return w.preperiod, w.period


def dc_distance(a: TotalWord, b: TotalWord, c=Fraction(1, 2)):
    """Code-space distance with weight c^n at position n, computed exactly.

    The sum is split at P = max preperiod length: positions up to P are
    summed term by term, and beyond P the disagreement pattern repeats with
    period L = lcm of the period lengths, so the rest is a geometric series
    with the closed form sum/(1 - c^L).

    ``c`` may be a float, Fraction, int or a string like "1/2"; the result
    is an exact Fraction unless c was given as a float, in which case the
    exact value (for the binary value of c) is rounded once at the end.
    """
    as_float = isinstance(c, float)
    try:
        cq = Fraction(c)
    except ValueError as exc:
        raise DomainError(f"cannot interpret c={c!r} as a rational") from exc
    if not (0 <= cq < 1):
        raise DomainError(f"c must lie in [0, 1), got {c!r}")
    pre_a, per_a = _embedded(a)
    pre_b, per_b = _embedded(b)
    P = max(len(pre_a), len(pre_b))
    L = math.lcm(len(per_a), len(per_b))
    total = Fraction(0)
    weight = Fraction(1)
    for n in range(1, P + 1):
        weight *= cq
        if letter_at(a, n) != letter_at(b, n):
            total += weight
    if cq != 0:
        cycle = Fraction(0)
        for j in range(1, L + 1):
            weight *= cq
            if letter_at(a, P + j) != letter_at(b, P + j):
                cycle += weight
        total += cycle / (1 - cq**L)
    return float(total) if as_float else total


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

_LETTERS_RE = re.compile(r"^\d+(\.\d+)*$")


def _parse_letters(part: str, what: str) -> tuple[int, ...]:
    if not _LETTERS_RE.match(part):
        raise WordSyntaxError(f"malformed {what} {part!r}")
    letters = tuple(int(tok) for tok in part.split("."))
    if any(l < 1 for l in letters):
        raise WordSyntaxError("letters in word syntax are 1-based (got 0)")
    return tuple(l - 1 for l in letters)


def parse_word(text: str) -> TotalWord:
    """Parse the textual word syntax documented in the module docstring."""
    text = text.strip()
    if text == "@":
        return EMPTY_WORD
    if "(" in text or ")" in text or ":" in text:
        m = re.fullmatch(r"(?:([^:()]*):)?\((.+)\)", text)
        if m is None:
            raise WordSyntaxError(f"malformed word {text!r}")
        pre_part, per_part = m.group(1), m.group(2)
        pre = _parse_letters(pre_part, "preperiod") if pre_part else ()
        per = _parse_letters(per_part, "period")
        return InfiniteWordSpec(pre, per)
    return FiniteWord(_parse_letters(text, "word"))


def format_word(w: TotalWord) -> str:
    if isinstance(w, FiniteWord):
        if not w.letters:
            return "@"
        return ".".join(str(l + 1) for l in w.letters)
    per = ".".join(str(l + 1) for l in w.period)
    if not w.preperiod:
        return f"({per})"
    pre = ".".join(str(l + 1) for l in w.preperiod)
    return f"{pre}:({per})"
