"""Subdivision level sequences and their derived product scales.

A gasket approximation is parameterized by a sequence (l_1, l_2, ...) of
subdivision levels, each at least 5.  Only a finite prefix is stored; queries
past the prefix are answered by an optional continuation rule ("repeat-last"
or an explicit table) and rejected otherwise.

Derived per-level quantities:

    cell_count(l)        = 3l - 3        boundary cells of one subdivision
    resistance_ratio(l)  = 9/(6l + 1)    energy contraction of one subdivision
    harmonic_weight(l)   = 1/(6l + 1)    unit step of subdivision harmonics
    time_factor(l)       = cell_count(l)/resistance_ratio(l)
                         = 2l^2 - (5/3)l - 1/3

and their products along the sequence: L_n (length scale), M_n (cell count),
R_n (resistance scale), T_n = M_n/R_n (time scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SequenceError

MIN_LEVEL = 5

REPEAT_LAST = "repeat-last"
TABLE = "table"
_CONTINUATIONS = (None, REPEAT_LAST, TABLE)


def check_level(l: int) -> int:
    if not isinstance(l, int) or isinstance(l, bool) or l < MIN_LEVEL:
        raise SequenceError(f"subdivision level must be an integer >= {MIN_LEVEL}, got {l!r}")
    return l


def cell_count(l: int) -> int:
    """Number of boundary cells kept by one l-fold subdivision."""
    return 3 * check_level(l) - 3


def resistance_ratio(l: int) -> Fraction:
    """Exact energy contraction ratio r_l = 9/(6l+1) of one subdivision."""
    return Fraction(9, 6 * check_level(l) + 1)


def harmonic_weight(l: int) -> Fraction:
    """The unit a_l = r_l/9 = 1/(6l+1) in which subdivision harmonics are expressed."""
    return Fraction(1, 6 * check_level(l) + 1)


def time_factor(l: int) -> Fraction:
    """cell_count(l)/resistance_ratio(l) = 2l^2 - (5/3)l - 1/3, exact."""
    return Fraction(cell_count(l), 1) / resistance_ratio(l)


def walk_exponent(l: int) -> float:
    """log base l of time_factor(l); lies in (2, 2 + log_5 2) and decreases to 2."""
    t = time_factor(check_level(l))
    # big-int safe: math.log takes arbitrary-precision integers directly
    return (math.log(t.numerator) - math.log(t.denominator)) / math.log(l)


@dataclass(frozen=True)
class LevelSequence:
    """A stored prefix of subdivision levels plus a continuation rule.

    entries: the prefix (l_1, ..., l_N), every entry >= 5.
    continuation: None (reject queries past the prefix), "repeat-last",
        or "table" (consult `table` for entries N+1, N+2, ...).
    diverging: marks sequences designed with l_n -> infinity (realization
        output); scale builders use it to pick limiting tail exponents.
    """

    entries: tuple[int, ...]
    continuation: str | None = None
    table: tuple[int, ...] = ()
    diverging: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(l) for l in self.entries))
        object.__setattr__(self, "table", tuple(int(l) for l in self.table))
        for l in self.entries:
            check_level(l)
        for l in self.table:
            check_level(l)
        if self.continuation not in _CONTINUATIONS:
            raise SequenceError(f"unknown continuation rule {self.continuation!r}")
        if self.continuation == REPEAT_LAST and not self.entries:
            raise SequenceError("repeat-last continuation needs a nonempty prefix")

    # -- single levels ------------------------------------------------------

    def level(self, n: int) -> int:
        """The n-th subdivision level, 1-based."""
        if n < 1:
            raise SequenceError(f"level index must be >= 1, got {n}")
        if n <= len(self.entries):
            return self.entries[n - 1]
        if self.continuation == REPEAT_LAST:
            return self.entries[-1]
        if self.continuation == TABLE:
            j = n - len(self.entries)
            if j <= len(self.table):
                return self.table[j - 1]
            raise SequenceError(f"level {n} past the stored prefix and table")
        raise SequenceError(
            f"level {n} past the stored prefix of length {len(self.entries)}; "
            "set a continuation rule to extend"
        )

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.level(k) for k in range(1, n + 1))

    def materialized(self) -> tuple[int, ...]:
        """All explicitly stored levels (prefix plus table)."""
        return self.entries + self.table

    def supports_depth(self, n: int) -> bool:
        try:
            self.level(max(n, 1)) if n > 0 else None
            self.prefix(n)
            return True
        except SequenceError:
            return False

    # -- product scales -----------------------------------------------------

    def L(self, n: int) -> int:
        """Length denominator L_n = l_1 * ... * l_n (L_0 = 1)."""
        out = 1
        for k in range(1, n + 1):
            out *= self.level(k)
        return out

    def M(self, n: int) -> int:
        """Cell count M_n = prod (3 l_k - 3) (M_0 = 1)."""
        out = 1
        for k in range(1, n + 1):
            out *= cell_count(self.level(k))
        return out

    def R(self, n: int) -> Fraction:
        """Resistance scale R_n = prod r_{l_k} (R_0 = 1)."""
        out = Fraction(1)
        for k in range(1, n + 1):
            out *= resistance_ratio(self.level(k))
        return out

    def T(self, n: int) -> Fraction:
        """Time scale T_n = M_n / R_n = prod (2 l_k^2 - (5/3) l_k - 1/3)."""
        out = Fraction(1)
        for k in range(1, n + 1):
            out *= time_factor(self.level(k))
        return out
