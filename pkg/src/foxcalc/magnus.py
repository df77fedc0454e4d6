"""Degree-truncated Magnus expansion ``x -> 1 + X`` of torsion-free words.

Monomials are tuples of factor ids; a ``TruncatedSeries`` keeps only
monomials of length ``<= cap``.  Coefficients are ints, or Fractions after
taking logarithms.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError, UnsupportedTorsionError
from .groupring import RingElement
from .words import FINITE, Word

HARD_MAX_CAP = 8
DEFAULT_CAP = 4


def _check_cap(cap: int):
    if not 1 <= cap <= HARD_MAX_CAP:
        raise DomainError(f"degree cap must be in 1..{HARD_MAX_CAP}, got {cap}")


class TruncatedSeries:
    __slots__ = ("cap", "terms")

    def __init__(self, cap: int, terms=None):
        self.cap = cap
        self.terms = {m: c for m, c in (terms or {}).items() if c and len(m) <= cap}

    @classmethod
    def one(cls, cap: int) -> "TruncatedSeries":
        return cls(cap, {(): 1})

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cap == other.cap and self.terms == other.terms

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = defaultdict(int, self.terms)
        for m, c in other.terms.items():
            out[m] += c
        return TruncatedSeries(min(self.cap, other.cap), out)

    def __neg__(self):
        return TruncatedSeries(self.cap, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.cap, {m: c * a for m, a in self.terms.items()})

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        cap = min(self.cap, other.cap)
        out = defaultdict(int)
        right = sorted(other.terms.items(), key=lambda kv: len(kv[0]))
        for m, a in self.terms.items():
            room = cap - len(m)
            for n, b in right:
                if len(n) > room:
                    break
                out[m + n] += a * b
        return TruncatedSeries(cap, out)

    def min_degree(self):
        return min((len(m) for m in self.terms), default=None)

    def component(self, d: int) -> dict:
        return {m: c for m, c in self.terms.items() if len(m) == d}

    def without_constant(self) -> "TruncatedSeries":
        return TruncatedSeries(self.cap, {m: c for m, c in self.terms.items() if m})

    def __repr__(self):
        return f"TruncatedSeries(cap={self.cap}, {format_series(self)!r})"


def _binomial(e: int, j: int) -> int:
    # generalized binomial coefficient, valid for negative e
    num = 1
    for i in range(j):
        num *= e - i
    return num // math.factorial(j)


def syllable_series(var: int, e: int, cap: int) -> TruncatedSeries:
    return TruncatedSeries(cap, {(var,) * j: _binomial(e, j) for j in range(cap + 1)})


def expand(w: Word, cap: int) -> TruncatedSeries:
    _check_cap(cap)
    t = w.table
    out = TruncatedSeries.one(cap)
    for f, e in w.syllables:
        if t[f].kind == FINITE:
            raise UnsupportedTorsionError(f"factor {t[f].name} has torsion; Magnus expansion needs a free basis")
        out = out * syllable_series(f, e, cap)
    return out


def expand_ring(u, cap: int) -> TruncatedSeries:
    _check_cap(cap)
    acc = TruncatedSeries(cap)
    for w, c in RingElement.of(u).terms.items():
        acc = acc + expand(w, cap).scale(c)
    return acc


@dataclass(frozen=True)
class WeightReport:
    """Lowest degree of a truncated expansion.

    ``weight`` is None when nothing nonzero appears through ``cap``; then the
    true value is only known to be ``>= cap + 1`` (or infinite when
    ``is_zero``).
    """
    weight: int | None
    cap: int
    witness: tuple | None = None
    is_zero: bool = False

    @property
    def sentinel(self) -> bool:
        return self.weight is None

    def at_least(self, n: int) -> bool:
        return self.weight is None or self.weight >= n

    def __str__(self):
        if self.weight is not None:
            return str(self.weight)
        return "inf" if self.is_zero else f">={self.cap + 1}"


def _report(series: TruncatedSeries, cap: int, exact_zero: bool) -> WeightReport:
    d = series.min_degree()
    if d is None:
        return WeightReport(None, cap, None, exact_zero)
    witness = min(m for m in series.terms if len(m) == d)
    return WeightReport(d, cap, witness)


def weight(u, cap: int) -> WeightReport:
    u = RingElement.of(u)
    return _report(expand_ring(u, cap), cap, not u)


def lcs_degree_direct(w: Word, cap: int) -> WeightReport:
    return _report(expand(w, cap).without_constant(), cap, w.is_identity)


def lcs_degree_fox(w: Word, cap: int) -> WeightReport:
    """``1 + min_j weight(D_j(w))`` with free-letter Fox derivatives."""
    from .fox import derivative

    _check_cap(cap)
    free = w.table.as_free()
    v = Word(free, w.syllables)
    best = None
    for f in free:
        rep = weight(derivative(f.id, v), cap)
        if rep.weight is not None and (best is None or rep.weight < best):
            best = rep.weight
    if best is None or best + 1 > cap:
        return WeightReport(None, cap, None, w.is_identity)
    direct = lcs_degree_direct(w, cap)
    return WeightReport(best + 1, cap, direct.witness)


def lcs_degree(w: Word, cap: int) -> WeightReport:
    """LCS degree of ``w`` read off the Magnus expansion, cross-checked by Fox."""
    direct = lcs_degree_direct(w, cap)
    via_fox = lcs_degree_fox(w, cap)
    if direct.weight != via_fox.weight:
        raise AssertionError(f"Magnus and Fox routes disagree on {w}: {direct} vs {via_fox}")
    return direct


def retract(w: Word, keep: Iterable[int]) -> Word:
    """Image of ``w`` under the endomorphism killing factors outside ``keep``."""
    keep = set(keep)
    return w.table.word([s for s in w.syllables if s[0] in keep])


def in_subgroup_mod_gamma(w: Word, K: Iterable[int], n: int) -> bool:
    """Is ``w`` in the subgroup generated by factors ``K`` and ``gamma_{n+1}``?"""
    if n + 1 > HARD_MAX_CAP:
        raise DomainError(f"n + 1 must be <= {HARD_MAX_CAP}")
    rest = w * retract(w, K).inverse()
    return lcs_degree_direct(rest, n + 1).at_least(n + 1)


def log_series(s: TruncatedSeries) -> TruncatedSeries:
    """``log(s)`` for a series with constant term 1, with Fraction coefficients."""
    if s.terms.get((), 0) != 1:
        raise DomainError("log needs constant term 1")
    a = s.without_constant()
    out = TruncatedSeries(s.cap)
    power = TruncatedSeries.one(s.cap)
    for k in range(1, s.cap + 1):
        power = power * a
        if not power.terms:
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def format_series(s: TruncatedSeries, names=None) -> str:
    if not s.terms:
        return "0"
    parts = []
    for m in sorted(s.terms, key=lambda m: (len(m), m)):
        c = s.terms[m]
        mono = "*".join((names[v] if names else f"X{v}") for v in m) or "1"
        parts.append((c, mono))
    out = []
    for i, (c, mono) in enumerate(parts):
        body = f"{abs(c)}*{mono}" if mono != "1" else f"{abs(c)}"
        if i == 0:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)
