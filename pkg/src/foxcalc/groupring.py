"""Integer group ring Z[F] over the free-product words of :mod:`foxcalc.words`."""
from __future__ import annotations

import re
from collections import defaultdict
from typing import Mapping

from .errors import DomainError
from .words import FactorTable, Word, parse_word, shortlex_key

_SPLIT_RE = re.compile(r" ([+-]) ")
_COEF_RE = re.compile(r"-?\d+\Z")


class RingElement:
    """Finitely supported integer combination of words.

    Instances are treated as immutable; ``terms`` never stores a zero
    coefficient and the empty mapping is the ring zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w: Word, coef: int = 1) -> "RingElement":
        return cls({w: coef})

    @classmethod
    def scalar(cls, table: FactorTable, coef: int) -> "RingElement":
        return cls({table.identity(): coef})

    @classmethod
    def of(cls, x) -> "RingElement":
        return x if isinstance(x, RingElement) else cls.word(x)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Word):
            other = RingElement.word(other)
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return RingElement(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement({w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            return RingElement({w * other: c for w, c in self.terms.items()})
        if not isinstance(other, RingElement):
            return NotImplemented
        out = defaultdict(int)
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out[u * v] += a * b
        return RingElement(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return RingElement({other * w: c for w, c in self.terms.items()})
        return NotImplemented

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def support(self) -> list:
        return sorted(self.terms, key=shortlex_key)

    def map_words(self, fn) -> "RingElement":
        """Apply a group homomorphism ``fn`` (Word -> Word) to the support."""
        out = defaultdict(int)
        for w, c in self.terms.items():
            out[fn(w)] += c
        return RingElement(out)

    def __str__(self):
        return format_ring(self)

    def __repr__(self):
        return f"RingElement({format_ring(self)!r})"


def _coerce(x, like: RingElement):
    if isinstance(x, RingElement):
        return x
    if isinstance(x, Word):
        return RingElement.word(x)
    if isinstance(x, int):
        if x == 0:
            return RingElement()
        table = _table_of(like)
        if table is None:
            raise DomainError("cannot add a nonzero integer to the zero element without a factor table")
        return RingElement.scalar(table, x)
    return None


def _table_of(u: RingElement):
    for w in u.terms:
        return w.table
    return None


def ring_mul(u: RingElement, v: RingElement) -> RingElement:
    return RingElement.of(u) * RingElement.of(v)


def augmentation(u) -> int:
    return RingElement.of(u).augmentation()


def coset_collapse(u, q) -> dict:
    """Sum coefficients of ``u`` over cosets of ``N = ker q``.

    The result maps coset keys to nonzero integers; it is empty exactly when
    ``u`` lies in the left ideal ``Z[F](N - 1)``, i.e. maps to zero in
    ``Z[F/N]``.
    """
    out = defaultdict(int)
    for w, c in RingElement.of(u).terms.items():
        out[q.image(w)] += c
    return {k: c for k, c in sorted(out.items()) if c}


def in_augmented_kernel_ideal(u, q) -> bool:
    return not coset_collapse(u, q)


def format_ring(u: RingElement) -> str:
    if not u.terms:
        return "0"
    parts = []
    for i, w in enumerate(u.support()):
        c = u.terms[w]
        body = f"{abs(c)}*{w if w.syllables else '1'}"
        if i == 0:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def parse_ring(table: FactorTable, text: str) -> RingElement:
    text = text.strip()
    if text == "0":
        return RingElement()
    pieces = _SPLIT_RE.split(text)
    signs = ["+"] + pieces[1::2]
    out = defaultdict(int)
    for sign, term in zip(signs, pieces[0::2]):
        coef_s, star, word_s = term.partition("*")
        if not star or not _COEF_RE.match(coef_s):
            raise DomainError(f"bad ring term {term!r}")
        coef = int(coef_s)
        if sign == "-":
            coef = -coef
        out[parse_word(table, word_s)] += coef
    return RingElement(out)
