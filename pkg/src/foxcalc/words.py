"""Normal forms for elements of a free product of cyclic groups and free letters.

A word is a tuple of syllables ``(factor_id, exponent)`` in which adjacent
syllables belong to different factors.  Free letters and infinite cyclic
factors are the same group (``Z``); they differ only in which Fox derivative
rule applies to them (see :mod:`foxcalc.fox`).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, UnknownFactorError

FREE = "free"
INFINITE = "infinite"
FINITE = "finite"
KINDS = (FREE, INFINITE, FINITE)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")

Syllable = tuple  # (factor id, nonzero exponent)


@dataclass(frozen=True)
class FactorSpec:
    id: int
    kind: str
    name: str
    order: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown factor kind {self.kind!r}")
        if not _NAME_RE.match(self.name):
            raise DomainError(f"bad factor name {self.name!r}")
        if self.kind == FINITE and self.order < 2:
            raise DomainError(f"finite cyclic factor {self.name} needs order >= 2")
        if self.kind != FINITE and self.order != 0:
            raise DomainError(f"factor {self.name} is not finite but has order {self.order}")

    @property
    def torsion_free(self) -> bool:
        return self.kind != FINITE

    def reduce(self, exponent: int) -> int:
        return exponent % self.order if self.kind == FINITE else exponent


@dataclass(frozen=True)
class FactorTable:
    factors: tuple
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        for i, f in enumerate(factors):
            if f.id != i:
                raise DomainError(f"factor ids must be 0..n-1 in order, got {f.id} at {i}")
        names = {f.name: f.id for f in factors}
        if len(names) != len(factors):
            raise DomainError("factor names must be unique")
        object.__setattr__(self, "_by_name", names)

    @classmethod
    def build(cls, specs: Iterable) -> "FactorTable":
        """Build from ``(name, kind)`` or ``(name, kind, order)`` tuples."""
        out = []
        for i, spec in enumerate(specs):
            name, kind, *rest = spec
            out.append(FactorSpec(i, kind, name, rest[0] if rest else 0))
        return cls(tuple(out))

    @classmethod
    def free(cls, names: Iterable[str]) -> "FactorTable":
        return cls.build((n, FREE) for n in names)

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, i: int) -> FactorSpec:
        return self.factors[i]

    def __iter__(self):
        return iter(self.factors)

    @property
    def names(self) -> tuple:
        return tuple(f.name for f in self.factors)

    @property
    def torsion_free(self) -> bool:
        return all(f.torsion_free for f in self.factors)

    def index(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownFactorError(f"unknown factor {name!r}") from None

    def check_id(self, k: int) -> FactorSpec:
        if not isinstance(k, int) or not 0 <= k < len(self.factors):
            raise UnknownFactorError(f"unknown factor id {k!r}")
        return self.factors[k]

    # construction helpers

    def identity(self) -> "Word":
        return Word(self, ())

    def gen(self, ref, exponent: int = 1) -> "Word":
        k = self.index(ref) if isinstance(ref, str) else ref
        return normalize(self, [(k, exponent)])

    def word(self, raw: Sequence) -> "Word":
        return normalize(self, raw)

    def parse(self, text: str) -> "Word":
        return parse_word(self, text)

    def letters(self) -> list:
        """BFS letter alphabet: factor id ascending, positive before negative."""
        out = []
        for f in self.factors:
            if f.kind == FINITE:
                out.extend((f.id, e) for e in range(1, f.order))
            else:
                out.extend([(f.id, 1), (f.id, -1)])
        return out

    def as_free(self) -> "FactorTable":
        """Same names with every torsion-free factor turned into a free letter."""
        for f in self.factors:
            if not f.torsion_free:
                raise DomainError(f"factor {f.name} has torsion")
        return FactorTable.free(self.names)


@dataclass(frozen=True, eq=False)
class Word:
    table: FactorTable = field(repr=False)
    syllables: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.syllables == other.syllables and (
            self.table is other.table or self.table == other.table)

    def __hash__(self):
        return hash(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.table is not self.table and other.table != self.table:
            raise DomainError("words over different factor tables")
        if not self.syllables:
            return other
        if not other.syllables:
            return self
        return normalize(self.table, self.syllables + other.syllables, _trusted=True)

    def inverse(self) -> "Word":
        t = self.table
        return Word(t, tuple((f, t[f].reduce(-e)) for f, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.table.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __len__(self):
        return len(self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def letter_length(self) -> int:
        t = self.table
        return sum(1 if t[f].kind == FINITE else abs(e) for f, e in self.syllables)

    def letters(self) -> list:
        """Expand into single letters; a finite-cyclic syllable is one letter."""
        t = self.table
        out = []
        for f, e in self.syllables:
            if t[f].kind == FINITE:
                out.append((f, e))
            else:
                out.extend([(f, 1 if e > 0 else -1)] * abs(e))
        return out

    def factor_ids(self) -> set:
        return {f for f, _ in self.syllables}

    def sort_key(self):
        return shortlex_key(self)

    def __lt__(self, other: "Word") -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def exponent_sum(self, k: int) -> int:
        return sum(e for f, e in self.syllables if f == k)


def shortlex_key(w: Word):
    return (len(w.syllables), tuple((f, 0 if e > 0 else 1, abs(e)) for f, e in w.syllables))


def enumerate_words(table: FactorTable, max_len: int) -> list:
    """All normal-form words of letter length ``<= max_len``, shortlex within each length."""
    letters = [Word(table, (l,)) for l in table.letters()]
    layer = [table.identity()]
    out = list(layer)
    for depth in range(1, max_len + 1):
        nxt = {v for w in layer for l in letters if (v := w * l).letter_length() == depth}
        layer = sorted(nxt, key=shortlex_key)
        out += layer
    return out


def normalize(table: FactorTable, raw: Sequence, _trusted: bool = False) -> Word:
    stack: list = []
    for syl in raw:
        f, e = syl
        spec = table[f] if _trusted else table.check_id(f)
        e = spec.reduce(e)
        if e == 0:
            continue
        if stack and stack[-1][0] == f:
            merged = spec.reduce(stack[-1][1] + e)
            stack.pop()
            if merged:
                stack.append((f, merged))
        else:
            stack.append((f, e))
    return Word(table, tuple(stack))


def mul(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def is_cyclically_reduced(w: Word) -> bool:
    s = w.syllables
    return len(s) < 2 or s[0][0] != s[-1][0]


def cyclic_reduce(w: Word):
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1``."""
    t = w.table
    conj = t.identity()
    core = w
    while not is_cyclically_reduced(core):
        s = core.syllables
        first, last = s[0], s[-1]
        if t[first[0]].reduce(first[1] + last[1]) == 0:
            # core = first * middle * first^-1
            piece = Word(t, (first,))
            core = Word(t, s[1:-1])
        else:
            # core = last^-1 * (last first ... ) * last
            piece = Word(t, (last,)).inverse()
            core = normalize(t, (last,) + s[:-1], _trusted=True)
        conj = conj * piece
    return core, conj


def format_word(w: Word) -> str:
    names = w.table.names
    return " ".join(names[f] if e == 1 else f"{names[f]}^{e}" for f, e in w.syllables)


def parse_word(table: FactorTable, text: str) -> Word:
    raw = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN_RE.match(tok)
        if not m:
            raise DomainError(f"bad word token {tok!r}")
        raw.append((table.index(m.group(1)), int(m.group(2)) if m.group(2) else 1))
    return normalize(table, raw)


def free_table_for(text: str) -> FactorTable:
    """Factor table of free letters named in ``text``, sorted by name."""
    names = set()
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN_RE.match(tok)
        if not m:
            raise DomainError(f"bad word token {tok!r}")
        names.add(m.group(1))
    return FactorTable.free(sorted(names))
