"""Free Lie algebra in Hall coordinates, and leading Lie terms of group words.

The Hall basis used here is the Lyndon one: basis elements are Lyndon words
over the variable ids (ordered lexicographically by id), bracketed by the
standard factorization ``w = uv`` with ``v`` the longest proper Lyndon
suffix.  For two variables this gives ``[x,y]``, ``[x,[x,y]]``,
``[[x,y],y]``, ...
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import _linalg
from .errors import DomainError
from .magnus import HARD_MAX_CAP, expand, lcs_degree_direct, log_series
from .words import Word, commutator


def lyndon_words(variables: Iterable[int], n: int) -> list:
    """Lyndon words of length exactly ``n`` in lexicographic order (Duval)."""
    alpha = sorted(set(variables))
    k = len(alpha)
    if k == 0 or n < 1:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(alpha[i] for i in w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def is_lyndon(w: tuple) -> bool:
    # strictly smaller than each proper suffix
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(w: tuple):
    if len(w) < 2:
        raise DomainError("letters have no factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise DomainError(f"{w} is not a Lyndon word")


@lru_cache(maxsize=None)
def bracket_poly(w: tuple):
    """Noncommutative polynomial of the Hall element for Lyndon word ``w``."""
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    pu, pv = dict(bracket_poly(u)), dict(bracket_poly(v))
    return tuple(sorted(_commute(pu, pv).items()))


def _mul(p: dict, q: dict) -> dict:
    out = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return {k: c for k, c in out.items() if c}


def _commute(p: dict, q: dict) -> dict:
    out = defaultdict(int, _mul(p, q))
    for k, c in _mul(q, p).items():
        out[k] -= c
    return {k: c for k, c in out.items() if c}


def hall_name(w: tuple, names=None) -> str:
    if len(w) == 1:
        return names[w[0]] if names else f"x{w[0] + 1}"
    u, v = standard_factorization(w)
    return f"[{hall_name(u, names)},{hall_name(v, names)}]"


def hall_word(w: tuple, table) -> Word:
    """Group commutator realizing the Hall element ``w`` (``[a,b] = a^-1 b^-1 a b``)."""
    if len(w) == 1:
        return table.gen(w[0])
    u, v = standard_factorization(w)
    return commutator(hall_word(u, table), hall_word(v, table))


class LieElement:
    """Rational combination of Hall (Lyndon) basis elements."""

    __slots__ = ("coords",)

    def __init__(self, coords=None):
        self.coords = {w: Fraction(c) for w, c in (coords or {}).items() if c}

    @classmethod
    def basis(cls, w: tuple) -> "LieElement":
        return cls({tuple(w): 1})

    @classmethod
    def from_poly(cls, poly: dict) -> "LieElement":
        return cls(hall_coordinates(poly))

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def __bool__(self):
        return bool(self.coords)

    def __add__(self, other):
        out = defaultdict(Fraction, self.coords)
        for w, c in other.coords.items():
            out[w] += c
        return LieElement(out)

    def __neg__(self):
        return LieElement({w: -c for w, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LieElement":
        return LieElement({w: c * a for w, a in self.coords.items()})

    def degrees(self) -> set:
        return {len(w) for w in self.coords}

    @property
    def degree(self):
        d = self.degrees()
        if len(d) > 1:
            raise DomainError("Lie element is not homogeneous")
        return d.pop() if d else None

    def variables(self) -> set:
        return {v for w in self.coords for v in w}

    def to_poly(self) -> dict:
        out = defaultdict(Fraction)
        for w, c in self.coords.items():
            for m, a in bracket_poly(w):
                out[m] += c * a
        return {m: c for m, c in out.items() if c}

    def to_format(self, names=None) -> str:
        if not self.coords:
            return "0"
        parts = []
        for i, w in enumerate(sorted(self.coords, key=lambda w: (len(w), w))):
            c = self.coords[w]
            body = hall_name(w, names)
            mag = abs(c)
            if mag != 1:
                body = f"{mag}*{body}"
            parts.append((body if c > 0 else "-" + body) if i == 0 else (" + " if c > 0 else " - ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_format()

    def __repr__(self):
        return f"LieElement({self.to_format()!r})"


def lie_bracket(a: LieElement, b: LieElement) -> LieElement:
    return LieElement.from_poly(_commute(a.to_poly(), b.to_poly()))


def hall_coordinates(poly: dict) -> dict:
    """Hall coordinates of a Lie polynomial, triangular in the Lyndon order.

    Each bracketed Lyndon word ``w`` expands to ``w`` plus lexicographically
    larger words of the same length, so peeling off the smallest monomial
    recovers the coordinates.  Non-Lie input is rejected.
    """
    rest = {m: Fraction(c) for m, c in poly.items() if c}
    coords = {}
    while rest:
        m = min(rest, key=lambda w: (len(w), w))
        if not is_lyndon(m):
            raise DomainError(f"polynomial is not a Lie element (stray monomial {m})")
        c = rest[m]
        coords[m] = c
        for k, a in bracket_poly(m):
            nv = rest.get(k, 0) - c * a
            if nv:
                rest[k] = nv
            else:
                rest.pop(k, None)
    return coords


def homogeneous_log(w: Word, cap: int) -> dict:
    """Degree components of ``log(expand(w))`` as raw polynomials.

    Under ``x -> 1 + X`` only the lowest component is guaranteed to be a Lie
    polynomial, so nothing is converted here.
    """
    logs = log_series(expand(w, cap))
    by_deg = defaultdict(dict)
    for m, c in logs.terms.items():
        by_deg[len(m)][m] = c
    return dict(sorted(by_deg.items()))


def leading_lie(w: Word, cap: int):
    """Lowest nonzero homogeneous component of ``log(expand(w))``.

    Returns ``None`` when ``w`` expands to 1 through ``cap`` (identity or
    degree overflow).
    """
    d = lcs_degree_direct(w, cap).weight
    if d is None:
        return None
    return LieElement.from_poly(homogeneous_log(w, cap)[d])


def _subalgebra_basis(sub_vars, d: int) -> list:
    return [LieElement.basis(w) for w in lyndon_words(sub_vars, d)]


def lie_ideal_meet_subalgebra(gens, sub_vars, cap: int, variables=None, with_basis: bool = False):
    """Dimension per degree of ``ideal(gens) & subalgebra(sub_vars)``.

    ``variables`` is the ambient alphabet (defaults to every id seen in
    ``gens`` and ``sub_vars``).  Positive dimension at some degree exhibits a
    nonzero Lie element of the subalgebra inside the ideal; zero everywhere
    says nothing beyond ``cap``.  With ``with_basis`` the intersection bases
    (as LieElements) are returned alongside.
    """
    if not 1 <= cap <= HARD_MAX_CAP:
        raise DomainError(f"cap must be in 1..{HARD_MAX_CAP}")
    gens = [g for g in gens if g]
    for g in gens:
        if len(g.degrees()) != 1:
            raise DomainError("ideal generators must be homogeneous")
    sub_vars = sorted(set(sub_vars))
    if variables is None:
        variables = set(sub_vars)
        for g in gens:
            variables |= g.variables()
    variables = sorted(set(variables))
    letters = [LieElement.basis((v,)) for v in variables]
    dims, bases = {}, {}
    layer = []  # spanning set of the ideal in the previous degree
    for d in range(1, cap + 1):
        span = _linalg.Echelon()
        for b in layer:
            for y in letters:
                span.add(lie_bracket(b, y).coords)
        for g in gens:
            if g.degree == d:
                span.add(g.coords)
        ideal_d = [LieElement(r) for r in span.basis()]
        sub_d = _subalgebra_basis(sub_vars, d)
        meet = _linalg.intersection([v.coords for v in ideal_d], [v.coords for v in sub_d])
        dims[d] = len(meet)
        bases[d] = [LieElement(v) for v in meet]
        layer = ideal_d
    return (dims, bases) if with_basis else dims
