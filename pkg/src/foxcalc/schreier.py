"""Quotient maps to abelian groups, Schreier transversals, Reidemeister-Schreier.

A ``QuotientHom`` sends each factor to a vector in ``Z^a x Z/o_1 x ...``;
``orders[c] == 0`` marks a free coordinate.  Coset keys are image vectors
reduced modulo the orders.

Transversals follow the alpha/beta discipline: cosets that meet the subgroup
``H`` generated by the factors in ``P`` (alpha) get representatives that are
``H``-words built by extending shorter alpha representatives one letter at a
time; every other coset (beta) extends the representative of a coset one
step closer to the identity.  Both steps keep the table prefix-closed.
Only cosets within ``radius`` letters are explored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import _linalg
from .errors import BoundExceeded, DomainError, NotInKernelError
from .words import FINITE, FactorTable, Word

ALPHA = "alpha"
BETA = "beta"


@dataclass(frozen=True)
class QuotientHom:
    table: FactorTable = field(repr=False)
    orders: tuple
    images: tuple

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        images = tuple(tuple(int(c) for c in img) for img in self.images)
        object.__setattr__(self, "orders", orders)
        if len(images) != len(self.table):
            raise DomainError("need one image per factor")
        if any(o < 0 for o in orders):
            raise DomainError("coordinate orders must be >= 0")
        images = tuple(self._reduce(img) for img in images)
        object.__setattr__(self, "images", images)
        for f in self.table:
            if len(images[f.id]) != len(orders):
                raise DomainError(f"image of {f.name} has the wrong length")
            if f.kind == FINITE and any(self._reduce([f.order * c for c in images[f.id]])):
                raise DomainError(f"image of {f.name} does not respect its order {f.order}")

    @classmethod
    def abelianization(cls, table: FactorTable) -> "QuotientHom":
        n = len(table)
        orders = tuple(f.order for f in table)
        images = tuple(tuple(int(i == f.id) for i in range(n)) for f in table)
        return cls(table, orders, images)

    @classmethod
    def free_abelian(cls, table: FactorTable, images) -> "QuotientHom":
        images = tuple(tuple(v) for v in images)
        return cls(table, (0,) * len(images[0]), images)

    @classmethod
    def parse(cls, table: FactorTable, text: str) -> "QuotientHom":
        """``abelian`` or ``ORDERS;name=v1,v2;...`` (order 0 = infinite)."""
        text = text.strip()
        if text == "abelian":
            return cls.abelianization(table)
        fields_ = [p.strip() for p in text.split(";") if p.strip()]
        if not fields_:
            raise DomainError("empty quotient spec")
        orders = tuple(int(o) for o in re.split(r"[,\s]+", fields_[0]) if o)
        images = {}
        for part in fields_[1:]:
            name, eq, vec = part.partition("=")
            if not eq:
                raise DomainError(f"bad image {part!r}")
            images[table.index(name.strip())] = tuple(int(c) for c in re.split(r"[,\s]+", vec.strip()) if c)
        imgs = tuple(images.get(f.id, (0,) * len(orders)) for f in table)
        return cls(table, orders, imgs)

    def format(self) -> str:
        parts = [",".join(map(str, self.orders))]
        for f in self.table:
            parts.append(f"{f.name}=" + ",".join(map(str, self.images[f.id])))
        return ";".join(parts)

    @property
    def kind(self) -> str:
        if all(o == 0 for o in self.orders):
            return "free-abelian"
        if all(o > 0 for o in self.orders):
            return "finite-cyclic-product"
        return "mixed"

    @property
    def rank(self) -> int:
        return len(self.orders)

    def _reduce(self, v) -> tuple:
        return tuple(c % o if o else c for c, o in zip(v, self.orders))

    def identity_key(self) -> tuple:
        return (0,) * len(self.orders)

    def letter_image(self, f: int, e: int) -> tuple:
        return self._reduce([e * c for c in self.images[f]])

    def image(self, w: Word) -> tuple:
        acc = [0] * len(self.orders)
        for f, e in w.syllables:
            for i, c in enumerate(self.images[f]):
                acc[i] += e * c
        return self._reduce(acc)

    def shift(self, key: tuple, f: int, e: int) -> tuple:
        return self._reduce([a + e * c for a, c in zip(key, self.images[f])])

    def in_kernel(self, w: Word) -> bool:
        return not any(self.image(w))


@dataclass(frozen=True)
class SchreierGenerator:
    index: int
    coset: tuple
    letter: tuple
    word: Word


@dataclass
class Transversal:
    quotient: QuotientHom
    subset: frozenset
    radius: int
    reps: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    complete: bool = False
    _gens: list = field(default=None, repr=False)
    _index: dict = field(default=None, repr=False)

    def rep(self, key: tuple) -> Word:
        try:
            return self.reps[key]
        except KeyError:
            raise BoundExceeded(f"coset {key} not explored within radius {self.radius}") from None

    def __contains__(self, key):
        return key in self.reps

    def __len__(self):
        return len(self.reps)

    def positive_letters(self) -> list:
        return [(f, e) for f, e in self.quotient.table.letters() if e > 0]

    def schreier_generators(self) -> list:
        """Nontrivial ``s x (sx)bar^-1`` over explored cosets, in table order."""
        if self._gens is None:
            gens = []
            q = self.quotient
            t = q.table
            for key in self.order:
                s = self.reps[key]
                for f, e in self.positive_letters():
                    k2 = q.shift(key, f, e)
                    if k2 not in self.reps:
                        continue
                    w = s * Word(t, ((f, e),)) * self.reps[k2].inverse()
                    if not w.is_identity:
                        gens.append(SchreierGenerator(len(gens), key, (f, e), w))
            self._gens = gens
        return self._gens

    def generator_index(self) -> dict:
        if self._index is None:
            self._index = {(g.coset, g.letter): g.index for g in self.schreier_generators()}
        return self._index

    def dump(self) -> str:
        lines = []
        for key in self.order:
            rep = self.reps[key]
            lines.append(f"({','.join(map(str, key))}) | {rep if rep else '1'} | {self.tags[key]}")
        return "\n".join(lines)


def build_transversal(q: QuotientHom, P=(), radius: int = 2) -> Transversal:
    if radius < 1:
        raise DomainError("radius must be >= 1")
    t = q.table
    P = frozenset(P)
    for k in P:
        t.check_id(k)
    letters = t.letters()
    h_letters = [l for l in letters if l[0] in P]
    tr = Transversal(q, P, radius)
    ident = q.identity_key()
    tr.reps[ident] = t.identity()
    tr.tags[ident] = ALPHA
    tr.order.append(ident)

    # alpha classes: breadth-first over H-letters only
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for key in frontier:
            s = tr.reps[key]
            for f, e in h_letters:
                k2 = q.shift(key, f, e)
                if k2 not in tr.reps:
                    tr.reps[k2] = s * Word(t, ((f, e),))
                    tr.tags[k2] = ALPHA
                    tr.order.append(k2)
                    nxt.append(k2)
        frontier = nxt

    # beta classes: breadth-first distance layers over all letters
    dist = {ident: 0}
    layer = [ident]
    grew = True
    for depth in range(1, radius + 1):
        nxt = []
        for key in layer:
            for f, e in letters:
                k2 = q.shift(key, f, e)
                if k2 in dist:
                    continue
                dist[k2] = depth
                nxt.append(k2)
                if k2 not in tr.reps:
                    tr.reps[k2] = tr.reps[key] * Word(t, ((f, e),))
                    tr.tags[k2] = BETA
                    tr.order.append(k2)
        layer = nxt
        grew = bool(nxt)
    if not grew or all(q.shift(k, f, e) in dist for k in layer for f, e in letters):
        tr.complete = True
    return tr


def rewrite_in_schreier_gens(w: Word, t: Transversal) -> list:
    """Reidemeister-Schreier rewriting of ``w in N`` as ``[(gen index, exponent), ...]``."""
    q = t.quotient
    if not q.in_kernel(w):
        raise NotInKernelError(f"{w} is not in the kernel")
    index = t.generator_index()
    key = q.identity_key()
    out = []

    def emit(coset, letter, e):
        idx = index.get((coset, letter))
        if idx is None:
            return
        if out and out[-1][0] == idx:
            e += out.pop()[1]
        if e:
            out.append((idx, e))

    for f, e in w.letters():
        if q.table[f].kind != FINITE and e < 0:
            k2 = q.shift(key, f, -1)
            t.rep(k2)
            emit(k2, (f, 1), -1)
        else:
            k2 = q.shift(key, f, e)
            t.rep(k2)
            emit(key, (f, e), 1)
        key = k2
    return out


def reassemble(seq, t: Transversal) -> Word:
    gens = t.schreier_generators()
    out = t.quotient.table.identity()
    for idx, e in seq:
        out = out * gens[idx].word ** e
    return out


def classify_coset(key: tuple, t: Transversal) -> str:
    """Exact alpha/beta decision by integer lattice membership."""
    if key not in t.reps:
        raise BoundExceeded(f"coset {key} not explored")
    q = t.quotient
    dim = q.rank
    gens = [q.images[k] for k in sorted(t.subset)]
    for i, o in enumerate(q.orders):
        if o:
            gens.append(tuple(o if j == i else 0 for j in range(dim)))
    return ALPHA if _linalg.lattice_contains(gens, key, dim) else BETA
