"""Seeded random generators for words, kernel elements, presentations and matrices."""
from __future__ import annotations

import random

from .laurent import LaurentDomain
from .ringmat import RingMatrix
from .words import FactorTable, Word, commutator, cyclic_reduce


def rng(seed: int = 0) -> random.Random:
    return random.Random(seed)


def random_word(table: FactorTable, max_len: int, r: random.Random, min_len: int = 0) -> Word:
    """Product of ``min_len..max_len`` random letters (may cancel further)."""
    letters = table.letters()
    n = r.randint(min_len, max_len)
    return table.word([r.choice(letters) for _ in range(n)])


def random_reduced_word(table: FactorTable, length: int, r: random.Random) -> Word:
    """Random word of exact letter length ``length`` (no cancellation)."""
    letters = table.letters()
    out = table.identity()
    while out.letter_length() < length:
        v = out * Word(table, (r.choice(letters),))
        if v.letter_length() == out.letter_length() + 1:
            out = v
    return out


def close_up(w: Word) -> Word:
    """Append letters to kill the abelianization image of ``w``."""
    t = w.table
    out = w
    for f in t:
        e = w.exponent_sum(f.id)
        if f.order:
            e %= f.order
        if e:
            out = out * t.gen(f.id, -e)
    return out


def random_kernel_word(table: FactorTable, max_len: int, r: random.Random) -> Word:
    """Random element of the kernel of the abelianization map."""
    return close_up(random_word(table, max_len, r))


def random_commutator_product(table: FactorTable, k: int, max_len: int, r: random.Random) -> Word:
    """Product of ``k`` commutators of random kernel elements (lies in ``[N, N]``)."""
    out = table.identity()
    for _ in range(k):
        out = out * commutator(random_kernel_word(table, max_len, r), random_kernel_word(table, max_len, r))
    return out


def random_cyclic_relator(table: FactorTable, max_len: int, r: random.Random, must_contain=None) -> Word:
    """Nontrivial cyclically reduced word, optionally containing a given factor."""
    while True:
        core, _ = cyclic_reduce(random_word(table, max_len, r, min_len=1))
        if core.is_identity:
            continue
        if must_contain is not None and must_contain not in core.factor_ids():
            continue
        return core


def random_laurent_entry(domain: LaurentDomain, r: random.Random):
    """Random product of ``t_i +- 1`` factors and a small constant."""
    out = domain.const(r.choice([-3, -2, -1, 1, 1, 2, 3]))
    if r.random() < 0.15:
        return domain.zero()
    for _ in range(r.randint(0, 2)):
        i = r.randrange(domain.nvars)
        t = domain.var(i, r.choice([1, 1, -1]))
        out = out * (t + r.choice([1, -1]))
    if r.random() < 0.3:
        out = out * domain.var(r.randrange(domain.nvars), r.choice([1, -1]))
    return out


def random_laurent_matrix(domain: LaurentDomain, rows: int, cols: int, r: random.Random) -> RingMatrix:
    return RingMatrix(domain, [[random_laurent_entry(domain, r) for _ in range(cols)] for _ in range(rows)], cols)


def random_presentation_data(r: random.Random, max_n: int = 5, max_len: int = 8):
    """``(table, relators)`` with ``n <= max_n`` free letters and ``m < n``."""
    n = r.randint(2, max_n)
    table = FactorTable.free(f"x{i + 1}" for i in range(n))
    m = r.randint(0, n - 1)
    rels = [random_cyclic_relator(table, max_len, r) for _ in range(m)]
    return table, rels


