"""Fox derivatives of Z[F] for a free product of cyclic factors and free letters.

Convention: ``D(uv) = D(u) v + eps(u) D(v)``.  On generators,
``D_j(g_j) = 1`` for a free letter and ``D_i(a) = a - 1`` for every element
``a`` of a cyclic factor ``A_i``.  With this convention

    u - eps(u) = sum_i D_i(u) + sum_j (g_j - 1) D_j(u)

where ``i`` runs over cyclic factors and ``j`` over free letters.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Sequence

from .errors import DomainError, NotInKernelError, RewriteError
from .groupring import RingElement, coset_collapse
from .words import FREE, FactorTable, Word, shortlex_key


def _word_derivative(k: int, w: Word) -> dict:
    t = w.table
    spec = t.check_id(k)
    syl = w.syllables
    out = defaultdict(int)
    for pos, (f, e) in enumerate(syl):
        if f != k:
            continue
        suffix = syl[pos + 1:]
        if spec.kind == FREE:
            # D(g^e) = 1 + g + ... + g^(e-1), or -(g^-1 + ... + g^e) for e < 0
            if e > 0:
                for j in range(e):
                    out[Word(t, ((f, j),) + suffix if j else suffix)] += 1
            else:
                for j in range(e, 0):
                    out[Word(t, ((f, j),) + suffix)] -= 1
        else:
            out[Word(t, ((f, e),) + suffix)] += 1
            out[Word(t, suffix)] -= 1
    return out


def derivative(k: int, u) -> RingElement:
    """``D_k(u)`` for a word or ring element ``u``."""
    if isinstance(u, Word):
        return RingElement(_word_derivative(k, u))
    out = defaultdict(int)
    for w, c in u.terms.items():
        for v, d in _word_derivative(k, w).items():
            out[v] += c * d
    return RingElement(out)


def derivative_vector(u, table: FactorTable | None = None) -> dict:
    """All nonzero ``D_k(u)``, keyed by factor id."""
    if table is None:
        table = u.table if isinstance(u, Word) else _any_table(u)
    if table is None:
        return {}
    out = {}
    for f in table:
        d = derivative(f.id, u)
        if d:
            out[f.id] = d
    return out


def _any_table(u: RingElement):
    for w in u.terms:
        return w.table
    return None


def fundamental_defect(u) -> RingElement:
    """``u - eps(u) - sum_i D_i(u) - sum_j (g_j - 1) D_j(u)``; always zero."""
    u = RingElement.of(u)
    table = _any_table(u)
    if table is None:
        return RingElement()
    one = table.identity()
    acc = defaultdict(int, u.terms)
    acc[one] -= u.augmentation()
    for f in table:
        d = derivative(f.id, u)
        if f.kind == FREE:
            g = Word(table, ((f.id, 1),))
            for w, c in d.terms.items():
                acc[g * w] -= c
                acc[w] += c
        else:
            for w, c in d.terms.items():
                acc[w] -= c
    return RingElement(acc)


def conjugation_congruence_check(n: Word, f: Word, q, k: int) -> bool:
    """Check ``D_k(f^-1 n f) == D_k(n) f  mod Z[F](N - 1)`` for ``N = ker q``."""
    if any(q.image(n)):
        raise NotInKernelError(f"{n} is not in the kernel of the quotient map")
    lhs = derivative(k, f.inverse() * n * f)
    rhs = derivative(k, n) * f
    return not coset_collapse(lhs - rhs, q)


# -- chain rule relative to a free basis of a subgroup ----------------------


def basis_table(basis: Sequence[Word], prefix: str = "z") -> FactorTable:
    return FactorTable.free(f"{prefix}{i + 1}" for i in range(len(basis)))


def substitute(u, basis: Sequence[Word], target: FactorTable) -> RingElement:
    """Map a ring element over basis letters into Z[F] via ``z_i -> basis[i]``."""
    cache = {}

    def image(w: Word) -> Word:
        if w not in cache:
            out = target.identity()
            for z, e in w.syllables:
                out = out * basis[z] ** e
            cache[w] = out
        return cache[w]

    return RingElement.of(u).map_words(image)


def express_in_basis(v: Word, basis: Sequence[Word], depth: int = 16,
                     max_nodes: int = 200_000) -> list:
    """Find ``[(z, e), ...]`` with ``prod basis[z]^e == v`` by bounded search.

    Moves that shorten the remaining word are tried first; the search gives up
    after ``depth`` basis letters or ``max_nodes`` visited states.
    """
    moves = []
    for z, b in enumerate(basis):
        if b.is_identity:
            raise DomainError("basis contains the identity")
        moves.append((z, 1, b.inverse()))
        moves.append((z, -1, b))
    seen = set()

    def search(rest: Word, budget: int, last):
        if rest.is_identity:
            return []
        if budget == 0 or (rest, budget) in seen:
            return None
        if len(seen) >= max_nodes:
            raise RewriteError(f"search for {v} exceeded {max_nodes} states")
        seen.add((rest, budget))
        options = []
        for z, e, inv in moves:
            if last == (z, -e):
                continue
            nxt = inv * rest
            options.append((nxt.letter_length(), shortlex_key(nxt), z, e, nxt))
        options.sort(key=lambda o: (o[0], o[2], -o[3]))
        for _, _, z, e, nxt in options:
            tail = search(nxt, budget - 1, (z, e))
            if tail is not None:
                return [(z, e)] + tail
        return None

    found = search(v, depth, None)
    if found is None:
        raise RewriteError(f"could not express {v} in the given basis within depth {depth}")
    return _merge(found)


def _merge(seq) -> list:
    out = []
    for z, e in seq:
        if out and out[-1][0] == z:
            e += out.pop()[1]
        if e:
            out.append((z, e))
    return out


def chain_rule_decompose(v: Word, basis: Sequence[Word], k: int,
                         transversal=None, depth: int = 16) -> RingElement:
    """``sum_z D_k(x_z) * d_z(v)`` with ``d_z`` the Fox derivatives of the basis.

    ``v`` is first rewritten over the basis: through Reidemeister-Schreier
    when ``transversal`` is given (``basis`` must then consist of its Schreier
    generators), otherwise by :func:`express_in_basis`.
    """
    table = v.table
    if transversal is not None:
        from .schreier import rewrite_in_schreier_gens
        gens = transversal.schreier_generators()
        where = {b: z for z, b in enumerate(basis)}
        seq = []
        for idx, e in rewrite_in_schreier_gens(v, transversal):
            w = gens[idx].word
            if w not in where:
                raise RewriteError(f"Schreier generator {w} is not in the supplied basis")
            seq.append((where[w], e))
    else:
        seq = express_in_basis(v, basis, depth)
    ztable = basis_table(basis)
    zword = ztable.word(seq)
    total = RingElement()
    for z in range(len(basis)):
        dz = derivative(z, zword)
        if dz:
            total = total + derivative(k, basis[z]) * substitute(dz, basis, table)
    return total
