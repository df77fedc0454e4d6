"""Small exact linear algebra helpers on sparse vectors (dict index -> number)."""
from __future__ import annotations

from fractions import Fraction


class Echelon:
    """Incrementally maintained reduced basis of a rational vector space."""

    def __init__(self):
        self.rows = {}  # pivot index -> row (dict), pivot coefficient 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = {k: Fraction(c) for k, c in v.items() if c}
        while v:
            for k in sorted(v):
                if k in self.rows:
                    c = v[k]
                    for j, a in self.rows[k].items():
                        nv = v.get(j, 0) - c * a
                        if nv:
                            v[j] = nv
                        else:
                            v.pop(j, None)
                    break
            else:
                return v
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.rows[p] = {k: c * inv for k, c in r.items()}
        return True

    def basis(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def intersection(u_basis, w_basis) -> list:
    """Basis of span(U) & span(W) by the Zassenhaus construction."""
    e = Echelon()
    for u in u_basis:
        row = {(0, k): c for k, c in u.items()}
        row.update({(1, k): c for k, c in u.items()})
        e.add(row)
    for w in w_basis:
        e.add({(0, k): c for k, c in w.items()})
    out = []
    for p, row in sorted(e.rows.items()):
        if p[0] == 1:
            out.append({k[1]: c for k, c in row.items()})
    return out


def rank_mod_p(rows, p: int = 2_147_483_647) -> int:
    """Rank over GF(p); a lower bound for the rank over Q."""
    rows = [{k: c % p for k, c in r.items() if c % p} for r in rows]
    pivots = {}
    r = 0
    for v in rows:
        while v:
            k = min(v)
            if k not in pivots:
                inv = pow(v[k], p - 2, p)
                pivots[k] = {j: c * inv % p for j, c in v.items()}
                r += 1
                break
            c = v[k]
            for j, a in pivots[k].items():
                nv = (v.get(j, 0) - c * a) % p
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
    return r


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_basis(vectors, dim: int) -> list:
    """Row-style Hermite echelon basis of the integer lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col]]
        zero = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        piv = nz[0]
        for r in nz[1:]:
            g, x, y = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [x * p + y * q for p, q in zip(piv, r)]
            rest = [a * q - b * p for p, q in zip(piv, r)]
            piv = new_piv
            if any(rest):
                zero.append(rest)
        if piv[col] < 0:
            piv = [-c for c in piv]
        basis.append(piv)
        rows = [r for r in zero if any(r)]
        col += 1
    return basis


def lattice_contains(vectors, target, dim: int) -> bool:
    """Is ``target`` an integer combination of ``vectors``?"""
    basis = hermite_basis(vectors, dim)
    t = list(target)
    for row in basis:
        col = next(i for i, c in enumerate(row) if c)
        if t[col] % row[col]:
            return False
        q = t[col] // row[col]
        t = [a - q * b for a, b in zip(t, row)]
    return not any(t)
