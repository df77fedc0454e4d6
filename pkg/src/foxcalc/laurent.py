"""Coefficient domains for ring matrices.

``LaurentDomain`` is the integral group ring of ``Z^a x Z/m_1 x ...`` written
as Laurent polynomials in ``t1..tk``; a variable with order ``m > 0``
satisfies ``t^m = 1``.  The valuation is either trivial (``0`` on every
nonzero element) or the augmentation-ideal weight with respect to a set of
killed variables.
"""
from __future__ import annotations

import math
import re
from collections import defaultdict
from functools import lru_cache
from itertools import product

from .errors import DomainError, UnsupportedTorsionError

INF = math.inf


class LaurentPoly:
    __slots__ = ("orders", "terms", "_hash")

    def __init__(self, orders: tuple, terms=None):
        self.orders = orders
        red = defaultdict(int)
        for m, c in (terms or {}).items():
            if c:
                red[_reduce_exp(m, orders)] += c
        self.terms = {m: c for m, c in red.items() if c}
        self._hash = None

    @property
    def nvars(self) -> int:
        return len(self.orders)

    @classmethod
    def const(cls, orders, c: int) -> "LaurentPoly":
        return cls(orders, {(0,) * len(orders): c})

    @classmethod
    def var(cls, orders, i: int, e: int = 1) -> "LaurentPoly":
        m = [0] * len(orders)
        m[i] = e
        return cls(orders, {tuple(m): 1})

    def _coerce(self, other):
        if isinstance(other, int):
            return LaurentPoly.const(self.orders, other)
        if not isinstance(other, LaurentPoly) or other.orders != self.orders:
            return NotImplemented
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = defaultdict(int, self.terms)
        for m, c in other.terms.items():
            out[m] += c
        return LaurentPoly(self.orders, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.orders, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = defaultdict(int)
        for m, a in self.terms.items():
            for n, b in other.terms.items():
                out[tuple(x + y for x, y in zip(m, n))] += a * b
        return LaurentPoly(self.orders, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers of Laurent polynomials are not defined in general")
        out = LaurentPoly.const(self.orders, 1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.orders, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.orders == other.orders and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.orders, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def evaluate_killed(self, killed) -> "LaurentPoly":
        """Image under ``t_i -> 1`` for ``i`` in ``killed``."""
        out = defaultdict(int)
        for m, c in self.terms.items():
            out[tuple(0 if i in killed else e for i, e in enumerate(m))] += c
        return LaurentPoly(self.orders, out)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"


def _reduce_exp(m, orders) -> tuple:
    return tuple(e % o if o else e for e, o in zip(m, orders))


# -- text format -------------------------------------------------------------


def _mono_text(m) -> str:
    return "*".join(f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}" for i, e in enumerate(m) if e)


def _term_order(m):
    # constants last, otherwise descending exponent tuples
    return (not any(m), tuple(-e for e in m))


def format_laurent(p) -> str:
    if isinstance(p, int):
        return str(p)
    if not p.terms:
        return "0"
    out = []
    for i, m in enumerate(sorted(p.terms, key=_term_order)):
        c = p.terms[m]
        mono = _mono_text(m)
        mag = abs(c)
        body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
        if i == 0:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


_FACTOR = re.compile(r"^(?:(\d+)|t(\d+)(?:\^(-?\d+))?)$")
_SIGN = re.compile(r"(?<!\^)\s*([+-])\s*")


def _split_terms(text: str) -> list:
    # split on +/- that are not exponent signs
    pieces = _SIGN.split(text)
    out = []
    if pieces[0].strip():
        out.append((1, pieces[0].strip()))
    for sign, body in zip(pieces[1::2], pieces[2::2]):
        if not body.strip():
            raise DomainError(f"dangling sign in {text!r}")
        out.append((-1 if sign == "-" else 1, body.strip()))
    return out


def parse_laurent(text: str, orders: tuple) -> LaurentPoly:
    text = text.strip()
    if not text:
        raise DomainError("empty polynomial")
    k = len(orders)
    out = defaultdict(int)
    for sign, body in _split_terms(text):
        coef = sign
        m = [0] * k
        for fac in body.replace(" ", "").split("*"):
            mt = _FACTOR.match(fac)
            if not mt:
                raise DomainError(f"bad factor {fac!r} in {text!r}")
            if mt.group(1) is not None:
                coef *= int(mt.group(1))
                continue
            i = int(mt.group(2)) - 1
            if not 0 <= i < k:
                raise DomainError(f"variable t{i + 1} out of range (domain has {k})")
            m[i] += int(mt.group(3)) if mt.group(3) else 1
        out[tuple(m)] += coef
    return LaurentPoly(orders, out)


def infer_nvars(texts) -> int:
    best = 0
    for s in texts:
        for v in re.findall(r"t(\d+)", s):
            best = max(best, int(v))
    return best


# -- cyclotomic guards -------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(cyclotomic(d)))
    return tuple(num)


def _poly_div_exact(a: list, b: list) -> list:
    a = a[:]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def _reduce_mod_cyclotomic(p: LaurentPoly, var: int, d: int) -> dict:
    phi = cyclotomic(d)
    deg = len(phi) - 1
    terms = defaultdict(int)
    for m, c in p.terms.items():
        terms[m] += c
    changed = True
    while changed:
        changed = False
        for m in list(terms):
            c = terms[m]
            if not c or m[var] < deg:
                continue
            del terms[m]
            base = list(m)
            base[var] -= deg
            # t^deg = -(phi_0 + phi_1 t + ... + phi_{deg-1} t^{deg-1})
            for j in range(deg):
                if phi[j]:
                    nm = base[:]
                    nm[var] += j
                    terms[tuple(nm)] -= c * phi[j]
            changed = True
    return {m: c for m, c in terms.items() if c}


def vanishes_at_some_character(p: LaurentPoly) -> bool:
    """True iff ``p`` maps to 0 in some ``Z[t]/Phi_d`` for the torsion variables."""
    tors = [i for i, o in enumerate(p.orders) if o]
    if not tors or not p:
        return not p
    free_orders = tuple(0 for _ in p.orders)
    for ds in product(*(_divisors(p.orders[i]) for i in tors)):
        q = LaurentPoly(free_orders, p.terms)
        for i, d in zip(tors, ds):
            q = LaurentPoly(free_orders, _reduce_mod_cyclotomic(q, i, d))
            if not q:
                break
        if not q:
            return True
    return False


# -- domains -------------------------------------------------------------------


class ValuedDomain:
    """Contract for matrix coefficient domains."""

    name = "abstract"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return not a

    def valuation(self, a):
        raise NotImplementedError

    def residue_nonzero(self, a) -> bool:
        raise NotImplementedError

    def is_zero_divisor(self, a) -> bool:
        return self.is_zero(a)

    def ore_pair(self, a, b):
        """Nonzero ``(c, d)`` with ``a c == b d``; commutative default ``(b, a)``."""
        if self.is_zero(a) or self.is_zero(b):
            raise DomainError("ore_pair needs nonzero arguments")
        return b, a

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError


class IntegerDomain(ValuedDomain):
    name = "integers"

    def zero(self):
        return 0

    def one(self):
        return 1

    def valuation(self, a):
        return INF if a == 0 else 0

    def residue_nonzero(self, a) -> bool:
        return a != 0

    def parse(self, text: str):
        try:
            return int(text.strip())
        except ValueError:
            raise DomainError(f"bad integer {text!r}") from None

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, IntegerDomain)

    def __hash__(self):
        return hash("Z")


class LaurentDomain(ValuedDomain):
    """Group ring of a finitely generated abelian group, in Laurent form.

    ``killed`` selects the residue map: ``None`` means the trivial valuation
    (every nonzero element has value 0); otherwise the variables in
    ``killed`` are sent to 1 and the value is the lowest degree in
    ``T = t - 1`` over those variables.
    """

    name = "laurent"

    def __init__(self, nvars: int, orders=None, killed=None):
        if nvars < 0:
            raise DomainError("nvars must be >= 0")
        self.orders = tuple(orders) if orders is not None else (0,) * nvars
        if len(self.orders) != nvars or any(o < 0 or o == 1 for o in self.orders):
            raise DomainError("orders must be 0 (infinite) or >= 2, one per variable")
        if killed is not None:
            killed = frozenset(killed)
            for i in killed:
                if not 0 <= i < nvars:
                    raise DomainError(f"killed variable {i} out of range")
                if self.orders[i]:
                    raise UnsupportedTorsionError("cannot weight a torsion variable by the augmentation ideal")
        self.killed = killed

    @classmethod
    def augmentation(cls, nvars: int, orders=None) -> "LaurentDomain":
        orders = tuple(orders) if orders is not None else (0,) * nvars
        return cls(nvars, orders, [i for i, o in enumerate(orders) if not o])

    @property
    def nvars(self) -> int:
        return len(self.orders)

    @property
    def has_torsion(self) -> bool:
        return any(self.orders)

    def __eq__(self, other):
        return isinstance(other, LaurentDomain) and (self.orders, self.killed) == (other.orders, other.killed)

    def __hash__(self):
        return hash((self.orders, self.killed))

    def __repr__(self):
        return f"LaurentDomain({self.nvars}, orders={self.orders}, killed={self.killed and sorted(self.killed)})"

    def zero(self):
        return LaurentPoly(self.orders)

    def one(self):
        return LaurentPoly.const(self.orders, 1)

    def const(self, c: int):
        return LaurentPoly.const(self.orders, c)

    def var(self, i: int, e: int = 1):
        return LaurentPoly.var(self.orders, i, e)

    def lift(self, a):
        return self.const(a) if isinstance(a, int) else a

    def residue_nonzero(self, a) -> bool:
        if not a:
            return False
        if self.killed is None:
            return True
        return bool(a.evaluate_killed(self.killed))

    def valuation(self, a):
        if not a:
            return INF
        if self.killed is None or self.residue_nonzero(a):
            return 0
        return valuation_laurent(a, self.killed)

    def is_zero_divisor(self, a) -> bool:
        if not a:
            return True
        return self.has_torsion and vanishes_at_some_character(a)

    def parse(self, text: str):
        return parse_laurent(text, self.orders)

    def format(self, a) -> str:
        return format_laurent(a)


def valuation_laurent(u: LaurentPoly, killed=None):
    """Weight of ``u`` in the augmentation filtration of the killed variables.

    Each killed ``t`` is written as ``1 + T`` after shifting exponents to be
    nonnegative (a unit, so the value is unchanged); the result is the lowest
    total ``T``-degree carrying a nonzero coefficient.  ``killed=None`` kills
    every variable.
    """
    if not u:
        return INF
    k = u.nvars
    killed = frozenset(range(k)) if killed is None else frozenset(killed)
    if any(u.orders[i] for i in killed):
        raise UnsupportedTorsionError("cannot weight a torsion variable by the augmentation ideal")
    shift = [min(m[i] for m in u.terms) if i in killed else 0 for i in range(k)]
    ks = sorted(killed)
    # expand prod (1+T_i)^{e_i}: coefficient of T^a is prod binom(e_i, a_i)
    acc = defaultdict(int)
    for m, c in u.terms.items():
        rest = tuple(0 if i in killed else e for i, e in enumerate(m))
        exps = [m[i] - shift[i] for i in ks]
        for a in product(*(range(e + 1) for e in exps)):
            coef = c
            for e, ai in zip(exps, a):
                coef *= math.comb(e, ai)
            acc[(sum(a), a, rest)] += coef
    degrees = [key[0] for key, c in acc.items() if c]
    return min(degrees)
