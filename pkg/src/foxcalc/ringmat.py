"""Matrices over a valued domain, elementary transformations, triangularization.

The four step kinds are column swap, row swap, right multiplication of a row
by a nonzero element, and adding ``row_i * c`` to a later row ``j > i``.
Scaling and addition act on the right even though the shipped domains are
commutative.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .laurent import INF, LaurentDomain, ValuedDomain, infer_nvars


class RingMatrix:
    """Immutable rectangular matrix; ``rows`` may be zero (an ``0 x n`` matrix)."""

    __slots__ = ("domain", "rows", "ncols")

    def __init__(self, domain: ValuedDomain, rows, ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise DomainError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DomainError("matrix rows must have equal length")
        self.domain = domain
        self.rows = rows
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_triangular(self) -> int | None:
        """Rank ``t`` when the matrix is triangular in the step sense, else None.

        Triangular means ``b_kk != 0`` for ``k < t``, zero below the diagonal in
        those columns, and every row past ``t`` identically zero.
        """
        d = self.domain
        t = 0
        while t < min(self.nrows, self.ncols) and not d.is_zero(self.rows[t][t]):
            t += 1
        for i in range(self.nrows):
            for j in range(self.ncols):
                below = i > j and j < t
                tail = i >= t
                if (below or tail) and not d.is_zero(self.rows[i][j]):
                    return None
        return t

    def format(self) -> str:
        return "; ".join(", ".join(self.domain.format(a) for a in row) for row in self.rows)

    def __str__(self):
        return "\n".join("[" + ", ".join(self.domain.format(a) for a in row) + "]" for row in self.rows)

    def __repr__(self):
        return f"RingMatrix({self.format()!r})"


def parse_matrix(text: str, domain: ValuedDomain | None = None) -> RingMatrix:
    """Rows separated by ``;``, entries by ``,``."""
    rows = [r for r in text.split(";") if r.strip()]
    cells = [[c.strip() for c in r.split(",")] for r in rows]
    if domain is None:
        domain = LaurentDomain(infer_nvars(c for row in cells for c in row))
    return RingMatrix(domain, [[domain.parse(c) for c in row] for row in cells])


# -- steps ---------------------------------------------------------------------


@dataclass(frozen=True)
class SwapCols:
    i: int
    j: int
    kind = "swap-cols"


@dataclass(frozen=True)
class SwapRows:
    i: int
    j: int
    kind = "swap-rows"


@dataclass(frozen=True)
class ScaleRow:
    i: int
    elem: object
    kind = "scale-row"


@dataclass(frozen=True)
class AddScaledRow:
    """``row_j += row_i * elem`` with ``i < j``."""
    i: int
    j: int
    elem: object
    kind = "add-scaled-row"


Step = SwapCols | SwapRows | ScaleRow | AddScaledRow


def format_step(s, domain: ValuedDomain) -> str:
    if isinstance(s, (SwapCols, SwapRows)):
        return f"{s.kind} {s.i + 1} {s.j + 1}"
    if isinstance(s, ScaleRow):
        return f"{s.kind} {s.i + 1} {domain.format(s.elem)}"
    return f"{s.kind} {s.i + 1} {s.j + 1} {domain.format(s.elem)}"


def parse_step(line: str, domain: ValuedDomain):
    parts = line.split(None, 1)
    if not parts:
        raise DomainError("empty step")
    kind, rest = parts[0], (parts[1] if len(parts) > 1 else "")
    try:
        if kind in ("swap-cols", "swap-rows"):
            i, j = (int(x) - 1 for x in rest.split())
            return (SwapCols if kind == "swap-cols" else SwapRows)(i, j)
        if kind == "scale-row":
            i, elem = rest.split(None, 1)
            return ScaleRow(int(i) - 1, domain.parse(elem))
        if kind == "add-scaled-row":
            i, j, elem = rest.split(None, 2)
            return AddScaledRow(int(i) - 1, int(j) - 1, domain.parse(elem))
    except ValueError:
        raise DomainError(f"malformed step {line!r}") from None
    raise DomainError(f"unknown step kind {kind!r}")


@dataclass
class TransformLog:
    steps: list = field(default_factory=list)

    def append(self, step):
        self.steps.append(step)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def serialize(self, domain: ValuedDomain) -> str:
        return "\n".join(format_step(s, domain) for s in self.steps)

    @classmethod
    def parse(cls, text: str, domain: ValuedDomain) -> "TransformLog":
        return cls([parse_step(l, domain) for l in text.splitlines() if l.strip() and not l.startswith("#")])

    def replay(self, m: RingMatrix) -> RingMatrix:
        for s in self.steps:
            m = apply_elementary(m, s)
        return m


def apply_elementary(m: RingMatrix, step) -> RingMatrix:
    d = m.domain
    rows = [list(r) for r in m.rows]

    def check_row(i):
        if not 0 <= i < m.nrows:
            raise DomainError(f"row {i + 1} out of range")

    if isinstance(step, SwapCols):
        for j in (step.i, step.j):
            if not 0 <= j < m.ncols:
                raise DomainError(f"column {j + 1} out of range")
        for r in rows:
            r[step.i], r[step.j] = r[step.j], r[step.i]
    elif isinstance(step, SwapRows):
        check_row(step.i)
        check_row(step.j)
        rows[step.i], rows[step.j] = rows[step.j], rows[step.i]
    elif isinstance(step, ScaleRow):
        check_row(step.i)
        if d.is_zero(step.elem):
            raise DomainError("scale-row needs a nonzero element")
        rows[step.i] = [a * step.elem for a in rows[step.i]]
    elif isinstance(step, AddScaledRow):
        check_row(step.i)
        check_row(step.j)
        if not step.i < step.j:
            raise DomainError("add-scaled-row needs i < j")
        if d.is_zero(step.elem):
            raise DomainError("add-scaled-row needs a nonzero element")
        rows[step.j] = [b + a * step.elem for a, b in zip(rows[step.i], rows[step.j])]
    else:
        raise DomainError(f"unknown step {step!r}")
    return RingMatrix(d, rows, m.ncols)


@dataclass
class Triangulation:
    matrix: RingMatrix
    log: TransformLog
    rank: int
    column_permutation: list  # position -> original column id
    zero_divisor_pivots: list = field(default_factory=list)

    def __iter__(self):
        yield self.matrix
        yield self.log
        yield self.rank

    @property
    def pivot_columns(self) -> list:
        return sorted(self.column_permutation[k] for k in range(self.rank))


def triangularize(m: RingMatrix) -> Triangulation:
    """Valuation-guided elimination to triangular form.

    At step ``k`` the pivot is the entry of the remaining block minimising
    ``(zero divisor?, psi, row, col)``; every later row is cleared with the
    Ore pair of pivot and entry.  Unpacks as ``(matrix, log, rank)``.
    """
    d = m.domain
    log = TransformLog()
    perm = list(range(m.ncols))
    zd_pivots = []
    cur = m

    def step(s):
        nonlocal cur
        cur = apply_elementary(cur, s)
        log.append(s)

    k = 0
    while k < min(cur.nrows, cur.ncols):
        best = None
        for i in range(k, cur.nrows):
            for j in range(k, cur.ncols):
                a = cur.rows[i][j]
                if d.is_zero(a):
                    continue
                key = (d.is_zero_divisor(a), d.valuation(a), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        zd, _, i, j = best
        if zd:
            zd_pivots.append(k)
        if i != k:
            step(SwapRows(k, i))
        if j != k:
            step(SwapCols(k, j))
            perm[k], perm[j] = perm[j], perm[k]
        piv = cur.rows[k][k]
        for r in range(k + 1, cur.nrows):
            b = cur.rows[r][k]
            if d.is_zero(b):
                continue
            c, e = d.ore_pair(piv, b)  # piv * c == b * e
            if e != d.one():
                step(ScaleRow(r, e))
            step(AddScaledRow(k, r, -c))
        k += 1
    return Triangulation(cur, log, k, perm, zd_pivots)


def pivot_valuation_ok(m: RingMatrix, rank: int) -> bool:
    """``psi(b_kk) <= psi(b_kn)`` for every ``k < rank`` and ``n >= k``."""
    d = m.domain
    for k in range(rank):
        v = d.valuation(m.rows[k][k])
        if v == INF:
            return False
        if any(d.valuation(m.rows[k][n]) < v for n in range(k, m.ncols)):
            return False
    return True
