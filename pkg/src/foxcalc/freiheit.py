"""Fox Jacobians of presentations, free-subset selection, freeness criteria.

``select_free_subset`` triangularizes the abelianized Jacobian and keeps the
non-pivot columns.  ``falsify_freeness`` is a bounded search for evidence
that the chosen factors do *not* freely generate their image; finding
nothing is not a proof.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundExceeded, DomainError, NotInKernelError
from .fox import derivative
from .laurent import LaurentDomain, LaurentPoly
from .lie import hall_word, leading_lie, lie_ideal_meet_subalgebra
from .magnus import HARD_MAX_CAP, in_subgroup_mod_gamma, lcs_degree_direct
from .ringmat import RingMatrix, TransformLog, triangularize
from .schreier import QuotientHom, build_transversal, rewrite_in_schreier_gens
from .words import FINITE, FactorTable, Word, cyclic_reduce, enumerate_words, format_word

PRESENTATION_FORMAT = "freiheit-presentation"
PRESENTATION_VERSION = 1


@dataclass(frozen=True)
class Presentation:
    """Factors plus relators; ``quotient`` is an optional declared ``F -> F/N``."""

    table: FactorTable
    relators: tuple = ()
    quotient: QuotientHom | None = None

    def __post_init__(self):
        rels = tuple(self.relators)
        object.__setattr__(self, "relators", rels)
        for r in rels:
            if r.table != self.table:
                raise DomainError("relator built over a different factor table")
            if cyclic_reduce(r)[0].is_identity:
                raise DomainError("relators must be nontrivial")
            if self.quotient is not None and not self.quotient.in_kernel(r):
                raise NotInKernelError(f"relator {r} is not in the declared kernel")

    @classmethod
    def from_strings(cls, factors, relators=(), quotient=None) -> "Presentation":
        table = factors if isinstance(factors, FactorTable) else FactorTable.build(factors)
        rels = tuple(table.parse(r) if isinstance(r, str) else r for r in relators)
        if isinstance(quotient, str):
            quotient = QuotientHom.parse(table, quotient)
        return cls(table, rels, quotient)

    @property
    def n(self) -> int:
        return len(self.table)

    @property
    def m(self) -> int:
        return len(self.relators)

    @property
    def names(self) -> tuple:
        return self.table.names

    def ids(self, refs) -> frozenset:
        """Factor ids from 1-based indices or names."""
        out = set()
        for ref in refs:
            if isinstance(ref, int):
                out.add(self.table.check_id(ref - 1).id)
                continue
            ref = str(ref).strip()
            if not ref:
                continue
            if ref.isdigit():
                out.add(self.table.check_id(int(ref) - 1).id)
            else:
                out.add(self.table.index(ref))
        return frozenset(out)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.table == other.table and self.relators == other.relators
                and _quotient_data(self.quotient) == _quotient_data(other.quotient))

    def __hash__(self):
        return hash((self.table.names, self.relators))


def _quotient_data(q):
    return None if q is None else (q.orders, q.images)


# -- presentation files ------------------------------------------------------


def presentation_to_dict(p: Presentation) -> dict:
    factors = []
    for f in p.table:
        d = {"name": f.name, "kind": f.kind}
        if f.kind == FINITE:
            d["order"] = f.order
        factors.append(d)
    out = {
        "format": PRESENTATION_FORMAT,
        "version": PRESENTATION_VERSION,
        "factors": factors,
        "relators": [format_word(r) for r in p.relators],
    }
    if p.quotient is not None:
        out["quotient"] = {
            "orders": list(p.quotient.orders),
            "images": {f.name: list(p.quotient.images[f.id]) for f in p.table},
        }
    return out


def presentation_from_dict(d: dict) -> Presentation:
    if d.get("format") != PRESENTATION_FORMAT:
        raise DomainError(f"not a presentation file (format = {d.get('format')!r})")
    if d.get("version") != PRESENTATION_VERSION:
        raise DomainError(f"unsupported presentation version {d.get('version')!r}")
    try:
        specs = [(f["name"], f["kind"], f.get("order", 0)) for f in d["factors"]]
    except (KeyError, TypeError):
        raise DomainError("each factor needs a name and a kind") from None
    table = FactorTable.build(specs)
    rels = [table.parse(r) for r in d.get("relators", [])]
    q = d.get("quotient")
    quotient = None
    if q == "abelian":
        quotient = QuotientHom.abelianization(table)
    elif q is not None:
        images = q.get("images", {})
        for name in images:
            table.index(name)
        orders = tuple(q["orders"])
        imgs = tuple(tuple(images.get(f.name, (0,) * len(orders))) for f in table)
        quotient = QuotientHom(table, orders, imgs)
    return Presentation(table, tuple(rels), quotient)


def dumps_presentation(p: Presentation) -> str:
    return json.dumps(presentation_to_dict(p), indent=2, sort_keys=False) + "\n"


def loads_presentation(text: str) -> Presentation:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"presentation is not valid JSON: {e}") from None
    return presentation_from_dict(d)


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return loads_presentation(fh.read())


# -- Jacobian and selection --------------------------------------------------


def abelianization_domain(table: FactorTable, valuation: str = "trivial") -> LaurentDomain:
    orders = tuple(f.order for f in table)
    if valuation == "trivial":
        return LaurentDomain(len(table), orders)
    if valuation == "augmentation":
        return LaurentDomain.augmentation(len(table), orders)
    raise DomainError(f"unknown valuation {valuation!r}")


def abelianize(u, domain: LaurentDomain) -> LaurentPoly:
    """Image of a ring element under ``Z[F] -> Z[F^ab]``."""
    out = defaultdict(int)
    for w, c in u.terms.items():
        m = [0] * domain.nvars
        for f, e in w.syllables:
            m[f] += e
        out[tuple(m)] += c
    return LaurentPoly(domain.orders, out)


def jacobian_abelianized(p: Presentation, valuation: str = "trivial") -> RingMatrix:
    """Entry ``(i, j)`` is the abelianized ``D_j(r_i)``."""
    d = abelianization_domain(p.table, valuation)
    rows = [[abelianize(derivative(j, r), d) for j in range(p.n)] for r in p.relators]
    return RingMatrix(d, rows, p.n)


@dataclass
class SelectionReport:
    presentation: Presentation
    J: frozenset
    pivots: frozenset
    rank: int
    log: TransformLog
    jacobian: RingMatrix
    triangular: RingMatrix
    torsion_columns: frozenset = frozenset()
    zero_divisor_pivots: tuple = ()

    @property
    def names(self):
        return self.presentation.names

    def _set(self, ids) -> str:
        return "{" + ", ".join(self.names[i] for i in sorted(ids)) + "}"

    def to_text(self) -> str:
        p = self.presentation
        d = self.jacobian.domain
        lines = [
            f"factors = {self._set(range(p.n))}",
            f"relators = {p.m}",
            f"rank = {self.rank}",
            f"I_s = {self._set(self.pivots)}",
            f"J = {self._set(self.J)}",
            f"|J| = {len(self.J)} >= n - m = {p.n - p.m}",
        ]
        if self.torsion_columns:
            lines.append(f"torsion columns = {self._set(self.torsion_columns)}")
        if self.zero_divisor_pivots:
            lines.append("warning: zero-divisor pivots at steps " + ", ".join(str(k + 1) for k in self.zero_divisor_pivots))
        lines.append("jacobian:")
        lines += ["  " + ", ".join(d.format(a) for a in row) for row in self.jacobian.rows]
        lines.append("triangular:")
        lines += ["  " + ", ".join(d.format(a) for a in row) for row in self.triangular.rows]
        lines.append("log:")
        lines += ["  " + s for s in self.log.serialize(d).splitlines()] or ["  (empty)"]
        return "\n".join(lines)

    def to_dict(self) -> dict:
        d = self.jacobian.domain
        return {
            "J": [self.names[i] for i in sorted(self.J)],
            "I_s": [self.names[i] for i in sorted(self.pivots)],
            "rank": self.rank,
            "torsion_columns": [self.names[i] for i in sorted(self.torsion_columns)],
            "zero_divisor_pivots": list(self.zero_divisor_pivots),
            "jacobian": [[d.format(a) for a in row] for row in self.jacobian.rows],
            "triangular": [[d.format(a) for a in row] for row in self.triangular.rows],
            "log": self.log.serialize(d).splitlines(),
        }


def select_free_subset(p: Presentation, valuation: str = "trivial") -> SelectionReport:
    if p.m >= p.n:
        raise DomainError(f"need fewer relators than factors (m = {p.m}, n = {p.n})")
    jac = jacobian_abelianized(p, valuation)
    tri = triangularize(jac)
    pivots = frozenset(tri.pivot_columns)
    J = frozenset(range(p.n)) - pivots
    return SelectionReport(
        presentation=p,
        J=J,
        pivots=pivots,
        rank=tri.rank,
        log=tri.log,
        jacobian=jac,
        triangular=tri.matrix,
        torsion_columns=frozenset(f.id for f in p.table if f.kind == FINITE),
        zero_divisor_pivots=tuple(tri.zero_divisor_pivots),
    )


# -- one-relator criterion ---------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class CriterionReport:
    syllable_test: bool
    fox_test: bool
    verdict: str
    lcs_stratum: int | None = None
    core: Word | None = None

    def to_text(self) -> str:
        t = "n/a" if self.lcs_stratum is None else str(self.lcs_stratum)
        return (f"syllable_test = {str(self.syllable_test).lower()}\n"
                f"fox_test = {str(self.fox_test).lower()}\n"
                f"lcs_stratum = {t}\nverdict = {self.verdict}")


def one_relator_criterion(r: Word, P, p: Presentation, cap: int = 4) -> CriterionReport:
    """Classical syllable test plus the abelianized Fox surrogate.

    ``pass`` needs both; ``inconclusive`` means the relator leaves ``H`` but
    every abelianized derivative outside ``P`` vanishes.  The exact
    conjugacy condition is never claimed.
    """
    P = frozenset(P)
    for k in P:
        p.table.check_id(k)
    if P >= frozenset(range(p.n)):
        raise DomainError("P must be a proper subset of the factors")
    core, _ = cyclic_reduce(r)
    if core.is_identity:
        raise DomainError("relator is trivial")
    syllable = any(f not in P for f, _ in core.syllables)
    dom = abelianization_domain(p.table)
    fox = any(abelianize(derivative(k, r), dom) for k in range(p.n) if k not in P)
    verdict = FAIL if not syllable else (PASS if fox else INCONCLUSIVE)
    return CriterionReport(syllable, fox, verdict, _lcs_stratum(r, P, p, cap), core)


def _lcs_stratum(r: Word, P, p: Presentation, cap: int):
    q = p.quotient
    if q is None or not p.table.torsion_free or not q.in_kernel(r):
        return None
    try:
        tr = build_transversal(q, P, max(1, r.letter_length()))
        seq = rewrite_in_schreier_gens(r, tr)
    except (BoundExceeded, DomainError):
        return None
    gens = tr.schreier_generators()
    ztable = FactorTable.free(f"s{i + 1}" for i in range(len(gens)))
    z = ztable.word(seq)
    return lcs_degree_direct(z, cap).weight


# -- falsification -------------------------------------------------------------


@dataclass(frozen=True)
class FalsifyBounds:
    max_conjugators: int = 2
    max_conj_len: int = 2
    max_word_len: int = 6
    lie_cap: int = 3
    max_candidates: int = 500_000

    def __post_init__(self):
        if min(self.max_conjugators, self.max_word_len, self.lie_cap) < 1 or self.max_conj_len < 0:
            raise DomainError("bounds must be positive (conjugator length may be 0)")
        if self.lie_cap > HARD_MAX_CAP:
            raise DomainError(f"lie_cap must be <= {HARD_MAX_CAP}")

    @classmethod
    def parse(cls, text: str) -> "FalsifyBounds":
        try:
            vals = [int(v) for v in text.split(",")]
        except ValueError:
            raise DomainError(f"bad bounds {text!r}") from None
        if len(vals) not in (4, 5):
            raise DomainError("bounds are max_conjugators,max_conj_len,max_word_len,lie_cap[,max_candidates]")
        return cls(*vals)

    def as_tuple(self):
        return (self.max_conjugators, self.max_conj_len, self.max_word_len, self.lie_cap)


@dataclass(frozen=True)
class Counterexample:
    witness: Word
    stage: str  # "enumeration" or "lie"
    conjugates: tuple = ()  # (conjugator, relator index, sign) for enumeration
    relators: tuple = ()
    lie_degree: int | None = None
    lie_element: object = None  # integral LieElement for the lie stage
    lcs_report: object = None  # WeightReport of the witness, torsion-free only

    def replay(self) -> Word:
        t = self.witness.table
        if self.stage == "enumeration":
            out = t.identity()
            for f, i, s in self.conjugates:
                out = out * (f.inverse() * self.relators[i] ** s * f)
            return out
        out = t.identity()
        for w, c in sorted(self.lie_element.coords.items(), key=lambda kv: (len(kv[0]), kv[0])):
            out = out * hall_word(w, t) ** int(c)
        return out

    def verify(self) -> bool:
        if self.replay() != self.witness:
            return False
        if self.stage == "lie":
            return leading_lie(self.witness, self.lie_degree) == self.lie_element
        return True

    def to_text(self) -> str:
        lines = [f"counterexample ({self.stage})", f"witness = {self.witness or '1'}"]
        if self.stage == "enumeration":
            if self.lcs_report is not None:
                lines.append(f"witness lcs = {self.lcs_report}")
            lines.append("certificate:")
            for f, i, s in self.conjugates:
                lines.append(f"  conj {f or '1'} | relator {i + 1} | sign {'+' if s > 0 else '-'}")
        else:
            names = self.witness.table.names
            lines.append(f"lie degree = {self.lie_degree}")
            lines.append(f"lie element = {self.lie_element.to_format(names)}")
        return "\n".join(lines)


def conjugators(table: FactorTable, max_len: int) -> list:
    """Normal-form words of letter length ``<= max_len`` in shortlex order."""
    return enumerate_words(table, max_len)


def _in_H(w: Word, J) -> bool:
    return all(f in J for f, _ in w.syllables)


def _enumeration_stage(p: Presentation, J, b: FalsifyBounds):
    t = p.table
    conj = []
    seen = set()
    for f in conjugators(t, b.max_conj_len):
        for i, r in enumerate(p.relators):
            for s in (1, -1):
                c = f.inverse() * r ** s * f
                if c not in seen:
                    seen.add(c)
                    conj.append((c, (f, i, s)))

    def hit(w):
        # any nontrivial H-word in the normal closure breaks injectivity
        return not w.is_identity and w.letter_length() <= b.max_word_len and _in_H(w, J)

    count = 0
    for k in range(1, b.max_conjugators + 1):
        # depth-first over ordered k-tuples, canonical order
        stack = [(0, t.identity(), ())]
        while stack:
            depth, acc, cert = stack.pop()
            if depth == k:
                count += 1
                if count > b.max_candidates:
                    raise BoundExceeded(f"more than {b.max_candidates} candidates")
                if hit(acc):
                    lcs = lcs_degree_direct(acc, b.lie_cap) if t.torsion_free else None
                    return Counterexample(acc, "enumeration", cert, p.relators, lcs_report=lcs)
                continue
            for c, tag in reversed(conj):
                stack.append((depth + 1, acc * c, cert + (tag,)))
    return None


@dataclass(frozen=True)
class LieStageData:
    leading: dict  # relator index -> (lcs degree, LieElement) for gated relators
    skipped: tuple  # relators whose leading term already lies in the J-subalgebra
    dims: dict
    bases: dict


def lie_stage(p: Presentation, J, cap: int) -> LieStageData:
    """Leading Lie terms of relators versus the Lie subalgebra on ``J``.

    A relator whose leading term lies in the subalgebra on ``J`` (equivalently
    ``r in H * gamma_{t+1}``) is set aside: that case is the converse
    direction, where failure of freeness is expected rather than a sign of
    a violated conclusion.
    """
    if not p.table.torsion_free:
        raise DomainError("the Lie stage needs torsion-free factors")
    leading, skipped = {}, []
    for i, r in enumerate(p.relators):
        rep = lcs_degree_direct(r, cap)
        if rep.weight is None:
            skipped.append(i)
            continue
        if in_subgroup_mod_gamma(r, J, rep.weight):
            skipped.append(i)
            continue
        leading[i] = (rep.weight, leading_lie(r, cap))
    gens = [e for _, e in leading.values()]
    dims, bases = lie_ideal_meet_subalgebra(gens, sorted(J), cap, variables=range(p.n), with_basis=True)
    return LieStageData(leading, tuple(skipped), dims, bases)


def _integral(e):
    den = math.lcm(*(Fraction(c).denominator for c in e.coords.values()))
    return e.scale(den)


def falsify_freeness(p: Presentation, J, bounds: FalsifyBounds | None = None):
    """Bounded search for a violation of freeness of ``H = gr(J)``.

    Stage 1 enumerates products of relator conjugates and reports the first
    nontrivial ``H``-word (in canonical order).  Stage 2, for torsion-free
    factors, intersects the ideal of gated leading Lie terms with the
    ``J``-subalgebra.  Returns a Counterexample or None; raises
    BoundExceeded if the candidate budget runs out.
    """
    b = bounds or FalsifyBounds()
    J = frozenset(J)
    for k in J:
        p.table.check_id(k)
    if not p.relators:
        return None
    found = _enumeration_stage(p, J, b)
    if found is not None:
        return found
    if not p.table.torsion_free:
        return None
    data = lie_stage(p, J, b.lie_cap)
    for d in sorted(data.bases):
        if data.bases[d]:
            elem = _integral(data.bases[d][0])
            t = p.table
            w = t.identity()
            for lw, c in sorted(elem.coords.items(), key=lambda kv: (len(kv[0]), kv[0])):
                w = w * hall_word(lw, t) ** int(c)
            return Counterexample(w, "lie", (), p.relators, d, elem)
    return None
