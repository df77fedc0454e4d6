import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foxcalc.errors import DomainError, UnsupportedTorsionError
from foxcalc.laurent import (INF, IntegerDomain, LaurentDomain, LaurentPoly, cyclotomic,
                             parse_laurent, valuation_laurent)
from foxcalc.ringmat import (AddScaledRow, RingMatrix, ScaleRow, SwapCols, SwapRows, TransformLog,
                             apply_elementary, parse_matrix, pivot_valuation_ok, triangularize)
from foxcalc.sampling import random_laurent_matrix
from oracles import fraction_field_rank

D1 = LaurentDomain(1)
t = D1.var(0)


def M(text, d=D1):
    return parse_matrix(text, d)


def test_swap_cols():
    assert apply_elementary(M("t1, 2"), SwapCols(0, 1)) == M("2, t1")


def test_scale_row_right():
    assert apply_elementary(M("1, 0"), ScaleRow(0, t)) == M("t1, 0")


def test_add_scaled_row_example():
    m = M("t1 - 1, 1; t1^2 - 1, t1 + 1")
    out = apply_elementary(m, AddScaledRow(0, 1, -(t + 1)))
    assert out == M("t1 - 1, 1; 0, 0")


def test_step_validation():
    m = M("t1 - 1, 1; t1^2 - 1, t1 + 1")
    with pytest.raises(DomainError):
        apply_elementary(m, AddScaledRow(1, 0, t))
    with pytest.raises(DomainError):
        apply_elementary(m, ScaleRow(0, D1.zero()))
    with pytest.raises(DomainError):
        apply_elementary(m, SwapRows(0, 5))


def test_triangularize_rank_one():
    m = M("t1 - 1, 1; t1^2 - 1, t1 + 1")
    out, log, rank = triangularize(m)
    assert rank == 1 and out.is_triangular() == 1
    assert all(not a for a in out.rows[1])
    assert log.replay(m) == out


def test_identity_unchanged():
    m = RingMatrix(D1, [[D1.one(), D1.zero()], [D1.zero(), D1.one()]])
    out, log, rank = triangularize(m)
    assert out == m and rank == 2 and len(log) == 0


def test_augmentation_pivot_choice():
    d = LaurentDomain.augmentation(1)
    out, log, rank = triangularize(M("t1 - 1, 2", d))
    assert out == M("2, t1 - 1", d)
    assert [s.kind for s in log] == ["swap-cols"]


def test_valuation_examples():
    assert valuation_laurent(D1.const(3)) == 0
    assert valuation_laurent(t - 1) == 1
    assert valuation_laurent(D1.zero()) == INF
    d = LaurentDomain.augmentation(2)
    assert d.valuation(d.parse("t1^-1*t2 - 1")) == 1
    assert d.valuation(d.parse("t1 + 1")) == 0


def test_ore_pair():
    a, b = t - 1, t + 1
    c, e = D1.ore_pair(a, b)
    assert (c, e) == (b, a) and a * c == b * e
    assert D1.ore_pair(D1.one(), a) == (a, D1.one())
    with pytest.raises(DomainError):
        D1.ore_pair(D1.zero(), a)


def laurent_elements(domain, nvars):
    mono = st.tuples(*(st.integers(-2, 2) for _ in range(nvars)))
    return st.dictionaries(mono, st.integers(-3, 3), max_size=4).map(
        lambda d: LaurentPoly(domain.orders, d))


D2A = LaurentDomain.augmentation(2)


@given(laurent_elements(D2A, 2), laurent_elements(D2A, 2))
def test_valuation_axioms(a, b):
    v = D2A.valuation
    assert v(a * b) == v(a) + v(b)
    assert v(a + b) >= min(v(a), v(b))


def test_valuation_axioms_1000_pairs():
    r = random.Random(9)
    for _ in range(1000):
        a, b = (LaurentPoly(D2A.orders, {(r.randint(-2, 2), r.randint(-2, 2)): r.randint(-2, 2)
                                         for _ in range(r.randint(0, 4))}) for _ in range(2))
        a = a * (D2A.var(0) - 1) ** r.randint(0, 2)
        v = D2A.valuation
        assert v(a * b) == v(a) + v(b)
        assert v(a + b) >= min(v(a), v(b))


@pytest.mark.parametrize("domain", [LaurentDomain(2), LaurentDomain.augmentation(2)], ids=["trivial", "augmentation"])
def test_triangularize_contract_random(domain):
    r = random.Random(17)
    for _ in range(40):
        m = random_laurent_matrix(domain, 3, 5, r)
        out, log, rank = triangularize(m)
        assert out.is_triangular() == rank
        assert pivot_valuation_ok(out, rank)
        assert log.replay(m) == out
        assert rank == fraction_field_rank(m)


def test_log_text_round_trip():
    r = random.Random(1)
    d = LaurentDomain(2)
    for _ in range(20):
        m = random_laurent_matrix(d, 3, 4, r)
        tri = triangularize(m)
        text = tri.log.serialize(d)
        again = TransformLog.parse(text, d)
        assert again.replay(m) == tri.matrix


def test_integer_domain():
    z = IntegerDomain()
    m = RingMatrix(z, [[2, 4], [3, 1]])
    out, log, rank = triangularize(m)
    assert rank == 2 and out.is_triangular() == 2 and log.replay(m) == out


def test_laurent_text_round_trip():
    d = LaurentDomain(3)
    for s in ["2*t1^-1 - 1", "t1*t2 - t3^2 + 4", "-t2", "0", "t1^-3*t3"]:
        p = d.parse(s)
        assert d.parse(d.format(p)) == p
    assert d.format(d.parse("-1 + 2*t1^-1")) == "2*t1^-1 - 1"
    with pytest.raises(DomainError):
        d.parse("t4")
    with pytest.raises(DomainError):
        d.parse("t1 +")


def test_cyclotomic():
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(2) == (1, 1)
    assert cyclotomic(3) == (1, 1, 1)
    assert cyclotomic(6) == (1, -1, 1)
    assert cyclotomic(12) == (1, 0, -1, 0, 1)


def test_torsion_zero_divisors():
    d = LaurentDomain(1, (2,))
    s = d.var(0)
    assert s * s == d.one()
    assert d.is_zero_divisor(s + 1) and d.is_zero_divisor(s - 1)
    assert not d.is_zero_divisor(s + 2)
    d6 = LaurentDomain(1, (6,))
    u = d6.var(0)
    assert d6.is_zero_divisor(u ** 2 + u + 1)  # vanishes at primitive cube roots
    assert not d6.is_zero_divisor(u + 3)


def test_zero_divisor_pivots_demoted():
    d = LaurentDomain(1, (2,))
    m = parse_matrix("t1 + 1, t1 + 3", d)
    out, log, rank = triangularize(m)
    assert out.rows[0][0] == d.parse("t1 + 3")


def test_cannot_weight_torsion():
    with pytest.raises(UnsupportedTorsionError):
        LaurentDomain(1, (2,), killed={0})
