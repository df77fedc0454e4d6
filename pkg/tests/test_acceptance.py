"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import random
import time

from foxcalc.fox import chain_rule_decompose, derivative, fundamental_defect
from foxcalc.freiheit import (FAIL, FalsifyBounds, Presentation, falsify_freeness,
                              one_relator_criterion, select_free_subset)
from foxcalc.groupring import coset_collapse
from foxcalc.laurent import LaurentDomain
from foxcalc.lie import hall_word, lyndon_words
from foxcalc.magnus import lcs_degree_direct, lcs_degree_fox
from foxcalc.ringmat import pivot_valuation_ok, triangularize
from foxcalc.sampling import (random_commutator_product, random_cyclic_relator, random_kernel_word,
                              random_laurent_matrix, random_presentation_data, random_word)
from foxcalc.schreier import QuotientHom, build_transversal
from foxcalc.words import FactorTable, enumerate_words
from oracles import fraction_field_rank, relation_module_image

SEED = 20240601
MIXED = FactorTable.build([("a", "infinite"), ("b", "finite", 3), ("x", "free")])
FREE2 = FactorTable.free(["x", "y"])


def report(capsys, n, ok, detail, elapsed=None, limit=None):
    timing = "" if elapsed is None else f" [{elapsed:.2f}s" + (f" < {limit}s]" if limit else "]")
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}{timing}")


def test_criterion_1_derivation_law(capsys):
    r = random.Random(SEED + 1)
    start = time.perf_counter()
    failures = 0
    for _ in range(1000):
        u, v = random_word(MIXED, 8, r), random_word(MIXED, 8, r)
        for k in range(len(MIXED)):
            if derivative(k, u * v) != derivative(k, u) * v + derivative(k, v):
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 5
    report(capsys, 1, ok, f"derivation law on 1000 pairs, {failures} failures", elapsed, 5)
    assert ok


def test_criterion_2_fundamental_formula(capsys):
    table = FactorTable.build([("x", "free"), ("y", "free"), ("c", "finite", 3)])
    start = time.perf_counter()
    ws = enumerate_words(table, 6)
    failures = sum(1 for w in ws if fundamental_defect(w))
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    report(capsys, 2, ok, f"fundamental defect over all {len(ws)} words of length <= 6, {failures} failures",
           elapsed, 60)
    assert ok


def _collapses(v, q):
    return all(not coset_collapse(derivative(k, v), q) for k in range(len(q.table)))


def test_criterion_3_commutator_subgroup(capsys):
    r = random.Random(SEED + 3)
    q = QuotientHom.abelianization(FREE2)
    inside = [random_commutator_product(FREE2, r.randint(1, 3), 3, r) for _ in range(100)]
    outside = []
    candidates = []
    while len(candidates) < 400:
        v = random_kernel_word(FREE2, 8, r)
        if not v.is_identity:
            candidates.append(v)
    radius = max(w.letter_length() for w in inside + candidates)
    tr = build_transversal(q, (), radius)
    for v in candidates:
        if relation_module_image(v, tr) and len(outside) < 100:
            outside.append(v)
    assert not any(relation_module_image(v, tr) for v in inside)
    wrong = sum(1 for v in inside if not _collapses(v, q)) + sum(1 for v in outside if _collapses(v, q))
    ok = wrong == 0 and len(outside) == 100
    report(capsys, 3, ok, f"{len(inside)} [N,N] and {len(outside)} non-[N,N] kernel elements, {wrong} misclassified")
    assert ok


def test_criterion_4_lcs_two_routes(capsys):
    failures = []
    basics = [w for n in range(1, 5) for w in lyndon_words([0, 1], n)]
    for lw in basics:
        w = hall_word(lw, FREE2)
        d, f = lcs_degree_direct(w, 6).weight, lcs_degree_fox(w, 6).weight
        if not d == f == len(lw):
            failures.append(lw)
    ok = not failures
    report(capsys, 4, ok, f"{len(basics)} basic commutators of weight <= 4, {len(failures)} failures")
    assert ok


def test_criterion_5_chain_rule(capsys):
    q = QuotientHom.parse(FREE2, "2;x=1;y=0")
    tr = build_transversal(q, (), 2)
    basis = [g.word for g in tr.schreier_generators()]
    ztable = FactorTable.free([f"z{i + 1}" for i in range(len(basis))])
    start = time.perf_counter()
    checked = failures = 0
    for zw in enumerate_words(ztable, 4):
        v = FREE2.identity()
        for z, e in zw.syllables:
            v = v * basis[z] ** e
        for k in range(2):
            checked += 1
            if chain_rule_decompose(v, basis, k, tr) != derivative(k, v):
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0
    report(capsys, 5, ok, f"chain rule on {checked} (word, k) pairs over basis {[str(b) for b in basis]}, "
           f"{failures} failures", elapsed)
    assert ok


def test_criterion_6_triangularization(capsys):
    r = random.Random(SEED + 6)
    domains = [LaurentDomain(2), LaurentDomain.augmentation(2)]
    start = time.perf_counter()
    problems = {"triangular": 0, "pivot": 0, "replay": 0, "rank": 0}
    for i in range(200):
        d = domains[i % 2]
        m = random_laurent_matrix(d, 3, 5, r)
        out, log, rank = triangularize(m)
        problems["triangular"] += out.is_triangular() != rank
        problems["pivot"] += not pivot_valuation_ok(out, rank)
        problems["replay"] += log.replay(m) != out
        problems["rank"] += rank != fraction_field_rank(m)
    elapsed = time.perf_counter() - start
    ok = not any(problems.values()) and elapsed < 30
    report(capsys, 6, ok, f"200 random 3x5 Laurent matrices, failures {problems}", elapsed, 30)
    assert ok


F3 = [("x1", "free"), ("x2", "free"), ("x3", "free")]


def test_criterion_7_selection(capsys):
    r = random.Random(SEED + 7)
    bad = 0
    for _ in range(100):
        table, rels = random_presentation_data(r, max_n=5, max_len=8)
        p = Presentation(table, tuple(rels))
        if len(select_free_subset(p).J) < p.n - p.m:
            bad += 1
    suite = [(["x1^-1 x2^-1 x1 x2"], {1, 2}), (["x1^2", "x2^2"], {2})]
    suite_ok = True
    notes = []
    for rels, expected in suite:
        p = Presentation.from_strings(F3, rels)
        J = select_free_subset(p).J
        start = time.perf_counter()
        ce = falsify_freeness(p, J, FalsifyBounds(2, 2, 6, 3))
        elapsed = time.perf_counter() - start
        good = J == expected and ce is None and elapsed < 60
        suite_ok &= good
        notes.append(f"J={{{', '.join(p.names[i] for i in sorted(J))}}} none={ce is None} {elapsed:.2f}s")
    ok = bad == 0 and suite_ok
    report(capsys, 7, ok, f"|J| >= n - m violated {bad}/100; fixed suite: " + "; ".join(notes))
    assert ok


def test_criterion_8_magnus_freiheitssatz(capsys):
    r = random.Random(SEED + 8)
    fails = found = 0
    start = time.perf_counter()
    for _ in range(50):
        n = r.randint(2, 4)
        t = FactorTable.free(f"x{i + 1}" for i in range(n))
        rel = random_cyclic_relator(t, 8, r, must_contain=n - 1)
        p = Presentation(t, (rel,))
        J = set(range(n - 1))
        fails += one_relator_criterion(rel, J, p).verdict == FAIL
        found += falsify_freeness(p, J) is not None
    elapsed = time.perf_counter() - start
    ok = fails == 0 and found == 0
    report(capsys, 8, ok, f"50 one-relator presentations: {fails} fail verdicts, {found} counterexamples", elapsed)
    assert ok


def test_criterion_9_negative_control(capsys):
    r = random.Random(SEED + 9)
    cases = [Presentation.from_strings(F3[:2], ["x1 x2^-1"])]
    Js = [{0, 1}]
    while len(cases) < 40:
        n = r.randint(2, 4)
        t = FactorTable.free(f"x{i + 1}" for i in range(n))
        J = set(range(r.randint(1, n)))
        sub = FactorTable.free(t.names[i] for i in sorted(J))
        core = random_cyclic_relator(sub, 6, r)
        h = t.word(core.syllables)
        rels = [random_cyclic_relator(t, 6, r) for _ in range(r.randint(0, 1))]
        rels.insert(r.randint(0, len(rels)), h)
        cases.append(Presentation(t, tuple(rels)))
        Js.append(J)
    missed = bad_replay = 0
    for p, J in zip(cases, Js):
        ce = falsify_freeness(p, J)
        if ce is None:
            missed += 1
        elif not ce.verify():
            bad_replay += 1
    ok = missed == 0 and bad_replay == 0
    report(capsys, 9, ok, f"{len(cases)} presentations with a relator in H: {missed} missed, "
           f"{bad_replay} certificates failed to replay")
    assert ok
