"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
import time

import pytest

from cadjust.cli import main
from cadjust.construct import adjust_set_mpdag, adjust_set_pag, o_set, parent_adjustment
from cadjust.criterion import (Clause, Verdict, applicable_and_amenable, check_amenability,
                               check_applicability, check_conditional_adjustment,
                               check_unconditional_adjustment, exists_conditional_adjustment)
from cadjust.errors import PreconditionError
from cadjust.fixtures import load, path
from cadjust.generate import random_dag, random_mpdag, random_query
from cadjust.oracle import adjustment_via_pbd, dag_adjustment_verdict, dsep_moral, enumerate_dag_extensions
from cadjust.paths import is_visible, m_separated
from cadjust.reachability import forbidden_set
from cadjust.sem import nonidentifiability_witness, verify_over_class

SUITE_SIZE = 200


@pytest.fixture(scope="module")
def suite():
    """200 random MPDAG queries (<= 6 nodes, <= 4 undirected edges) passing both preconditions."""
    rng = random.Random(2024)
    out = []
    while len(out) < SUITE_SIZE:
        g, _ = random_mpdag(rng, max_nodes=6, max_undirected=4)
        if len(g.nodes) < 2:
            continue
        X, Y, Z, S = random_query(rng, g)
        if applicable_and_amenable(g, X, Y, Z):
            out.append((g, X, Y, Z, S))
    return out


@pytest.fixture(scope="module")
def verdicts(suite):
    return [check_conditional_adjustment(*q).satisfied for q in suite]


def members(cs):
    return set(cs.members)


def test_criterion_1_worked_examples(acceptance_line):
    t0 = time.perf_counter()
    a, b, c, pag = load("fig3a"), load("fig3b"), load("fig3c"), load("fig4")
    X, Y = ["X"], ["Y"]
    ex2 = check_conditional_adjustment(a, X, Y, ["V1"], [])
    ex4 = check_amenability(c, X, Y)
    checks = {
        "ex1": check_conditional_adjustment(a, X, Y, ["V1", "V2"], []).satisfied,
        "ex2-open": ex2.clause is Clause.OPEN_PATH and ex2.witness.nodes == ("X", "V2", "Y"),
        "ex2-blocked": check_conditional_adjustment(a, X, Y, ["V1"], ["V2"]).satisfied,
        "ex3": check_conditional_adjustment(b, ["X1", "X2"], Y, ["Z"], ["S", "W"]).satisfied,
        "ex4": ex4.clause is Clause.NOT_AMENABLE and ex4.witness.nodes == ("X", "V1", "V2", "Y"),
        "ex5-parent": members(parent_adjustment(a, X, Y, ["V1"])) == {"V2", "V3"},
        "ex5-adjust": members(adjust_set_mpdag(a, X, Y, ["V1"])) == {"V2", "V3", "V4"},
        "ex5-oset": members(o_set(a, X, Y, ["V1"])) == {"V2", "V4"},
        "ex7-set": members(adjust_set_pag(pag, X, Y, ["V1"])) == {"V2", "V4"},
        "ex7-visible": is_visible(pag, "X", "Y"),
    }
    elapsed = time.perf_counter() - t0
    bad = [k for k, ok in checks.items() if not ok]
    ok = not bad and elapsed < 1.0
    acceptance_line(1, ok, f"{len(checks) - len(bad)}/{len(checks)} example checks in {elapsed:.3f}s"
                    + (f"; failed {bad}" if bad else ""))
    assert ok


def test_criterion_2_counterexamples(acceptance_line, capsys):
    t0 = time.perf_counter()
    res = exists_conditional_adjustment(load("fig5"), ["X1", "X2"], ["Y"], ["V2"])
    absent = (not res.exists and res.report.clause is Clause.FORBIDDEN_HIT
              and res.report.witness == "V1")
    rep = check_conditional_adjustment(load("fig3b"), ["X1", "X2"], ["Y"], ["Z", "W"], ["S"])
    inapplicable = rep.verdict is Verdict.INAPPLICABLE
    code = main(["--format", "json", "sem", "-g", str(path("fig3b")), "--x", "X1,X2", "--y", "Y",
                 "--z", "Z,W", "--s", "S", "--trials", "100", "--seed", "0", "--tol", "1e-8"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - t0
    ok = absent and inapplicable and code == 0 and '"holds"' in out and elapsed < 5.0
    acceptance_line(2, ok, f"absent/ForbiddenHit V1={absent}, inapplicable={inapplicable}, "
                           f"sem exit {code} in {elapsed:.2f}s")
    assert ok


def test_criterion_3_class_equivalence(acceptance_line, suite, verdicts):
    t0 = time.perf_counter()
    mismatches = dags = 0
    for q, v in zip(suite, verdicts):
        for d in enumerate_dag_extensions(q[0]):
            dags += 1
            mismatches += dag_adjustment_verdict(d, *q[1:]) != v
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60.0
    acceptance_line(3, ok, f"{mismatches} discrepancies over {len(suite)} graphs / {dags} DAGs "
                           f"({sum(verdicts)} satisfied) in {elapsed:.2f}s")
    assert ok


def test_criterion_4_separation_oracles(acceptance_line):
    rng = random.Random(4)
    sep_bad = pbd_bad = pbd_checked = 0
    for _ in range(500):
        d = random_dag(rng, rng.randint(2, 6), rng.uniform(0.2, 0.7))
        A, B, C, _ = random_query(rng, d, max_x=2, max_y=2, max_z=3)
        sep_bad += m_separated(d, A, B, C).separated != dsep_moral(d, A, B, C)
        if not set(C) & forbidden_set(d, A, B):
            pbd_checked += 1
            pbd_bad += (check_unconditional_adjustment(d, A, B, C).satisfied
                        != adjustment_via_pbd(d, A, B, C))
    ok = sep_bad == 0 and pbd_bad == 0
    acceptance_line(4, ok, f"m-sep vs moral {sep_bad}/500, clause (b) vs proper back-door graph "
                           f"{pbd_bad}/{pbd_checked} discrepancies")
    assert ok


def test_criterion_5_sem(acceptance_line, suite, verdicts):
    unsound = incomplete = 0
    worst_sat = 0.0
    for k, (q, v) in enumerate(zip(suite, verdicts)):
        g, X, Y, Z, S = q
        if v:
            rep = verify_over_class(g, X, Y, Z, S, trials=20, seed=k)
            worst_sat = max(worst_sat, rep.max_mean_gap, rep.max_cov_gap)
            unsound += not rep.holds(1e-8)
        else:
            for j, d in enumerate(enumerate_dag_extensions(g)):
                rep = verify_over_class(d, X, Y, Z, S, trials=20, seed=1000 * k + j)
                if max(max(gap) for gap in rep.gaps) <= 1e-4:
                    incomplete += 1
                    break
    ok = unsound == 0 and incomplete == 0
    n_sat = sum(verdicts)
    acceptance_line(5, ok, f"soundness {unsound}/{n_sat} failures (worst gap {worst_sat:.1e}), "
                           f"completeness {incomplete}/{len(suite) - n_sat} silent")
    assert ok


def _non_amenable_instances(n, seed=6):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        g, _ = random_mpdag(rng, max_nodes=6, max_undirected=4)
        if len(g.nodes) < 2 or not g.undirected_edges():
            continue
        X, Y, Z, _ = random_query(rng, g)
        if not check_applicability(g, X, Y, Z).satisfied or check_amenability(g, X, Y).satisfied:
            continue
        try:
            out.append((g, X, Y, Z, nonidentifiability_witness(g, X, Y, Z)))
        except PreconditionError:
            continue
    return out


def test_criterion_6_nonidentifiability(acceptance_line):
    w = nonidentifiability_witness(load("fig3c"), ["X"], ["Y"], ["V3"])
    cases = [w] + [case[-1] for case in _non_amenable_instances(20)]
    good = [c.observational_gap < 1e-10 and c.gap > 1e-3 for c in cases]
    ok = all(good)
    acceptance_line(6, ok, f"{sum(good)}/{len(cases)} witnesses (Fig. 3(c) effect gap {w.gap:.3f}, "
                           f"min gap {min(c.gap for c in cases):.2e}, "
                           f"max obs gap {max(c.observational_gap for c in cases):.1e})")
    assert ok


def test_criterion_7_bridge(acceptance_line, suite, verdicts):
    bad = sum(check_unconditional_adjustment(g, X, Y, list(S) + list(Z)).satisfied != v
              for (g, X, Y, Z, S), v in zip(suite, verdicts))
    ok = bad == 0
    acceptance_line(7, ok, f"{bad}/{len(suite)} bridge discrepancies")
    assert ok
