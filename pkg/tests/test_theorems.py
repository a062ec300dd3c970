import pytest

from pseudosym.conditions import FAILS, HOLDS
from pseudosym.theorems import (COEFFICIENTS, UnknownSuite, clauses, condition_ids, corollaries,
                                run_suite)


def by_id(reports):
    return {r.conditionId: r for r in reports}


def test_catalog_sizes():
    assert len([c for c in clauses("ibh4") if c.id.startswith("thm4.1.")]) == 6
    assert len([c for c in clauses("ibh4") if c.id.startswith("thm4.2.") and c.id[7:] not in ("consistency",)]) == 19
    assert len([c for c in clauses("ibh5") if c.id.startswith("thm4.3.")]) == 6
    assert len([c for c in clauses("ibh5") if c.id.split(".")[-1] not in ("consistency", "nonzero")
                and c.id.startswith("thm4.4.")]) == 14
    ids = condition_ids()
    assert len(ids) == len(set(ids))


def test_theorem_4_1():
    reps = run_suite("thm4.1", "ibh4")
    assert all(r.verdict == HOLDS for r in reps)


def test_theorem_4_2_with_errata():
    reps = by_id(run_suite("thm4.2", "ibh4"))
    assert all(r.verdict == HOLDS for r in reps.values())
    flagged = {k for k, r in reps.items() if any(n.startswith("erratum") for n in r.notes)}
    assert flagged == {"thm4.2.xvi", "thm4.2.xvii", "thm4.2.xix"}


def test_theorems_4_3_and_4_4():
    reps = by_id(run_suite("thm4.3", "ibh5") + run_suite("thm4.4", "ibh5"))
    assert all(r.verdict == HOLDS for r in reps.values())
    flagged = {k for k, r in reps.items() if any(n.startswith("erratum") for n in r.notes)}
    assert flagged == {"thm4.4.vi", "thm4.4.viii"}


def test_xi_substitution_makes_R_semisymmetric():
    reps = by_id(run_suite("thm4.1", "ibh4", xi="C1*t"))
    assert reps["thm4.1.i"].coefficients["L1"].is_zero()


def test_singular_coefficient_is_degenerate():
    reps = by_id(run_suite("thm4.2", "ibh4", xi="C1*t^2 + C2*t^3"))
    assert reps["thm4.2.i"].verdict == HOLDS
    assert any(r.verdict == "degenerate" for r in reps.values())


def test_false_corollaries_are_reported():
    reps = by_id(run_suite("corollaries", "ibh4") + run_suite("corollaries", "ibh5"))
    mismatched = {k for k, r in reps.items() if not r.matches_claim}
    assert mismatched == {"cor4.2.a", "cor4.2.d", "cor4.4.c"}
    for k in ("cor4.2.d-derived", "cor4.4.c-derived"):
        assert reps[k].verdict == HOLDS


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("thm9.9", "ibh4")
    with pytest.raises(UnknownSuite):
        run_suite("thm4.3", "ibh4")


def test_generic_suites_on_other_metrics():
    reps = by_id(run_suite("all", "schwarzschild"))
    assert reps["sec2.identities"].verdict == HOLDS
    assert reps["ricci.classify"].verdict == HOLDS


def test_threads_give_identical_reports():
    a = run_suite("thm4.2", "ibh4", jobs=1)
    b = run_suite("thm4.2", "ibh4", jobs=4)
    assert [(r.conditionId, r.verdict) for r in a] == [(r.conditionId, r.verdict) for r in b]


def test_coefficient_tables_parse():
    from pseudosym import builtin
    from pseudosym.exprparse import parse_expr
    for name, table in COEFFICIENTS.items():
        f = builtin(name).field
        for v in table.values():
            parse_expr(v, f)
