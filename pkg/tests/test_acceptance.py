from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE
from qsatake.coideal import classical_mixtures, k_diagram, solve_and_compare, verify_mixtures
from qsatake.kmat import (
    KParamError,
    build_K,
    check_RE,
    params_from_text,
    resolve_A_corner,
    sample_params,
    verify_K,
    violating_params,
)
from qsatake.qring import Q, QBAR
from qsatake.natrep import build_natural_rep, check_defining_relations
from qsatake.report import CONJECTURE_PASS, FAIL, PASS, dumps_reports
from qsatake.rmat import braid_operator, build_R, check_braid, check_YBE
from qsatake.rootdata import build_root_system
from qsatake.satake import (
    check_pseudo_symmetric,
    check_spherical,
    classical_k_closure,
    enumerate_pseudo_symmetric,
    enumerate_satake,
    is_admissible,
    make_diagram,
    selection_rule_violation,
    theta_map,
    tilde_coordinates,
    violates_selection_rules,
)
from qsatake.suite import CONJECTURE_INSTANCES, RunConfig, family_instances, run_suite, theorem_kinds
from test_satake import _coords, closed_form_tilde

# GL(1|2), GL(2|2), GL(1|4); OSP(1|2), OSP(3|2), OSP(2|2), OSP(1|4), OSP(2|4); SPO(2|2), SPO(4|2), SPO(2|4)
R_GRID = [
    ("GL", 1, 1), ("GL", 2, 1), ("GL", 1, 2),
    ("OSP-odd", 0, 1), ("OSP-odd", 1, 1), ("OSP-even", 1, 1), ("OSP-odd", 0, 2), ("OSP-even", 1, 2),
    ("SPO", 1, 1), ("SPO", 2, 1), ("SPO", 1, 2),
]
K_GRID = [s for s in R_GRID if s[0] != "GL"]
SATAKE_GRID = [("GL", 1, 1), ("GL", 2, 1), ("OSP-odd", 0, 1), ("OSP-odd", 0, 2), ("OSP-even", 1, 2), ("SPO", 1, 1)]


@contextmanager
def criterion(k: int, detail: str = ""):
    ACCEPTANCE[k] = ("FAIL", detail)
    try:
        yield
    except BaseException:
        print(f"criterion {k}: FAIL {detail}")
        raise
    ACCEPTANCE[k] = ("PASS", detail)
    print(f"criterion {k}: PASS {detail}")


def test_criterion_01_yang_baxter():
    with criterion(1, f"{len(R_GRID)} instances"):
        t = time.perf_counter()
        for spec in R_GRID:
            rs = build_root_system(*spec)
            assert check_YBE(build_R(rs), rs).status == PASS, spec
        assert time.perf_counter() - t < 30


def test_criterion_02_braid():
    with criterion(2, f"{len(R_GRID)} instances"):
        for spec in R_GRID:
            rs = build_root_system(*spec)
            assert check_braid(build_R(rs)).status == PASS, spec


def test_criterion_03_theorem_K_matrices():
    with criterion(3, "kinds A, B, C with 3 samples and a violated sample each"):
        t = time.perf_counter()
        seen = set()
        for spec in K_GRID:
            rs = build_root_system(*spec)
            R = build_R(rs)
            S = braid_operator(R)
            for kind, block in theorem_kinds(rs):
                seen.add(kind)
                for s in range(3):
                    assert verify_K(rs, sample_params(rs, kind, block, s), R=R).status == PASS, (spec, kind, block, s)
                bad = violating_params(rs, sample_params(rs, kind, block, 0))
                assert check_RE(S, build_K(rs, bad, enforce=False)).status == FAIL, (spec, kind, block)
        assert seen == {"A", "B", "C"}
        assert time.perf_counter() - t < 60


def test_criterion_04_gl_solution():
    with criterion(4, "GL(2|2), m in {1, 2}"):
        rs = build_root_system("GL", 2, 1)
        R = build_R(rs)
        S = braid_operator(R)
        for m in (1, 2):
            p = sample_params(rs, "A-GL", m)
            assert verify_K(rs, p, R=R).status == PASS
            bad = violating_params(rs, p)
            with pytest.raises(KParamError):
                build_K(rs, bad)
            assert check_RE(S, build_K(rs, bad, enforce=False)).status == FAIL


def test_criterion_05_corner_reading():
    with criterion(5, "anti-diagonal reading"):
        rs = build_root_system("OSP-odd", 0, 1)
        assert resolve_A_corner(rs) == {"anti-diagonal": PASS, "literal": FAIL}
        p = params_from_text("A", 1, {"lambda": "1", "1": "1", "3": "-q"})
        r = verify_K(rs, p)
        assert r.status == PASS
        assert any("anti-diagonal" in n for n in r.notes)


def test_criterion_06_conjectures():
    n = sum(len(v) for v in CONJECTURE_INSTANCES.values())
    with criterion(6, f"{n} smallest instances"):
        for kind, rows in CONJECTURE_INSTANCES.items():
            for fam, bn, bm, block in rows:
                rs = build_root_system(fam, bn, bm)
                r = verify_K(rs, sample_params(rs, kind, block))
                assert r.status == CONJECTURE_PASS, (kind, fam, bn, bm)


def _relations_failures():
    bad = []
    for rs in family_instances(8):
        r = check_defining_relations(build_natural_rep(rs))
        if r.status != PASS:
            bad.append(rs.label)
    return bad


def test_criterion_07_relations_outside_osp_odd():
    for rs in family_instances(8):
        if rs.family != "OSP-odd":
            assert check_defining_relations(build_natural_rep(rs)).status == PASS, rs.label


@pytest.mark.xfail(strict=True, reason="relation (iv) at the short odd-tail root fails in the transcribed osp(2n+1|2m) images")
def test_criterion_07_relations():
    with criterion(7, "dim V <= 8"):
        assert _relations_failures() == []


def test_criterion_08_satake():
    with criterion(8, "six instances, one template each"):
        counts = {}
        for spec in SATAKE_GRID:
            rs = build_root_system(*spec)
            entries = enumerate_satake(rs)
            counts[spec] = len(entries)
            for e in entries:
                d = e.diagram
                assert is_admissible(rs, d.piL)
                assert check_pseudo_symmetric(d).status == PASS
                assert violates_selection_rules(d).status == PASS
                assert len(e.matches) == 1, (spec, d.colors(), d.tau)
        # frozen from the first verified brute-force run
        assert counts == {
            ("GL", 1, 1): 1, ("GL", 2, 1): 3, ("OSP-odd", 0, 1): 1,
            ("OSP-odd", 0, 2): 3, ("OSP-even", 1, 2): 4, ("SPO", 1, 1): 1,
        }


def test_criterion_09_tilde_and_theta():
    with criterion(9, "closed forms and theta properties"):
        for spec in R_GRID:
            rs = build_root_system(*spec)
            for kind, block in theorem_kinds(rs):
                d = k_diagram(rs, kind, block)
                for a, support in closed_form_tilde(rs, kind, block).items():
                    assert tilde_coordinates(d, a) == _coords(rs, support), (spec, kind, block, a)
        for rs in family_instances(6):
            for d in enumerate_pseudo_symmetric(rs):
                th = theta_map(d)
                assert th.is_involutive() and th.is_orthogonal(tuple(rs.form)) and th.is_even(rs.basis_labels)
                assert all(th.apply(rs.root(a)) == rs.root(a) for a in d.piL)


def _mixture_grid():
    for spec in R_GRID:
        rs = build_root_system(*spec)
        for kind, block in theorem_kinds(rs):
            yield rs, kind, block


def test_criterion_10_mixtures_corrected_reading():
    for rs, kind, block in _mixture_grid():
        for s in range(3):
            assert verify_mixtures(rs, sample_params(rs, kind, block, s), "corrected").status == PASS


def test_criterion_10_named_formulas():
    rs = build_root_system("OSP-odd", 0, 1)
    (c,) = solve_and_compare(rs, params_from_text("A", 1, {"lambda": "1", "1": "1", "3": "-q"}))
    assert c.solved.c == -QBAR
    rs = build_root_system("GL", 2, 1)
    p = sample_params(rs, "A-GL", 2)
    mid = {c.alpha: c for c in solve_and_compare(rs, p)}[2]
    assert mid.solved.c_grave == (p.mu + p.lam) * Q / ((Q * Q - 1) * p.offdiag[2])
    rs = build_root_system("OSP-even", 1, 2)
    p = sample_params(rs, "C", 3)
    last = {c.alpha: c for c in solve_and_compare(rs, p)}[3]
    assert last.solved.c == -p.offdiag[5] / (p.offdiag[3] * Q)


@pytest.mark.xfail(strict=True, reason="printed A-GL sign (-1)^{delta_i^{m'}} sits one node right of the solved flip at i = N+m")
def test_criterion_10_mixtures():
    with criterion(10, "printed forms on the criterion-3/4 grid"):
        for rs, kind, block in _mixture_grid():
            for s in range(3):
                assert verify_mixtures(rs, sample_params(rs, kind, block, s)).status == PASS, (rs.label, kind, block, s)


SR_VIOLATORS = [(("GL", 1, 1), [], None), (("SPO", 2, 2), [1, 3], None), (("OSP-even", 2, 2), [1, 3], None)]
BEYOND_BLOCK = [(("OSP-odd", 1, 1), 2), (("SPO", 2, 1), 2)]


def test_criterion_11_spherical_and_trivial():
    with criterion(11, "sphericity at dim V <= 6 plus triviality cases"):
        for rs in family_instances(6):
            for d in enumerate_pseudo_symmetric(rs):
                assert check_spherical(d).status == PASS, (rs.label, d.colors(), d.tau)
        for spec, piL, tau in SR_VIOLATORS:
            d = make_diagram(build_root_system(*spec), piL, tau)
            assert selection_rule_violation(d) is not None
            assert not classical_k_closure(d).proper
        # mixtures are the q -> 1 limits of the values solved against each K-matrix
        for rs in family_instances(6):
            for kind, block in theorem_kinds(rs):
                mix = classical_mixtures(solve_and_compare(rs, sample_params(rs, kind, block), "corrected"))
                assert classical_k_closure(k_diagram(rs, kind, block), mixtures=mix).proper, (rs.label, kind, block)
        for spec, m in BEYOND_BLOCK:
            rs = build_root_system(*spec)
            assert m > rs.bm
            assert not classical_k_closure(make_diagram(rs, range(m + 1, rs.rank + 1))).proper


def test_criterion_12_determinism():
    with criterion(12, "serial vs 3 workers, repeated"):
        cfg = dict(max_dim=5, samples=2)
        a = dumps_reports(run_suite(RunConfig(**cfg)))
        b = dumps_reports(run_suite(RunConfig(**cfg)))
        c = dumps_reports(run_suite(RunConfig(jobs=3, **cfg)))
        assert a == b == c
