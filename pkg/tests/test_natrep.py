from __future__ import annotations

import pytest

from qsatake.gradedlin import E, diagonal, identity, parity_of
from qsatake.natrep import build_natural_rep, check_defining_relations, graded_commutator
from qsatake.qring import OMEGA, ONE, Q, QBAR, qpow
from qsatake.report import FAIL, PASS
from qsatake.rootdata import build_root_system

DIM8 = [
    ("GL", 1, 1), ("GL", 2, 1), ("GL", 1, 2), ("GL", 2, 2), ("GL", 3, 1), ("GL", 4, 1), ("GL", 3, 2), ("GL", 1, 3), ("GL", 5, 1), ("GL", 6, 1),
    ("OSP-even", 1, 1), ("OSP-even", 1, 2), ("OSP-even", 2, 1), ("OSP-even", 1, 3), ("OSP-even", 2, 2), ("OSP-even", 3, 1),
    ("SPO", 1, 1), ("SPO", 1, 2), ("SPO", 2, 1), ("SPO", 1, 3), ("SPO", 2, 2), ("SPO", 3, 1),
]
OSP_ODD = [("OSP-odd", 0, 1), ("OSP-odd", 0, 2), ("OSP-odd", 0, 3), ("OSP-odd", 1, 1), ("OSP-odd", 1, 2), ("OSP-odd", 2, 1)]


def test_gl_1_2_images():
    rs = build_root_system("GL", 1, 1)
    rep = build_natural_rep(rs)
    g = rs.grading
    assert rep.e(1) == E(g, 1, 2)
    assert rep.f(1) == E(g, 2, 1).scale(-1)
    lhs = graded_commutator(rep.e(1), rep.f(1))
    assert lhs == (E(g, 1, 1) + E(g, 2, 2)).scale(-1)
    assert lhs == (rep.k(1) - rep.k(1, -1)).scale(OMEGA.inverse())
    assert rep.k(1) == diagonal(g, [QBAR, QBAR, ONE])


def test_osp_1_2_cartan():
    rep = build_natural_rep(build_root_system("OSP-odd", 0, 1))
    assert rep.k(1) == diagonal(rep.grading, [QBAR, ONE, Q])


def test_flipped_f_breaks_relation_iv():
    rs = build_root_system("GL", 1, 1)
    rep = build_natural_rep(rs)
    rep.images["F1"] = rep.images["F1"].scale(-1)
    r = check_defining_relations(rep)
    assert r.status == FAIL and r.witness["relation"] == "iv"


@pytest.mark.parametrize("fam,bn,bm", DIM8)
def test_relations_hold(fam, bn, bm):
    rep = build_natural_rep(build_root_system(fam, bn, bm))
    assert check_defining_relations(rep).status == PASS


@pytest.mark.parametrize("fam,bn,bm", OSP_ODD)
def test_osp_odd_relation_iv_finding(fam, bn, bm):
    # frozen finding: (iv) fails at the simple root with (alpha, alpha) = +-1, see the ledger
    rs = build_root_system(fam, bn, bm)
    r = check_defining_relations(build_natural_rep(rs), collect=True)
    assert r.status == FAIL and r.witness["relation"] == "iv"
    assert abs(rs.norm(r.witness["indices"][0])) == 1


@pytest.mark.parametrize("fam,bn,bm", DIM8[:8] + OSP_ODD)
def test_images_homogeneous_and_weight_shifts(fam, bn, bm):
    rs = build_root_system(fam, bn, bm)
    rep = build_natural_rep(rs)
    for i in range(1, rs.rank + 1):
        assert parity_of(rep.e(i)) == rs.parities[i - 1]
        assert parity_of(rep.f(i)) == rs.parities[i - 1]
        assert rep.k(i) @ rep.k(i, -1) == identity(rep.grading)
        for j in range(1, rs.rank + 1):
            a = rs.pair(rs.root(j), rs.root(i))
            conj = rep.cartan(rs.root(j)) @ rep.e(i) @ rep.cartan(rs.root(j), -1)
            assert conj == rep.e(i).scale(qpow(a))
