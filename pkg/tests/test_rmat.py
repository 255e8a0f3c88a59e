from __future__ import annotations

from fractions import Fraction

import pytest

from qsatake.gradedlin import abstract_expansion, embed_expansion, graded_permutation, identity, is_even
from qsatake.qring import OMEGA, ONE, QBAR
from qsatake.report import FAIL, PASS
from qsatake.rmat import braid_operator, build_R, check_braid, check_YBE, classical_limit_ok, rho_kappa
from qsatake.rootdata import build_root_system

GRID = [
    ("GL", 1, 1), ("GL", 2, 1), ("GL", 2, 2), ("GL", 1, 2),
    ("OSP-odd", 0, 1), ("OSP-odd", 1, 1), ("OSP-even", 1, 1), ("OSP-odd", 0, 2), ("OSP-even", 1, 2),
    ("SPO", 1, 1), ("SPO", 2, 1), ("SPO", 1, 2),
]


def test_rho_kappa_small():
    rk = rho_kappa(build_root_system("OSP-odd", 0, 1))
    assert rk.rho == (Fraction(-1, 2), 0, Fraction(1, 2)) and rk.kappa == (-1, 1, 1)
    rk = rho_kappa(build_root_system("OSP-even", 1, 1))
    assert rk.rho == (0, 0, 0, 0) and rk.kappa == (-1, 1, 1, 1)
    rk = rho_kappa(build_root_system("SPO", 1, 1))
    assert rk.rho == (1, 1, -1, -1)


@pytest.mark.parametrize("fam,bn,bm", [("OSP-odd", 2, 1), ("OSP-even", 2, 2), ("SPO", 2, 2), ("SPO", 3, 1)])
def test_rho_antisymmetric(fam, bn, bm):
    rs = build_root_system(fam, bn, bm)
    rho = rho_kappa(rs).rho
    assert all(rho[i] == -rho[rs.D - 1 - i] for i in range(rs.D))


def test_gl_coefficients():
    e = abstract_expansion(build_R(build_root_system("GL", 1, 1)))
    assert e[(0, 0, 0, 0)] == QBAR
    assert e[(1, 0, 0, 1)] == -OMEGA
    assert e[(0, 0, 1, 1)] == ONE


@pytest.mark.parametrize("fam,bn,bm", GRID)
def test_ybe_and_braid(fam, bn, bm):
    rs = build_root_system(fam, bn, bm)
    R = build_R(rs)
    assert is_even(R)
    assert classical_limit_ok(R)
    assert check_YBE(R, rs).status == PASS
    assert check_braid(R, rs).status == PASS


def test_identity_R():
    g = build_root_system("GL", 1, 1).grading
    one = identity(g, 2)
    assert check_YBE(one).status == PASS
    assert braid_operator(one) == graded_permutation(g)
    assert check_braid(one).status == PASS


def test_perturbed_R_fails():
    R = build_R(build_root_system("GL", 1, 1))
    e = abstract_expansion(R)
    e[(1, 0, 0, 1)] = OMEGA
    r = check_YBE(embed_expansion(R.grading, e))
    assert r.status == FAIL and r.witness is not None
    e = abstract_expansion(R)
    e[(1, 1, 1, 1)] = e[(1, 1, 1, 1)] + OMEGA
    assert check_braid(embed_expansion(R.grading, e)).status == FAIL


def test_spo_note_recorded():
    rs = build_root_system("SPO", 1, 1)
    assert check_YBE(build_R(rs), rs).notes
