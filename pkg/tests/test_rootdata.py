from __future__ import annotations

from fractions import Fraction

import pytest

from qsatake.rootdata import build_root_system, dynkin_adjacency, pair, simple_coordinates

SMALL = [
    ("GL", 1, 1), ("GL", 2, 1), ("GL", 1, 2), ("GL", 2, 2),
    ("OSP-odd", 0, 1), ("OSP-odd", 0, 2), ("OSP-odd", 1, 1), ("OSP-odd", 1, 2),
    ("OSP-even", 1, 1), ("OSP-even", 1, 2), ("OSP-even", 2, 1),
    ("SPO", 1, 1), ("SPO", 1, 2), ("SPO", 2, 1),
]


def _texts(rs):
    return [rs.weight_text(a) for a in rs.simple_roots]


def test_gl_1_2():
    rs = build_root_system("GL", 1, 1)
    assert _texts(rs) == ["δ1-ε1", "-δ2+ε1"]
    assert all(rs.is_grey(i) for i in (1, 2))
    # corrected sign of the frozen Gram value, see the ledger
    assert dynkin_adjacency(rs) == [[0, -1], [-1, 0]]


def test_osp_1_2():
    rs = build_root_system("OSP-odd", 0, 1)
    assert _texts(rs) == ["δ1"]
    assert rs.is_black_odd(1)
    assert dynkin_adjacency(rs) == [[-1]]


def test_spo_2_2():
    rs = build_root_system("SPO", 1, 1)
    assert _texts(rs) == ["δ1-ε1", "2ε1"]
    assert rs.parities == (1, 0)


def test_pairings():
    rs = build_root_system("GL", 2, 1)
    unit = {lab: tuple(1 if k == j else 0 for k in range(rs.basis_dim)) for j, lab in enumerate(rs.basis_labels)}
    d1, e1, e2 = unit["d1"], unit["e1"], unit["e2"]
    a = tuple(x - y for x, y in zip(d1, e1))
    assert pair(rs, a, a) == 0
    assert pair(rs, e1, e1) == 1
    assert pair(rs, d1, e2) == 0


@pytest.mark.parametrize("fam,bn,bm", SMALL)
def test_structure_invariants(fam, bn, bm):
    rs = build_root_system(fam, bn, bm)
    G = dynkin_adjacency(rs)
    assert len(rs.simple_roots) == rs.rank
    assert all(G[i][j] == G[j][i] for i in range(rs.rank) for j in range(rs.rank))
    for i in range(rs.rank):
        for j in range(rs.rank):
            if abs(i - j) >= 2 and fam in ("GL",):
                assert G[i][j] == 0
    for r in rs.positive_roots:
        c = simple_coordinates(rs, r)
        assert all(x >= 0 and Fraction(x).denominator == 1 for x in c)


@pytest.mark.parametrize("N,bm", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_gl_odd_root_count(N, bm):
    rs = build_root_system("GL", N, bm)
    assert 2 * len(rs.odd_roots) == 2 * N * 2 * bm
