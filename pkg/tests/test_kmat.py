from __future__ import annotations

import pytest

from qsatake.gradedlin import identity, is_even
from qsatake.kmat import (
    KParamError,
    build_K,
    check_RE,
    check_RE_twisted_theta,
    params_from_text,
    resolve_A_corner,
    sample_params,
    verify_K,
    violating_params,
)
from qsatake.qring import ONE, Q, parse
from qsatake.report import CONJECTURE_PASS, FAIL, PASS, PRECONDITION_FAIL
from qsatake.rmat import braid_operator, build_R
from qsatake.rootdata import build_root_system
from qsatake.suite import CONJECTURE_INSTANCES, family_instances, theorem_kinds


def _entries(K):
    return {(r + 1, c + 1): v for r, c, v in K.mat.items()}


def test_A_on_osp_1_2():
    rs = build_root_system("OSP-odd", 0, 1)
    K = build_K(rs, params_from_text("A", 1, {"lambda": "1", "1": "1", "3": "-q"}))
    assert _entries(K) == {(1, 1): Q + 1, (2, 2): ONE, (1, 3): ONE, (3, 1): -Q}


def test_A_constraint_enforced():
    rs = build_root_system("OSP-odd", 0, 1)
    with pytest.raises(KParamError):
        build_K(rs, params_from_text("A", 1, {"lambda": "1", "1": "1", "3": "q"}))


def test_C_shape_on_osp_2_4():
    rs = build_root_system("OSP-even", 1, 2)
    p = sample_params(rs, "C", 3)
    x = p.offdiag
    e = _entries(build_K(rs, p))
    assert e == {(1, 5): x[1], (2, 6): -x[1], (5, 1): x[5], (6, 2): -x[5], (3, 4): x[3], (4, 3): x[4]}
    assert x[1] * x[5] == x[3] * x[4]


def test_A_GL_block_shape():
    rs = build_root_system("GL", 2, 2)
    p = sample_params(rs, "A-GL", 2)
    e = _entries(build_K(rs, p))
    assert [e[(i, i)] for i in (1, 2)] == [p.lam + p.mu] * 2
    assert [e[(i, i)] for i in (3, 4)] == [p.lam] * 2
    for i in (1, 2):
        assert p.offdiag[i] * p.offdiag[rs.D + 1 - i] == -p.lam * p.mu


def test_scalar_K_passes_untwisted_forms():
    rs = build_root_system("GL", 1, 1)
    R = build_R(rs)
    K = identity(rs.grading).scale(parse("q + 2"))
    assert check_RE(braid_operator(R), K).status == PASS
    assert check_RE_twisted_theta(R, K, identity(rs.grading)).status == PASS


THEOREM_GRID = [(rs, k, m) for rs in family_instances(8) for k, m in theorem_kinds(rs) if rs.D <= 8]


@pytest.mark.parametrize("rs,kind,block", THEOREM_GRID, ids=lambda x: getattr(x, "label", str(x)))
def test_theorem_K_matrices(rs, kind, block):
    R = build_R(rs)
    for s in range(3):
        p = sample_params(rs, kind, block, s)
        K = build_K(rs, p)
        assert is_even(K)
        assert verify_K(rs, p, R=R).status == PASS
    v = violating_params(rs, sample_params(rs, kind, block, 0))
    assert verify_K(rs, v, R=R, enforce=False).status == FAIL
    assert verify_K(rs, v, R=R).status == PRECONDITION_FAIL


def test_scaling_invariance():
    rs = build_root_system("OSP-odd", 0, 2)
    S = braid_operator(build_R(rs))
    K = build_K(rs, sample_params(rs, "A", 2, 1))
    assert check_RE(S, K.scale(parse("q^2 - 3"))).status == check_RE(S, K).status == PASS


def test_A_corner_resolution():
    out = resolve_A_corner(build_root_system("OSP-odd", 0, 1))
    assert out == {"anti-diagonal": PASS, "literal": FAIL}


CONJ = [(k, f, bn, bm, blk) for k, v in CONJECTURE_INSTANCES.items() for f, bn, bm, blk in v]


@pytest.mark.parametrize("kind,fam,bn,bm,block", CONJ)
def test_conjectures_at_smallest_instances(kind, fam, bn, bm, block):
    rs = build_root_system(fam, bn, bm)
    assert verify_K(rs, sample_params(rs, kind, block)).status == CONJECTURE_PASS
