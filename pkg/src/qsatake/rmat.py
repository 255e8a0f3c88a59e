"""R-matrices in the natural representation; exact Yang-Baxter and braid checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gradedlin import (
    GradedOperator,
    SparseMatrix,
    abstract_expansion,
    embed_expansion,
    graded_permutation,
)
from .qring import OMEGA, ScalarQ, eval_rational, qpow, to_text
from .report import FAIL, PASS, VerificationReport, make_instance
from .rootdata import RootSystem

SPO_RHO_NOTE = (
    "spo rho row: the entries printed as 1-n (end of the middle block, start of the last block) "
    "are read as -n, which restores rho_{i'} = -rho_i"
)


class RMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class RhoKappa:
    rho: tuple[Fraction, ...]
    kappa: tuple[int, ...]


def rho_kappa(rs: RootSystem) -> RhoKappa:
    if rs.is_gl:
        raise RMatrixError("rho/kappa tables exist only for orthosymplectic families")
    m, n = rs.bm, rs.bn
    if rs.family == "OSP-odd":
        k = Fraction(2 * n + 1, 2)
        first = [k - m + i for i in range(m)]
        middle = [k - j for j in range(1, n + 1)] + [Fraction(0)] + [k - j + 1 for j in range(n + 2, 2 * n + 2)]
        last = [j - k for j in range(1, m + 1)]
        kappa = (-1,) * m + (1,) * (2 * n + 1) + (1,) * m
    elif rs.family == "OSP-even":
        first = [Fraction(n - m + i) for i in range(m)]
        middle = [Fraction(n - j) for j in range(1, n + 1)] + [Fraction(n - j + 1) for j in range(n + 1, 2 * n + 1)]
        last = [Fraction(j - n) for j in range(1, m + 1)]
        kappa = (-1,) * m + (1,) * (2 * n) + (1,) * m
    else:
        first = [Fraction(n - m + 1 + i) for i in range(m)]
        middle = [Fraction(n - j + 1) for j in range(1, n + 1)] + [Fraction(n - j) for j in range(n + 1, 2 * n + 1)]
        last = [Fraction(j - n - 1) for j in range(1, m + 1)]
        kappa = (-1,) * m + (1,) * n + (-1,) * n + (-1,) * m
    return RhoKappa(tuple(first + middle + last), kappa)


def build_R(rs: RootSystem) -> GradedOperator:
    g = rs.grading
    D, p = g.dim, g.parity
    exp: dict[tuple[int, int, int, int], ScalarQ] = {}
    if rs.is_gl:
        for i in range(D):
            for j in range(D):
                exp[(i, i, j, j)] = qpow((-1) ** p[i] if i == j else 0)
        for i in range(D):
            for j in range(i):
                exp[(i, j, j, i)] = OMEGA if p[j] == 0 else -OMEGA
        return embed_expansion(g, exp)

    rk = rho_kappa(rs)
    pr = g.prime
    for i in range(D):
        for j in range(D):
            e = (1 if i == j else 0) - (1 if i == pr(j) else 0)
            exp[(i, i, j, j)] = qpow((-1) ** p[j] * e)
    for i in range(D):
        for j in range(i):
            key = (i, j, j, i)
            exp[key] = exp.get(key, 0) + (OMEGA if p[j] == 0 else -OMEGA)
            s = (p[i] + p[j] + p[i] * p[j]) % 2
            c = OMEGA * (rk.kappa[i] * rk.kappa[j] * (-1 if s == 0 else 1)) * qpow(rk.rho[i] - rk.rho[j])
            key = (i, j, pr(i), pr(j))
            exp[key] = exp.get(key, 0) + c
    return embed_expansion(g, exp)


def three_leg(x: GradedOperator, legs: tuple[int, int]) -> SparseMatrix:
    """Place an order-2 operator on legs (a, b) of V^{(x)3}, identity on the third."""
    D, p = x.D, x.grading.parity
    a, b = legs
    other = 3 - a - b
    entries = []
    for (i, j, k, l), c in abstract_expansion(x).items():
        for t in range(D):
            ops = [None, None, None]
            ops[a], ops[b], ops[other] = (i, j), (k, l), (t, t)
            (r0, c0), (r1, c1), (r2, c2) = ops
            s = ((p[r1] + p[c1]) * p[c0] + (p[r2] + p[c2]) * (p[c0] + p[c1])) % 2
            entries.append(((r0 * D + r1) * D + r2, (c0 * D + c1) * D + c2, -c if s else c))
    return SparseMatrix.from_entries(D ** 3, entries)


def _witness3(D: int, diff) -> dict:
    r, c, a, b = diff

    def split(x):
        return [x // (D * D) + 1, (x // D) % D + 1, x % D + 1]

    return {"row": split(r), "col": split(c), "lhs": to_text(a), "rhs": to_text(b)}


def _instance(rs: RootSystem | None) -> dict:
    if rs is None:
        return make_instance()
    return make_instance(rs.family, rs.bn, rs.bm)


def _notes(rs: RootSystem | None) -> list[str]:
    return [SPO_RHO_NOTE] if rs is not None and rs.family == "SPO" else []


def check_YBE(R: GradedOperator, rs: RootSystem | None = None) -> VerificationReport:
    r12, r13, r23 = three_leg(R, (0, 1)), three_leg(R, (0, 2)), three_leg(R, (1, 2))
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    diff = lhs.first_difference(rhs)
    if diff is None:
        return VerificationReport("ybe", _instance(rs), PASS, None, _notes(rs))
    return VerificationReport("ybe", _instance(rs), FAIL, _witness3(R.D, diff), _notes(rs))


def braid_operator(R: GradedOperator) -> GradedOperator:
    """S = P R with its abstract expansion."""
    S = graded_permutation(R.grading) @ R
    return GradedOperator(S.grading, 2, S.mat, abstract_expansion(S))


def check_braid(R: GradedOperator, rs: RootSystem | None = None) -> VerificationReport:
    S = braid_operator(R)
    s12, s23 = three_leg(S, (0, 1)), three_leg(S, (1, 2))
    lhs = s12 @ s23 @ s12
    rhs = s23 @ s12 @ s23
    diff = lhs.first_difference(rhs)
    if diff is None:
        return VerificationReport("braid", _instance(rs), PASS, None, _notes(rs))
    return VerificationReport("braid", _instance(rs), FAIL, _witness3(R.D, diff), _notes(rs))


def classical_limit_ok(R: GradedOperator) -> bool:
    """At q = 1 the diagonal terms tend to 1 and every omega-term vanishes."""
    for (i, j, k, l), c in abstract_expansion(R).items():
        v = eval_rational(c, 1)
        if v != (1 if (i == j and k == l) else 0):
            return False
    return True
