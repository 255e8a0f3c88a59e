"""Natural representation of U_q(g) on C^{N|2m} and an exact check of its defining relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .gradedlin import E, GradedOperator, GradingProfile, diagonal, identity, parity_of, witness_text, zero
from .qring import ONE, OMEGA, Q, ScalarQ, qpow, to_text
from .report import FAIL, PASS, VerificationReport, make_instance
from .rootdata import RootSystem, WeightVector, pair, wadd, wneg


@dataclass
class Representation:
    rs: RootSystem
    grading: GradingProfile
    images: dict[str, GradedOperator]
    notes: list[str] = field(default_factory=list)

    def e(self, i: int) -> GradedOperator:
        return self.images[f"E{i}"]

    def f(self, i: int) -> GradedOperator:
        return self.images[f"F{i}"]

    def k(self, i: int, sign: int = 1) -> GradedOperator:
        return self.images[f"H{'+' if sign > 0 else '-'}{i}"]

    def cartan(self, mu: WeightVector, scale: int = 1) -> GradedOperator:
        """pi(q^{scale * h_mu}) = diag(q^{scale * (mu, wt_j)})."""
        return diagonal(self.grading, [qpow(scale * pair(self.rs, mu, w)) for w in self.rs.weights])

    def F(self, i: int) -> GradedOperator:
        """F_{alpha_i} = q^{h_i} f_i."""
        return self.k(i) @ self.f(i)


def _u(g: GradingProfile, i: int, j: int, c=ONE) -> GradedOperator:
    return E(g, i, j, c)


def _cartan_literal(rs: RootSystem, i: int) -> list[ScalarQ]:
    """Diagonal of pi(q^{h_i}) transcribed from the case table (1-based j)."""
    D, p, n = rs.D, rs.grading.parity, rs.rank
    par = lambda a: p[a - 1]
    pr = lambda a: D + 1 - a
    dl = lambda a, b: 1 if a == b else 0
    out = []
    for j in range(1, D + 1):
        if rs.is_gl:
            # q^{h_i} = q^{h_zeta_i} q^{-h_zeta_{i+1}}
            e = (-1) ** par(i) * dl(j, i) - (-1) ** par(i + 1) * dl(j, i + 1)
        elif i < n:
            e = (-1) ** par(i) * (dl(j, i) - dl(j, pr(i))) + (-1) ** par(i + 1) * (-dl(j, i + 1) + dl(j, pr(i + 1)))
        elif rs.family == "OSP-odd":
            e = (-1) ** par(i) * (dl(j, i) - dl(j, pr(i)))
        elif rs.family == "SPO":
            e = 2 * dl(j, i) - 2 * dl(j, pr(i))
        else:
            e = (-1) ** par(i - 1) * (dl(j, i - 1) - dl(j, pr(i - 1))) + (-1) ** par(i) * (dl(j, i) - dl(j, pr(i)))
        out.append(qpow(e))
    return out


def build_natural_rep(rs: RootSystem) -> Representation:
    g = rs.grading
    D, n, bm = rs.D, rs.rank, rs.bm
    par = lambda a: g[a - 1]
    pr = lambda a: D + 1 - a
    images: dict[str, GradedOperator] = {}
    notes: list[str] = []
    for i in range(1, n + 1):
        if rs.is_gl:
            e = _u(g, i, i + 1)
            f = _u(g, i + 1, i, -ONE if i == bm else ONE)
        elif i < n or rs.family == "OSP-odd":
            c = qpow(-1) if i == bm else ONE
            s = -1 if (par(i) * (par(i + 1) + 1)) % 2 else 1
            e = _u(g, i, i + 1, c) - _u(g, pr(i + 1), pr(i), ScalarQ.from_int(s))
            f = _u(g, i + 1, i, c) - _u(g, pr(i), pr(i + 1), ScalarQ.from_int(s))
        elif rs.family == "SPO":
            e = _u(g, i, i + 1)
            f = _u(g, i + 1, i)
        else:
            c = qpow(-1) if i - 1 == bm else ONE
            s = ScalarQ.from_int(-1 if par(i - 1) else 1)
            e = _u(g, i - 1, i + 1, c) - _u(g, pr(i + 1), pr(i - 1), s)
            f = _u(g, i + 1, i - 1, c) - _u(g, pr(i - 1), pr(i + 1), s)
        if not rs.is_gl and i == bm:
            f = _u(g, i + 1, i, -Q) + _u(g, pr(i), pr(i + 1))
        if rs.family == "OSP-even" and rs.bn == 1 and i == bm + 1:
            f = _u(g, i + 1, i - 1, -Q) + _u(g, pr(i - 1), pr(i + 1))
        images[f"E{i}"] = e
        images[f"F{i}"] = f
        hd = _cartan_literal(rs, i)
        images[f"H+{i}"] = diagonal(g, hd)
        images[f"H-{i}"] = diagonal(g, [x.inverse() for x in hd])
    if rs.is_gl:
        # the printed sum runs to N; all N+2m diagonal positions are needed for invertibility
        for i in range(1, D + 1):
            zd = [qpow((-1) ** par(i) if j == i else 0) for j in range(1, D + 1)]
            images[f"Z+{i}"] = diagonal(g, zd)
            images[f"Z-{i}"] = diagonal(g, [x.inverse() for x in zd])
        notes.append("q^{h_zeta} image summed over all N+2m diagonal positions (printed bound N)")
    return Representation(rs, g, images, notes)


def q_alpha(rs: RootSystem, i: int) -> ScalarQ:
    nrm = rs.norm(i)
    return Q if nrm == 0 else qpow(Fraction(nrm, 2))


def graded_commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    pa, pb = parity_of(a), parity_of(b)
    ab, ba = a @ b, b @ a
    if pa and pb:
        return ab + ba
    return ab - ba


def serre_degree(rs: RootSystem, i: int, j: int) -> int:
    aii = rs.norm(i)
    aij = pair(rs, rs.root(i), rs.root(j))
    if aii == 0:
        return 1 if aij == 0 else 2
    v = 1 - 2 * aij / aii
    if v != int(v):
        raise ValueError(f"non-integral Serre degree for ({i},{j})")
    return int(v)


def _fail(rs, rel, idx, lhs, rhs, notes):
    diff = lhs.mat.first_difference(rhs.mat)
    w = {"relation": rel, "indices": list(idx)}
    if diff is not None:
        w.update(witness_text(lhs, diff))
    return VerificationReport("relations", make_instance(rs.family, rs.bn, rs.bm), FAIL, w, notes)


def check_defining_relations(rep: Representation, *, collect: bool = False) -> VerificationReport:
    """Relations (i), (ii), (iv), (v) as exact operator identities.

    With collect=True every violation is listed in the notes instead of stopping at the first.
    """
    rs, g = rep.rs, rep.grading
    n = rs.rank
    notes = list(rep.notes)
    failures: list[VerificationReport] = []
    one = identity(g)

    def record(rep_fail):
        failures.append(rep_fail)
        return not collect

    cartan_tags = [t for t in rep.images if t.startswith(("H+", "Z+"))]
    # (i)
    for t in cartan_tags:
        plus, minus = rep.images[t], rep.images[t.replace("+", "-")]
        if plus @ minus != one or minus @ plus != one:
            if record(_fail(rs, "i", (t,), plus @ minus, one, notes)):
                return failures[0]
    for a in cartan_tags:
        for b in cartan_tags:
            x, y = rep.images[a], rep.images[b]
            if x @ y != y @ x:
                if record(_fail(rs, "i", (a, b), x @ y, y @ x, notes)):
                    return failures[0]
    # (ii)
    for i in range(1, n + 1):
        k, kinv = rep.k(i), rep.k(i, -1)
        for j in range(1, n + 1):
            a = pair(rs, rs.root(i), rs.root(j))
            for sgn, x in ((1, rep.e(j)), (-1, rep.f(j))):
                lhs, rhs = k @ x @ kinv, x.scale(qpow(sgn * a))
                if lhs != rhs:
                    if record(_fail(rs, "ii", (i, sgn * j), lhs, rhs, notes)):
                        return failures[0]
    if rs.is_gl:
        for i in range(1, rs.D + 1):
            k, kinv = rep.images[f"Z+{i}"], rep.images[f"Z-{i}"]
            for j in range(1, n + 1):
                a = pair(rs, rs.weights[i - 1], rs.root(j))
                for sgn, x in ((1, rep.e(j)), (-1, rep.f(j))):
                    lhs, rhs = k @ x @ kinv, x.scale(qpow(sgn * a))
                    if lhs != rhs:
                        if record(_fail(rs, "ii", (f"zeta{i}", sgn * j), lhs, rhs, notes)):
                            return failures[0]
    # (iv)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lhs = graded_commutator(rep.e(i), rep.f(j))
            if i != j:
                rhs = zero(g)
            else:
                qa = q_alpha(rs, i)
                rhs = (rep.k(i) - rep.k(i, -1)).scale((qa - qa.inverse()).inverse())
            if lhs != rhs:
                if i == j:
                    alt = (rep.k(i) - rep.k(i, -1)).scale(OMEGA.inverse())
                    if lhs == alt:
                        qa = q_alpha(rs, i)
                        notes.append(
                            f"(iv) at i={i}: (alpha,alpha)={rs.norm(i)}; images satisfy [e,f] = (q^h - q^-h)/(q - q^-1), "
                            f"which differs from [h]_(q_alpha) by the factor {to_text((qa - qa.inverse()) / OMEGA)}"
                        )
                if record(_fail(rs, "iv", (i, j), lhs, rhs, notes)):
                    return failures[0]
    # (v)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            v = serre_degree(rs, i, j)
            for sgn in (1, -1):
                xi = rep.e(i) if sgn > 0 else rep.f(i)
                pi = rs.parities[i - 1]
                ai = rs.root(i) if sgn > 0 else wneg(rs.root(i))
                for qexp in (1, -1):
                    x = rep.e(j) if sgn > 0 else rep.f(j)
                    wt = rs.root(j) if sgn > 0 else wneg(rs.root(j))
                    px = rs.parities[j - 1]
                    for _ in range(v):
                        c = qpow(qexp * pair(rs, ai, wt))
                        term = (x @ xi).scale(c)
                        x = xi @ x + term if (pi * px) % 2 else xi @ x - term
                        wt = wadd(wt, ai)
                        px = (px + pi) % 2
                    if not x.is_zero():
                        if record(_fail(rs, "v", (sgn * i, sgn * j, v, qexp), x, zero(g), notes)):
                            return failures[0]
    if failures:
        first = failures[0]
        first.notes = notes + [
            f"violation: relation {f.witness['relation']} at {f.witness['indices']}" for f in failures
        ]
        return first
    return VerificationReport("relations", make_instance(rs.family, rs.bn, rs.bm), PASS, None, notes)
