"""Coideal generators in the natural representation and the mixture-parameter solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .gradedlin import GradedOperator, identity, parity_of, witness_text
from .kmat import KParams, build_K
from .natrep import Representation, build_natural_rep
from .qring import ONE, Q, ScalarQ, ZERO, eval_rational, qpow, to_text
from .report import FAIL, NON_UNIQUE, PASS, VerificationReport, make_instance
from .rootdata import RootSystem, WeightVector, pair, wadd, wsub
from .satake import DecoratedDiagram, eligible_for_u, make_diagram, tilde_root

NO_SOLUTION = "NO-SOLUTION"
UNIQUE = "UNIQUE"

B_FLIP_NOTE = "B, osp(2|2m) with m = n-1: the printed z_{n-1} is read as z_{m-1} = z_{n-2} (z_{n-1} is not a parameter of B)"
GL_SIGN_NOTE = "A-GL simple-root items: the printed sign (-1)^{delta_i^{m'}} is compared as printed; solved values flip at i = N+m instead"


class MixtureError(ValueError):
    pass


# q-commutators


@dataclass(frozen=True)
class RootVector:
    """An operator together with its root and parity, so q-commutators can nest."""

    op: GradedOperator
    root: WeightVector
    parity: int


def q_commutator(rs: RootSystem, x: RootVector, y: RootVector, i: int = 1) -> RootVector:
    """[x, y]_{q^{i}} = xy - (-1)^{|x||y|} q^{-sign(i) ceil(|i|/2) (wx, wy)} yx, i in {0, +-1, +-2}."""
    if i not in (0, 1, -1, 2, -2):
        raise MixtureError(f"q-commutator mode must be 0, +-1 or +-2, got {i}")
    for v in (x, y):
        if parity_of(v.op) not in (None, v.parity):
            raise MixtureError("q-commutator needs parity-homogeneous inputs")
    sgn = (i > 0) - (i < 0)
    e = -sgn * ceil(abs(i) / 2) * pair(rs, x.root, y.root)
    c = qpow(e)
    if x.parity and y.parity:
        c = -c
    op = x.op @ y.op - (y.op @ x.op).scale(c)
    return RootVector(op, wadd(x.root, y.root), (x.parity + y.parity) % 2)


def simple_F(rep: Representation, b: int) -> RootVector:
    """F_b = q^{h_b} f_b."""
    rs = rep.rs
    return RootVector(rep.F(b), rs.root(b), rs.parities[b - 1])


MODES = {"q": 1, "qbar": -1, "q2": 2, "": 0}


def nested_F(rep: Representation, start: int, seq) -> RootVector:
    """[...[[F_start, F_b1]_{m1}, F_b2]_{m2} ...] for seq = [(b, mode), ...]."""
    x = simple_F(rep, start)
    for b, mode in seq:
        x = q_commutator(rep.rs, x, simple_F(rep, b), MODES[mode])
    return x


# the catalogue of composite root vectors and printed mixture values


def _up(a: int, b: int, mode: str = "q"):
    return [(x, mode) for x in range(a, b + 1)]


def _dn(a: int, b: int, mode: str = "q"):
    return [(x, mode) for x in range(a, b - 1, -1)]


@dataclass(frozen=True)
class MixtureCase:
    alpha: int
    start: int
    seq: tuple
    eligible: bool
    note: str = ""


def k_diagram(rs: RootSystem, kind: str, m: int) -> DecoratedDiagram:
    """The decorated diagram attached to a theorem-backed K-matrix of the given kind and block."""
    n = rs.rank
    ident = tuple(range(1, n + 1))
    flip_tail = ident[: n - 2] + (n, n - 1)
    if kind == "A-GL":
        whites = set(range(1, m + 1)) | set(range(n - m + 1, n + 1))
        return make_diagram(rs, set(ident) - whites, tuple(range(n, 0, -1)))
    if kind == "A":
        if rs.family == "OSP-even" and m == n - 1:
            return make_diagram(rs, [], flip_tail)
        return make_diagram(rs, range(m + 1, n + 1))
    if kind == "B":
        black = set(range(1, m, 2)) | set(range(m + 1, n + 1))
        if rs.family == "OSP-even" and m == n - 1:
            return make_diagram(rs, range(1, m, 2), flip_tail)
        return make_diagram(rs, black)
    if kind == "C":
        return make_diagram(rs, range(1, n - 1, 2))
    raise MixtureError(f"no catalogued diagram for kind {kind!r}")


def catalogue(rs: RootSystem, kind: str, m: int) -> list[MixtureCase]:
    """Composite root vector recipes for every white node of k_diagram(rs, kind, m)."""
    n, fam = rs.rank, rs.family
    cases: list[MixtureCase] = []
    if kind == "A-GL":
        D = rs.D
        for i in list(range(1, m)) + list(range(n - m + 2, n + 1)):
            cases.append(MixtureCase(i, n + 1 - i, (), False))
        if 2 * m < D:
            cases.append(MixtureCase(m, m + 1, tuple(_up(m + 2, n - m + 1)), False))
            cases.append(MixtureCase(n - m + 1, m, tuple(_up(m + 1, n - m, "qbar")), False))
        else:
            cases.append(MixtureCase(m, m, (), True))
        return sorted(cases, key=lambda c: c.alpha)
    if kind == "A":
        for i in range(1, m):
            cases.append(MixtureCase(i, i, (), False))
        if fam == "OSP-even" and m == n - 1:
            cases.append(MixtureCase(n - 1, n, (), False))
            cases.append(MixtureCase(n, n - 1, (), False))
            return cases
        if fam == "OSP-odd":
            if m < n - 1:
                seq = _up(m + 1, n) + [(n, "")] + _dn(n - 1, m + 1)
            elif m == n - 1:
                seq = [(n, "q"), (n, "")]
            else:
                seq = []
        elif fam == "OSP-even":
            seq = _up(m + 1, n) + _dn(n - 2, m + 1)
        else:
            seq = _up(m + 1, n - 1) + [(n, "q2")] + _dn(n - 1, m + 1)
        cases.append(MixtureCase(m, m, tuple(seq), False))
        return cases
    if kind == "B":
        for i in range(1, m // 2):
            cases.append(MixtureCase(2 * i, 2 * i, ((2 * i + 1, "q"), (2 * i - 1, "q")), False))
        if fam == "OSP-even" and m == n - 1:
            cases.append(MixtureCase(n - 1, n, ((n - 2, "q"),), False, B_FLIP_NOTE))
            cases.append(MixtureCase(n, n - 1, ((n - 2, "q"),), False, B_FLIP_NOTE))
            return cases
        if fam == "OSP-odd" and m == n:
            cases.append(MixtureCase(m, n - 1, ((n, "qbar"),), False))
            return cases
        if fam == "OSP-odd":
            seq = _up(m + 1, n) + [(n, "")] + _dn(n - 1, m + 1) + [(m - 1, "q")]
        elif fam == "OSP-even":
            seq = _up(m + 1, n) + _dn(n - 2, m + 1) + [(m - 1, "q")]
        elif m < n - 1:
            seq = _up(m + 1, n - 1) + [(n, "q2")] + _dn(n - 1, m + 1) + [(m - 1, "q")]
        else:
            seq = [(n, "q2"), (n - 2, "q")]
        cases.append(MixtureCase(m, m, tuple(seq), False))
        return cases
    if kind == "C":
        for i in range(1, (n - 3) // 2 + 1):
            cases.append(MixtureCase(2 * i, 2 * i, ((2 * i + 1, "q"), (2 * i - 1, "q")), False))
        cases.append(MixtureCase(n - 1, n - 1, ((n - 2, "q"),), False))
        cases.append(MixtureCase(n, n, ((n - 2, "q"),), False))
        return cases
    raise MixtureError(f"uncatalogued kind {kind!r}")


def _case(rs: RootSystem, kind: str, m: int, alpha: int) -> MixtureCase:
    for c in catalogue(rs, kind, m):
        if c.alpha == alpha:
            return c
    raise MixtureError(f"alpha_{alpha} is not a white node of the {kind} diagram with block {m}")


def infer_kind(d: DecoratedDiagram) -> tuple[str, int]:
    """Recover (kind, block) of a theorem-backed K-matrix from its decorated diagram."""
    rs = d.rs
    kinds = ["A-GL"] if rs.is_gl else ["A", "B", "C"]
    for kind in kinds:
        for m in range(1, rs.D // 2 + 1):
            try:
                if k_diagram(rs, kind, m) == make_diagram(rs, d.piL, d.tau):
                    if kind in ("A", "B") and m > rs.bm:
                        continue
                    if kind == "B" and m % 2:
                        continue
                    if kind == "C" and not (rs.family == "OSP-even" and rs.bn == 1 and rs.bm % 2 == 0):
                        continue
                    return kind, m
            except MixtureError:
                continue
    raise MixtureError(f"diagram {d.colors()} with tau {d.tau} has no catalogued composite root vectors")


def composite_F(d: DecoratedDiagram, rep: Representation, alpha: int, kind: str | None = None, block: int | None = None) -> RootVector:
    """F_{alpha~} as the catalogued nested q-commutator; its root is checked against tilde_root."""
    if kind is None:
        kind, block = infer_kind(d)
    c = _case(d.rs, kind, block, alpha)
    F = nested_F(rep, c.start, c.seq)
    expected = tilde_root(d, alpha)
    if F.root != expected:
        raise MixtureError(
            f"composite root vector for alpha_{alpha} has weight {d.rs.weight_text(F.root)}, "
            f"but alpha~ = {d.rs.weight_text(expected)}"
        )
    return F


def printed_mixture(rs: RootSystem, p: KParams, alpha: int, reading: str = "printed") -> tuple[ScalarQ, ScalarQ]:
    """Printed closed forms (c, c') for the theorem-backed K-matrices.

    reading="corrected" moves the A-GL sign flip from i = m' to i = m' - 1 = N + m.
    """
    kind, m, lam = p.kind, p.block, p.lam
    y = p.offdiag
    n, bm, N, D = rs.rank, rs.bm, rs.N, rs.D
    d = 1 if m == bm else 0
    sign = lambda e: -ONE if e % 2 else ONE
    if kind == "A-GL":
        mu = p.mu
        if alpha < m or alpha > D - m:
            flip = D + 1 - bm if reading == "printed" else D - bm
            return sign(1 if alpha == flip else 0) * y[alpha + 1] / y[alpha], ZERO
        if 2 * m == D:
            return -lam * mu * Q / (y[m] * y[m]), (mu + lam) * Q / ((Q * Q - 1) * y[m])
        if alpha == m:
            return sign(N) * mu / y[m], ZERO
        if bm <= m:
            return sign(N + 1 + (1 if m == bm else 0)) * qpow(2 * D - 4 * m - 3) * lam / y[m], ZERO
        return sign(N + 1) * qpow(2 * (N - 2 * bm) + 4 * m + 3) * lam / y[m], ZERO
    if kind == "A":
        if alpha < m:
            return -y[alpha + 1] / (Q * y[alpha]), ZERO
        if rs.family == "OSP-even" and m == n - 1:
            return -lam / (y[m] * Q * Q), ZERO
        if rs.family == "OSP-odd":
            if m == n:
                return -lam / (y[m] * Q), ZERO
            return sign(n - m - d) * qpow(-2 * d) * lam / y[m], ZERO
        if rs.family == "OSP-even":
            return sign(n - m + 1 + d) * qpow(-2 * d) * lam / y[m], ZERO
        return sign(n - m + d) * qpow(-2 * d) * lam / y[m], ZERO
    if kind == "B":
        if alpha < m:
            return -y[alpha + 1] / (Q * y[alpha - 1]), ZERO
        if rs.family == "OSP-even" and m == n - 1:
            return -lam / (qpow(3) * y[m - 1]), ZERO
        if rs.family == "OSP-odd" and m == n:
            return lam / (y[n - 1] * qpow(3)), ZERO
        if rs.family == "OSP-even":
            return sign(n + 1 + d) * qpow(-2 * d - 1) * lam / y[m - 1], ZERO
        return sign(n + d) * qpow(-2 * d - 1) * lam / y[m - 1], ZERO
    if kind == "C":
        if alpha < n - 1:
            return -y[alpha + 1] / (Q * y[alpha - 1]), ZERO
        if alpha == n:
            return -y[n + 2] / (y[n] * Q), ZERO
        return -y[n] / (y[n - 2] * Q), ZERO
    raise MixtureError(f"no printed mixture values for kind {kind!r}")


# coideal generators


@dataclass
class CoidealGenerators:
    diagram: DecoratedDiagram
    rep: Representation
    images: dict[str, GradedOperator] = field(default_factory=dict)
    mixtures: dict[int, tuple[ScalarQ, ScalarQ]] = field(default_factory=dict)


def cartan_shift(rep: Representation, d: DecoratedDiagram, alpha: int, sign: int = 1) -> GradedOperator:
    """pi(q^{sign (h_{alpha~} - h_alpha)})."""
    rs = rep.rs
    return rep.cartan(wsub(tilde_root(d, alpha), rs.root(alpha)), sign)


def u_operator(rep: Representation, alpha: int) -> GradedOperator:
    """pi(q^{u_alpha}) - 1 with u_alpha = h_alpha."""
    return rep.cartan(rep.rs.root(alpha)) - identity(rep.grading)


def mixed_generator(rep, d, alpha, F: RootVector, c: ScalarQ, cg: ScalarQ = ZERO) -> GradedOperator:
    X = cartan_shift(rep, d, alpha) @ rep.e(alpha) + F.op.scale(c)
    if not cg.is_zero():
        X = X + u_operator(rep, alpha).scale(cg)
    return X


def build_generators(d: DecoratedDiagram, rep: Representation, mixtures: dict[int, tuple[ScalarQ, ScalarQ]], kind=None, block=None) -> CoidealGenerators:
    g = CoidealGenerators(d, rep, mixtures=dict(mixtures))
    for a in sorted(d.piL):
        g.images[f"e{a}"] = rep.e(a)
        g.images[f"f{a}"] = rep.f(a)
        g.images[f"q^h{a}"] = rep.k(a)
        g.images[f"q^-h{a}"] = rep.k(a, -1)
    for a in d.white:
        g.images[f"q^(h~-h){a}"] = cartan_shift(rep, d, a)
        g.images[f"q^-(h~-h){a}"] = cartan_shift(rep, d, a, -1)
        if a in mixtures:
            c, cg = mixtures[a]
            g.images[f"X{a}"] = mixed_generator(rep, d, a, composite_F(d, rep, a, kind, block), c, cg)
    return g


def _comm(K: GradedOperator, X: GradedOperator) -> GradedOperator:
    return K @ X - X @ K


def check_commutant(gens: CoidealGenerators, K: GradedOperator, *, only: str | None = None) -> VerificationReport:
    d = gens.diagram
    inst = d.instance()
    for name, X in gens.images.items():
        if only is not None and not name.startswith(only):
            continue
        lhs, rhs = K @ X, X @ K
        diff = lhs.mat.first_difference(rhs.mat)
        if diff is not None:
            w = {"generator": name}
            w.update(witness_text(lhs, diff))
            return VerificationReport("commutant", inst, FAIL, w, [])
    return VerificationReport("commutant", inst, PASS, None, [])


# exact linear solve


def _solve_linear(columns: list[GradedOperator], rhs: GradedOperator) -> tuple[str, list[ScalarQ] | None]:
    """Solve sum_k x_k columns[k] = rhs entrywise over ScalarQ."""
    k = len(columns)
    keys = set()
    for op in columns + [rhs]:
        keys |= {(r, c) for r, c, _ in op.mat.items()}
    tables = [{(r, c): v for r, c, v in op.mat.items()} for op in columns + [rhs]]
    rows = []
    for key in sorted(keys):
        row = [t.get(key, ZERO) for t in tables]
        if any(not x.is_zero() for x in row):
            rows.append(row)
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if not row[k].is_zero():
            return NO_SOLUTION, None
    if len(pivots) < k:
        return NON_UNIQUE, None
    sol = [ZERO] * k
    for i, col in enumerate(pivots):
        sol[col] = rows[i][k]
    return UNIQUE, sol


@dataclass(frozen=True)
class MixtureSolution:
    alpha: int
    status: str
    c: ScalarQ | None
    c_grave: ScalarQ | None
    eligible: bool

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "status": self.status,
            "c": to_text(self.c) if self.c is not None else None,
            "c_grave": to_text(self.c_grave) if self.c_grave is not None else None,
        }


def check_preconditions(d: DecoratedDiagram, rep: Representation, K: GradedOperator) -> None:
    gens = build_generators(d, rep, {})
    rep_ = check_commutant(gens, K)
    if rep_.status != PASS:
        raise MixtureError(f"K does not commute with {rep_.witness['generator']}; no mixture can be solved")


def solve_mixture(d: DecoratedDiagram, rep: Representation, K: GradedOperator, kind=None, block=None) -> list[MixtureSolution]:
    """Solve [K, q^{h~-h} e_a + c F_a~ + c'(q^{u_a} - 1)] = 0 for every white node a."""
    check_preconditions(d, rep, K)
    out = []
    for a in d.white:
        F = composite_F(d, rep, a, kind, block)
        A = cartan_shift(rep, d, a) @ rep.e(a)
        eligible = eligible_for_u(d, a)
        cols = [_comm(K, F.op)]
        if eligible:
            cols.append(_comm(K, u_operator(rep, a)))
        status, sol = _solve_linear(cols, -_comm(K, A))
        if sol is None:
            out.append(MixtureSolution(a, status, None, None, eligible))
        else:
            out.append(MixtureSolution(a, status, sol[0], sol[1] if eligible else ZERO, eligible))
    return out


@dataclass(frozen=True)
class MixtureComparison:
    alpha: int
    solved: MixtureSolution
    printed: tuple[ScalarQ, ScalarQ]
    matches: bool
    note: str

    def to_json(self) -> dict:
        d = self.solved.to_json()
        d["printed_c"] = to_text(self.printed[0])
        d["printed_c_grave"] = to_text(self.printed[1])
        d["matches_paper"] = self.matches
        if self.note:
            d["note"] = self.note
        return d


def mixture_instance(rs: RootSystem, p: KParams) -> dict:
    return make_instance(rs.family, rs.bn, rs.bm, p.kind, p.block, p.text_dict())


def solve_and_compare(rs: RootSystem, p: KParams, reading: str = "printed") -> list[MixtureComparison]:
    """Solve the mixtures for the K-matrix of p and compare with the printed closed forms."""
    rep = build_natural_rep(rs)
    K = build_K(rs, p)
    d = k_diagram(rs, p.kind, p.block)
    out = []
    for s in solve_mixture(d, rep, K, p.kind, p.block):
        case = _case(rs, p.kind, p.block, s.alpha)
        printed = printed_mixture(rs, p, s.alpha, reading)
        ok = s.status == UNIQUE and s.c == printed[0] and s.c_grave == printed[1]
        note = case.note
        if p.kind == "A-GL" and (s.alpha < p.block or s.alpha > rs.D - p.block):
            note = GL_SIGN_NOTE
        out.append(MixtureComparison(s.alpha, s, printed, ok, note))
    return out


def verify_mixtures(rs: RootSystem, p: KParams, reading: str = "printed") -> VerificationReport:
    """Commutant check with solved mixtures plus agreement with the printed values."""
    comps = solve_and_compare(rs, p, reading)
    inst = mixture_instance(rs, p)
    notes = sorted({c.note for c in comps if c.note})
    for c in comps:
        if c.solved.status != UNIQUE:
            return VerificationReport("mixture", inst, FAIL, {"alpha": c.alpha, "status": c.solved.status}, notes)
    rep = build_natural_rep(rs)
    d = k_diagram(rs, p.kind, p.block)
    gens = build_generators(d, rep, {c.alpha: (c.solved.c, c.solved.c_grave) for c in comps}, p.kind, p.block)
    com = check_commutant(gens, build_K(rs, p))
    if com.status != PASS:
        return VerificationReport("mixture", inst, FAIL, com.witness, notes)
    for c in comps:
        if not c.matches:
            return VerificationReport("mixture", inst, FAIL, c.to_json(), notes)
    return VerificationReport("mixture", inst, PASS, None, notes)


def classical_mixtures(comps: list[MixtureComparison]) -> dict[int, tuple[Fraction, Fraction]]:
    """q -> 1 limits of solved mixtures: c(1), and lim (q - 1) c' since (q^h - 1)/(q - 1) -> h.

    The classical f_{a~} is normalized independently of F_{a~}, so only genericity carries over.
    """
    out = {}
    for c in comps:
        if c.solved.status != UNIQUE:
            raise MixtureError(f"alpha_{c.alpha}: mixture is {c.solved.status}")
        out[c.alpha] = (eval_rational(c.solved.c, 1), eval_rational(c.solved.c_grave * (Q - 1), 1))
    return out
