"""Decorated Dynkin diagrams: admissibility, Weyl operators, involutions, selection rules, templates, sphericity."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .qring import eval_rational
from .report import FAIL, PASS, VerificationReport, make_instance
from .rootdata import RootSystem, WeightVector, pair, simple_coordinates, wneg, wsub


class SatakeError(ValueError):
    pass


# weight involutions


@dataclass(frozen=True)
class WeightInvolution:
    """Integer matrix acting on weight coordinates (columns are images of basis vectors)."""

    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, k: int) -> "WeightInvolution":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, mu: WeightVector) -> WeightVector:
        return tuple(sum(self.matrix[i][j] * mu[j] for j in range(self.dim)) for i in range(self.dim))

    def __matmul__(self, other: "WeightInvolution") -> "WeightInvolution":
        k = self.dim
        return WeightInvolution(
            tuple(tuple(sum(self.matrix[i][t] * other.matrix[t][j] for t in range(k)) for j in range(k)) for i in range(k))
        )

    def neg(self) -> "WeightInvolution":
        return WeightInvolution(tuple(tuple(-x for x in row) for row in self.matrix))

    def is_involutive(self) -> bool:
        return self @ self == WeightInvolution.identity(self.dim)

    def is_orthogonal(self, form: tuple[int, ...]) -> bool:
        k = self.dim
        for a in range(k):
            for b in range(k):
                s = sum(form[t] * self.matrix[t][a] * self.matrix[t][b] for t in range(k))
                if s != (form[a] if a == b else 0):
                    return False
        return True

    def is_even(self, labels: tuple[str, ...]) -> bool:
        k = self.dim
        return all(self.matrix[i][j] == 0 or labels[i][0] == labels[j][0] for i in range(k) for j in range(k))


def _unit(rs: RootSystem, b: int) -> WeightVector:
    return tuple(1 if t == b else 0 for t in range(rs.basis_dim))


def _signed_basis(rs: RootSystem, w: WeightVector) -> tuple[int, int]:
    nz = [(k, c) for k, c in enumerate(w) if c]
    if len(nz) != 1 or abs(nz[0][1]) != 1:
        raise SatakeError(f"{w} is not a signed basis vector")
    return nz[0]


# components and admissibility


def adjacent(rs: RootSystem, i: int, j: int) -> bool:
    return i != j and pair(rs, rs.root(i), rs.root(j)) != 0


def components(rs: RootSystem, S) -> list[tuple[int, ...]]:
    S = sorted(S)
    seen: set[int] = set()
    out = []
    for s in S:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in S:
                if y not in seen and adjacent(rs, x, y):
                    seen.add(y)
                    stack.append(y)
        out.append(tuple(sorted(comp)))
    return out


def component_support(rs: RootSystem, comp: tuple[int, ...]) -> tuple[str, list[int]]:
    """('A', ordered weight indices of the gl-hat support) or ('tail', centered indices); 1-based."""
    n, D = rs.rank, rs.D
    if rs.is_gl or n not in comp:
        return "A", list(range(comp[0], comp[-1] + 2))
    if rs.family == "OSP-even" and n - 1 not in comp:
        # chain ..., alpha_{n-2}, alpha_n with alpha_n = wt_{n-1} - wt_{n'}
        start = comp[0] if comp[0] < n else n - 1
        return "A", list(range(start, n)) + [D + 1 - n]
    a = comp[0]
    return "tail", list(range(a, D + 2 - a))


def admissibility_reason(rs: RootSystem, S) -> str | None:
    """None when admissible, otherwise the offending component."""
    p = rs.grading.parity
    for comp in components(rs, S):
        kind, supp = component_support(rs, comp)
        par = [p[j - 1] for j in supp]
        if par != par[::-1]:
            return f"component {list(comp)} induces the non-symmetric grading {par}"
    return None


def is_admissible(rs: RootSystem, S) -> bool:
    return admissibility_reason(rs, S) is None


def enumerate_admissible(rs: RootSystem) -> list[frozenset[int]]:
    out = []
    idx = range(1, rs.rank + 1)
    for r in range(rs.rank + 1):
        for S in itertools.combinations(idx, r):
            if is_admissible(rs, S):
                out.append(frozenset(S))
    return out


def _perm_operator(rs: RootSystem, mapping: dict[int, int]) -> WeightInvolution:
    """Linear map sending wt_j to wt_{mapping[j]} on the basis vectors it touches, identity elsewhere."""
    k = rs.basis_dim
    cols = {b: _unit(rs, b) for b in range(k)}
    for j, t in mapping.items():
        src = rs.weights[j - 1]
        if not any(src):
            continue
        b, s = _signed_basis(rs, src)
        cols[b] = tuple(s * x for x in rs.weights[t - 1])
    return WeightInvolution(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))


def weyl_operator(rs: RootSystem, S) -> WeightInvolution:
    reason = admissibility_reason(rs, S)
    if reason is not None:
        raise SatakeError(f"inadmissible Pi_l: {reason}")
    w = WeightInvolution.identity(rs.basis_dim)
    D = rs.D
    for comp in components(rs, S):
        kind, supp = component_support(rs, comp)
        if kind == "A":
            mapping = {supp[k]: supp[-1 - k] for k in range(len(supp))}
        else:
            mapping = {j: D + 1 - j for j in supp if j <= D + 1 - j}
        w = _perm_operator(rs, mapping) @ w
    return w


# diagram automorphisms


def gram(rs: RootSystem) -> list[list[int]]:
    return [[pair(rs, a, b) for b in rs.simple_roots] for a in rs.simple_roots]


@lru_cache(maxsize=None)
def diagram_automorphisms(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    """Involutive permutations of simple roots preserving the Gram matrix and parities (1-based images)."""
    n, G, par = rs.rank, gram(rs), rs.parities
    out = []
    for perm in itertools.permutations(range(n)):
        if any(perm[perm[i]] != i for i in range(n)):
            continue
        if any(par[perm[i]] != par[i] for i in range(n)):
            continue
        if all(G[perm[i]][perm[j]] == G[i][j] for i in range(n) for j in range(n)):
            out.append(tuple(x + 1 for x in perm))
    return tuple(out)


@lru_cache(maxsize=None)
def tau_extension(rs: RootSystem, tau: tuple[int, ...]) -> WeightInvolution:
    """Even involutive signed permutation of the weight basis extending tau on simple roots."""
    k = rs.basis_dim
    labels = rs.basis_labels
    if all(tau[i] == i + 1 for i in range(rs.rank)):
        return WeightInvolution.identity(k)
    choices = [[(t, s) for t in range(k) if labels[t][0] == labels[b][0] for s in (1, -1)] for b in range(k)]
    roots = [(rs.root(i + 1), rs.root(tau[i])) for i in range(rs.rank)]
    # a root can be checked once every basis vector in its support has an image
    ready: list[list[tuple]] = [[] for _ in range(k)]
    for src, dst in roots:
        ready[max(j for j, x in enumerate(src) if x)].append((src, dst))
    combo: list[tuple[int, int]] = []
    used: set[int] = set()

    def image(src):
        out = [0] * k
        for j, x in enumerate(src):
            if x:
                t, sg = combo[j]
                out[t] += sg * x
        return tuple(out)

    def search(b: int):
        if b == k:
            cols = [tuple(sg if i == t else 0 for i in range(k)) for t, sg in combo]
            T = WeightInvolution(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))
            return T if T.is_involutive() else None
        for t, sg in choices[b]:
            if t in used:
                continue
            combo.append((t, sg))
            used.add(t)
            if all(image(src) == dst for src, dst in ready[b]):
                T = search(b + 1)
                if T is not None:
                    return T
            combo.pop()
            used.discard(t)
        return None

    T = search(0)
    if T is not None:
        return T
    raise SatakeError(f"tau {tau} does not extend to an even involution of the weight lattice")


def is_identity_tau(tau: tuple[int, ...]) -> bool:
    return all(t == i + 1 for i, t in enumerate(tau))


def enumerate_taus(rs: RootSystem, S) -> list[tuple[int, ...]]:
    """Diagram automorphisms coinciding with -w_l on Pi_l."""
    w = weyl_operator(rs, S)
    out = []
    for tau in diagram_automorphisms(rs):
        if all(wneg(w.apply(rs.root(i))) == rs.root(tau[i - 1]) for i in S):
            try:
                tau_extension(rs, tau)
            except SatakeError:
                continue
            out.append(tau)
    return out


# decorated diagrams


@dataclass(frozen=True)
class DecoratedDiagram:
    rs: RootSystem
    piL: frozenset[int]
    tau: tuple[int, ...]
    mixtures: tuple = field(default=(), compare=False)

    @property
    def white(self) -> list[int]:
        return [i for i in range(1, self.rs.rank + 1) if i not in self.piL]

    def colors(self) -> str:
        return "".join("B" if i in self.piL else "W" for i in range(1, self.rs.rank + 1))

    def tau_pairs(self) -> list[tuple[int, int]]:
        return [(i, t) for i, t in enumerate(self.tau, start=1) if i < t]

    def instance(self) -> dict:
        return make_instance(
            self.rs.family, self.rs.bn, self.rs.bm, "satake", None,
            {"piL": ",".join(map(str, sorted(self.piL))), "tau": ",".join(map(str, self.tau))},
        )

    def to_json(self) -> dict:
        return {"piL": sorted(self.piL), "tau": [list(p) for p in self.tau_pairs()]}


def make_diagram(rs: RootSystem, piL, tau=None) -> DecoratedDiagram:
    tau = tuple(tau) if tau is not None else tuple(range(1, rs.rank + 1))
    return DecoratedDiagram(rs, frozenset(piL), tau)


def theta_map(d: DecoratedDiagram) -> WeightInvolution:
    """theta = -w_l o tau on the weight lattice."""
    return (weyl_operator(d.rs, d.piL) @ tau_extension(d.rs, d.tau)).neg()


def tilde_root(d: DecoratedDiagram, i: int) -> WeightVector:
    if i in d.piL or not 1 <= i <= d.rs.rank:
        raise SatakeError(f"alpha_{i} is not in the white set")
    return wneg(theta_map(d).apply(d.rs.root(i)))


def tilde_coordinates(d: DecoratedDiagram, i: int) -> tuple[int, ...]:
    return tuple(int(x) for x in simple_coordinates(d.rs, tilde_root(d, i)))


def check_pseudo_symmetric(d: DecoratedDiagram) -> VerificationReport:
    rs = d.rs
    inst = d.instance()
    tilde = {}
    for mu in d.white:
        t = tilde_root(d, mu)
        if t not in rs.positive_roots:
            return VerificationReport("pseudo-symmetric", inst, FAIL, {"reason": "tilde root not positive", "alpha": mu, "tilde": rs.weight_text(t)}, [])
        tilde[mu] = t
    for mu in d.white:
        s = tuple(a + b for a, b in zip(rs.root(mu), tilde[mu]))
        for a in sorted(d.piL):
            v = pair(rs, s, rs.root(a))
            if v:
                return VerificationReport("pseudo-symmetric", inst, FAIL, {"condition": "first", "mu": mu, "alpha": a, "value": v}, [])
        for nu in d.white:
            v = pair(rs, s, wsub(rs.root(nu), tilde[nu]))
            if v:
                return VerificationReport("pseudo-symmetric", inst, FAIL, {"condition": "second", "mu": mu, "nu": nu, "value": v}, [])
    return VerificationReport("pseudo-symmetric", inst, PASS, None, [])


# selection rules


def _neighbors(rs: RootSystem, i: int) -> list[int]:
    return [j for j in range(1, rs.rank + 1) if adjacent(rs, i, j)]


def selection_rule_violation(d: DecoratedDiagram) -> dict | None:
    """The first forbidden subdiagram found, or None."""
    rs, L = d.rs, d.piL
    n = rs.rank
    odd = lambda i: rs.is_odd(i)
    black = lambda i: i in L
    fixed = lambda i: d.tau[i - 1] == i
    comps = components(rs, L)
    comp_of = {x: c for c in comps for x in c}
    # RVSR on even nodes
    for b in d.white:
        if not fixed(b):
            continue
        touching = {comp_of[x] for x in _neighbors(rs, b) if black(x)}
        if len(touching) == 1:
            (c,) = touching
            # the pair must be an A2 (single equal-length bond)
            if len(c) == 1 and not odd(c[0]) and not odd(b) and rs.norm(c[0]) == rs.norm(b):
                return {"rule": "RVSR", "nodes": [c[0], b]}
    # ISO-ODD
    for b in d.white:
        if rs.is_grey(b) and fixed(b) and not any(black(x) for x in _neighbors(rs, b)):
            for a in _neighbors(rs, b):
                if not black(a):
                    return {"rule": "ISO-ODD", "nodes": [a, b]}
    # 4NODES: alpha(B,even) - beta(W,odd) - gamma(B,even) - sigma(W,even), induced path
    for b in d.white:
        if not odd(b):
            continue
        for a, g in itertools.permutations(_neighbors(rs, b), 2):
            if not (black(a) and black(g) and not odd(a) and not odd(g)) or adjacent(rs, a, g):
                continue
            for s in _neighbors(rs, g):
                if s in (a, b) or black(s) or odd(s) or adjacent(rs, s, b) or adjacent(rs, s, a):
                    continue
                return {"rule": "4NODES", "nodes": [a, b, g, s]}
    # D-TAIL (even orthogonal shape)
    if rs.family == "OSP-even" and n >= 4:
        flip = d.tau[n - 2] == n and d.tau[n - 1] == n - 1
        a, b, g = n - 4, n - 3, n - 2
        if (
            a >= 1 and flip and black(a) and not odd(a) and not black(b) and odd(b) and black(g) and not odd(g)
            and not black(n - 1) and not black(n) and not odd(n - 1) and not odd(n)
        ):
            return {"rule": "D-TAIL", "nodes": [a, b, g, n - 1, n]}
    if rs.family == "OSP-even" and n >= 3:
        a, b = n - 3, n - 2
        for s, g in ((n, n - 1), (n - 1, n)):
            if (
                a >= 1 and black(a) and not odd(a) and not black(b) and odd(b)
                and black(g) and not odd(g) and not black(s) and not odd(s) and fixed(s)
            ):
                return {"rule": "D-TAIL", "nodes": [a, b, g, s]}
    return None


def violates_selection_rules(d: DecoratedDiagram) -> VerificationReport:
    """FAIL (with the matched subdiagram as witness) when a forbidden subdiagram is present."""
    v = selection_rule_violation(d)
    if v is None:
        return VerificationReport("selection-rules", d.instance(), PASS, None, [])
    return VerificationReport("selection-rules", d.instance(), FAIL, v, [])


# family templates


@dataclass(frozen=True)
class Classification:
    type: str
    family: str
    variant: str


def _even_tail(rs: RootSystem) -> bool:
    if rs.family == "SPO":
        return True
    if rs.family == "OSP-odd":
        return rs.bn >= 1
    if rs.family == "OSP-even":
        return rs.bn >= 2
    return False


def _a_or_b_shape(rs: RootSystem, c: str) -> str | None:
    n, bm = rs.rank, rs.bm
    tail = 2 if rs.family == "OSP-even" else 1
    for m in range(1, min(bm, n - tail) + 1):
        if c == "W" * m + "B" * (n - m):
            return f"A(m={m})"
        if m % 2 == 0 and c == "BW" * (m // 2) + "B" * (n - m):
            return f"B(m={m})"
    return None


def template_matches(d: DecoratedDiagram) -> list[Classification]:
    rs = d.rs
    c = d.colors()
    n, bm, N = rs.rank, rs.bm, rs.N
    tid = is_identity_tau(d.tau)
    out: list[Classification] = []
    if rs.is_gl:
        if not tid and c == c[::-1] and re.fullmatch(r"W+B*W+|W+", c):
            out.append(Classification("I", "GL-I", "flip"))
        if tid and bm % 2 == 0 and c == "BW" * (bm // 2) + "W" * (N - 1) + "WB" * (bm // 2):
            out.append(Classification("II", "ANOM-GL", "right"))
        if tid and N % 2 == 0 and c == "W" * bm + "BW" * ((N - 2) // 2) + "B" + "W" * bm:
            out.append(Classification("II", "ANOM-GL", "left"))
        return out
    shape = _a_or_b_shape(rs, c) if tid else None
    fam = rs.family
    if shape:
        name = {"SPO": "SPO-I", "OSP-odd": "OSP-I-odd"}.get(fam) or ("OSP-I-even" if rs.bn >= 2 else "OSP-I-even-2")
        out.append(Classification("I", name, shape))
    if fam == "OSP-odd" and rs.bn == 0 and tid and c == "W" * n:
        out.append(Classification("I", "OSP-I-odd", "white-odd-tail"))
    if fam == "OSP-even" and rs.bn == 1:
        if not tid and c == "W" * n:
            out.append(Classification("I", "OSP-I-even-2-flip", "all-white"))
        if bm % 2 == 0 and c == "BW" * ((n - 1) // 2) + "W":
            out.append(Classification("I", "C-type-diag", "flip") if not tid else Classification("II", "C-type-diag0", "id"))
    if _even_tail(rs):
        tail = 2 if fam == "OSP-even" else 1
        if tid:
            for k in range(1, n):
                r = n - bm - 2 * k
                if r >= tail and c == "W" * bm + "BW" * k + "B" * r:
                    out.append(Classification("II", "ANOM-OSP", f"black-tail(m={bm + 2 * k})"))
        if (tid or fam == "OSP-even") and bm % 2 == 0 and c == "BW" * (bm // 2) + "W" * (n - bm):
            out.append(Classification("II", "ANOM-OSP", "white-tail" + ("" if tid else "-flip")))
        if fam == "OSP-even" and rs.bn == 2 and tid and c in ("W" * bm + "WB", "W" * bm + "BW"):
            out.append(Classification("II", "ANOM-OSP", "half-tail"))
    if fam == "OSP-odd" and rs.bn == 0 and tid and bm % 2 == 0 and c == "BW" * (bm // 2):
        # odd tail node doubles as the white odd node; the white-tail K-matrix solves RE here
        out.append(Classification("II", "ANOM-OSP", "white-tail"))
    return out


def classify(d: DecoratedDiagram) -> Classification | None:
    m = template_matches(d)
    return m[0] if len(m) == 1 else None


# enumeration


@dataclass(frozen=True)
class SatakeEntry:
    diagram: DecoratedDiagram
    classification: Classification | None
    matches: tuple[Classification, ...]

    def to_json(self) -> dict:
        d = self.diagram.to_json()
        c = self.classification
        d["type"] = c.type if c else None
        d["family"] = c.family if c else None
        d["variant"] = c.variant if c else None
        d["template_matches"] = len(self.matches)
        return d


def enumerate_pseudo_symmetric(rs: RootSystem) -> list[DecoratedDiagram]:
    out = []
    for S in enumerate_admissible(rs):
        for tau in enumerate_taus(rs, S):
            d = DecoratedDiagram(rs, S, tau)
            if check_pseudo_symmetric(d).status == PASS:
                out.append(d)
    return out


def is_graded_satake(d: DecoratedDiagram) -> bool:
    """Admissible, pseudo-symmetric, complies with selection rules, and has at least one white node."""
    if not d.white or not is_admissible(d.rs, d.piL):
        return False
    if d.tau not in enumerate_taus(d.rs, d.piL):
        return False
    return check_pseudo_symmetric(d).status == PASS and selection_rule_violation(d) is None


def enumerate_satake(rs: RootSystem, screen_trivial: bool = False) -> list[SatakeEntry]:
    """All graded Satake diagrams with their template classification.

    Pi_l = Pi is dropped: without white nodes there are no mixed generators and k = g.
    With screen_trivial, diagrams whose classical closure contains [g, g] for every
    screened mixture assignment are dropped as well.
    """
    out = []
    for d in enumerate_pseudo_symmetric(rs):
        if not d.white or selection_rule_violation(d) is not None:
            continue
        if screen_trivial and is_trivial(d):
            continue
        matches = tuple(template_matches(d))
        out.append(SatakeEntry(d, matches[0] if len(matches) == 1 else None, matches))
    out.sort(key=lambda e: (sorted(e.diagram.piL), e.diagram.tau))
    return out


# classical realization and bracket closure


Mat = tuple[Fraction, ...]


@dataclass
class ClassicalData:
    rs: RootSystem
    D: int
    parity: tuple[int, ...]
    e: dict[int, Mat]
    f: dict[int, Mat]
    cartan: list[Mat]

    def h(self, mu: WeightVector) -> Mat:
        D = self.D
        out = [Fraction(0)] * (D * D)
        for j, w in enumerate(self.rs.weights):
            out[j * D + j] = Fraction(pair(self.rs, mu, w))
        return tuple(out)

    def mat_parity(self, x: Mat) -> int | None:
        ps = {(self.parity[k // self.D] + self.parity[k % self.D]) % 2 for k, v in enumerate(x) if v}
        if len(ps) > 1:
            raise SatakeError("inhomogeneous element")
        return ps.pop() if ps else None


def op_at_one(op, D: int) -> Mat:
    out = [Fraction(0)] * (D * D)
    for r, c, v in op.mat.items():
        out[r * D + c] = eval_rational(v, 1)
    return tuple(out)


@lru_cache(maxsize=None)
def classical_data(rs: RootSystem) -> ClassicalData:
    from .natrep import build_natural_rep

    rep = build_natural_rep(rs)
    D = rs.D
    e = {i: op_at_one(rep.e(i), D) for i in range(1, rs.rank + 1)}
    f = {i: op_at_one(rep.f(i), D) for i in range(1, rs.rank + 1)}
    cartan = []
    if rs.is_gl:
        for j in range(D):
            cartan.append(tuple(Fraction(1 if k == j * D + j else 0) for k in range(D * D)))
    else:
        for j in range(rs.rank):
            jp = D - 1 - j
            cartan.append(tuple(Fraction(1 if k == j * D + j else (-1 if k == jp * D + jp else 0)) for k in range(D * D)))
    return ClassicalData(rs, D, rs.grading.parity, e, f, cartan)


def _mm(a: Mat, b: Mat, D: int) -> list[Fraction]:
    out = [Fraction(0)] * (D * D)
    for i in range(D):
        for k in range(D):
            x = a[i * D + k]
            if x:
                row = k * D
                for j in range(D):
                    y = b[row + j]
                    if y:
                        out[i * D + j] += x * y
    return out


def bracket(a: Mat, b: Mat, cd: ClassicalData) -> Mat:
    pa, pb = cd.mat_parity(a), cd.mat_parity(b)
    ab, ba = _mm(a, b, cd.D), _mm(b, a, cd.D)
    s = -1 if (pa or 0) * (pb or 0) else 1
    return tuple(x - s * y for x, y in zip(ab, ba))


class _Span:
    """Incremental row-echelon basis over Fractions."""

    def __init__(self, size: int):
        self.size = size
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, v) -> list[Fraction]:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((k for k, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for idx, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[idx] = [x - c * y for x, y in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def _split_homogeneous(x: Mat, cd: ClassicalData) -> list[Mat]:
    D = cd.D
    parts = {0: [Fraction(0)] * (D * D), 1: [Fraction(0)] * (D * D)}
    for k, v in enumerate(x):
        if v:
            parts[(cd.parity[k // D] + cd.parity[k % D]) % 2][k] = v
    return [tuple(p) for p in parts.values() if any(p)]


def lie_closure(gens: list[Mat], cd: ClassicalData) -> list[Mat]:
    """Basis of the Lie superalgebra generated by gens."""
    hom = [h for g in gens for h in _split_homogeneous(g, cd)]
    span = _Span(cd.D * cd.D)
    basis: list[Mat] = []
    for g in hom:
        if span.add(g):
            basis.append(g)
    queue = list(basis)
    limit = cd.D * cd.D
    while queue:
        x = queue.pop(0)
        for g in hom:
            y = bracket(g, x, cd)
            if any(y) and span.add(y):
                basis.append(y)
                queue.append(y)
        if len(basis) > limit:
            raise SatakeError("closure exceeded the ambient dimension")
    return basis


@lru_cache(maxsize=None)
def g_basis(rs: RootSystem) -> tuple[Mat, ...]:
    cd = classical_data(rs)
    return tuple(lie_closure(list(cd.e.values()) + list(cd.f.values()) + cd.cartan, cd))


def dim_g(rs: RootSystem) -> int:
    return len(g_basis(rs))


@lru_cache(maxsize=None)
def b_minus_basis(rs: RootSystem) -> tuple[Mat, ...]:
    cd = classical_data(rs)
    return tuple(lie_closure(list(cd.f.values()) + cd.cartan, cd))


def root_vector(rs: RootSystem, gamma: WeightVector) -> Mat:
    """A nonzero element of g_gamma (projection of a basis of g to the gamma weight coordinates)."""
    D = rs.D
    keys = [i * D + j for i in range(D) for j in range(D) if wsub(rs.weights[i], rs.weights[j]) == tuple(gamma)]
    for x in g_basis(rs):
        v = [Fraction(0)] * (D * D)
        for k in keys:
            v[k] = x[k]
        if any(v):
            return tuple(v)
    raise SatakeError(f"{gamma} is not a root")


def eligible_for_u(d: DecoratedDiagram, i: int) -> bool:
    rs = d.rs
    return (
        not rs.is_odd(i)
        and all(pair(rs, rs.root(i), rs.root(a)) == 0 for a in d.piL)
        and d.tau[i - 1] == i
        and tilde_root(d, i) == rs.root(i)
    )


MIXTURE_SAMPLES = (
    (Fraction(1), Fraction(2)),
    (Fraction(-3, 2), Fraction(5)),
    (Fraction(7), Fraction(-1, 3)),
)


def k_generators(d: DecoratedDiagram, mixtures: dict[int, tuple[Fraction, Fraction]] | None = None, sample: int = 0) -> list[Mat]:
    """l generators, t = span(h_a - h_{a~}) and x_a = e_a + c_a f_{a~} + c'_a u_a with u_a = h_a."""
    rs = d.rs
    cd = classical_data(rs)
    gens: list[Mat] = []
    for a in sorted(d.piL):
        gens += [cd.e[a], cd.f[a], cd.h(rs.root(a))]
    base_c, base_cg = MIXTURE_SAMPLES[sample % len(MIXTURE_SAMPLES)]
    for a in d.white:
        t = tilde_root(d, a)
        gens.append(tuple(x - y for x, y in zip(cd.h(rs.root(a)), cd.h(t))))
        c, cg = (mixtures or {}).get(a, (base_c + a, base_cg))
        fv = root_vector(rs, wneg(t))
        x = [p + c * q for p, q in zip(cd.e[a], fv)]
        if eligible_for_u(d, a) and cg:
            x = [p + cg * u for p, u in zip(x, cd.h(rs.root(a)))]
        gens.append(tuple(x))
    return gens


@lru_cache(maxsize=None)
def derived_basis(rs: RootSystem) -> tuple[Mat, ...]:
    """Basis of [g, g], generated by the e_i and f_i."""
    cd = classical_data(rs)
    return tuple(lie_closure(list(cd.e.values()) + list(cd.f.values()), cd))


@dataclass(frozen=True)
class ClosureData:
    dim_k: int
    dim_g: int
    dim_k_plus_b_minus: int
    dim_k_plus_derived: int

    @property
    def proper(self) -> bool:
        """k does not contain [g, g]; central directions are irrelevant for the pair."""
        return self.dim_k_plus_derived > self.dim_k


def classical_k_closure(d: DecoratedDiagram, mixtures=None, sample: int = 0, gens: list[Mat] | None = None) -> ClosureData:
    rs = d.rs
    cd = classical_data(rs)
    kb = lie_closure(gens if gens is not None else k_generators(d, mixtures, sample), cd)
    span = _Span(cd.D * cd.D)
    for x in kb:
        span.add(x)
    for x in b_minus_basis(rs):
        span.add(x)
    kb_span = _Span(cd.D * cd.D)
    for x in kb:
        kb_span.add(x)
    for x in derived_basis(rs):
        kb_span.add(x)
    return ClosureData(len(kb), dim_g(rs), span.dim, kb_span.dim)


def check_spherical(d: DecoratedDiagram, mixtures=None, sample: int = 0) -> VerificationReport:
    cl = classical_k_closure(d, mixtures, sample)
    notes = [f"dim k = {cl.dim_k}", f"dim g = {cl.dim_g}", "Borel subalgebra: b-"]
    if not cl.proper:
        notes.append("k contains [g, g]")
    status = PASS if cl.dim_k_plus_b_minus == cl.dim_g else FAIL
    w = None if status == PASS else {"dim_k_plus_b_minus": cl.dim_k_plus_b_minus, "dim_g": cl.dim_g}
    return VerificationReport("spherical", d.instance(), status, w, notes)


def sign_mixtures(d: DecoratedDiagram):
    """Mixture assignments c_alpha in {1, -1}, c'_alpha = 0, over all sign patterns."""
    for signs in itertools.product((1, -1), repeat=len(d.white)):
        yield {a: (Fraction(s), Fraction(0)) for a, s in zip(d.white, signs)}


def proper_witness(d: DecoratedDiagram) -> tuple[dict, ClosureData] | None:
    """First mixture assignment (generic samples, then sign patterns) giving a proper k."""
    for s in range(len(MIXTURE_SAMPLES)):
        cl = classical_k_closure(d, sample=s)
        if cl.proper:
            return {"sample": s}, cl
    for mix in sign_mixtures(d):
        cl = classical_k_closure(d, mixtures=mix)
        if cl.proper:
            return {a: str(c) for a, (c, _) in mix.items()}, cl
    return None


@lru_cache(maxsize=None)
def is_trivial(d: DecoratedDiagram) -> bool:
    """k contains [g, g] for every screened mixture assignment."""
    return proper_witness(d) is None


# module highest/lowest weights


def high_low_ok(d: DecoratedDiagram, i: int) -> bool:
    """w_l maps the highest weight of the l-module generated by e_alpha to its lowest weight."""
    rs = d.rs
    L = sorted(d.piL)
    weights = {rs.root(i)}
    frontier = [rs.root(i)]
    roots = set(rs.positive_roots) | {wneg(r) for r in rs.positive_roots}
    # weights of the module: closure of the root under +-Pi_l inside the positive roots outside R_l
    while frontier:
        w = frontier.pop()
        for a in L:
            for s in (1, -1):
                v = tuple(x + s * y for x, y in zip(w, rs.root(a)))
                if v in roots and v in rs.positive_roots and v not in weights and _outside_l(rs, d, v):
                    weights.add(v)
                    frontier.append(v)
    hi = [w for w in weights if all(tuple(x + y for x, y in zip(w, rs.root(a))) not in weights for a in L)]
    lo = [w for w in weights if all(tuple(x - y for x, y in zip(w, rs.root(a))) not in weights for a in L)]
    if len(hi) != 1 or len(lo) != 1:
        return False
    return weyl_operator(rs, d.piL).apply(hi[0]) == lo[0]


def _outside_l(rs: RootSystem, d: DecoratedDiagram, v: WeightVector) -> bool:
    coords = simple_coordinates(rs, v)
    return any(coords[j - 1] for j in d.white)
