"""Root systems of gl(N|2m), osp(2n+1|2m), osp(2n|2m), spo(2n|2m) in the minimal symmetric grading."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gradedlin import GradingProfile

FAMILIES = ("GL", "OSP-odd", "OSP-even", "SPO")

WeightVector = tuple[int, ...]


class RootDataError(ValueError):
    pass


def wadd(a: WeightVector, b: WeightVector) -> WeightVector:
    return tuple(x + y for x, y in zip(a, b))


def wsub(a: WeightVector, b: WeightVector) -> WeightVector:
    return tuple(x - y for x, y in zip(a, b))


def wneg(a: WeightVector) -> WeightVector:
    return tuple(-x for x in a)


def wscale(c: int, a: WeightVector) -> WeightVector:
    return tuple(c * x for x in a)


@dataclass(frozen=True)
class RootSystem:
    family: str
    bn: int
    bm: int
    N: int
    rank: int
    basis_labels: tuple[str, ...]
    form: tuple[int, ...]
    simple_roots: tuple[WeightVector, ...]
    parities: tuple[int, ...]
    weights: tuple[WeightVector, ...]
    positive_roots: tuple[WeightVector, ...]

    @property
    def D(self) -> int:
        return self.N + 2 * self.bm

    @property
    def basis_dim(self) -> int:
        return len(self.form)

    @property
    def grading(self) -> GradingProfile:
        return GradingProfile.minimal(self.N, self.bm)

    @property
    def label(self) -> str:
        name = {"GL": "GL", "OSP-odd": "OSP", "OSP-even": "OSP", "SPO": "SPO"}[self.family]
        return f"{name}({self.N}|{2 * self.bm})"

    @property
    def is_gl(self) -> bool:
        return self.family == "GL"

    def root(self, i: int) -> WeightVector:
        """Simple root alpha_i, 1-based."""
        return self.simple_roots[i - 1]

    def pair(self, mu: WeightVector, nu: WeightVector) -> int:
        return pair(self, mu, nu)

    def norm(self, i: int) -> int:
        a = self.root(i)
        return pair(self, a, a)

    def is_odd(self, i: int) -> bool:
        return self.parities[i - 1] == 1

    def is_grey(self, i: int) -> bool:
        return self.is_odd(i) and self.norm(i) == 0

    def is_black_odd(self, i: int) -> bool:
        return self.is_odd(i) and self.norm(i) != 0

    def weight_parity(self, mu: WeightVector) -> int:
        return sum(mu[k] for k, lab in enumerate(self.basis_labels) if lab.startswith("d")) % 2

    @property
    def even_roots(self) -> tuple[WeightVector, ...]:
        return tuple(r for r in self.positive_roots if self.weight_parity(r) == 0)

    @property
    def odd_roots(self) -> tuple[WeightVector, ...]:
        return tuple(r for r in self.positive_roots if self.weight_parity(r) == 1)

    def weight_text(self, mu: WeightVector) -> str:
        parts = []
        for c, lab in zip(mu, self.basis_labels):
            if not c:
                continue
            sym = ("δ" if lab[0] == "d" else "ε") + lab[1:]
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+", mag + sym))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            out += s + body
        return out

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "bn": self.bn,
            "bm": self.bm,
            "label": self.label,
            "rank": self.rank,
            "basis": list(self.basis_labels),
            "form": list(self.form),
            "simple_roots": [list(a) for a in self.simple_roots],
            "simple_roots_text": [self.weight_text(a) for a in self.simple_roots],
            "parities": list(self.parities),
            "gram": [list(r) for r in dynkin_adjacency(self)],
            "positive_roots": [self.weight_text(r) for r in self.positive_roots],
            "odd_positive_roots": [self.weight_text(r) for r in self.odd_roots],
        }


def pair(rs: RootSystem, mu: WeightVector, nu: WeightVector) -> int:
    if len(mu) != rs.basis_dim or len(nu) != rs.basis_dim:
        raise RootDataError("weight dimension mismatch")
    return sum(f * a * b for f, a, b in zip(rs.form, mu, nu))


def dynkin_adjacency(rs: RootSystem) -> list[list[int]]:
    """Gram matrix of the simple roots."""
    return [[pair(rs, a, b) for b in rs.simple_roots] for a in rs.simple_roots]


def middle_dim(family: str, bn: int) -> int:
    if family == "GL":
        return bn
    if family == "OSP-odd":
        return 2 * bn + 1
    return 2 * bn


def build_root_system(family: str, bn: int, bm: int) -> RootSystem:
    if family not in FAMILIES:
        raise RootDataError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if bm < 1:
        raise RootDataError("bm must be at least 1")
    if family == "GL" and bn < 1:
        raise RootDataError("GL needs N >= 1")
    if family in ("OSP-even", "SPO") and bn < 1:
        raise RootDataError(f"{family} needs bn >= 1")
    if family == "OSP-odd" and bn < 0:
        raise RootDataError("OSP-odd needs bn >= 0")
    N = middle_dim(family, bn)
    D = N + 2 * bm

    if family == "GL":
        labels = tuple(f"d{i}" for i in range(1, 2 * bm + 1)) + tuple(f"e{i}" for i in range(1, N + 1))
        nb = len(labels)

        def unit(k):
            return tuple(1 if t == k else 0 for t in range(nb))

        d = [None] + [unit(i - 1) for i in range(1, 2 * bm + 1)]
        e = [None] + [unit(2 * bm + i - 1) for i in range(1, N + 1)]
        weights = tuple(d[j] for j in range(1, bm + 1)) + tuple(e[1:]) + tuple(d[j] for j in range(bm + 1, 2 * bm + 1))
        form = (-1,) * (2 * bm) + (1,) * N
        simple = tuple(wsub(weights[i], weights[i + 1]) for i in range(D - 1))
        pos = (
            [wsub(e[i], e[j]) for i in range(1, N + 1) for j in range(i + 1, N + 1)]
            + [wsub(d[i], d[j]) for i in range(1, 2 * bm + 1) for j in range(i + 1, 2 * bm + 1)]
            + [wsub(d[i], e[j]) for i in range(1, bm + 1) for j in range(1, N + 1)]
            + [wsub(e[j], d[i]) for i in range(bm + 1, 2 * bm + 1) for j in range(1, N + 1)]
        )
    else:
        labels = tuple(f"d{i}" for i in range(1, bm + 1)) + tuple(f"e{i}" for i in range(1, bn + 1))
        nb = len(labels)

        def unit(k):
            return tuple(1 if t == k else 0 for t in range(nb))

        d = [None] + [unit(i - 1) for i in range(1, bm + 1)]
        e = [None] + [unit(bm + i - 1) for i in range(1, bn + 1)]
        first = [d[j] for j in range(1, bm + 1)] + [e[j] for j in range(1, bn + 1)]
        if family == "OSP-odd":
            first.append(tuple([0] * nb))
        weights = tuple(first + [wneg(w) for w in reversed(first[: bm + bn])])
        form = (-1,) * bm + (1,) * bn
        n = bm + bn
        simple = [wsub(weights[i], weights[i + 1]) for i in range(n - 1)]
        if family == "OSP-odd":
            simple.append(weights[n - 1])
        elif family == "OSP-even":
            simple.append(wadd(weights[n - 2], weights[n - 1]))
        else:
            simple.append(wscale(2, weights[n - 1]))
        simple = tuple(simple)
        pm = []
        for i in range(1, bn + 1):
            for j in range(i + 1, bn + 1):
                pm += [wsub(e[i], e[j]), wadd(e[i], e[j])]
        for i in range(1, bm + 1):
            for j in range(i + 1, bm + 1):
                pm += [wsub(d[i], d[j]), wadd(d[i], d[j])]
        mixed = [x for i in range(1, bm + 1) for j in range(1, bn + 1) for x in (wsub(d[i], e[j]), wadd(d[i], e[j]))]
        if family == "OSP-odd":
            pos = pm + mixed + [e[i] for i in range(1, bn + 1)] + [wscale(2, d[i]) for i in range(1, bm + 1)] + [d[i] for i in range(1, bm + 1)]
        elif family == "OSP-even":
            pos = pm + mixed + [wscale(2, d[i]) for i in range(1, bm + 1)]
        else:
            pos = pm + mixed + [wscale(2, e[i]) for i in range(1, bn + 1)]

    rs = RootSystem(
        family=family,
        bn=bn,
        bm=bm,
        N=N,
        rank=len(simple),
        basis_labels=labels,
        form=form,
        simple_roots=simple,
        parities=(),
        weights=weights,
        positive_roots=tuple(pos),
    )
    parities = tuple(rs.weight_parity(a) for a in simple)
    object.__setattr__(rs, "parities", parities)
    return rs


def simple_coordinates(rs: RootSystem, mu: WeightVector) -> tuple[Fraction, ...]:
    """Coordinates of mu in the basis of simple roots (exact solve)."""
    n, nb = rs.rank, rs.basis_dim
    rows = [[Fraction(rs.simple_roots[j][k]) for j in range(n)] + [Fraction(mu[k])] for k in range(nb)]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, nb) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nb):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, nb)):
        raise RootDataError(f"{mu} is not in the span of the simple roots")
    out = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        out[c] = rows[i][n]
    return tuple(out)
