"""Graded vector spaces, sparse exact matrices and the Koszul-signed tensor embedding.

Indices are 0-based internally.  Serialized forms and report witnesses use the
1-based indices of the matrix units e_{ij}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .qring import ONE, ZERO, ScalarLike, ScalarQ, to_json, to_text


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingProfile:
    parity: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(x) for x in self.parity)
        if not p or any(x not in (0, 1) for x in p):
            raise GradingError(f"parity must be a nonempty 0/1 vector, got {self.parity}")
        if p != p[::-1]:
            raise GradingError(f"grading {p} is not symmetric under i -> i'")
        object.__setattr__(self, "parity", p)

    @classmethod
    def minimal(cls, N: int, m: int) -> "GradingProfile":
        """(1,..,1; 0,..,0; 1,..,1) on C^{N|2m}."""
        return cls((1,) * m + (0,) * N + (1,) * m)

    @property
    def dim(self) -> int:
        return len(self.parity)

    def prime(self, i: int) -> int:
        return self.dim - 1 - i

    def __getitem__(self, i: int) -> int:
        return self.parity[i]


class SparseMatrix:
    """Square sparse matrix over ScalarQ: row -> {col -> value}, zeros dropped."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: dict[int, dict[int, ScalarQ]] | None = None):
        self.n = n
        self.rows = {}
        for r, row in (rows or {}).items():
            clean = {c: v for c, v in row.items() if v}
            if clean:
                self.rows[r] = clean

    @classmethod
    def from_entries(cls, n: int, entries: Iterable[tuple[int, int, ScalarLike]]) -> "SparseMatrix":
        rows: dict[int, dict[int, ScalarQ]] = {}
        for r, c, v in entries:
            v = ScalarQ.coerce(v)
            row = rows.setdefault(r, {})
            row[c] = row.get(c, ZERO) + v
        return cls(n, rows)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def diagonal(cls, values: list[ScalarLike]) -> "SparseMatrix":
        return cls(len(values), {i: {i: ScalarQ.coerce(v)} for i, v in enumerate(values)})

    def items(self) -> Iterator[tuple[int, int, ScalarQ]]:
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def get(self, r: int, c: int) -> ScalarQ:
        return self.rows.get(r, {}).get(c, ZERO)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n != other.n:
            raise GradingError("dimension mismatch in product")
        out: dict[int, dict[int, ScalarQ]] = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: dict[int, ScalarQ] = {}
            for k, x in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, y in brow.items():
                    prev = acc.get(c)
                    acc[c] = x * y if prev is None else prev + x * y
            if acc:
                out[r] = acc
        return SparseMatrix(self.n, out)

    def _combine(self, other: "SparseMatrix", sign: int) -> "SparseMatrix":
        if self.n != other.n:
            raise GradingError("dimension mismatch in sum")
        out = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            tgt = out.setdefault(r, {})
            for c, v in row.items():
                tgt[c] = tgt.get(c, ZERO) + (v if sign > 0 else -v)
        return SparseMatrix(self.n, out)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, -1)

    def scale(self, c: ScalarLike) -> "SparseMatrix":
        c = ScalarQ.coerce(c)
        if not c:
            return SparseMatrix(self.n)
        return SparseMatrix(self.n, {r: {k: v * c for k, v in row.items()} for r, row in self.rows.items()})

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def is_zero(self) -> bool:
        return not self.rows

    def first_difference(self, other: "SparseMatrix") -> tuple[int, int, ScalarQ, ScalarQ] | None:
        """Lexicographically first (r, c) where the matrices differ."""
        keys = set()
        for m in (self, other):
            for r, row in m.rows.items():
                keys.update((r, c) for c in row)
        for r, c in sorted(keys):
            a, b = self.get(r, c), other.get(r, c)
            if a != b:
                return r, c, a, b
        return None


@dataclass(frozen=True, eq=False)
class GradedOperator:
    grading: GradingProfile
    order: int
    mat: SparseMatrix
    expansion: Mapping[tuple[int, int, int, int], ScalarQ] | None = field(default=None)

    def __post_init__(self):
        if self.order not in (1, 2):
            raise GradingError("order must be 1 or 2")
        if self.mat.n != self.grading.dim ** self.order:
            raise GradingError("matrix size does not match grading and order")

    @property
    def D(self) -> int:
        return self.grading.dim

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        _same(self, other)
        return GradedOperator(self.grading, self.order, self.mat @ other.mat)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        _same(self, other)
        exp = None
        if self.expansion is not None and other.expansion is not None:
            exp = _add_exp(self.expansion, other.expansion, 1)
        return GradedOperator(self.grading, self.order, self.mat + other.mat, exp)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        _same(self, other)
        exp = None
        if self.expansion is not None and other.expansion is not None:
            exp = _add_exp(self.expansion, other.expansion, -1)
        return GradedOperator(self.grading, self.order, self.mat - other.mat, exp)

    def scale(self, c: ScalarLike) -> "GradedOperator":
        c = ScalarQ.coerce(c)
        exp = None
        if self.expansion is not None:
            exp = {k: v * c for k, v in self.expansion.items() if v * c}
        return GradedOperator(self.grading, self.order, self.mat.scale(c), exp)

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return self.grading == other.grading and self.order == other.order and self.mat == other.mat

    def entry(self, row: tuple[int, ...], col: tuple[int, ...]) -> ScalarQ:
        return self.mat.get(_flat(row, self.D), _flat(col, self.D))

    def entries(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], ScalarQ]]:
        for r, c, v in self.mat.items():
            yield _split(r, self.D, self.order), _split(c, self.D, self.order), v

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def to_json(self) -> dict:
        return {
            "dim": self.D,
            "order": self.order,
            "parity": list(self.grading.parity),
            "entries": [
                [*(i + 1 for i in r), *(j + 1 for j in c), to_json(v)] for r, c, v in self.entries()
            ],
        }

    def describe_index(self, flat_row: int, flat_col: int) -> str:
        r = _split(flat_row, self.D, self.order)
        c = _split(flat_col, self.D, self.order)
        return f"row {tuple(i + 1 for i in r)} col {tuple(j + 1 for j in c)}"


def _same(a: GradedOperator, b: GradedOperator) -> None:
    if a.grading != b.grading or a.order != b.order:
        raise GradingError("operators live on different spaces")


def _add_exp(a, b, sign):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + (v if sign > 0 else -v)
    return {k: v for k, v in out.items() if v}


def _flat(idx: tuple[int, ...], D: int) -> int:
    out = 0
    for i in idx:
        out = out * D + i
    return out


def _split(flat: int, D: int, order: int) -> tuple[int, ...]:
    if order == 1:
        return (flat,)
    return divmod(flat, D)


# order-1 constructors


def E(g: GradingProfile, i: int, j: int, c: ScalarLike = ONE) -> GradedOperator:
    """c * e_{ij} with 1-based indices."""
    if not (1 <= i <= g.dim and 1 <= j <= g.dim):
        raise GradingError(f"matrix unit e_{{{i},{j}}} outside dimension {g.dim}")
    return GradedOperator(g, 1, SparseMatrix.from_entries(g.dim, [(i - 1, j - 1, c)]))


def operator(g: GradingProfile, entries: Iterable[tuple[int, int, ScalarLike]]) -> GradedOperator:
    """Order-1 operator from 0-based (row, col, value) triples."""
    return GradedOperator(g, 1, SparseMatrix.from_entries(g.dim, entries))


def identity(g: GradingProfile, order: int = 1) -> GradedOperator:
    exp = None
    if order == 2:
        exp = {(i, i, k, k): ONE for i in range(g.dim) for k in range(g.dim)}
    return GradedOperator(g, order, SparseMatrix.identity(g.dim ** order), exp)


def zero(g: GradingProfile, order: int = 1) -> GradedOperator:
    return GradedOperator(g, order, SparseMatrix(g.dim ** order), {} if order == 2 else None)


def diagonal(g: GradingProfile, values: list[ScalarLike]) -> GradedOperator:
    if len(values) != g.dim:
        raise GradingError("diagonal length mismatch")
    return GradedOperator(g, 1, SparseMatrix.diagonal(values))


# parity


def entry_parity(g: GradingProfile, r: tuple[int, ...], c: tuple[int, ...]) -> int:
    return (sum(g[i] for i in r) + sum(g[j] for j in c)) % 2


def is_even(op: GradedOperator) -> bool:
    return all(entry_parity(op.grading, r, c) == 0 for r, c, _ in op.entries())


def parity_of(op: GradedOperator) -> int | None:
    """Parity of a homogeneous operator; None for zero; raises when inhomogeneous."""
    ps = {entry_parity(op.grading, r, c) for r, c, _ in op.entries()}
    if len(ps) > 1:
        raise GradingError("operator is not parity-homogeneous")
    return ps.pop() if ps else None


# Koszul embedding


def _sign2(p: tuple[int, ...], j: int, k: int, l: int) -> int:
    return -1 if ((p[k] + p[l]) * p[j]) % 2 else 1


def embed_expansion(
    g: GradingProfile, expansion: Mapping[tuple[int, int, int, int], ScalarLike]
) -> GradedOperator:
    """Koszul-embed sum c * e_ij (x) e_kl onto V (x) V (0-based indices)."""
    D, p = g.dim, g.parity
    clean: dict[tuple[int, int, int, int], ScalarQ] = {}
    for key, c in expansion.items():
        c = ScalarQ.coerce(c)
        if c:
            clean[key] = clean.get(key, ZERO) + c
    clean = {k: v for k, v in clean.items() if v}
    entries = []
    for (i, j, k, l), c in clean.items():
        entries.append((i * D + k, j * D + l, c if _sign2(p, j, k, l) > 0 else -c))
    return GradedOperator(g, 2, SparseMatrix.from_entries(D * D, entries), clean)


def abstract_expansion(x: GradedOperator) -> dict[tuple[int, int, int, int], ScalarQ]:
    """Expansion sum c * e_ij (x) e_kl of an order-2 operator.

    The embedding is a signed bijection on matrix units, so the expansion can be
    read back from any embedded matrix (e.g. a product of embedded operators).
    """
    if x.order != 2:
        raise GradingError("abstract_expansion takes an order-2 operator")
    if x.expansion is not None:
        return dict(x.expansion)
    D, p = x.D, x.grading.parity
    out = {}
    for r, c, v in x.mat.items():
        i, k = divmod(r, D)
        j, l = divmod(c, D)
        out[(i, j, k, l)] = v if _sign2(p, j, k, l) > 0 else -v
    return out


def with_expansion(x: GradedOperator) -> GradedOperator:
    if x.order != 2 or x.expansion is not None:
        return x
    return GradedOperator(x.grading, 2, x.mat, abstract_expansion(x))


def koszul_embed(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """a (x) b acting by (a (x) b)(v_j (x) v_l) = (-1)^{|b||v_j|} a v_j (x) b v_l."""
    if a.order != 1 or b.order != 1:
        raise GradingError("koszul_embed takes order-1 operators")
    if a.grading != b.grading:
        raise GradingError("grading mismatch")
    exp: dict[tuple[int, int, int, int], ScalarQ] = {}
    for i, j, x in a.mat.items():
        for k, l, y in b.mat.items():
            exp[(i, j, k, l)] = x * y
    return embed_expansion(a.grading, exp)


def leg(op: GradedOperator, which: int) -> GradedOperator:
    """op on tensor leg 1 or 2 with identity on the other leg."""
    ident = identity(op.grading)
    return koszul_embed(op, ident) if which == 1 else koszul_embed(ident, op)


def graded_permutation(g: GradingProfile) -> GradedOperator:
    """P = sum (-1)^{|j|} e_ij (x) e_ji."""
    D = g.dim
    exp = {(i, j, j, i): (-ONE if g[j] else ONE) for i in range(D) for j in range(D)}
    return embed_expansion(g, exp)


# supertransposition


def _st_sign(g: GradingProfile, i: int, j: int) -> int:
    """e_ij^t = sign * e_ji."""
    return -1 if ((g[i] + g[j]) * g[j]) % 2 else 1


def supertranspose(a: GradedOperator) -> GradedOperator:
    if a.order != 1:
        raise GradingError("supertranspose takes an order-1 operator")
    g = a.grading
    return operator(g, [(j, i, v if _st_sign(g, i, j) > 0 else -v) for i, j, v in a.mat.items()])


def _require_expansion(x: GradedOperator) -> Mapping[tuple[int, int, int, int], ScalarQ]:
    if x.order != 2:
        raise GradingError("operation needs an order-2 operator")
    return abstract_expansion(x)


def map_legs(
    x: GradedOperator,
    fn: Callable[[tuple[int, int, int, int], ScalarQ], Iterable[tuple[tuple[int, int, int, int], ScalarQ]]],
) -> GradedOperator:
    """Rewrite the abstract expansion term by term, then re-embed."""
    exp = _require_expansion(x)
    out: dict[tuple[int, int, int, int], ScalarQ] = {}
    for key, c in exp.items():
        for nk, nc in fn(key, c):
            out[nk] = out.get(nk, ZERO) + nc
    return embed_expansion(x.grading, out)


def partial_supertranspose(x: GradedOperator, which: int) -> GradedOperator:
    g = x.grading
    if which == 1:
        return map_legs(x, lambda k, c: [((k[1], k[0], k[2], k[3]), c * _st_sign(g, k[0], k[1]))])
    if which == 2:
        return map_legs(x, lambda k, c: [((k[0], k[1], k[3], k[2]), c * _st_sign(g, k[2], k[3]))])
    raise GradingError("leg must be 1 or 2")


def flip_legs(x: GradedOperator) -> GradedOperator:
    """X_21: e_ij (x) e_kl -> (-1)^{(|i|+|j|)(|k|+|l|)} e_kl (x) e_ij."""
    p = x.grading.parity

    def fn(k, c):
        i, j, a, b = k
        s = ((p[i] + p[j]) * (p[a] + p[b])) % 2
        return [((a, b, i, j), -c if s else c)]

    return map_legs(x, fn)


def conjugate_legs(x: GradedOperator, M: GradedOperator, Minv: GradedOperator, legs: tuple[int, ...]) -> GradedOperator:
    """Apply e -> M e M^{-1} to the chosen legs of the abstract expansion (M even)."""
    if not is_even(M):
        raise GradingError("conjugating matrix must be even")
    cols: dict[int, list[tuple[int, ScalarQ]]] = {}
    for a, i, v in M.mat.items():
        cols.setdefault(i, []).append((a, v))
    rows_inv = {j: list(row.items()) for j, row in Minv.mat.rows.items()}

    def conj(i, j):
        return [((a, b), v * w) for a, v in cols.get(i, []) for b, w in rows_inv.get(j, [])]

    def fn(k, c):
        i, j, a, b = k
        first = conj(i, j) if 1 in legs else [((i, j), ONE)]
        second = conj(a, b) if 2 in legs else [((a, b), ONE)]
        return [((r0, c0, r1, c1), c * u * w) for (r0, c0), u in first for (r1, c1), w in second]

    return map_legs(x, fn)


def witness_text(op: GradedOperator, diff: tuple[int, int, ScalarQ, ScalarQ]) -> dict:
    r, c, a, b = diff
    return {
        "row": [i + 1 for i in _split(r, op.D, op.order)],
        "col": [j + 1 for j in _split(c, op.D, op.order)],
        "lhs": to_text(a),
        "rhs": to_text(b),
    }
