"""K-matrices (theorem-backed and conjectured) and exact reflection-equation checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .gradedlin import (
    GradedOperator,
    conjugate_legs,
    flip_legs,
    identity,
    is_even,
    leg,
    operator,
    partial_supertranspose,
    witness_text,
)
from .qring import ONE, Q, ScalarLike, ScalarQ, parse, qpow, to_text
from .report import FAIL, PASS, PRECONDITION_FAIL, VerificationReport, make_instance
from .rmat import braid_operator, build_R, rho_kappa
from .rootdata import RootSystem

KINDS = (
    "A",
    "B",
    "C",
    "A-GL",
    "BLACK-TAIL",
    "WHITE-TAIL",
    "HALF-TAIL",
    "WHITE-TAIL-TWISTED",
    "GL-LEFT",
    "GL-RIGHT",
)
CONJECTURAL = {"BLACK-TAIL", "WHITE-TAIL", "HALF-TAIL", "WHITE-TAIL-TWISTED", "GL-LEFT", "GL-RIGHT"}
RE_FORM = {k: "untwisted" for k in KINDS}
RE_FORM.update({"WHITE-TAIL-TWISTED": "theta", "GL-LEFT": "t", "GL-RIGHT": "t"})

A_CORNER_NOTE = (
    "A corner term: the printed y_{i'} e_{i',i'} is read as y_{i'} e_{i',i} (anti-diagonal); "
    "the RE check decides between the two readings"
)
HALF_TAIL_NOTE = (
    "half-tailed z-block: the printed z_n(e_{n,n'-1} - e_{n+1,n'}) degenerates to a diagonal term since n' = n+1; "
    "it is read as the block at i = n-1"
)


class KParamError(ValueError):
    pass


@dataclass(frozen=True)
class KParams:
    kind: str
    block: int | None = None
    lam: ScalarQ = ONE
    mu: ScalarQ | None = None
    offdiag: dict[int, ScalarQ] = field(default_factory=dict)
    reading: str = "default"

    def text_dict(self) -> dict[str, str]:
        d = {"lambda": to_text(self.lam)}
        if self.mu is not None:
            d["mu"] = to_text(self.mu)
        for i in sorted(self.offdiag):
            d[str(i)] = to_text(self.offdiag[i])
        if self.reading != "default":
            d["reading"] = self.reading
        return d


# index helpers (1-based)


def _prime(rs: RootSystem, i: int) -> int:
    return rs.D + 1 - i


def _kappa(rs: RootSystem, i: int) -> int:
    return rho_kappa(rs).kappa[i - 1]


def _rho(rs: RootSystem, i: int):
    return rho_kappa(rs).rho[i - 1]


def a_factor(rs: RootSystem, m: int) -> ScalarQ:
    """kappa_m kappa_{m'} q^{-2 rho_m}."""
    return qpow(-2 * _rho(rs, m)) * (_kappa(rs, m) * _kappa(rs, _prime(rs, m)))


def b_factor(rs: RootSystem, m: int) -> ScalarQ:
    """kappa_{m-1} kappa_{m'+1} q^{-2(rho_m + 1)}."""
    return qpow(-2 * (_rho(rs, m) + 1)) * (_kappa(rs, m - 1) * _kappa(rs, _prime(rs, m) + 1))


def black_tail_mu(rs: RootSystem, m: int, lam: ScalarQ) -> ScalarQ:
    return qpow(-2 * _rho(rs, m + 1)) * (_kappa(rs, m) * _kappa(rs, _prime(rs, m))) * lam


def white_tail_mu(rs: RootSystem, lam: ScalarQ, mu: ScalarQ | None) -> ScalarQ:
    if rs.family == "OSP-even":
        return -lam
    if rs.family == "OSP-odd":
        return -lam / Q
    if mu is None:
        raise KParamError("WHITE-TAIL on SPO needs an explicit mu")
    return mu


def derived_mu(rs: RootSystem, p: KParams) -> ScalarQ | None:
    if p.kind == "A":
        return -p.lam * a_factor(rs, p.block)
    if p.kind == "B":
        return p.lam * b_factor(rs, p.block)
    if p.kind == "BLACK-TAIL":
        return black_tail_mu(rs, p.block, p.lam)
    if p.kind == "WHITE-TAIL":
        return white_tail_mu(rs, p.lam, p.mu)
    if p.kind == "WHITE-TAIL-TWISTED":
        return -p.lam * qpow(-2)
    return p.mu


# structure: which off-diagonal slots exist and how they pair


def y_pairs(rs: RootSystem, idx) -> list[tuple[int, int]]:
    return [(i, _prime(rs, i)) for i in idx]


def z_pairs(rs: RootSystem, idx) -> list[tuple[int, int]]:
    return [(i, _prime(rs, i) - 1) for i in idx]


def structure(rs: RootSystem, kind: str, m: int | None) -> dict:
    """Pairs of off-diagonal parameters and the value their product must take (as a function of lam, mu)."""
    n, bm = rs.rank, rs.bm
    if kind == "A":
        return {"y": y_pairs(rs, range(1, m + 1)), "z": []}
    if kind == "B":
        return {"y": [], "z": z_pairs(rs, range(1, m + 1, 2))}
    if kind == "C":
        return {"y": [(n, _prime(rs, n))], "z": z_pairs(rs, [i for i in range(1, n, 2)])}
    if kind == "A-GL":
        return {"y": y_pairs(rs, range(1, m + 1)), "z": []}
    if kind == "BLACK-TAIL":
        return {"y": y_pairs(rs, range(1, bm + 1)), "z": z_pairs(rs, range(bm + 1, m, 2))}
    if kind == "WHITE-TAIL":
        return {"y": y_pairs(rs, range(bm + 1, n + 1)), "z": z_pairs(rs, range(1, bm, 2))}
    if kind == "HALF-TAIL":
        return {"y": y_pairs(rs, range(1, n - 1)), "z": z_pairs(rs, [n - 1])}
    if kind == "WHITE-TAIL-TWISTED":
        return {"y": y_pairs(rs, range(bm + 1, n)), "z": z_pairs(rs, range(1, bm, 2)), "fixed_y": [n]}
    if kind == "GL-RIGHT":
        return {"zr": [(i, _prime(rs, i) - 1) for i in range(1, bm + 1, 2)], "diag": list(range(bm + 1, _prime(rs, bm)))}
    if kind == "GL-LEFT":
        return {
            "diag": list(range(1, bm + 1)) + [_prime(rs, i) for i in range(1, bm + 1)],
            "zl": [i for i in range(bm + 1, _prime(rs, bm)) if (i - bm) % 2 == 1],
        }
    raise KParamError(f"unknown kind {kind!r}")


def pair_product(rs: RootSystem, p: KParams, which: str) -> ScalarQ:
    lam, m = p.lam, p.block
    mu = derived_mu(rs, p)
    if p.kind == "A":
        return a_factor(rs, m) * lam * lam
    if p.kind == "B":
        return -b_factor(rs, m) * lam * lam
    if p.kind == "C":
        n = rs.rank
        return p.offdiag[n] * p.offdiag[_prime(rs, n)]
    return -lam * mu


# validation


def validate(rs: RootSystem, p: KParams) -> list[str]:
    """Return the list of violated constraints (empty when consistent)."""
    kind, m = p.kind, p.block
    if kind not in KINDS:
        raise KParamError(f"unknown kind {kind!r}")
    n, bm = rs.rank, rs.bm
    fam = rs.family
    if kind in ("A-GL", "GL-LEFT", "GL-RIGHT") and not rs.is_gl:
        raise KParamError(f"{kind} is defined for GL only")
    if kind not in ("A-GL", "GL-LEFT", "GL-RIGHT") and rs.is_gl:
        raise KParamError(f"{kind} is defined for orthosymplectic families only")
    if kind in ("A", "B") and not (m is not None and 1 <= m <= bm):
        raise KParamError(f"{kind} needs 1 <= block <= bm = {bm}")
    if kind == "B" and (m % 2 or m < 2):
        raise KParamError("B needs an even block m >= 2")
    if kind == "C" and not (fam == "OSP-even" and rs.bn == 1 and bm % 2 == 0):
        raise KParamError("C is defined for osp(2|4m) only (OSP-even, bn = 1, even bm)")
    if kind == "A-GL" and not (m is not None and 1 <= m <= rs.D // 2):
        raise KParamError("A-GL needs 1 <= block <= (N+2m)/2")
    if kind == "BLACK-TAIL" and not (m is not None and bm < m < n and (m - bm) % 2 == 0):
        raise KParamError("BLACK-TAIL needs bm < block < rank with block - bm even")
    if kind == "WHITE-TAIL" and bm % 2:
        raise KParamError("WHITE-TAIL needs even bm")
    if kind == "HALF-TAIL" and not (fam == "OSP-even" and rs.bn == 2):
        raise KParamError("HALF-TAIL is defined for OSP-even with bn = 2")
    if kind == "WHITE-TAIL-TWISTED" and not (fam == "OSP-even" and bm % 2 == 0):
        raise KParamError("WHITE-TAIL-TWISTED needs OSP-even with even bm")
    if kind == "GL-RIGHT" and bm % 2:
        raise KParamError("GL-RIGHT needs even bm")
    if kind == "GL-LEFT" and rs.N % 2:
        raise KParamError("GL-LEFT needs even N")

    st = structure(rs, kind, m)
    violations = []
    needed = []
    for key in ("y", "z"):
        for a, b in st.get(key, []):
            needed += [a, b]
    for key in ("zr",):
        for a, b in st.get(key, []):
            needed += [a, b]
    needed += st.get("diag", []) + st.get("zl", [])
    if kind == "C":
        needed += [rs.rank, _prime(rs, rs.rank)]
    missing = sorted(set(i for i in needed if i not in p.offdiag))
    if missing:
        raise KParamError(f"missing off-diagonal parameters at indices {missing}")
    if kind in ("A-GL", "BLACK-TAIL", "WHITE-TAIL", "HALF-TAIL", "WHITE-TAIL-TWISTED") or kind in ("A", "B"):
        mu = derived_mu(rs, p)
        if kind in ("A-GL", "HALF-TAIL") and mu is None:
            raise KParamError(f"{kind} needs mu")
        if kind == "A-GL" and (p.lam * mu).is_zero():
            violations.append("-lambda*mu must be nonzero")
    for key in ("y", "z"):
        for a, b in st.get(key, []):
            if kind == "C" and key == "y":
                continue
            target = pair_product(rs, p, key)
            got = p.offdiag[a] * p.offdiag[b]
            if got != target:
                violations.append(f"{key}_{a} {key}_{b} = {to_text(got)} but must equal {to_text(target)}")
    if kind == "WHITE-TAIL-TWISTED":
        n_ = rs.rank
        for i in (n_, _prime(rs, n_)):
            if p.offdiag.get(i) != p.lam:
                violations.append(f"y_{i} must equal lambda")
    return violations


# builders


def _acc(entries: dict, i: int, j: int, v: ScalarLike) -> None:
    v = ScalarQ.coerce(v)
    entries[(i, j)] = entries.get((i, j), ScalarQ()) + v


def _zblock(entries, rs, i, z, zp):
    ip = _prime(rs, i)
    _acc(entries, i, ip - 1, z)
    _acc(entries, i + 1, ip, -z)
    _acc(entries, ip - 1, i, zp)
    _acc(entries, ip, i + 1, -zp)


def build_K(rs: RootSystem, p: KParams, *, enforce: bool = True) -> GradedOperator:
    violations = validate(rs, p)
    if violations and enforce:
        raise KParamError("; ".join(violations))
    kind, m, lam = p.kind, p.block, p.lam
    D, n = rs.D, rs.rank
    pr = lambda i: _prime(rs, i)
    y, ent = p.offdiag, {}
    mu = derived_mu(rs, p)
    st = structure(rs, kind, m)
    if kind == "A":
        f = a_factor(rs, m)
        for i in range(1, m + 1):
            _acc(ent, i, i, lam * (1 - f))
        for i in range(m + 1, pr(m)):
            _acc(ent, i, i, lam)
        for i in range(1, m + 1):
            _acc(ent, i, pr(i), y[i])
            if p.reading == "literal":
                _acc(ent, pr(i), pr(i), y[pr(i)])
            else:
                _acc(ent, pr(i), i, y[pr(i)])
    elif kind == "B":
        f = b_factor(rs, m)
        for i in range(1, m + 1):
            _acc(ent, i, i, lam * (1 + f))
        for i in range(m + 1, pr(m)):
            _acc(ent, i, i, lam)
        for a, b in st["z"]:
            _zblock(ent, rs, a, y[a], y[b])
    elif kind == "C":
        for a, b in st["z"]:
            _zblock(ent, rs, a, y[a], y[b])
        _acc(ent, n, pr(n), y[n])
        _acc(ent, pr(n), n, y[pr(n)])
    elif kind == "A-GL":
        for i in range(1, m + 1):
            _acc(ent, i, i, lam + mu)
        for i in range(m + 1, D - m + 1):
            _acc(ent, i, i, lam)
        for a, b in st["y"]:
            _acc(ent, a, b, y[a])
            _acc(ent, b, a, y[b])
    elif kind in ("BLACK-TAIL", "WHITE-TAIL", "HALF-TAIL", "WHITE-TAIL-TWISTED"):
        top = {"BLACK-TAIL": m, "WHITE-TAIL": n, "HALF-TAIL": n, "WHITE-TAIL-TWISTED": n - 1}[kind]
        for i in range(1, top + 1):
            _acc(ent, i, i, lam + mu)
        if kind == "BLACK-TAIL":
            for i in range(m + 1, pr(m)):
                _acc(ent, i, i, lam)
        if kind == "WHITE-TAIL" and rs.family == "OSP-odd":
            _acc(ent, n + 1, n + 1, lam)
        for a, b in st["y"]:
            _acc(ent, a, b, y[a])
            _acc(ent, b, a, y[b])
        if kind == "WHITE-TAIL-TWISTED":
            _acc(ent, n, pr(n), y[n])
            _acc(ent, pr(n), n, y[pr(n)])
        if kind == "HALF-TAIL" and p.reading == "literal":
            z, zp = y[n - 1], y[pr(n - 1) - 1]
            _zblock(ent, rs, n, z, zp)
        else:
            for a, b in st["z"]:
                _zblock(ent, rs, a, y[a], y[b])
    elif kind == "GL-RIGHT":
        for i, j in st["zr"]:
            _acc(ent, i, i + 1, y[i])
            _acc(ent, i + 1, i, -Q * y[i])
            _acc(ent, j, j + 1, y[j])
            _acc(ent, j + 1, j, -Q * y[j])
        for i in st["diag"]:
            _acc(ent, i, i, y[i])
    elif kind == "GL-LEFT":
        for i in st["diag"]:
            _acc(ent, i, i, y[i])
        for i in st["zl"]:
            _acc(ent, i, i + 1, y[i])
            _acc(ent, i + 1, i, -y[i] / Q)
    K = operator(rs.grading, [(i - 1, j - 1, v) for (i, j), v in ent.items()])
    return K


# parameter samples


_SAMPLES = [
    [ONE, ScalarQ.from_int(2), Q, Q + 1, ScalarQ.from_int(3), Q * Q - 2],
    [ScalarQ.from_int(2), Q + 2, ScalarQ.from_int(-1), Q * 3, Q - 3, ScalarQ.from_int(5)],
    [Q, ScalarQ.from_int(-3), Q * Q + 1, ScalarQ.from_int(7), Q + 1, ScalarQ.from_int(2) * Q],
    [ScalarQ.from_int(3), Q - 1, ScalarQ.from_int(4), Q + 3, ScalarQ.from_int(-2), Q * Q],
]


def sample_params(rs: RootSystem, kind: str, block: int | None = None, sample: int = 0, reading: str = "default") -> KParams:
    """Deterministic constraint-satisfying parameters."""
    vals = _SAMPLES[sample % len(_SAMPLES)]
    it = iter(vals[1:] * 8)
    lam = vals[0]
    mu = None
    if kind in ("A-GL", "HALF-TAIL") or (kind == "WHITE-TAIL" and rs.family == "SPO"):
        mu = vals[-1] + sample + 1
    st = structure(rs, kind, block)
    base = KParams(kind, block, lam, mu, {}, reading)
    off: dict[int, ScalarQ] = {}
    if kind == "C":
        n = rs.rank
        off[n], off[_prime(rs, n)] = next(it), next(it)
        base = KParams(kind, block, lam, mu, dict(off), reading)
    for key in ("y", "z"):
        for a, b in st.get(key, []):
            if kind == "C" and key == "y":
                continue
            target = pair_product(rs, base, key)
            v = next(it)
            off[a], off[b] = v, target / v
    for i in st.get("fixed_y", []):
        off[i], off[_prime(rs, i)] = lam, lam
    for a, b in st.get("zr", []):
        off[a], off[b] = next(it), next(it)
    for i in st.get("diag", []) + st.get("zl", []):
        off[i] = next(it)
    return KParams(kind, block, lam, mu, off, reading)


def violating_params(rs: RootSystem, p: KParams) -> KParams | None:
    """Break the first pair constraint by negating the partner value."""
    st = structure(rs, p.kind, p.block)
    for key in ("y", "z"):
        for a, b in st.get(key, []):
            if p.kind == "C" and key == "y":
                continue
            off = dict(p.offdiag)
            off[b] = -off[b]
            return KParams(p.kind, p.block, p.lam, p.mu, off, p.reading)
    return None


def params_from_text(kind: str, block: int | None, values: dict[str, str]) -> KParams:
    """Build KParams from text values: keys 'lambda', 'mu', and 1-based indices."""
    lam, mu, off = ONE, None, {}
    reading = "default"
    for k, v in values.items():
        if k in ("lambda", "lam"):
            lam = parse(v)
        elif k == "mu":
            mu = parse(v)
        elif k == "reading":
            reading = v
        else:
            try:
                idx = int(k.lstrip("yzx_"))
            except ValueError as exc:
                raise KParamError(f"unknown parameter key {k!r}") from exc
            off[idx] = parse(v)
    return KParams(kind, block, lam, mu, off, reading)


# reflection equations


def _report(check, instance, lhs, rhs, notes):
    diff = lhs.mat.first_difference(rhs.mat)
    if diff is None:
        return VerificationReport(check, instance, PASS, None, notes)
    return VerificationReport(check, instance, FAIL, witness_text(lhs, diff), notes)


def check_RE(S: GradedOperator, K: GradedOperator, *, instance: dict | None = None, notes=None) -> VerificationReport:
    """S K_2 S K_2 = K_2 S K_2 S."""
    notes = list(notes or [])
    instance = instance or make_instance()
    if not is_even(K):
        return VerificationReport("re", instance, PRECONDITION_FAIL, {"reason": "K is not even"}, notes)
    K2 = leg(K, 2)
    return _report("re", instance, S @ K2 @ S @ K2, K2 @ S @ K2 @ S, notes)


def check_RE_twisted_t(R: GradedOperator, K: GradedOperator, *, instance: dict | None = None, notes=None) -> VerificationReport:
    """R_21 K_1 R_21^{t1} K_2 = K_2 R_12^{t2} K_1 R_21, given R^{t1 t2} = R_21."""
    notes = list(notes or [])
    instance = instance or make_instance()
    R21 = flip_legs(R)
    tt = partial_supertranspose(partial_supertranspose(R, 1), 2)
    diff = tt.mat.first_difference(R21.mat)
    if diff is not None:
        w = witness_text(tt, diff)
        w["reason"] = "R^{t1 t2} != R_21"
        return VerificationReport("re-twisted-t", instance, PRECONDITION_FAIL, w, notes)
    if not is_even(K):
        return VerificationReport("re-twisted-t", instance, PRECONDITION_FAIL, {"reason": "K is not even"}, notes)
    K1, K2 = leg(K, 1), leg(K, 2)
    lhs = R21 @ K1 @ partial_supertranspose(R21, 1) @ K2
    rhs = K2 @ partial_supertranspose(R, 2) @ K1 @ R21
    return _report("re-twisted-t", instance, lhs, rhs, notes)


def tail_flip_matrix(rs: RootSystem) -> GradedOperator:
    """sum_{i != n, n'} e_ii + e_{n,n'} + e_{n',n}."""
    n = rs.rank
    np_ = _prime(rs, n)
    ent = [(i - 1, i - 1, ONE) for i in range(1, rs.D + 1) if i not in (n, np_)]
    ent += [(n - 1, np_ - 1, ONE), (np_ - 1, n - 1, ONE)]
    return operator(rs.grading, ent)


def check_RE_twisted_theta(
    R: GradedOperator,
    K: GradedOperator,
    M: GradedOperator,
    *,
    Minv: GradedOperator | None = None,
    instance: dict | None = None,
    notes=None,
) -> VerificationReport:
    """R_21 K_1 R_12^{theta_1} K_2 = K_2 R_21^{theta_2} K_1 R_12 with theta = conjugation by M."""
    notes = list(notes or [])
    instance = instance or make_instance()
    chk = "re-twisted-theta"
    if not is_even(M):
        return VerificationReport(chk, instance, PRECONDITION_FAIL, {"reason": "M is not even"}, notes)
    if Minv is None:
        if M @ M != identity(M.grading):
            return VerificationReport(chk, instance, PRECONDITION_FAIL, {"reason": "M is not involutive"}, notes)
        Minv = M
    elif M @ Minv != identity(M.grading):
        return VerificationReport(chk, instance, PRECONDITION_FAIL, {"reason": "Minv is not the inverse of M"}, notes)
    both = conjugate_legs(R, M, Minv, (1, 2))
    diff = both.mat.first_difference(R.mat)
    if diff is not None:
        w = witness_text(both, diff)
        w["reason"] = "(theta x theta)(R) != R"
        return VerificationReport(chk, instance, PRECONDITION_FAIL, w, notes)
    if not is_even(K):
        return VerificationReport(chk, instance, PRECONDITION_FAIL, {"reason": "K is not even"}, notes)
    R21 = flip_legs(R)
    K1, K2 = leg(K, 1), leg(K, 2)
    lhs = R21 @ K1 @ conjugate_legs(R, M, Minv, (1,)) @ K2
    rhs = K2 @ conjugate_legs(R21, M, Minv, (2,)) @ K1 @ R
    return _report(chk, instance, lhs, rhs, notes)


def k_instance(rs: RootSystem, p: KParams) -> dict:
    return make_instance(rs.family, rs.bn, rs.bm, p.kind, p.block, p.text_dict())


def verify_K(rs: RootSystem, p: KParams, *, R: GradedOperator | None = None, enforce: bool = True) -> VerificationReport:
    """Build K and run the reflection equation assigned to its kind."""
    inst = k_instance(rs, p)
    notes = []
    if p.kind == "A":
        notes.append(A_CORNER_NOTE if p.reading != "literal" else "A corner term read literally as y_{i'} e_{i',i'}")
    if p.kind == "HALF-TAIL":
        notes.append(HALF_TAIL_NOTE if p.reading != "literal" else "half-tailed z-block read literally at i = n")
    violations = validate(rs, p)
    if violations:
        notes.append("constraint violated: " + "; ".join(violations))
        if enforce:
            return VerificationReport("re", inst, PRECONDITION_FAIL, {"reason": "parameter constraints"}, notes)
    K = build_K(rs, p, enforce=False)
    R = R if R is not None else build_R(rs)
    form = RE_FORM[p.kind]
    if form == "untwisted":
        rep = check_RE(braid_operator(R), K, instance=inst, notes=notes)
    elif form == "t":
        rep = check_RE_twisted_t(R, K, instance=inst, notes=notes)
    else:
        rep = check_RE_twisted_theta(R, K, tail_flip_matrix(rs), instance=inst, notes=notes)
    if p.kind in CONJECTURAL:
        rep = rep.as_conjecture()
    return rep


def resolve_A_corner(rs: RootSystem, block: int = 1, sample: int = 0) -> dict:
    """Run the RE on both readings of the A corner term."""
    R = build_R(rs)
    out = {}
    for reading in ("default", "literal"):
        p = sample_params(rs, "A", block, sample, reading)
        out["anti-diagonal" if reading == "default" else "literal"] = verify_K(rs, p, R=R).status
    return out

