"""Run configuration, the verification grid and deterministic suite execution."""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .coideal import verify_mixtures
from .kmat import KParamError, KParams, params_from_text, sample_params, validate, verify_K, violating_params
from .natrep import build_natural_rep, check_defining_relations
from .qring import ParseError, parse
from .report import (
    CONJECTURE_FAIL,
    FAIL,
    NON_UNIQUE,
    PASS,
    PRECONDITION_FAIL,
    VerificationReport,
    dumps_reports,
    loads_reports,
    make_instance,
)
from .rmat import build_R, check_braid, check_YBE
from .rootdata import FAMILIES, RootSystem, build_root_system
from .satake import (
    check_pseudo_symmetric,
    check_spherical,
    enumerate_satake,
    violates_selection_rules,
)

ALL_CHECKS = ("ybe", "braid", "relations", "re", "re-violated", "conjecture", "mixture", "satake", "spherical")
DEFAULT_CHECKS = ALL_CHECKS

EXIT_OK, EXIT_DRIFT, EXIT_FAIL, EXIT_PRECONDITION, EXIT_CONFIG = 0, 1, 2, 3, 4

# smallest instance per conjectural kind: (family, bn, bm, block)
CONJECTURE_INSTANCES = {
    "BLACK-TAIL": [("SPO", 3, 1, 3), ("OSP-odd", 3, 1, 3)],
    "WHITE-TAIL": [("OSP-odd", 0, 2, None), ("OSP-odd", 1, 2, None), ("OSP-even", 1, 2, None), ("SPO", 1, 2, None)],
    "HALF-TAIL": [("OSP-even", 2, 1, None)],
    "WHITE-TAIL-TWISTED": [("OSP-even", 1, 2, None)],
    "GL-LEFT": [("GL", 2, 1, None)],
    "GL-RIGHT": [("GL", 1, 2, None), ("GL", 2, 2, None)],
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    checks: tuple[str, ...] = DEFAULT_CHECKS
    max_dim: int = 6
    samples: int = 3
    jobs: int = 1
    output: str | None = None
    golden: str | None = None
    strict_conjectures: bool = False
    mixture_reading: str = "printed"
    params: dict[tuple, KParams] = field(default_factory=dict)


_PARAM_KEY = re.compile(r"^params\.(GL|OSP-odd|OSP-even|SPO)\.(\d+)\.(\d+)\.([A-Z-]+)\.(\d+|-)$")


def _bool(text: str, where: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {text!r}")


def _int(text: str, where: str, lo: int = 0) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {text!r}") from None
    if v < lo:
        raise ConfigError(f"{where}: must be >= {lo}")
    return v


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Key-value format: one `key = value` per line, `#` starts a comment.

    Parameter lines look like `params.OSP-odd.0.1.A.1 = lambda: 2; 1: (q)/(1); 3: ...`,
    the block being `-` for kinds without one.
    """
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected `key = value`")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "checks":
            names = tuple(c.strip() for c in value.split(",") if c.strip())
            bad = [c for c in names if c not in ALL_CHECKS]
            if bad:
                raise ConfigError(f"{where}: unknown checks {bad}; known: {', '.join(ALL_CHECKS)}")
            cfg.checks = names
        elif key == "max_dim":
            cfg.max_dim = _int(value, where, 1)
        elif key == "samples":
            cfg.samples = _int(value, where, 1)
        elif key == "jobs":
            cfg.jobs = _int(value, where, 1)
        elif key == "output":
            cfg.output = value
        elif key == "golden":
            cfg.golden = value
        elif key == "strict_conjectures":
            cfg.strict_conjectures = _bool(value, where)
        elif key == "mixture_reading":
            if value not in ("printed", "corrected"):
                raise ConfigError(f"{where}: mixture_reading must be printed or corrected")
            cfg.mixture_reading = value
        elif key.startswith("params."):
            k, p = _parse_params(key, value, where)
            cfg.params[k] = p
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    return cfg


def _parse_params(key: str, value: str, where: str) -> tuple[tuple, KParams]:
    m = _PARAM_KEY.match(key)
    if not m:
        raise ConfigError(f"{where}: malformed parameter key {key!r}; expected params.FAMILY.bn.bm.KIND.block")
    fam, bn, bm, kind, block = m.group(1), int(m.group(2)), int(m.group(3)), m.group(4), m.group(5)
    blk = None if block == "-" else int(block)
    values: dict[str, str] = {}
    for item in value.split(";"):
        if not item.strip():
            continue
        if ":" not in item:
            raise ConfigError(f"{where}: parameter entry {item.strip()!r} needs `name: value`")
        name, text = (s.strip() for s in item.split(":", 1))
        try:
            parse(text)
        except ParseError as exc:
            raise ConfigError(f"{where}, field {name!r}: {exc}") from None
        values[name] = text
    try:
        rs = build_root_system(fam, bn, bm)
        p = params_from_text(kind, blk, values)
    except (KParamError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    problems = validate(rs, p)
    if problems:
        raise ConfigError(f"{where}: {'; '.join(problems)}")
    return (fam, bn, bm, kind, blk), p


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(text, str(path))


# the instance grid


def family_instances(max_dim: int) -> list[RootSystem]:
    out = []
    for fam in FAMILIES:
        for bn in range(0, max_dim + 1):
            for bm in range(1, max_dim + 1):
                N = {"GL": bn, "OSP-odd": 2 * bn + 1, "OSP-even": 2 * bn, "SPO": 2 * bn}[fam]
                if N + 2 * bm > max_dim or (fam != "OSP-odd" and bn == 0):
                    continue
                out.append(build_root_system(fam, bn, bm))
    return out


def theorem_kinds(rs: RootSystem) -> list[tuple[str, int]]:
    """(kind, block) of the theorem-backed K-matrices on rs."""
    if rs.is_gl:
        return [("A-GL", m) for m in range(1, rs.D // 2 + 1)]
    out = [("A", m) for m in range(1, rs.bm + 1)]
    out += [("B", m) for m in range(2, rs.bm + 1, 2)]
    if rs.family == "OSP-even" and rs.bn == 1 and rs.bm % 2 == 0:
        out.append(("C", rs.rank))
    return out


@dataclass(frozen=True)
class Job:
    check: str
    family: str
    bn: int
    bm: int
    kind: str | None = None
    block: int | None = None
    sample: int = 0


def build_jobs(cfg: RunConfig) -> list[Job]:
    jobs: list[Job] = []
    grid = family_instances(cfg.max_dim)
    for rs in grid:
        base = (rs.family, rs.bn, rs.bm)
        for chk in ("ybe", "braid", "relations", "satake", "spherical"):
            if chk in cfg.checks:
                jobs.append(Job(chk, *base))
        for kind, block in theorem_kinds(rs):
            for s in range(cfg.samples):
                if "re" in cfg.checks:
                    jobs.append(Job("re", *base, kind, block, s))
                if "mixture" in cfg.checks:
                    jobs.append(Job("mixture", *base, kind, block, s))
            if "re-violated" in cfg.checks:
                jobs.append(Job("re-violated", *base, kind, block, 0))
    if "conjecture" in cfg.checks:
        for kind, insts in CONJECTURE_INSTANCES.items():
            for fam, bn, bm, block in insts:
                if build_root_system(fam, bn, bm).D <= max(cfg.max_dim, 8):
                    jobs.append(Job("conjecture", fam, bn, bm, kind, block, 0))
    return jobs


def _params_for(job: Job, cfg_params: dict) -> KParams:
    rs = build_root_system(job.family, job.bn, job.bm)
    key = (job.family, job.bn, job.bm, job.kind, job.block)
    if job.sample == 0 and key in cfg_params:
        return cfg_params[key]
    return sample_params(rs, job.kind, job.block, job.sample)


def _satake_report(rs: RootSystem) -> VerificationReport:
    inst = make_instance(rs.family, rs.bn, rs.bm)
    entries = enumerate_satake(rs)
    notes = [f"count {len(entries)}"]
    unmatched = []
    for e in entries:
        d = e.diagram
        for rep in (check_pseudo_symmetric(d), violates_selection_rules(d)):
            if rep.status != PASS:
                return VerificationReport("satake", inst, FAIL, {"diagram": d.to_json(), "check": rep.check}, notes)
        if len(e.matches) > 1:
            return VerificationReport("satake", inst, FAIL, {"diagram": d.to_json(), "templates": len(e.matches)}, notes)
        if not e.matches:
            unmatched.append(f"{d.colors()} tau {list(d.tau)}")
    if unmatched:
        notes.append("no family template: " + ", ".join(unmatched))
    return VerificationReport("satake", inst, PASS, None, notes)


def _spherical_report(rs: RootSystem) -> VerificationReport:
    inst = make_instance(rs.family, rs.bn, rs.bm)
    entries = enumerate_satake(rs)
    for e in entries:
        rep = check_spherical(e.diagram)
        if rep.status != PASS:
            return VerificationReport("spherical", inst, rep.status, {"diagram": e.diagram.to_json(), **(rep.witness or {})}, [])
    return VerificationReport("spherical", inst, PASS, None, [f"diagrams {len(entries)}"])


def run_job(job: Job, cfg_params: dict | None = None, mixture_reading: str = "printed") -> VerificationReport:
    """Execute one job; per-instance problems come back as reports."""
    cfg_params = cfg_params or {}
    rs = build_root_system(job.family, job.bn, job.bm)
    if job.check in ("ybe", "braid"):
        R = build_R(rs)
        return check_YBE(R, rs) if job.check == "ybe" else check_braid(R, rs)
    if job.check == "relations":
        return check_defining_relations(build_natural_rep(rs))
    if job.check == "satake":
        return _satake_report(rs)
    if job.check == "spherical":
        return _spherical_report(rs)
    p = _params_for(job, cfg_params)
    if job.check in ("re", "conjecture"):
        return verify_K(rs, p)
    if job.check == "re-violated":
        v = violating_params(rs, p)
        inst = make_instance(rs.family, rs.bn, rs.bm, p.kind, p.block, "violated")
        if v is None:
            return VerificationReport("re-violated", inst, PRECONDITION_FAIL, {"reason": "no pair constraint to break"}, [])
        r = verify_K(rs, v, enforce=False)
        status = PASS if r.status == FAIL else FAIL
        return VerificationReport("re-violated", inst, status, None if status == PASS else {"re": r.status}, r.notes)
    if job.check == "mixture":
        return verify_mixtures(rs, p, mixture_reading)
    raise ConfigError(f"unknown check {job.check!r}")


def _run_star(args) -> VerificationReport:
    return run_job(*args)


def run_suite(cfg: RunConfig) -> list[VerificationReport]:
    """All selected checks over the grid; ordering is by instance key, independent of scheduling."""
    jobs = build_jobs(cfg)
    args = [(j, cfg.params, cfg.mixture_reading) for j in jobs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            reports = list(ex.map(_run_star, args, chunksize=1))
    else:
        reports = [_run_star(a) for a in args]
    return sorted(reports, key=lambda r: r.sort_key())


def exit_code(reports: list[VerificationReport], strict_conjectures: bool = False) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses or NON_UNIQUE in statuses or (strict_conjectures and CONJECTURE_FAIL in statuses):
        return EXIT_FAIL
    if PRECONDITION_FAIL in statuses:
        return EXIT_PRECONDITION
    return EXIT_OK


def diff_golden(reports: list[VerificationReport], golden: str | Path) -> tuple[int, str]:
    """Byte-exact comparison of canonical JSON against a golden file."""
    path = Path(golden)
    current = dumps_reports(reports)
    if not path.exists():
        return EXIT_DRIFT, f"golden file {path} is missing; run `golden bless`"
    old = path.read_text()
    if old == current:
        return EXIT_OK, f"{len(reports)} reports match {path}"
    before = loads_reports(old)
    for i, (a, b) in enumerate(zip(before, reports)):
        if a.to_json() != b.to_json():
            return EXIT_DRIFT, f"report {i} drifted: golden {a.to_json()} now {b.to_json()}"
    return EXIT_DRIFT, f"report count changed: golden {len(before)} now {len(reports)}"


def bless_golden(reports: list[VerificationReport], golden: str | Path) -> str:
    path = Path(golden)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_reports(reports))
    return f"wrote {len(reports)} reports to {path}"
