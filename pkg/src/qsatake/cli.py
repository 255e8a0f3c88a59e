"""Command-line interface: verification commands, enumeration, the mixture solver and golden files."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .coideal import (
    MixtureError,
    build_generators,
    check_commutant,
    k_diagram,
    solve_and_compare,
)
from .kmat import KINDS, KParamError, build_K, params_from_text, sample_params, verify_K
from .natrep import build_natural_rep, check_defining_relations
from .report import VerificationReport, canonical_dumps, dumps_reports, make_instance
from .rmat import build_R, check_braid, check_YBE
from .rootdata import FAMILIES, RootSystem, build_root_system
from .satake import DecoratedDiagram, SatakeError, check_spherical, enumerate_satake, make_diagram
from .suite import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PRECONDITION,
    ConfigError,
    RunConfig,
    bless_golden,
    diff_golden,
    exit_code,
    load_config,
    run_suite,
)

# diagram rendering


def _node(d: DecoratedDiagram, i: int) -> str:
    mark = "*" if i in d.piL else "o"
    return f"[{mark}]" if d.rs.is_odd(i) else mark


def render_diagram(d: DecoratedDiagram) -> str:
    """One-line ASCII form: `*` black, `o` white, brackets on odd nodes, then the tau arcs."""
    rs = d.rs
    n = rs.rank
    nodes = [_node(d, i) for i in range(1, n + 1)]
    if rs.is_gl or n == 1:
        body = "-".join(nodes)
    elif rs.family == "OSP-even":
        stem = "-".join(nodes[: n - 2])
        body = (stem + "-" if stem else "") + f"<({nodes[n - 2]},{nodes[n - 1]})"
    else:
        bond = "=>" if rs.family == "OSP-odd" else "<="
        body = "-".join(nodes[: n - 1]) + f" {bond} " + nodes[n - 1]
    pairs = d.tau_pairs()
    if pairs:
        body += " tau:" + "".join(f"({a} {b})" for a, b in pairs)
    return body


# shared options


def _instance_options(f):
    f = click.option("--bm", type=int, required=True, help="number m of the symplectic pairs")(f)
    f = click.option("--bn", type=int, required=True, help="rank parameter n of the even part")(f)
    f = click.option("--family", type=click.Choice(FAMILIES), required=True)(f)
    return f


def _rs(family: str, bn: int, bm: int) -> RootSystem:
    try:
        return build_root_system(family, bn, bm)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _load_params(rs: RootSystem, kind: str, block: int | None, params: str | None, sample: int):
    if params is None:
        return sample_params(rs, kind, block, sample)
    try:
        values = json.loads(Path(params).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"{params}: {exc}") from None
    if not isinstance(values, dict):
        raise click.UsageError(f"{params}: expected a JSON object of parameter texts")
    try:
        return params_from_text(kind, block, {str(k): str(v) for k, v in values.items()})
    except (KParamError, ValueError) as exc:
        raise click.UsageError(f"{params}: {exc}") from None


def _emit(reports: list[VerificationReport], strict: bool) -> None:
    click.echo(dumps_reports(reports), nl=False)
    sys.exit(exit_code(reports, strict))


@click.group()
def main() -> None:
    """Exact verification of graded R-matrices, K-matrices and coideal data."""


# verify


@main.group()
def verify() -> None:
    """Exact identity checks on one instance."""


@verify.command("ybe")
@_instance_options
def verify_ybe(family, bn, bm):
    rs = _rs(family, bn, bm)
    _emit([check_YBE(build_R(rs), rs)], False)


@verify.command("braid")
@_instance_options
def verify_braid(family, bn, bm):
    rs = _rs(family, bn, bm)
    _emit([check_braid(build_R(rs), rs)], False)


@verify.command("relations")
@_instance_options
@click.option("--all-failures", is_flag=True, help="list every violated relation in the notes")
def verify_relations(family, bn, bm, all_failures):
    rs = _rs(family, bn, bm)
    _emit([check_defining_relations(build_natural_rep(rs), collect=all_failures)], False)


def _k_options(f):
    f = click.option("--sample", type=int, default=0, show_default=True, help="built-in parameter sample")(f)
    f = click.option("--params", type=click.Path(exists=True, dir_okay=False), help="JSON object of parameter texts")(f)
    f = click.option("--block", type=int, default=None)(f)
    f = click.option("--kind", type=click.Choice(KINDS, case_sensitive=False), required=True)(f)
    return f


@verify.command("re")
@_instance_options
@_k_options
@click.option("--strict-conjectures", is_flag=True, help="a CONJECTURE-FAIL exits with 2")
def verify_re(family, bn, bm, kind, block, params, sample, strict_conjectures):
    rs = _rs(family, bn, bm)
    p = _load_params(rs, kind, block, params, sample)
    _emit([verify_K(rs, p, enforce=True)], strict_conjectures)


@verify.command("commutant")
@_instance_options
@_k_options
def verify_commutant(family, bn, bm, kind, block, params, sample):
    rs = _rs(family, bn, bm)
    p = _load_params(rs, kind, block, params, sample)
    try:
        comps = solve_and_compare(rs, p)
        d = k_diagram(rs, p.kind, p.block)
        mixtures = {c.alpha: (c.solved.c, c.solved.c_grave) for c in comps if c.solved.c is not None}
        gens = build_generators(d, build_natural_rep(rs), mixtures, p.kind, p.block)
        rep = check_commutant(gens, build_K(rs, p))
    except KParamError as exc:
        click.echo(f"precondition: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)
    except (MixtureError, SatakeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    inst = make_instance(rs.family, rs.bn, rs.bm, p.kind, p.block, p.text_dict())
    rep = VerificationReport(rep.check, inst, rep.status, rep.witness, rep.notes)
    _emit([rep], False)


# enumerate


@main.group("enumerate")
def enumerate_group() -> None:
    """Combinatorial enumerations."""


@enumerate_group.command("satake")
@_instance_options
@click.option("--format", "fmt", type=click.Choice(["json", "ascii"]), default="json", show_default=True)
@click.option("--screen-trivial", is_flag=True, help="drop diagrams whose classical k contains [g, g]")
def enumerate_satake_cmd(family, bn, bm, fmt, screen_trivial):
    rs = _rs(family, bn, bm)
    entries = enumerate_satake(rs, screen_trivial=screen_trivial)
    if fmt == "json":
        click.echo(canonical_dumps([e.to_json() for e in entries]), nl=False)
        return
    for e in entries:
        c = e.classification
        label = f"{c.type}/{c.family}" if c is not None else "no template"
        click.echo(f"{render_diagram(e.diagram)}  [{label}]")


# solve


@main.group()
def solve() -> None:
    """Solvers."""


@solve.command("mixture")
@_instance_options
@_k_options
@click.option("--reading", type=click.Choice(["printed", "corrected"]), default="printed", show_default=True)
def solve_mixture_cmd(family, bn, bm, kind, block, params, sample, reading):
    rs = _rs(family, bn, bm)
    p = _load_params(rs, kind, block, params, sample)
    try:
        comps = solve_and_compare(rs, p, reading)
    except KParamError as exc:
        click.echo(f"precondition: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)
    except (MixtureError, SatakeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(canonical_dumps([c.to_json() for c in comps]), nl=False)
    sys.exit(0 if all(c.matches for c in comps) else EXIT_FAIL)


# check


@main.group()
def check() -> None:
    """Structural checks."""


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise click.UsageError(f"expected comma-separated integers, got {text!r}") from None


@check.command("spherical")
@_instance_options
@click.option("--piL", "pil", default=None, help="black nodes, e.g. 2,3; default: every enumerated diagram")
@click.option("--tau", default=None, help="tau as an image list, e.g. 1,2,4,3")
def check_spherical_cmd(family, bn, bm, pil, tau):
    rs = _rs(family, bn, bm)
    if pil is None and tau is None:
        diagrams = [e.diagram for e in enumerate_satake(rs)]
    else:
        diagrams = [make_diagram(rs, _int_list(pil) or [], _int_list(tau))]
    try:
        reports = [check_spherical(d) for d in diagrams]
    except SatakeError as exc:
        raise click.UsageError(str(exc)) from None
    _emit(reports, False)


# dump


@main.group()
def dump() -> None:
    """Print data as JSON."""


@dump.command("rootdata")
@_instance_options
def dump_rootdata(family, bn, bm):
    click.echo(canonical_dumps(_rs(family, bn, bm).to_json()), nl=False)


@dump.command("rmatrix")
@_instance_options
def dump_rmatrix(family, bn, bm):
    click.echo(canonical_dumps(build_R(_rs(family, bn, bm)).to_json()), nl=False)


@dump.command("kmatrix")
@_instance_options
@_k_options
def dump_kmatrix(family, bn, bm, kind, block, params, sample):
    rs = _rs(family, bn, bm)
    p = _load_params(rs, kind, block, params, sample)
    try:
        K = build_K(rs, p)
    except KParamError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(canonical_dumps(K.to_json()), nl=False)


# suite and golden files


def _config(path: str | None, jobs: int | None) -> RunConfig:
    try:
        cfg = load_config(path) if path else RunConfig()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if jobs is not None:
        cfg.jobs = jobs
    return cfg


@main.command("run")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--jobs", type=int, default=None, help="worker processes")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.option("--strict-conjectures", is_flag=True)
def run_cmd(config_path, jobs, output, strict_conjectures):
    """Run the configured verification grid."""
    cfg = _config(config_path, jobs)
    reports = run_suite(cfg)
    text = dumps_reports(reports)
    out = output or cfg.output
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    bad = [r for r in reports if not r.ok]
    for r in bad:
        i = r.instance
        click.echo(f"{r.status}: {r.check} {i['family']}({i['bn']},{i['bm']}) {i['kind'] or ''} {i['block'] or ''}", err=True)
    click.echo(f"{len(reports)} reports, {len(reports) - len(bad)} passing", err=True)
    sys.exit(exit_code(reports, strict_conjectures or cfg.strict_conjectures))


@main.group()
def golden() -> None:
    """Golden-file regression of the suite reports."""


def _golden_path(cfg: RunConfig, golden_path: str | None) -> str:
    path = golden_path or cfg.golden
    if not path:
        click.echo("config error: no golden path (use --golden or `golden = ...`)", err=True)
        sys.exit(EXIT_CONFIG)
    return path


@golden.command("diff")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--golden", "golden_path", type=click.Path(dir_okay=False), default=None)
@click.option("--jobs", type=int, default=None)
@click.option("--bless", is_flag=True, help="rewrite the golden file instead of comparing")
def golden_diff(config_path, golden_path, jobs, bless):
    cfg = _config(config_path, jobs)
    path = _golden_path(cfg, golden_path)
    reports = run_suite(cfg)
    if bless:
        click.echo(bless_golden(reports, path))
        return
    code, msg = diff_golden(reports, path)
    click.echo(msg, err=code != 0)
    sys.exit(code)


@golden.command("bless")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--golden", "golden_path", type=click.Path(dir_okay=False), default=None)
@click.option("--jobs", type=int, default=None)
def golden_bless(config_path, golden_path, jobs):
    cfg = _config(config_path, jobs)
    click.echo(bless_golden(run_suite(cfg), _golden_path(cfg, golden_path)))


if __name__ == "__main__":
    main()
