from __future__ import annotations

import pytest

from qsatake.kmat import params_from_text
from qsatake.qring import parse
from qsatake.report import CONJECTURE_FAIL, FAIL, NON_UNIQUE, PASS, PRECONDITION_FAIL, VerificationReport, dumps_reports, make_instance
from qsatake.suite import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_PRECONDITION,
    ConfigError,
    RunConfig,
    build_jobs,
    exit_code,
    parse_config,
    run_suite,
)


def _small(**kw) -> RunConfig:
    return RunConfig(checks=("ybe", "re", "re-violated", "mixture", "satake"), max_dim=4, samples=2, **kw)


def test_parse_config_fields():
    cfg = parse_config(
        "# grid\nchecks = ybe, re\nmax_dim = 5\nsamples = 2\njobs = 3\nstrict_conjectures = yes\n"
        "mixture_reading = corrected\nparams.OSP-odd.0.1.A.1 = lambda: 1; 1: 1; 3: -q\n",
        "t.cfg",
    )
    assert cfg.checks == ("ybe", "re") and cfg.max_dim == 5 and cfg.samples == 2 and cfg.jobs == 3
    assert cfg.strict_conjectures and cfg.mixture_reading == "corrected"
    (key,) = cfg.params
    assert cfg.params[key] == params_from_text("A", 1, {"lambda": "1", "1": "1", "3": "-q"})


@pytest.mark.parametrize("text,fragment", [
    ("max_dim = zero\n", "t.cfg:1"),
    ("checks = re\nbogus = 1\n", "t.cfg:2"),
    ("params.XX.0.1.A.1 = lambda: 1\n", "malformed parameter key"),
    ("mixture_reading = other\n", "mixture_reading"),
    ("no equals sign\n", "key = value"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError) as exc:
        parse_config(text, "t.cfg")
    assert fragment in str(exc.value)


def test_exit_codes():
    inst = make_instance("GL", 1, 1)
    mk = lambda s: VerificationReport("ybe", inst, s, None, [])
    assert exit_code([mk(PASS)]) == EXIT_OK
    assert exit_code([mk(PASS), mk(FAIL)]) == EXIT_FAIL
    assert exit_code([mk(NON_UNIQUE)]) == EXIT_FAIL
    assert exit_code([mk(PRECONDITION_FAIL)]) == EXIT_PRECONDITION
    assert exit_code([mk(CONJECTURE_FAIL)]) == EXIT_OK
    assert exit_code([mk(CONJECTURE_FAIL)], strict_conjectures=True) == EXIT_FAIL


def test_jobs_are_unique():
    jobs = build_jobs(_small())
    assert len(jobs) == len(set(jobs))


def test_serial_and_parallel_are_byte_identical():
    a = dumps_reports(run_suite(_small()))
    b = dumps_reports(run_suite(_small()))
    c = dumps_reports(run_suite(_small(jobs=3)))
    assert a == b == c


def test_override_params_are_used():
    p = params_from_text("A", 1, {"lambda": "2", "1": "1", "3": "-4q"})
    cfg = RunConfig(checks=("re",), max_dim=3, samples=1, params={("OSP-odd", 0, 1, "A", 1): p})
    (r,) = [r for r in run_suite(cfg) if r.instance["family"] == "OSP-odd"]
    assert r.status == PASS
    assert r.instance["params"] == make_instance("OSP-odd", 0, 1, "A", 1, p.text_dict())["params"]
    assert p.lam == parse("2")
