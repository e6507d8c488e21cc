import json

import pytest

from relloc import verify


def test_run_config_validation():
    with pytest.raises(ValueError):
        verify.RunConfig(samples=0)
    with pytest.raises(ValueError):
        verify.RunConfig(tolerances={"algebra": 0.0})
    with pytest.raises(ValueError):
        verify.RunConfig(fmt="xml")


def test_tolerance_lookup():
    cfg = verify.RunConfig(tolerances={"hodge": 1e-3, "hodge.brute-force-oracle": 1e-5})
    assert cfg.tolerance("hodge", "brute-force-oracle", 1.0) == 1e-5
    assert cfg.tolerance("hodge", "defining-relation", 1.0) == 1e-3
    assert cfg.tolerance("moller", "x", 0.5) == 0.5


def test_check_relations():
    assert verify.Check("a", 0.1, 1.0).passed
    assert not verify.Check("a", float("nan"), 1.0).passed
    assert verify.Check("b", 96, 95, ">=").passed
    assert not verify.Check("b", 94, 95, ">=").passed


@pytest.mark.parametrize("name", list(verify.SUITES))
def test_every_suite_passes_small(name):
    report = verify.run_suite(name, verify.RunConfig(samples=10))
    assert report.passed, [c for c in report.checks if not c.passed]


def test_render_formats():
    cfg = verify.RunConfig(samples=3)
    reports = [verify.run_suite("hodge", cfg), verify.run_suite("exponentials", cfg)]
    combined = json.loads(verify.render(reports, "json"))
    assert combined["schema"] == "relloc/1" and len(combined["suites"]) == 2
    lines = verify.render(reports, "csv").splitlines()
    assert lines[0] == "suite,check,value,relation,tolerance,passed"
    assert len(lines) == 1 + sum(len(r.checks) for r in reports)


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")
