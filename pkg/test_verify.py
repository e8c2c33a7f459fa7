#!/usr/bin/env python3
"""Tests for the identity verification suite"""

import pytest

from app.errors import DegreeError, InputError
from app.frobenius import builtin
from app.schemas import SuiteConfig, acceptance_config
from app.verify import Suite, bar_complex_dimensions, format_report, run_suite


def _config(**overrides):
    params = dict(algebras=["dual_numbers"], commutative_algebras=["dual_numbers"], max_degree=3,
                  samples=1, random_diagrams=2, seed=7)
    params.update(overrides)
    return SuiteConfig(**params)


def test_bar_complex_oracle():
    assert bar_complex_dimensions(builtin("dual_numbers"), 2) == [2, 1, 1]
    assert bar_complex_dimensions(builtin("mat2"), 1) == [1, 0]


def test_small_suite_passes():
    report = run_suite(_config(checks=["worked-example", "cohomology", "round-trip"]))
    assert report["seed"] == 7
    assert report["field"] == "q"
    failures = [r for r in report["results"] if r["status"] != "pass"]
    assert report["passed"], failures
    assert report["summary"] == {"total": len(report["results"]), "failed": 0}
    groups = {r["group"] for r in report["results"]}
    assert groups == {"worked-example", "cohomology", "round-trip"}
    checks = {r["check"] for r in report["results"]}
    assert "known-table:dual_numbers" in checks
    assert "placement-signs" in checks
    print(f"   ✓ {report['summary']['total']} checks passed")


def test_sullivan_mode_skips_cyclic_groups():
    report = run_suite(_config(mode="sullivan", checks=["worked-example", "round-trip"]))
    assert {r["group"] for r in report["results"]} == {"round-trip"}


def test_unknown_group():
    with pytest.raises(InputError) as info:
        run_suite(_config(checks=["bogus"]))
    assert info.value.path == "checks"


def test_guarded_failures_keep_a_witness():
    suite = Suite(_config())

    def body():
        raise DegreeError("too deep")

    suite.guarded("cohomology", "deep-cochain", body)
    suite.guarded("cohomology", "fine", lambda: (True, "ok", {"ignored": True}))
    failed, passed = (r.to_dict() for r in suite.results)
    assert failed["status"] == "fail"
    assert failed["witness"]["error"]
    assert "witness" not in passed


def test_format_report():
    report = run_suite(_config(checks=["worked-example"]))
    text = format_report(report)
    assert "worked-example" in text
    assert text.endswith("1/1 checks passed (seed 7)")


def test_every_group_passes_at_reduced_counts():
    report = run_suite(_config(max_degree=4, action_degree=1, composites=3, derivation_pairs=3, triples=2,
                               slide_diagrams=2))
    failures = [r for r in report["results"] if r["status"] != "pass"]
    assert report["passed"], failures
    groups = {r["group"] for r in report["results"]}
    expected = {"prop-axioms", "generator-identities", "action", "slides", "worked-example",
                "cohomology", "bv", "cobv", "sullivan", "round-trip"}
    assert expected <= groups
    checks = {r["check"] for r in report["results"]}
    for name in ("derivation-law", "associativity", "frobenius-left", "frobenius-right",
                 "vee0-coassociative", "boundary-star", "boundary-vee", "delta-squared"):
        assert name in checks, name
    print(f"   ✓ {report['summary']['total']} checks passed across {len(groups)} groups")


def test_acceptance_profile():
    cfg = acceptance_config(seed=1)
    assert (cfg.composites, cfg.derivation_pairs, cfg.triples) == (200, 100, 50)
    assert (cfg.samples, cfg.action_degree, cfg.slide_diagrams, cfg.round_trip_diagrams) == (50, 3, 20, 50)
    suite = Suite(cfg)
    assert suite.count("triples", 1) == 50
    assert Suite(_config()).count("triples", 1) == 1


def main():
    print("\nVerification suite tests\n")
    test_bar_complex_oracle()
    test_small_suite_passes()
    test_sullivan_mode_skips_cyclic_groups()
    test_unknown_group()
    test_guarded_failures_keep_a_witness()
    test_format_report()
    test_every_group_passes_at_reduced_counts()
    test_acceptance_profile()
    print("\n✓ verify tests completed")


if __name__ == "__main__":
    main()
