"""Acceptance criteria A1-A7; each test prints one PASS/FAIL line."""

import pytest

from albert_theta import acceptance


def _report(result, acceptance_report):
    line = result.line()
    print(line)
    for f in result.failures:
        print("  -", f)
    acceptance_report.append(line)
    assert result.passed, line + "\n" + "\n".join(result.failures)


def test_A1_weight12_theta(shell_cache, acceptance_report):
    _report(acceptance.check_A1(cache=shell_cache), acceptance_report)


def test_A2_weighted_counts(shell_cache, acceptance_report):
    _report(acceptance.check_A2(cache=shell_cache), acceptance_report)


def test_A3_degree_one_vanishes(shell_cache, acceptance_report):
    _report(acceptance.check_A3(cache=shell_cache), acceptance_report)


def test_A4_degree_two_cusp_form(shell_cache, acceptance_report):
    _report(acceptance.check_A4(cache=shell_cache), acceptance_report)


def test_A5_degree_six_span(shell_cache, acceptance_report):
    _report(acceptance.check_A5(cache=shell_cache), acceptance_report)


def test_A6_local_zeta(acceptance_report):
    _report(acceptance.check_A6(), acceptance_report)


def test_A7_algebra_laws(shell_cache, acceptance_report):
    _report(acceptance.check_A7(cases=1000, cache=shell_cache), acceptance_report)
