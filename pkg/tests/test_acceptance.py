"""The acceptance matrix, one test per criterion, at the stated tolerances.

Each test prints its pass/fail line (visible with -s or in the failure
report) and asserts the criterion outcome.  Criterion 7 is a strict
expected failure: the amplitude ratio (e1-e2)/k^2 at k = 12 sits 1.62%
from its large-k limit, which no implementation can bring under the 1%
target (the gap decays like 1/k^2 and first drops below 1% at k = 16);
see the suite detail string for the measured numbers.
"""

import pytest

from homoflow import acceptance


def _check(fn):
    result = fn()
    line = f"{'PASS' if result.passed else 'FAIL'}  {result.name}  " \
           f"[{result.elapsed:.1f}s]  {result.detail}"
    print(line)
    assert result.passed, line


def test_criterion_01_period_anchor():
    _check(acceptance.criterion_01_period_anchor)


def test_criterion_02_derivatives_and_bounds():
    _check(acceptance.criterion_02_derivatives_and_bounds)


def test_criterion_03_landau_verification():
    _check(acceptance.criterion_03_landau_verification)


def test_criterion_04_conformal_crosscheck():
    _check(acceptance.criterion_04_conformal_crosscheck)


def test_criterion_05_net_force():
    _check(acceptance.criterion_05_net_force)


def test_criterion_06_hamel_family():
    _check(acceptance.criterion_06_hamel_family)


@pytest.mark.xfail(
    strict=True,
    reason="(e1-e2)/k^2 = 5.27851 at k = 12 vs limit 5.36533: the gap is "
           "1.618% > 1% and decays like 1/k^2, first meeting the 1% "
           "target at k = 16; the stated tolerance is unattainable")
def test_criterion_07_amplitude_scaling():
    _check(acceptance.criterion_07_amplitude_scaling)


def test_criterion_08_mode_exclusions():
    _check(acceptance.criterion_08_mode_exclusions)


def test_criterion_09_newton_solver():
    _check(acceptance.criterion_09_newton_solver)


def test_criterion_10_bernoulli():
    _check(acceptance.criterion_10_bernoulli)


def test_criterion_11_green_function():
    _check(acceptance.criterion_11_green_function)


def test_criterion_12_cross_derivation():
    _check(acceptance.criterion_12_cross_derivation)


def test_criterion_13_classification_sweep():
    _check(acceptance.criterion_13_classification_sweep)
