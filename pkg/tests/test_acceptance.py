"""Acceptance gate: every criterion runs at its stated tolerance.

One test per criterion; each prints a PASS/FAIL line with the suite's
one-line detail so the gate is readable from the pytest -s / -v output.
"""

import pytest

from choquard_hardy import acceptance

CRITERIA = [
    "root_solver",
    "indicial_bound",
    "radial_oracle",
    "shell_oracle",
    "kernel_exponents",
    "bound_sandwich",
    "iff_consistency",
    "hand_thresholds",
    "hardy_sampling",
    "region_figures",
]


@pytest.mark.parametrize("name", CRITERIA)
def test_acceptance_criterion(name):
    result = acceptance.SUITES[name](acceptance.DEFAULT_SEED)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.name} ({result.elapsed:.2f} s): {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"


def test_suite_registry_complete():
    assert set(acceptance.SUITES) == set(CRITERIA)
