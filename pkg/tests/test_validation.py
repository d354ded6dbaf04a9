"""Invariant suite behind the validate command."""

from __future__ import annotations

import pytest

from spin_otto import validation
from spin_otto.errors import ZeroHeat


def test_all_checks_pass() -> None:
    """Every registered invariant holds at default resolution."""
    lines: list[str] = []
    assert validation.run_validation(echo=lines.append)
    assert len(lines) == len(validation.CHECKS)
    assert all(line.startswith("[OK] ") for line in lines)


def test_failures_and_errors_are_reported(monkeypatch: pytest.MonkeyPatch) -> None:
    """A false check and a raising check both print [FAIL]."""

    def broken() -> validation.CheckResult:
        raise ZeroHeat("no heat")

    monkeypatch.setattr(
        validation,
        "CHECKS",
        [("passes", lambda: (True, "fine")), ("fails", lambda: (False, "off by one")), ("raises", broken)],
    )
    lines: list[str] = []
    assert not validation.run_validation(echo=lines.append)
    assert lines == [
        "[OK] passes: fine",
        "[FAIL] fails: off by one",
        "[FAIL] raises: zero_heat: no heat",
    ]


def test_closed_form_check_compares_temperature_efficiency(monkeypatch: pytest.MonkeyPatch) -> None:
    """The efficiency written through the bath temperatures is part of the closed-form check."""
    assert validation.check_closed_form_agreement()[0]
    monkeypatch.setattr(validation, "efficiency_from_temperatures", lambda cfg: 0.0)
    assert not validation.check_closed_form_agreement()[0]
