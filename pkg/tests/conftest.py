import pytest

from fourier_greeks.fourier import Payoff, price_all
from fourier_greeks.models import MarketSetup, ModelSpec

ME_PARAMS = dict(eta=1.0, lam=2.0, maturity=1 / 12)
VG_PARAMS = dict(sigma=0.13, nu=0.4, theta=0.0, maturity=1 / 12)
STRIKE = 0.75

_acceptance_lines = []


@pytest.fixture(scope="session")
def me_model():
    return ModelSpec.me(**ME_PARAMS)


@pytest.fixture(scope="session")
def vg_model():
    return ModelSpec.vg(**VG_PARAMS)


@pytest.fixture(scope="session")
def me_market():
    return MarketSetup(0.75, STRIKE)


@pytest.fixture(scope="session")
def vg_market():
    return MarketSetup(0.65, STRIKE)


@pytest.fixture(scope="session")
def me_digital_reports(me_model, me_market):
    return price_all(me_model, me_market, Payoff.DIGITAL_PUT, {"cm": None, "cos": None, "lewis": None, "analytic": None})


@pytest.fixture(scope="session")
def vg_digital_reports(vg_model, vg_market):
    return price_all(vg_model, vg_market, Payoff.DIGITAL_PUT, {"cm": None, "cos": None, "lewis": None})


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance check; printed in the terminal summary."""

    def record(label, ok, detail):
        _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
