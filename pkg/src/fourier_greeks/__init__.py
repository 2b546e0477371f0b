"""Fourier prices and Greeks under the ME and Variance Gamma models, with finite-difference
Greeks, integrability diagnostics and one-day VaR."""

from .fdgreeks import FDConfig, choose_step, fd_delta, fd_gamma
from .fourier import (
    CarrMadanConfig,
    CosConfig,
    CosRepricer,
    GreeksReport,
    LewisConfig,
    Payoff,
    cm_value,
    cos_value,
    lewis_value,
    make_pricer,
    price_all,
)
from .models import MarketSetup, ModelSpec, me_digital_delta, me_digital_gamma, me_digital_price
from .risk import VaRConfig, delta_gamma_var, empirical_var, full_mc_var, simulate_scenarios

__version__ = "0.1.0"
