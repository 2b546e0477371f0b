"""Full Monte Carlo VaR against Delta-Gamma VaR with every source of Greeks, over several seeds.

Usage: python3 scripts/var_experiment.py [--paths N] [--seeds 1 2 3] [--days-per-year 250]
"""

import argparse

import numpy as np

from fourier_greeks.distributions import RngStream
from fourier_greeks.fdgreeks import fd_delta, fd_gamma
from fourier_greeks.fourier import Payoff, make_pricer, price_all
from fourier_greeks.models import MarketSetup, ModelSpec
from fourier_greeks.risk import VaRConfig, delta_gamma_var, full_mc_var, simulate_scenarios

CASES = {
    "me": (ModelSpec.me(1.0, 2.0, 1 / 12), MarketSetup(0.75, 0.75), "analytic"),
    "vg": (ModelSpec.vg(0.13, 0.4, 0.0, 1 / 12), MarketSetup(0.65, 0.75), "cos"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--days-per-year", type=float, default=250.0)
    args = ap.parse_args()
    payoff = Payoff.DIGITAL_PUT
    for name, (model, mk, mc) in CASES.items():
        reps = price_all(model, mk, payoff, {"cm": None, "cos": None, "lewis": None})
        base = make_pricer("cm", model, mk, payoff)
        greeks = {"fd": (fd_delta(base, mk.s0, 0.01), fd_gamma(base, mk.s0, 0.01))}
        greeks.update({k: (r.delta, r.gamma) for k, r in reps.items()})
        table = {k: [] for k in ["full-mc", *greeks]}
        for seed in args.seeds:
            cfg = VaRConfig(horizon=1 / args.days_per_year, paths=args.paths, rng=RngStream(seed))
            sc = simulate_scenarios(model, mk.s0, cfg)
            table["full-mc"].append(full_mc_var(model, mk, payoff, make_pricer(mc, model, mk, payoff), cfg, scenarios=sc).var)
            for k, (d, g) in greeks.items():
                table[k].append(delta_gamma_var(d, g, model, mk.s0, cfg, scenarios=sc).var)
        print(f"\n{name.upper()} model, N={args.paths}, seeds {args.seeds}, 1 day = 1/{args.days_per_year:g} year")
        full = np.mean(table["full-mc"])
        for k, v in table.items():
            print(f"  {k:<8} mean VaR {np.mean(v):.4g}  (min {np.min(v):.4g}, max {np.max(v):.4g})  full-MC / this = {full / np.mean(v):.3g}")


if __name__ == "__main__":
    main()
