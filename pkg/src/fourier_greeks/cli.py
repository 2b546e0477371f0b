"""Command-line front end: greeks, sweep, var, diagnose and reproduce.

Every file written is accompanied by ``<file>.manifest.json`` holding the command
line, the resolved configuration, the seed and the generator identity.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
import json
import math
import os
from pathlib import Path
import sys

import numpy as np

from .diagnostics import ENGINES, check_conditions, estimate_decay
from .distributions import GENERATOR_ID, RngStream
from .errors import ParameterError
from .fdgreeks import FDConfig
from .fourier import (
    GREEK_NAMES,
    CarrMadanConfig,
    CosConfig,
    LewisConfig,
    Payoff,
    contour_shift,
    make_pricer,
    price_all,
)
from .models import MarketSetup, ModelSpec
from .risk import VaRConfig, delta_gamma_var, full_mc_var, simulate_scenarios
from .tables import compare, compute_table

OUTPUT_DIR_ENV = "FOURIER_GREEKS_OUTPUT_DIR"
CSV_HEADER = ("s0", "method", "payoff", "price", "delta", "gamma", "warnings")
METHODS = ("analytic", "cm", "cos", "lewis", "fd")


@dataclass
class RunManifest:
    command_line: list[str]
    config: dict
    seed: int | None = None
    generator: str = GENERATOR_ID
    version: str = ""
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def __post_init__(self):
        if not self.version:
            try:
                self.version = metadata.version("fourier-greeks")
            except metadata.PackageNotFoundError:
                self.version = "unknown"

    def write_beside(self, path: Path) -> Path:
        out = Path(str(path) + ".manifest.json")
        out.write_text(json.dumps(asdict(self), indent=2, default=str) + "\n", encoding="utf-8")
        return out


# --------------------------------------------------------------------------- #
# argument handling
# --------------------------------------------------------------------------- #

def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _model_args(p):
    g = p.add_argument_group("model")
    g.add_argument("--config", help="key=value file; command-line flags override it")
    g.add_argument("--model", choices=("me", "vg"), default="me")
    g.add_argument("--eta", type=float, default=1.0)
    g.add_argument("--lambda", dest="lam", type=float, default=2.0)
    g.add_argument("--sigma", type=float, default=0.13)
    g.add_argument("--nu", type=float, default=0.4)
    g.add_argument("--theta", type=float, default=0.0)
    g.add_argument("--maturity", type=float, default=1 / 12, help="years")
    g.add_argument("--rate", type=float, default=0.0)
    g.add_argument("--strike", type=float, default=0.75)
    g.add_argument("--payoff", choices=[p.value for p in Payoff], default=Payoff.DIGITAL_PUT.value)


def _engine_args(p):
    g = p.add_argument_group("engines")
    g.add_argument("--cm-alpha", type=float, default=0.1)
    g.add_argument("--cm-truncation", type=float, default=4800.0)
    g.add_argument("--cm-points", type=int, default=2**17 + 1)
    g.add_argument("--cos-width", type=float, default=60.0)
    g.add_argument("--cos-terms", type=int, default=100_000)
    g.add_argument("--lewis-alpha", type=float, default=None)
    g.add_argument("--lewis-order", type=int, default=2000)
    g.add_argument("--fd-base", choices=("analytic", "cm", "cos", "lewis"), default="cm")
    g.add_argument("--fd-step", type=float, default=0.01)


def _var_args(p):
    g = p.add_argument_group("simulation")
    g.add_argument("--paths", type=int, default=100_000)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--level", type=float, default=0.01)
    g.add_argument("--horizon-days", type=float, default=1.0)
    g.add_argument("--days-per-year", type=float, default=250.0)


def _methods(text):
    out = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in out if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(METHODS)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourier-greeks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("greeks", help="price, Delta and Gamma at one spot")
    _model_args(p)
    _engine_args(p)
    p.add_argument("--s0", type=float, default=0.75)
    p.add_argument("--method", type=_methods, default=["analytic", "cm", "cos", "lewis", "fd"])

    p = sub.add_parser("sweep", help="CSV of prices and Greeks over a spot grid")
    _model_args(p)
    _engine_args(p)
    p.add_argument("--s0-min", type=float, default=0.60)
    p.add_argument("--s0-max", type=float, default=0.90)
    p.add_argument("--steps", type=int, default=61)
    p.add_argument("--method", type=_methods, default=list(METHODS))
    p.add_argument("--payoffs", default="call,digital-put")
    p.add_argument("--out", default="sweep.csv")

    p = sub.add_parser("var", help="full Monte Carlo or Delta-Gamma VaR")
    _model_args(p)
    _engine_args(p)
    _var_args(p)
    p.add_argument("--s0", type=float, default=0.75)
    p.add_argument("--approach", choices=("full-mc", "delta-gamma"), default="full-mc")
    p.add_argument("--pricer", choices=("analytic", "cm", "cos", "lewis"), default="cos")
    p.add_argument("--greeks", choices=METHODS, default="fd")
    p.add_argument("--pnl-out", default=None, help="optional CSV of simulated P&L")

    p = sub.add_parser("diagnose", help="tail-decay exponent and integrability flags")
    _model_args(p)
    _engine_args(p)

    p = sub.add_parser("reproduce", help="recompute a published table or the figure data")
    p.add_argument("target", choices=("table1", "table2", "figure1"))
    p.add_argument("--out-dir", default=None)
    _var_args(p)
    parser.subcommands = sub.choices
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            values = read_config_file(args.config)
        except (OSError, ParameterError) as exc:
            parser.error(str(exc))
        sub = parser.subcommands[args.command]
        actions = {}
        for act in sub._actions:
            for opt in act.option_strings:
                actions[opt.lstrip("-").replace("-", "_")] = act
            actions.setdefault(act.dest, act)
        unknown = sorted(set(values) - set(actions))
        if unknown:
            parser.error(f"unknown config key(s): {', '.join(unknown)}")
        for key, value in values.items():
            act = actions[key]
            if act.choices is not None and value not in act.choices:
                parser.error(f"config key {key}: {value!r} is not one of {', '.join(map(str, act.choices))}")
        # string defaults go through each option's type conversion
        sub.set_defaults(**{actions[k].dest: v for k, v in values.items()})
        args = parser.parse_args(argv)
    return args


def model_from_args(a) -> ModelSpec:
    if a.model == "me":
        return ModelSpec.me(a.eta, a.lam, a.maturity, a.rate)
    return ModelSpec.vg(a.sigma, a.nu, a.theta, a.maturity, a.rate)


def engine_configs(a) -> dict:
    return {
        "cm": CarrMadanConfig(a.cm_alpha, a.cm_truncation, a.cm_points),
        "cos": CosConfig(a.cos_width, a.cos_terms),
        "lewis": LewisConfig(a.lewis_alpha, a.lewis_order),
        "analytic": None,
        "fd": FDConfig(step=a.fd_step),
    }


def output_dir(explicit=None) -> Path:
    d = Path(explicit or os.environ.get(OUTPUT_DIR_ENV, "."))
    d.mkdir(parents=True, exist_ok=True)
    return d


def _resolve_out(path) -> Path:
    p = Path(path)
    return p if p.is_absolute() or p.parent != Path(".") else output_dir() / p


def _fmt(x):
    return "nan" if x is None or not math.isfinite(x) else f"{x:.10g}"


def _print_table(header, rows):
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    for r in [header, *rows]:
        print("  ".join(str(c).rjust(w) for c, w in zip(r, widths)))


# --------------------------------------------------------------------------- #
# commands
# --------------------------------------------------------------------------- #

def _reports(a, model, mk, payoff, methods):
    cfgs = engine_configs(a)
    return price_all(model, mk, payoff, {m: cfgs[m] for m in methods}, fd_base=a.fd_base)


def cmd_greeks(a) -> int:
    model = model_from_args(a)
    mk = MarketSetup(a.s0, a.strike)
    reports = _reports(a, model, mk, Payoff(a.payoff), a.method)
    rows = [(r.method, _fmt(r.price), _fmt(r.delta), _fmt(r.gamma)) for r in reports.values()]
    _print_table(("method", "price", "delta", "gamma"), rows)
    failed = False
    for name, r in reports.items():
        for w in r.warnings:
            print(f"WARNING {name}: {w}")
        if r.error:
            failed = True
            print(f"ERROR {name}: {r.error}", file=sys.stderr)
    return 1 if failed else 0


def sweep_rows(a, model, grid, methods, payoffs):
    rows = []
    for s0 in grid:
        mk = MarketSetup(float(s0), a.strike)
        for payoff in payoffs:
            reports = _reports(a, model, mk, payoff, methods)
            for m in methods:
                r = reports[m]
                notes = list(r.warnings) + ([f"error:{r.error.split(':')[0]}"] if r.error else [])
                rows.append((f"{s0:.10g}", m, payoff.value, _fmt(r.price), _fmt(r.delta), _fmt(r.gamma), ";".join(notes)))
    return rows


def write_csv(path: Path, rows, header=CSV_HEADER):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_sweep(a) -> int:
    if a.steps < 1:
        raise ParameterError("--steps must be positive")
    if a.steps > 1 and not a.s0_min < a.s0_max:
        raise ParameterError("--s0-min must be below --s0-max")
    model = model_from_args(a)
    grid = np.linspace(a.s0_min, a.s0_max, a.steps)
    payoffs = [Payoff(p.strip()) for p in a.payoffs.split(",") if p.strip()]
    rows = sweep_rows(a, model, grid, a.method, payoffs)
    out = _resolve_out(a.out)
    write_csv(out, rows)
    RunManifest(sys.argv, vars(a)).write_beside(out)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _var_config(a) -> VaRConfig:
    return VaRConfig(level=a.level, horizon=a.horizon_days / a.days_per_year, paths=a.paths, rng=RngStream(a.seed))


def cmd_var(a) -> int:
    model = model_from_args(a)
    mk = MarketSetup(a.s0, a.strike)
    payoff = Payoff(a.payoff)
    cfg = _var_config(a)
    sc = simulate_scenarios(model, mk.s0, cfg)
    if a.approach == "full-mc":
        pricer = make_pricer(a.pricer, model, mk, payoff, engine_configs(a).get(a.pricer))
        res = full_mc_var(model, mk, payoff, pricer, cfg, source=a.pricer, scenarios=sc)
        source = a.pricer
    else:
        rep = _reports(a, model, mk, payoff, [a.greeks])[a.greeks]
        if rep.error:
            print(f"ERROR {a.greeks}: {rep.error}", file=sys.stderr)
            return 1
        for w in rep.warnings:
            print(f"WARNING {a.greeks}: {w}")
        res = delta_gamma_var(rep.delta, rep.gamma, model, mk.s0, cfg, source=a.greeks, scenarios=sc)
        source = f"{a.greeks} (delta={rep.delta:.6g}, gamma={rep.gamma:.6g})"
    _print_table(
        ("VaR", "approach", "greeks/pricer", "paths", "seed", "level", "horizon"),
        [(f"{res.var:.6g}", res.approach, source, res.paths, a.seed, a.level, f"{cfg.horizon:.6g}")],
    )
    if a.pnl_out:
        out = _resolve_out(a.pnl_out)
        ds = sc.prices - mk.s0
        if a.approach == "full-mc":
            pnl = pricer(sc.prices) - res.meta["base_price"]
        else:
            pnl = rep.delta * ds + 0.5 * rep.gamma * ds * ds
        write_csv(out, ((f"{s:.17g}", f"{p:.17g}") for s, p in zip(sc.prices, pnl)), header=("s_t", "pnl"))
        RunManifest(sys.argv, vars(a), seed=a.seed).write_beside(out)
    return 0


def cmd_diagnose(a) -> int:
    model = model_from_args(a)
    cfgs = engine_configs(a)
    print(f"decay exponent p = {estimate_decay(model).exponent:.4f} (|phi(u)| ~ u^-p on the real axis)")
    rows = []
    for payoff in Payoff:
        for engine in ENGINES:
            est = estimate_decay(model, contour_shift(engine, payoff, cfgs[engine]))
            rep = check_conditions(model, payoff, est)
            for order in range(3):
                rows.append((payoff.value, engine, GREEK_NAMES[order], f"{est.exponent:.4f}", rep.flag(engine, order).value))
    _print_table(("payoff", "engine", "greek", "p", "flag"), rows)
    return 0


def cmd_reproduce(a) -> int:
    out_dir = output_dir(a.out_dir)
    cfg = _var_config(a)
    if a.target == "figure1":
        from .tables import load_reference, model_from_dict

        ref = load_reference()
        for name in ("table1", "table2"):
            model = model_from_dict(ref[name]["model"])
            ns = build_parser().parse_args(["sweep"])
            ns.strike = ref[name]["market"]["strike"]
            rows = sweep_rows(ns, model, np.linspace(0.60, 0.90, 61), list(METHODS), list(Payoff))
            out = out_dir / f"figure1_{model.kind}.csv"
            write_csv(out, rows)
            RunManifest(sys.argv, {**model.describe(), "strike": ns.strike, "s0_grid": [0.60, 0.90, 61]}).write_beside(out)
            print(f"wrote {out}")
        return 0

    computed = compute_table(a.target, cfg)
    results = compare(a.target, computed)
    out = out_dir / f"{a.target}.csv"
    cols = sorted({c for row in computed.values() for c in row}, key=str)
    write_csv(out, [(row, *(_fmt(computed[row].get(c)) for c in cols)) for row in computed], header=("row", *cols))
    RunManifest(sys.argv, vars(a), seed=a.seed).write_beside(out)
    cmp_out = out_dir / f"{a.target}_comparison.csv"
    table = [(r.row, r.column, _fmt(r.computed), r.reference, r.kind, json.dumps(r.tol), "pass" if r.passed else "FAIL") for r in results]
    write_csv(cmp_out, table, header=("row", "column", "computed", "published", "tolerance_kind", "tolerance", "result"))
    RunManifest(sys.argv, vars(a), seed=a.seed).write_beside(cmp_out)
    _print_table(("row", "column", "computed", "published", "kind", "tol", "result"), table)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} cells within tolerance; wrote {out} and {cmp_out}")
    return 0


COMMANDS = {"greeks": cmd_greeks, "sweep": cmd_sweep, "var": cmd_var, "diagnose": cmd_diagnose, "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"fourier-greeks {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, OSError) as exc:
        print(f"fourier-greeks {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
