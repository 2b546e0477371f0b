"""Regenerate the high-precision reference constants embedded in the tests (needs mpmath).

Usage: python3 scripts/oracle_values.py
"""

from mpmath import mp, mpf, exp, log, sqrt

mp.dps = 30


def me_constants(eta=mpf(1), lam=mpf(2), T=mpf(1) / 12, r=mpf(0), s0=mpf("0.75"), k=mpf("0.75")):
    sT = sqrt(T)
    m = -log((lam / (lam - sT) + eta / (eta + sT)) / 2)
    d = log(k / s0) - r * T - m
    star = k * exp(-m - r * T)
    if d <= 0:
        price = exp(-r * T + eta / sT * d) / 2
        delta = -eta / (2 * sT * s0) * exp(-r * T + eta / sT * d)
        gamma = (eta**2 / T + eta / sT) / (2 * s0**2) * exp(-r * T + eta / sT * d)
    else:
        price = exp(-r * T) * (1 - exp(-lam / sT * d) / 2)
        delta = -lam / (2 * sT * s0) * exp(-r * T - lam / sT * d)
        gamma = (-(lam**2) / T + lam / sT) / (2 * s0**2) * exp(-r * T - lam / sT * d)
    # one-sided limits at S0*: d -> 0 from below (S0 > S0*) and from above
    right = -eta / (2 * sT * star)
    left = -lam / (2 * sT * star)
    gamma_right = (eta**2 / T + eta / sT) / (2 * star**2)
    return dict(m=m, s0_star=star, price=price, delta=delta, gamma=gamma, delta_right=right, delta_left=left, gamma_right=gamma_right)


def vg_constants(sigma=mpf("0.13"), nu=mpf("0.4"), theta=mpf(0), T=mpf(1) / 12):
    m = T / nu * log(1 - theta * nu - sigma**2 * nu / 2)
    root = sqrt(theta**2 + 2 * sigma**2 / nu) / 2
    return dict(m=m, gamma_shape=T / nu, gamma_scale=nu * (root + theta / 2))


def main():
    for name, vals in (("ME", me_constants()), ("VG", vg_constants())):
        for k, v in vals.items():
            print(f"{name} {k:<12} {mp.nstr(v, 15)}")
    print(f"ME(0,1,2) cdf(1)       {mp.nstr(1 - exp(-2) / 2, 15)}")
    print(f"ME(0,1,2) quantile(.25) {mp.nstr(log(mpf('0.5')), 15)}")


if __name__ == "__main__":
    main()
