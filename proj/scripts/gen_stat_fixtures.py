"""Generates frozen oracle fixtures under tests/data/:

  specfun_grid.csv       -- arbitrary-precision values (mpmath, 50 dps) for
                            ln_gamma, regularized incomplete beta, t CDF, F CDF
  pearson_fixtures.json  -- (r, p) from scipy.stats.pearsonr, cross-checked
                            against a 50-digit mpmath recomputation
  granger_fixtures.json  -- (F, p) from statsmodels grangercausalitytests
                            (ssr_ftest) on seeded series

Run from the repository root: python3 scripts/gen_stat_fixtures.py
"""

import json
import os

import mpmath as mp
import numpy as np
from scipy import stats
from statsmodels.tsa.stattools import grangercausalitytests

mp.mp.dps = 50

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUT = os.path.join(ROOT, "tests", "data")


def betainc_reg(a, b, x):
    return mp.betainc(mp.mpf(a), mp.mpf(b), 0, mp.mpf(x), regularized=True)


def t_cdf(t, df):
    t = mp.mpf(t)
    df = mp.mpf(df)
    x = df / (df + t * t)
    ib = betainc_reg(df / 2, mp.mpf(1) / 2, x)
    if t >= 0:
        return 1 - ib / 2
    return ib / 2


def f_cdf(f, d1, d2):
    f = mp.mpf(f)
    d1 = mp.mpf(d1)
    d2 = mp.mpf(d2)
    if f <= 0:
        return mp.mpf(0)
    x = d1 * f / (d1 * f + d2)
    return betainc_reg(d1 / 2, d2 / 2, x)


def gen_specfun():
    rows = []
    for x in [0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.7, 5.0, 7.5, 10.0, 12.3, 25.0,
              50.0, 84.5, 120.0, 200.25, 350.0]:
        rows.append(("ln_gamma", x, "", "", mp.loggamma(mp.mpf(x)).real))
    beta_args = [
        (0.5, 0.5, 0.3), (0.5, 5.0, 0.2), (1.0, 1.0, 0.37), (2.0, 3.0, 0.5),
        (5.0, 0.5, 0.9), (7.5, 2.5, 0.6), (50.0, 50.0, 0.5), (10.0, 0.5, 0.99),
        (3.0, 7.0, 0.15), (100.0, 3.0, 0.97), (0.5, 0.5, 0.999), (4.0, 4.0, 0.01),
        (25.0, 1.5, 0.8), (1.5, 25.0, 0.2), (2.0, 2.0, 0.0), (2.0, 2.0, 1.0),
    ]
    for a, b, x in beta_args:
        rows.append(("reg_inc_beta", a, b, x, betainc_reg(a, b, x)))
    t_args = [(0.0, 5.0), (1.0, 10.0), (-2.5, 7.0), (3.2, 30.0), (-0.7, 3.0),
              (12.0, 2.0), (0.05, 198.0), (-4.1, 48.0), (2.086, 29.0)]
    for t, df in t_args:
        rows.append(("t_cdf", t, df, "", t_cdf(t, df)))
    f_args = [(1.0, 10.0, 10.0), (2.5, 3.0, 17.0), (0.5, 5.0, 2.0),
              (10.0, 1.0, 1.0), (0.01, 8.0, 4.0), (4.9, 15.0, 60.0),
              (3.84, 1.0, 120.0), (0.0, 2.0, 10.0), (7.7, 2.0, 44.0)]
    for f, d1, d2 in f_args:
        rows.append(("f_cdf", f, d1, d2, f_cdf(f, d1, d2)))

    path = os.path.join(OUT, "specfun_grid.csv")
    with open(path, "w") as out:
        out.write("func,arg1,arg2,arg3,expected\n")
        for name, a, b, c, v in rows:
            out.write("%s,%s,%s,%s,%s\n" % (name, a, b, c, mp.nstr(v, 20)))
    print("wrote %s (%d rows)" % (path, len(rows)))


def pearson_mp(x, y):
    x = [mp.mpf(repr(v)) for v in x]
    y = [mp.mpf(repr(v)) for v in y]
    n = len(x)
    mx = mp.fsum(x) / n
    my = mp.fsum(y) / n
    sxy = mp.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = mp.fsum((a - mx) ** 2 for a in x)
    syy = mp.fsum((b - my) ** 2 for b in y)
    r = sxy / mp.sqrt(sxx * syy)
    df = n - 2
    p = betainc_reg(mp.mpf(df) / 2, mp.mpf(1) / 2, df / (df + df * r * r / (1 - r * r)))
    return r, p


def gen_pearson():
    rng = np.random.default_rng(421)
    fixtures = []
    datasets = [
        ([1.0, 2.0, 3.0, 4.0, 5.0], [2.0, 1.0, 4.0, 3.0, 5.0]),
    ]
    sizes = [5, 8, 12, 17, 23, 30, 37, 44, 50]
    for n in sizes:
        x = np.round(rng.normal(0, 1, n), 6)
        y = np.round(0.5 * x + rng.normal(0, 1, n), 6)
        datasets.append((x.tolist(), y.tolist()))
    for x, y in datasets:
        r, p = stats.pearsonr(x, y)
        rm, pm = pearson_mp(x, y)
        assert abs(r - float(rm)) < 1e-11, (r, float(rm))
        assert abs(p - float(pm)) < 1e-11, (p, float(pm))
        fixtures.append({"x": x, "y": y, "r": float(r), "p": float(p)})
    path = os.path.join(OUT, "pearson_fixtures.json")
    with open(path, "w") as out:
        json.dump(fixtures, out, indent=1)
    print("wrote %s (%d fixtures)" % (path, len(fixtures)))


def gen_granger():
    rng = np.random.default_rng(977)
    fixtures = []
    specs = [(30, 1, 0.8), (30, 2, 0.0), (40, 1, 0.5), (40, 2, 0.7),
             (40, 3, 0.0), (50, 1, 0.0), (50, 2, 0.4), (50, 3, 0.6),
             (25, 1, 1.0), (45, 3, 0.3)]
    for t_len, k, coef in specs:
        x = np.round(rng.normal(0, 1, t_len), 6)
        eps = rng.normal(0, 1, t_len)
        y = np.zeros(t_len)
        for t in range(1, t_len):
            y[t] = 0.3 * y[t - 1] + coef * x[t - 1] + eps[t]
        y = np.round(y, 6)
        res = grangercausalitytests(np.column_stack([y, x]), maxlag=k, verbose=False)
        fstat, pval, _, _ = res[k][0]["ssr_ftest"]
        fixtures.append({"x": x.tolist(), "y": y.tolist(), "k": k,
                         "F": float(fstat), "p": float(pval)})
    path = os.path.join(OUT, "granger_fixtures.json")
    with open(path, "w") as out:
        json.dump(fixtures, out, indent=1)
    print("wrote %s (%d fixtures)" % (path, len(fixtures)))


def main():
    os.makedirs(OUT, exist_ok=True)
    gen_specfun()
    gen_pearson()
    gen_granger()
    print("ln(1.05) =", mp.nstr(mp.log(mp.mpf("1.05")), 20))
    print("0.01*sqrt(252) =", mp.nstr(mp.mpf("0.01") * mp.sqrt(252), 20))


if __name__ == "__main__":
    main()
