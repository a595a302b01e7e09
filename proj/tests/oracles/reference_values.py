"""Independent reference computations for the unit tests.

Run with `python3 reference_values.py`; the printed constants are pasted
into the C++ tests. Uses numpy / scipy / pandas / scikit-learn only, none of
the library code.
"""
import math

import numpy as np
import pandas as pd
from scipy import optimize, special
from sklearn.svm import SVR


def hash_noise(t):
    # Must match tests/support/synthetic.hpp::hash_noise.
    v = abs(math.sin((t + 1) * 12.9898) * 43758.5453)
    return v - math.floor(v) - 0.5


def noise(n, offset=0):
    return np.array([hash_noise(t + offset) for t in range(n)])


def fmt(values):
    return ", ".join(f"{v:.17g}" for v in values)


def describe_case():
    u = noise(50)
    x = 0.02 * u + 0.03 * u ** 3 + 0.001
    s = pd.Series(x)
    q = s.quantile([0.25, 0.5, 0.75])
    print("// describe: x_i = 0.02 u_i + 0.03 u_i^3 + 0.001, i < 50")
    print(f"min {s.min():.17g} q1 {q[0.25]:.17g} median {q[0.5]:.17g} q3 {q[0.75]:.17g} max {s.max():.17g}")
    print(f"mean {s.mean():.17g} std {s.std():.17g} skew {s.skew():.17g} kurt {s.kurt():.17g}")


def frac_case():
    x = noise(20, 100)
    d, k = 0.3, 5
    w = np.array([(-1) ** j * special.binom(d, j) for j in range(k + 1)])
    y = [float(np.dot(w, x[t - np.arange(k + 1)])) for t in range(k, len(x))]
    print("// frac_difference d=0.3 K=5 on noise(20, offset 100)")
    print(fmt(y))


def arma_series(n, phi, theta, offset):
    e = noise(n + 200, offset)
    x = np.zeros(n + 200)
    for t in range(1, n + 200):
        x[t] = phi * x[t - 1] + e[t] + theta * e[t - 1]
    return x[200:]


def css_case():
    x = arma_series(600, 0.5, 0.3, 7)
    z = x - x.mean()

    def sse(params):
        phi, theta = params
        e = np.zeros_like(z)
        for t in range(1, len(z)):
            e[t] = z[t] - phi * z[t - 1] - theta * e[t - 1]
        return float(np.sum(e[1:] ** 2))

    res = optimize.minimize(sse, [0.0, 0.0], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000})
    phi, theta = res.x
    sigma2 = sse(res.x) / (len(z) - 1)
    print("// CSS ARMA(1,1): x_t = 0.5 x_{t-1} + e_t + 0.3 e_{t-1}, e = noise(800, offset 7), drop 200")
    print(f"phi {phi:.17g} theta {theta:.17g} sigma2 {sigma2:.17g} mean {x.mean():.17g}")


def svr_case():
    n = 40
    a = noise(n, 300)
    b = noise(n, 400)
    X = np.column_stack([3.0 * a + 1.0, 0.5 * b - 2.0])
    y = np.sin(3.0 * a) + 0.4 * b * b + 0.05 * noise(n, 500)
    Z = (X - X.mean(axis=0)) / X.std(axis=0)
    ys = (y - y.mean()) / y.std()
    eps = 0.05
    model = SVR(kernel="rbf", C=1.0, epsilon=eps / y.std(), gamma=0.5, tol=1e-8)
    model.fit(Z, ys)
    probe = np.array([[0.3, -1.9], [2.2, -2.1], [-0.4, -1.8]])
    pz = (probe - X.mean(axis=0)) / X.std(axis=0)
    pred = model.predict(pz) * y.std() + y.mean()
    print("// SVR rbf gamma=0.5 C=1 eps=0.05 on the synthetic 2-feature set")
    print("probe predictions", fmt(pred))


def backtest_case():
    r = np.array([0.01, -0.02, 0.015, 0.003, -0.007, 0.012, -0.011, 0.004])
    equity = np.concatenate([[1.0], np.cumprod(1 + r)])
    days = 730.0
    years = days / 365.25
    arc = equity[-1] ** (1 / years) - 1
    asd = math.sqrt(252) * np.std(r, ddof=1)
    peak = np.maximum.accumulate(equity)
    md = float(np.max((peak - equity) / peak))
    neg = r[r < 0]
    dsd = math.sqrt(252) * np.std(neg, ddof=1)
    print("// metrics for returns", fmt(r), "over 730 calendar days, T=252")
    print(f"arc {arc:.17g} asd {asd:.17g} md {md:.17g} ir {arc / asd:.17g} "
          f"ir_star {arc * arc * np.sign(arc) / (asd * md):.17g} sr {arc / dsd:.17g}")


if __name__ == "__main__":
    describe_case()
    frac_case()
    css_case()
    svr_case()
    backtest_case()
