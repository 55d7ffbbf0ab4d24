"""Exact mean+covariance iteration of the linearized joint system for the
fast-regime rate config (Exponential(1), alpha=0.9, a=2/3, b=1, b1=1):
predicts n*MSE(embedded) per checkpoint and the fitted log-log slope, for
warm and cold starts."""

import numpy as np

import streamrisk as sr
from streamrisk.experiments import fit_rate

model = sr.Exponential(1.0)
alpha = 0.9
o = sr.oracle(model, alpha)
f = o.density_at_quantile
V = o.v_alpha
theta = o.theta_alpha
vth = o.vartheta_alpha
g = theta * f / (1 - alpha)
b1, a1, a_exp = 1.0, 1.0, 2 / 3

var_dm = alpha * (1 - alpha)
var_dn = V
cov_mn = alpha * (1 - alpha) * vth
grid = (1000, 3162, 10000, 31623, 100000, 316228, 1000000)

s22 = sr.clt_covariance_fast(o, b1)[1, 1]
print(f"S22 = {s22:.2f}, C = {sr.c_alpha_b1(o, b1):.2f}")

for label, mu0, P0 in (
    ("warm", np.zeros(3), np.zeros((3, 3))),
    # cold: theta0 = X ~ Exp(1) (mean 1, var 1); e0 = X/(1-alpha) - vth
    (
        "cold",
        np.array([1.0 - theta, 1.0 - theta, 10.0 - vth]),
        np.array(
            [
                [1.0, 1.0, 10.0],
                [1.0, 1.0, 10.0],
                [10.0, 10.0, 100.0],
            ]
        ),
    ),
):
    # state (t = theta dev, s = sum of t (theta_bar err = s/k), e = embedded dev)
    mu = mu0.copy()
    P = P0.copy()
    mses = []
    for k in range(0, grid[-1]):
        a_k = a1 * float(max(k, 1)) ** (-a_exp)
        b_k = b1 / (k + 1)
        ca = 1.0 - a_k * f
        cb = 1.0 - b_k
        w = (b_k * g / k) if k >= 1 else 0.0
        bn1 = b_k / (1 - alpha)
        A = np.array([[ca, 0.0, 0.0], [ca, 1.0, 0.0], [0.0, -w, cb]])
        if k == 0:
            # theta_bar resets to theta_1 after the first update: s_1 = t_1
            A[1] = A[0]
            A[2] = [-b_k * g, 0.0, cb]  # indicator reads theta_bar_0 = theta_0 = t_0
        L = np.array([[a_k, 0.0], [a_k, 0.0], [0.0, bn1]])
        Q = np.array([[var_dm, cov_mn], [cov_mn, var_dn]])
        mu = A @ mu
        P = A @ P @ A.T + L @ Q @ L.T
        n = k + 1
        if n in grid:
            mse = P[2, 2] + mu[2] ** 2
            mses.append(mse)
            print(f"  {label} n = {n}: n*mse = {n * mse:.1f} (mean part {n * mu[2]**2:.2f})")
    fit = fit_rate(zip(grid, mses))
    print(f"{label}: fitted slope {fit.slope:.4f} r2 {fit.r_squared:.4f}")
    fit2 = fit_rate(list(zip(grid, mses))[2:])
    print(f"{label}: slope over 1e4..1e6 {fit2.slope:.4f}")
