"""Exact finite-n covariance iteration of the LINEARIZED joint system for the
Pareto(1, 2.2) comparison config: predicts the embedded/classical MSE ratio
at each n under the linear-noise approximation (warm start).

State: (t = theta - theta_alpha, s = sum of t, e = embedded dev, c = classical dev)
  t_{k+1} = (1 - a_k f) t_k + a_k dM
  s_{k+1} = s_k + t_{k+1}                  (theta_bar err = s_k / k)
  e_{k+1} = (1 - b_k) e_k - (b_k g) (s_k / k) + (b_k / (1-alpha)) dN   [k >= 1]
  c_{k+1} = (1 - b_k) c_k - (b_k g) t_k + (b_k / (1-alpha)) dN
with g = theta f / (1-alpha), Var dM = alpha(1-alpha), Var dN = V_alpha,
Cov(dM, dN) = alpha (1-alpha) vartheta  (equilibrium values).
"""

import numpy as np

import streamrisk as sr

model = sr.Pareto(1.0, 2.2)
alpha = 0.9
o = sr.oracle(model, alpha)
f = o.density_at_quantile
V = o.v_alpha
theta = o.theta_alpha
vth = o.vartheta_alpha
g = theta * f / (1 - alpha)
b1 = 0.55
a1, a_exp = 1.0, 2 / 3

var_dm = alpha * (1 - alpha)
var_dn = V
cov_mn = alpha * (1 - alpha) * vth

# covariance matrix of (t, s, e, c), warm start = all zeros
P = np.zeros((4, 4))
checkpoints = {10**4, 10**5, 10**6, 10**7}
n_max = 10**7

s22_lim = sr.clt_covariance_fast(o, b1)[1, 1]
gamma = sr.variance_comparison(o, b1, 1.0).gamma_vartheta
print(f"asymptotics: S22 = {s22_lim:.1f}, gamma = {gamma:.1f}, ratio = {s22_lim/gamma:.4f}")

for k in range(0, n_max):
    a_k = a1 * float(max(k, 1)) ** (-a_exp)
    b_k = b1 / (k + 1)
    ca = 1.0 - a_k * f
    cb = 1.0 - b_k
    w = (b_k * g / k) if k >= 1 else 0.0  # theta_bar coupling weight on s_k
    bn1 = b_k / (1 - alpha)

    # A maps (t,s,e,c) -> new state (noise handled separately)
    A = np.array(
        [
            [ca, 0.0, 0.0, 0.0],
            [ca, 1.0, 0.0, 0.0],
            [0.0, -w, cb, 0.0],
            [-b_k * g, 0.0, 0.0, cb],
        ]
    )
    # noise loading: dM enters t (a_k), s (a_k), dN enters e,c (bn1)
    L = np.array([[a_k, 0.0], [a_k, 0.0], [0.0, bn1], [0.0, bn1]])
    Q = np.array([[var_dm, cov_mn], [cov_mn, var_dn]])
    P = A @ P @ A.T + L @ Q @ L.T
    n = k + 1
    if n in checkpoints:
        ve, vc = P[2, 2], P[3, 3]
        print(
            f"n = {n}: n*var emb {n * ve:.1f} cls {n * vc:.1f} "
            f"ratio {ve / vc:.4f} (emb/S22 {n * ve / s22_lim:.3f}, cls/gamma {n * vc / gamma:.3f})"
        )
