"""Diagnostics for the three problematic criteria: C2 systematic level,
C4 cold vs warm slope, C7 pre-asymptotics of the variant comparison."""

import sys
import time

import numpy as np

import streamrisk as sr
from streamrisk.experiments import ExperimentConfig, run_experiment, fit_rate, compare_variants

SEED = 20240817


def c2_surrogate():
    # exact linear Gaussian surrogate for Uniform(0,1), alpha=0.5, warm start:
    # theta_{k+1} = (1 - a_k f) theta_k + a_k dM, Var(dM)=0.25, f=1
    n = 10**6
    var_t = 0.0
    cov_ts = 0.0
    var_s = 0.0
    for k in range(1, n + 1):
        a = float(k if k >= 1 else 1) ** (-2.0 / 3.0)
        c = 1.0 - a
        var_t_new = c * c * var_t + a * a * 0.25
        cov_t_s = c * cov_ts  # Cov(theta_{k+1}, S_k)
        cov_ts = cov_t_s + var_t_new
        var_s = var_s + 2.0 * cov_t_s + var_t_new
        var_t = var_t_new
    print(f"C2 surrogate: n*Var(theta_bar) = {var_s / n:.5f} (CLT limit 0.25)")


def c2_seeds():
    for seed in (SEED, 1, 2, 3, 4):
        cfg = ExperimentConfig(
            model=sr.Uniform(0, 1), alpha=0.5,
            schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
            n_grid=(1000000,), replicates=1000, master_seed=seed, warm_start=True,
        )
        res = run_experiment(cfg, threads=8)
        mse, _ = res.mse_curve("theta_bar")
        print(f"C2 seed {seed}: n*mse = {1e6 * mse[0]:.5f} rel { abs(1e6*mse[0]-0.25)/0.25:.3%}")


def c4_warm():
    for warm in (True, False):
        cfg = ExperimentConfig(
            model=sr.Exponential(1.0), alpha=0.9,
            schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
            n_grid=(1000, 3162, 10000, 31623, 100000, 316228, 1000000),
            replicates=400, master_seed=SEED, warm_start=warm,
        )
        res = run_experiment(cfg, threads=8)
        mse, _ = res.mse_curve("embedded")
        fit = fit_rate(zip(cfg.n_grid, mse))
        print(f"C4 warm={warm}: slope {fit.slope:.4f} r2 {fit.r_squared:.4f} "
              f"n*mse@1e6 {1e6 * mse[-1]:.2f} (S22 66.72, C 324.25)")
        print("   n*mse per checkpoint:", [f"{n * m:.1f}" for n, m in zip(cfg.n_grid, mse)])


def c7_trend():
    grid = (10000, 100000, 1000000, 3162278, 10000000)
    cfg = ExperimentConfig(
        model=sr.Pareto(1.0, 2.2), alpha=0.9,
        schedule=sr.StepSchedule(1.0, 2 / 3, 0.55, 1.0),
        n_grid=grid, replicates=200, master_seed=SEED, warm_start=True,
    )
    res = run_experiment(cfg, threads=8)
    me, _ = res.mse_curve("embedded")
    mc, _ = res.mse_curve("classical")
    s22 = sr.clt_covariance_fast(res.oracle, 0.55)[1, 1]
    rep = sr.variance_comparison(res.oracle, 0.55, 1.0)
    print(f"C7 theory: S22 = {s22:.1f}, gamma = {rep.gamma_vartheta:.1f}, ratio {s22/rep.gamma_vartheta:.4f}")
    for k, n in enumerate(grid):
        print(f"  n = {n}: n*mse emb {n * me[k]:.1f} cls {n * mc[k]:.1f} ratio {me[k] / mc[k]:.4f}")


def c5_classical():
    cfg = ExperimentConfig(
        model=sr.Uniform(0, 1), alpha=0.5,
        schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
        n_grid=(1000000,), replicates=400, master_seed=SEED, warm_start=True,
    )
    res = run_experiment(cfg, threads=8)
    mc, _ = res.mse_curve("classical")
    rep = sr.variance_comparison(res.oracle, 1.0, 1.0)
    print(f"uniform classical: n*mse = {1e6 * mc[0]:.4f} vs gamma = {rep.gamma_vartheta:.4f}")


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    t0 = time.perf_counter()
    if which in ("all", "c2s"):
        c2_surrogate()
    if which in ("all", "c2"):
        c2_seeds()
    if which in ("all", "c4"):
        c4_warm()
    if which in ("all", "c7"):
        c7_trend()
    if which in ("all", "c5c"):
        c5_classical()
    print(f"total {time.perf_counter() - t0:.1f}s")
