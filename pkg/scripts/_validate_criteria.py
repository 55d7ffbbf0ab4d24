"""Scratch validation of the statistical acceptance criteria at full scale.

Prints the measured quantities per criterion so tolerances can be confirmed
before the acceptance tests are frozen.  Not part of the package.
"""

import time

import numpy as np

import streamrisk as sr
from streamrisk.experiments import ExperimentConfig, run_experiment, fit_rate, empirical_clt_cov, compare_variants, moment_curve

SEED = 20240817
GRID_36 = (1000, 3162, 10000, 31623, 100000, 316228, 1000000)


def timed(label, fn):
    t0 = time.perf_counter()
    out = fn()
    print(f"[{label}] {time.perf_counter() - t0:.1f}s")
    return out


def c2():
    cfg = ExperimentConfig(
        model=sr.Uniform(0, 1), alpha=0.5,
        schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
        n_grid=(1000000,), replicates=1000, master_seed=SEED, warm_start=True,
    )
    res = run_experiment(cfg, threads=1)
    mse, se = res.mse_curve("theta_bar")
    print(f"C2: n*mse(theta_bar) = {1e6 * mse[0]:.5f} (target 0.25 +-10%), rel err {abs(1e6*mse[0]-0.25)/0.25:.3%}")
    return res


def c3():
    cfg = ExperimentConfig(
        model=sr.Exponential(1.0), alpha=0.9,
        schedule=sr.StepSchedule(1.0, 0.6, 1.0, 0.75),
        n_grid=GRID_36, replicates=400, master_seed=SEED, warm_start=False,
    )
    res = run_experiment(cfg, threads=1)
    mse, se = res.mse_curve("embedded")
    fit = fit_rate(zip(cfg.n_grid, mse))
    bn = cfg.schedule.gain_b(1000000)
    target = sr.clt_variance_slow(res.oracle)
    print(f"C3: slope {fit.slope:.4f} (target -0.75+-0.1), r2 {fit.r_squared:.4f} (>0.95)")
    print(f"C3: mse/b_n @1e6 = {mse[-1]/bn:.3f} vs {target:.3f}, rel {abs(mse[-1]/bn-target)/target:.3%} (<20%)")
    return res


def c4():
    cfg = ExperimentConfig(
        model=sr.Exponential(1.0), alpha=0.9,
        schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
        n_grid=GRID_36, replicates=400, master_seed=SEED, warm_start=False,
    )
    res = run_experiment(cfg, threads=1)
    mse, _ = res.mse_curve("embedded")
    fit = fit_rate(zip(cfg.n_grid, mse))
    c_const = sr.c_alpha_b1(res.oracle, 1.0)
    s22 = sr.clt_covariance_fast(res.oracle, 1.0)[1, 1]
    print(f"C4: slope {fit.slope:.4f} (target -1+-0.1), r2 {fit.r_squared:.4f}")
    print(f"C4: n*mse @1e6 = {1e6 * mse[-1]:.2f} <= C_alpha_b1 = {c_const:.2f} (S22={s22:.2f})")
    return res


def c5():
    cfg = ExperimentConfig(
        model=sr.Uniform(0, 1), alpha=0.5,
        schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
        n_grid=(1000000,), replicates=2000, master_seed=SEED, warm_start=True,
    )
    res = run_experiment(cfg, threads=1)
    cov, se = empirical_clt_cov(res, 1000000)
    s2 = sr.clt_covariance_fast(res.oracle, 1.0)
    for (i, j), name in (((0, 0), "s11"), ((0, 1), "s12"), ((1, 1), "s22")):
        dev_se = abs(cov[i, j] - s2[i, j]) / se[i, j]
        rel = abs(cov[i, j] - s2[i, j]) / abs(s2[i, j])
        print(f"C5: {name} emp {cov[i,j]:.5f} theory {s2[i,j]:.5f} |dev| = {dev_se:.2f} jk-SE, rel {rel:.3%}")
    return res


def c6():
    cfg = ExperimentConfig(
        model=sr.Exponential(1.0), alpha=0.9,
        schedule=sr.StepSchedule(1.0, 0.6, 1.0, 0.75),
        n_grid=(1000000,), replicates=2000, master_seed=SEED, warm_start=True,
    )
    res = run_experiment(cfg, threads=1)
    pairs = res.clt_pairs(1000000)
    var_emp = pairs[:, 1].var(ddof=1)
    target = sr.clt_variance_slow(res.oracle)
    print(f"C6: var = {var_emp:.3f} vs {target:.3f}, rel {abs(var_emp-target)/target:.3%} (<15%)")
    return res


def c7(warm):
    cfg = ExperimentConfig(
        model=sr.Pareto(1.0, 2.2), alpha=0.9,
        schedule=sr.StepSchedule(1.0, 2 / 3, 0.55, 1.0),
        n_grid=(1000000,), replicates=1000, master_seed=SEED, warm_start=warm,
    )
    res = run_experiment(cfg, threads=1)
    rep = compare_variants(res)
    for row in rep.rows:
        if row.pair == "embedded/classical":
            print(f"C7(warm={warm}): ratio {row.mse_ratio:.5f} CI [{row.ci_low:.5f}, {row.ci_high:.5f}] "
                  f"theory verdict {rep.theory.verdict}, threshold {rep.theory.b1_threshold:.4f}")
    return res


def c8():
    cfg = ExperimentConfig(
        model=sr.Uniform(0, 1), alpha=0.5,
        schedule=sr.StepSchedule(1.0, 2 / 3, 1.0, 1.0),
        n_grid=(100, 316, 1000, 3162, 10000, 31623, 100000),
        replicates=500, master_seed=SEED, warm_start=False,
    )
    res = run_experiment(cfg, threads=1)
    m4 = moment_curve(res, "theta", 4)
    fit = fit_rate(zip(cfg.n_grid, m4))
    print(f"C8: 4th-moment slope {fit.slope:.4f} (must be <= {-4/3 + 0.15:.4f})")
    return res


if __name__ == "__main__":
    timed("C2", c2)
    timed("C3", c3)
    timed("C4", c4)
    timed("C5", c5)
    timed("C6", c6)
    timed("C7w", lambda: c7(True))
    timed("C7c", lambda: c7(False))
    timed("C8", c8)
