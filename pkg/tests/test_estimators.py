import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import streamrisk as sr
from streamrisk.distributions import sample, substream
from streamrisk.estimators import init, run_stream, step
from streamrisk.experiments import ExperimentConfig, run_experiment, _simulate_block
from streamrisk.schedules import StepSchedule

FAST = StepSchedule(a1=1.0, a_exp=2 / 3, b1=1.0, b_exp=1.0)


def test_init_fields():
    st0 = init(0.5, FAST, theta0=0.0, sq0=0.0)
    assert st0.n == 0
    assert st0.theta == st0.theta_bar == 0.0
    assert st0.sq_embedded == st0.sq_classical == st0.sq_bardou == 0.0


def test_init_warm_start_passthrough():
    st0 = init(0.9, FAST, theta0=2.302585, sq0=3.302585)
    assert st0.theta == 2.302585 and st0.sq_embedded == 3.302585


def test_init_rejects_bad_alpha_and_schedule():
    with pytest.raises(ValueError):
        init(0.0, FAST, 0.0, 0.0)
    with pytest.raises(ValueError):
        init(0.5, StepSchedule(1.0, 0.4, 1.0, 0.8), 0.0, 0.0)  # chain: a <= 1/2
    with pytest.raises(ValueError):
        init(0.5, FAST, math.nan, 0.0)


def test_single_step_sets_cesaro_to_first_iterate():
    st0 = init(0.5, FAST, theta0=7.0, sq0=0.0)
    step(st0, 1.25)
    assert st0.n == 1
    assert st0.theta_bar == st0.theta


def test_quantile_step_above():
    # a_1 = a1 = 0.5, indicator 0: theta <- 0 - 0.5*(0 - 0.5) = 0.25
    sched = StepSchedule(a1=0.5, a_exp=2 / 3, b1=1.0, b_exp=1.0)
    st0 = init(0.5, sched, 0.0, 0.0)
    step(st0, 1.0)
    assert st0.theta == pytest.approx(0.25, abs=1e-15)


def test_quantile_step_below():
    sched = StepSchedule(a1=0.5, a_exp=2 / 3, b1=1.0, b_exp=1.0)
    st0 = init(0.5, sched, 0.0, 0.0)
    step(st0, -1.0)
    assert st0.theta == pytest.approx(-0.25, abs=1e-15)


def test_embedded_step_arithmetic():
    # b_0 = b1 = 0.1, 1-alpha = 0.1: target 5/0.1 = 50, sq <- 3 + 0.1*(50-3) = 7.7
    sched = StepSchedule(a1=1.0, a_exp=2 / 3, b1=0.1, b_exp=1.0)
    st0 = init(0.9, sched, theta0=2.0, sq0=3.0)
    step(st0, 5.0)
    assert st0.sq_embedded == pytest.approx(7.7, rel=1e-15)


def test_three_step_golden_trace():
    st0 = init(0.5, FAST, 0.0, 0.0)
    for x in (0.7, 0.2, 0.9):
        step(st0, x)
    assert st0.theta == pytest.approx(2.0 ** (-2.0 / 3.0) / 2.0, rel=1e-15)
    assert st0.theta_bar == pytest.approx((0.5 + 0.0 + 2.0 ** (-2.0 / 3.0) / 2.0) / 3.0, rel=1e-15)
    assert st0.sq_embedded == pytest.approx(16.0 / 15.0, rel=1e-15)
    assert st0.sq_classical == pytest.approx(16.0 / 15.0, rel=1e-15)
    assert st0.sq_bardou == pytest.approx(37.0 / 30.0, rel=1e-15)


def test_rejects_non_finite_observation_unchanged_state():
    st0 = init(0.5, FAST, 1.0, 2.0)
    before = dataclasses.replace(st0)
    with pytest.raises(ValueError, match="non-finite"):
        step(st0, math.inf)
    assert st0 == before


def test_run_stream_empty_is_identity():
    st0 = init(0.5, FAST, 1.0, 2.0)
    before = dataclasses.replace(st0)
    assert run_stream(st0, []) == before


def test_run_stream_single_equals_step():
    a = init(0.5, FAST, 0.3, 0.4)
    b = init(0.5, FAST, 0.3, 0.4)
    run_stream(a, [0.9])
    step(b, 0.9)
    assert a == b


def test_run_stream_error_carries_index():
    st0 = init(0.5, FAST, 0.0, 0.0)
    with pytest.raises(ValueError, match="observation 2"):
        run_stream(st0, [0.1, 0.2, math.nan])
    assert st0.n == 2


def test_run_stream_trace_rows():
    st0 = init(0.5, FAST, 0.0, 0.0)
    final, rows = run_stream(st0, [0.7, 0.2, 0.9, 0.4], checkpoints=[1, 3])
    assert [r[0] for r in rows] == [1, 3]
    assert rows[1][1] == pytest.approx(2.0 ** (-2.0 / 3.0) / 2.0, rel=1e-15)
    assert final.n == 4


@given(
    xs=st.lists(st.floats(-10, 10), min_size=1, max_size=60),
    alpha=st.floats(0.05, 0.95),
)
@settings(max_examples=150)
def test_cesaro_identity(xs, alpha):
    state = init(alpha, FAST, 0.0, 0.0)
    thetas = []
    for x in xs:
        step(state, x)
        thetas.append(state.theta)
    assert state.theta_bar == pytest.approx(sum(thetas) / len(thetas), rel=1e-12, abs=1e-12)


@given(
    xs=st.lists(st.floats(-10, 10), min_size=1, max_size=60),
    alpha=st.floats(0.05, 0.95),
    b1=st.floats(0.05, 1.0),
)
@settings(max_examples=150)
def test_bounded_increments_and_convex_combination(xs, alpha, b1):
    sched = StepSchedule(a1=1.0, a_exp=2 / 3, b1=b1, b_exp=1.0)
    state = init(alpha, sched, 0.0, 0.0)
    inv1ma = 1.0 / (1.0 - alpha)
    for x in xs:
        n = state.n
        a_n = sched.gain_a(max(n, 1))
        b_n = sched.gain_b(n)
        prev_theta = state.theta
        prev = (state.sq_embedded, state.sq_classical, state.sq_bardou)
        targets = (
            (x * (1.0 if x > state.theta_bar else 0.0)) * inv1ma,
            (x * (1.0 if x > state.theta else 0.0)) * inv1ma,
            state.theta + ((x - state.theta) * inv1ma) * (1.0 if x > state.theta else 0.0),
        )
        step(state, x)
        assert abs(state.theta - prev_theta) <= a_n * max(alpha, 1 - alpha) * (1 + 1e-12)
        if b_n <= 1.0:
            for new, old, tgt in zip(
                (state.sq_embedded, state.sq_classical, state.sq_bardou), prev, targets
            ):
                lo, hi = min(old, tgt), max(old, tgt)
                pad = 4 * math.ulp(max(abs(lo), abs(hi), 1.0))
                assert lo - pad <= new <= hi + pad


def test_determinism_same_seed_same_state():
    model = sr.Exponential(1.0)

    def run():
        rng = substream(11, 0, 0)
        state = init(0.9, FAST, 1.0, 10.0)
        for _ in range(500):
            step(state, sample(model, rng))
        return state

    assert run() == run()


@pytest.mark.parametrize("warm", [True, False])
@pytest.mark.parametrize(
    "model", [sr.Uniform(0, 1), sr.Exponential(1.0), sr.Pareto(1.0, 2.2)], ids=str
)
def test_vectorized_engine_matches_scalar_stream(model, warm):
    sched = StepSchedule(a1=1.0, a_exp=0.6, b1=0.8, b_exp=0.75)
    cfg = ExperimentConfig(
        model=model,
        alpha=0.85,
        schedule=sched,
        n_grid=(3, 17, 5000),
        replicates=3,
        master_seed=314,
        warm_start=warm,
    )
    oracle = sr.oracle(model, cfg.alpha)
    rngs = [substream(314, 0, r) for r in range(3)]
    block = _simulate_block(cfg, oracle, rngs, 0)
    for r in range(3):
        rng = substream(314, 0, r)
        if warm:
            state = init(cfg.alpha, sched, oracle.theta_alpha, oracle.vartheta_alpha)
        else:
            x0 = sample(model, rng)
            state = init(cfg.alpha, sched, x0, x0 / (1.0 - cfg.alpha))
        for k, n_target in enumerate(cfg.n_grid):
            while state.n < n_target:
                step(state, sample(model, rng))
            assert block["theta"][k, r] == state.theta
            assert block["theta_bar"][k, r] == state.theta_bar
            assert block["embedded"][k, r] == state.sq_embedded
            assert block["classical"][k, r] == state.sq_classical
            assert block["bardou"][k, r] == state.sq_bardou


def test_quantile_consistency_desk_scale():
    # Uniform(0,1), alpha=0.5: median absolute error of theta at n=1e5 over
    # 200 replicates stays below 0.01.
    cfg = ExperimentConfig(
        model=sr.Uniform(0, 1),
        alpha=0.5,
        schedule=FAST,
        n_grid=(100000,),
        replicates=200,
        master_seed=77,
        warm_start=False,
    )
    res = run_experiment(cfg)
    errors = np.abs(res.estimates["theta"][0] - 0.5)
    assert np.median(errors) < 0.01


def test_superquantile_hits_oracle_on_most_replicates():
    # 1e6 Exponential(1) draws at alpha=0.9: embedded estimate within 0.05 of
    # the oracle superquantile for >= 95% of 100 replicates.
    cfg = ExperimentConfig(
        model=sr.Exponential(1.0),
        alpha=0.9,
        schedule=FAST,
        n_grid=(1000000,),
        replicates=100,
        master_seed=88,
        warm_start=False,
    )
    res = run_experiment(cfg, threads=4)
    hits = np.abs(res.estimates["embedded"][0] - res.oracle.vartheta_alpha) < 0.05
    assert hits.mean() >= 0.95
