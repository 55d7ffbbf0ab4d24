"""Monte-Carlo harness: replicate streams, MSE curves, log-log rate fits,
empirical CLT covariances, and paired variant comparison.

Replicates run vectorized (one numpy lane per replicate) with the arithmetic
mirroring :func:`streamrisk.estimators.step` operation for operation, so a
replicate's lane is bit-identical to running its stream through the scalar
recursion.  Each replicate owns the substream (master_seed, experiment_id,
replicate); results are assembled by replicate index, which makes thread count
and completion order irrelevant to the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import asymptotics, distributions
from .distributions import DistributionModel, RiskOracle, substream
from .schedules import StepSchedule

VARIANT_KEYS = ("embedded", "classical", "bardou")
ESTIMATOR_KEYS = ("theta", "theta_bar") + VARIANT_KEYS

_CHUNK = 4096


@dataclass(frozen=True)
class ExperimentConfig:
    model: DistributionModel
    alpha: float
    schedule: StepSchedule
    n_grid: tuple[int, ...]
    replicates: int
    master_seed: int
    warm_start: bool = False
    variants: tuple[str, ...] = VARIANT_KEYS
    experiment_id: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid:
            raise ValueError("n_grid must be non-empty")
        if grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"n_grid must be strictly ascending positive integers, got {grid}")
        object.__setattr__(self, "n_grid", grid)
        if self.replicates < 2:
            raise ValueError(f"replicates must be >= 2, got {self.replicates}")
        unknown = set(self.variants) - set(VARIANT_KEYS)
        if unknown or not self.variants:
            raise ValueError(f"variants must be a non-empty subset of {VARIANT_KEYS}")
        ordered = tuple(k for k in VARIANT_KEYS if k in set(self.variants))
        object.__setattr__(self, "variants", ordered)
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.experiment_id < 0:
            raise ValueError(f"experiment_id must be nonnegative, got {self.experiment_id}")


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass
class ExperimentResult:
    """Per-replicate estimator values at every checkpoint of the n-grid.

    ``estimates[key]`` has shape (len(n_grid), replicates) for each of
    ``theta``, ``theta_bar``, ``embedded``, ``classical``, ``bardou``.
    """

    config: ExperimentConfig
    oracle: RiskOracle
    estimates: dict[str, np.ndarray]

    def truth(self, key: str) -> float:
        if key in ("theta", "theta_bar"):
            return self.oracle.theta_alpha
        if key in VARIANT_KEYS:
            return self.oracle.vartheta_alpha
        raise KeyError(f"unknown estimator key {key!r}")

    def squared_errors(self, key: str) -> np.ndarray:
        err = self.estimates[key] - self.truth(key)
        return err * err

    def mse_curve(self, key: str) -> tuple[np.ndarray, np.ndarray]:
        """Mean squared error and its standard error per checkpoint."""
        sq = self.squared_errors(key)
        r = sq.shape[1]
        return sq.mean(axis=1), sq.std(axis=1, ddof=1) / math.sqrt(r)

    def checkpoint_index(self, n: int) -> int:
        try:
            return self.config.n_grid.index(int(n))
        except ValueError:
            raise ValueError(f"n = {n} is not a checkpoint of {self.config.n_grid}") from None

    def clt_pairs(self, n: int) -> np.ndarray:
        """Replicate values of the rescaled pair at checkpoint ``n``:
        (sqrt(n) (theta_bar - theta_alpha), rescale * (embedded - vartheta_alpha))
        with rescale sqrt(n) in the fast regime and b_n^(-1/2) otherwise."""
        k = self.checkpoint_index(n)
        sched = self.config.schedule
        rescale_q = math.sqrt(n)
        if sched.b_exp == 1.0:
            rescale_sq = math.sqrt(n)
        else:
            rescale_sq = 1.0 / math.sqrt(sched.gain_b(n))
        pairs = np.empty((self.config.replicates, 2))
        pairs[:, 0] = rescale_q * (self.estimates["theta_bar"][k] - self.oracle.theta_alpha)
        pairs[:, 1] = rescale_sq * (self.estimates["embedded"][k] - self.oracle.vartheta_alpha)
        return pairs


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Run all replicates to max(n_grid), recording every estimator at each
    checkpoint.  Results are independent of ``threads``."""
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    oracle = distributions.oracle(config.model, config.alpha)
    n_checkpoints = len(config.n_grid)
    r_total = config.replicates
    estimates = {key: np.empty((n_checkpoints, r_total)) for key in ESTIMATOR_KEYS}

    bounds = _block_bounds(r_total, min(threads, r_total))

    def work(lo: int, hi: int) -> None:
        rngs = [
            substream(config.master_seed, config.experiment_id, r) for r in range(lo, hi)
        ]
        block = _simulate_block(config, oracle, rngs, lo)
        for key in ESTIMATOR_KEYS:
            estimates[key][:, lo:hi] = block[key]

    if len(bounds) == 1:
        work(*bounds[0])
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            futures = [pool.submit(work, lo, hi) for lo, hi in bounds]
            for fut in futures:
                fut.result()
    return ExperimentResult(config=config, oracle=oracle, estimates=estimates)


def _block_bounds(total: int, blocks: int) -> list[tuple[int, int]]:
    base, extra = divmod(total, blocks)
    out = []
    lo = 0
    for i in range(blocks):
        hi = lo + base + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _simulate_block(
    config: ExperimentConfig,
    oracle: RiskOracle,
    rngs: list[np.random.Generator],
    replicate_offset: int,
) -> dict[str, np.ndarray]:
    """Advance a block of replicates to max(n_grid).

    The update sequence below must stay in lockstep with estimators.step:
    same operations in the same order on each lane.
    """
    r_block = len(rngs)
    model = config.model
    sched = config.schedule
    alpha = config.alpha
    inv1ma = 1.0 / (1.0 - alpha)
    grid = config.n_grid
    n_total = grid[-1]

    if config.warm_start:
        theta = np.full(r_block, float(oracle.theta_alpha))
        sq0 = np.full(r_block, float(oracle.vartheta_alpha))
    else:
        u0 = np.array([rng.random() for rng in rngs])
        x0 = np.asarray(model.quantile(u0), dtype=np.float64)
        theta = x0.copy()
        sq0 = x0 / (1.0 - alpha)
    theta_bar = theta.copy()
    sq_e = sq0.copy()
    sq_c = sq0.copy()
    sq_b = sq0.copy()

    out = {key: np.empty((len(grid), r_block)) for key in ESTIMATOR_KEYS}
    live = {"theta": theta, "theta_bar": theta_bar, "embedded": sq_e, "classical": sq_c, "bardou": sq_b}

    tmp = np.empty(r_block)
    tmp2 = np.empty(r_block)
    theta_old = np.empty(r_block)
    ind_q = np.empty(r_block, dtype=bool)
    ind_bar = np.empty(r_block, dtype=bool)
    ind_th = np.empty(r_block, dtype=bool)

    n = 0
    grid_pos = 0
    while n < n_total:
        span = min(_CHUNK, n_total - n)
        u = np.empty((span, r_block))
        for j, rng in enumerate(rngs):
            u[:, j] = rng.random(span)
        x_chunk = np.asarray(model.quantile(u), dtype=np.float64)
        if not np.isfinite(x_chunk).all():
            bad = np.argwhere(~np.isfinite(x_chunk))[0]
            raise RuntimeError(
                f"non-finite draw at replicate {replicate_offset + int(bad[1])}, "
                f"step {n + int(bad[0]) + 1}"
            )
        for t in range(span):
            x = x_chunk[t]
            a_n = sched.gain_a(n if n >= 1 else 1)
            b_n = sched.gain_b(n)

            np.copyto(theta_old, theta)
            np.greater(x, theta_bar, out=ind_bar)
            np.greater(x, theta_old, out=ind_th)
            np.less_equal(x, theta_old, out=ind_q)

            # theta = (theta - ind_q*a_n) + a_n*alpha
            np.multiply(ind_q, a_n, out=tmp)
            theta -= tmp
            theta += a_n * alpha

            # theta_bar = theta_bar*(n/(n+1)) + theta*(1/(n+1))
            cn = n / (n + 1)
            cn1 = 1.0 / (n + 1)
            theta_bar *= cn
            np.multiply(theta, cn1, out=tmp)
            theta_bar += tmp

            # sq = sq*(1-b_n) + (x*ind)*(b_n*inv1ma)
            scale = b_n * inv1ma
            np.multiply(x, ind_bar, out=tmp)
            tmp *= scale
            sq_e *= 1.0 - b_n
            sq_e += tmp
            np.multiply(x, ind_th, out=tmp)
            tmp *= scale
            sq_c *= 1.0 - b_n
            sq_c += tmp

            # bardou target = ((x - theta_old)*inv1ma)*ind_th + theta_old
            np.subtract(x, theta_old, out=tmp2)
            tmp2 *= inv1ma
            np.multiply(tmp2, ind_th, out=tmp2)
            tmp2 += theta_old
            sq_b *= 1.0 - b_n
            tmp2 *= b_n
            sq_b += tmp2

            n += 1
            if grid_pos < len(grid) and n == grid[grid_pos]:
                for key, arr in live.items():
                    out[key][grid_pos] = arr
                grid_pos += 1
        for key, arr in live.items():
            if not np.isfinite(arr).all():
                bad_r = int(np.argwhere(~np.isfinite(arr))[0][0])
                raise RuntimeError(
                    f"estimator {key!r} became non-finite in replicate "
                    f"{replicate_offset + bad_r} by step {n}"
                )
    return out


def fit_rate(points: Iterable[tuple[float, float]]) -> RateFit:
    """Ordinary least squares of log(mse) on log(n)."""
    pts = [(float(n), float(m)) for n, m in points]
    if len(pts) < 3:
        raise ValueError(f"rate fit needs at least 3 points, got {len(pts)}")
    if any(m <= 0 for _, m in pts):
        raise ValueError("rate fit requires strictly positive mse values")
    if any(n <= 0 for n, _ in pts):
        raise ValueError("rate fit requires strictly positive n values")
    logn = np.log([n for n, _ in pts])
    logm = np.log([m for _, m in pts])
    slope, intercept = np.polyfit(logn, logm, 1)
    fitted = slope * logn + intercept
    ss_res = float(np.sum((logm - fitted) ** 2))
    ss_tot = float(np.sum((logm - logm.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(slope=float(slope), intercept=float(intercept), r_squared=r2)


def _jackknife_se(loo_values: np.ndarray) -> float:
    r = loo_values.shape[0]
    centered = loo_values - loo_values.mean()
    return math.sqrt((r - 1) / r * float(np.sum(centered * centered)))


def _loo_cov(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Leave-one-out sample covariances of the pair (x, y)."""
    r = x.shape[0]
    sx, sy, sxy = x.sum(), y.sum(), (x * y).sum()
    m = r - 1
    mean_x = (sx - x) / m
    mean_y = (sy - y) / m
    cross = sxy - x * y
    return (cross - m * mean_x * mean_y) / (m - 1)


def empirical_clt_cov(result: ExperimentResult, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample covariance of the rescaled CLT pair at checkpoint ``n`` across
    replicates, with jackknife standard errors per entry."""
    pairs = result.clt_pairs(n)
    r = pairs.shape[0]
    if r < 30:
        raise ValueError(f"replicates >= 30 required for CLT covariance, got {r}")
    cov = np.cov(pairs, rowvar=False, ddof=1)
    se = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            se[i, j] = _jackknife_se(_loo_cov(pairs[:, i], pairs[:, j]))
    return cov, se


@dataclass(frozen=True)
class VariantComparisonRow:
    n: int
    pair: str
    mse_ratio: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class CompareReport:
    rows: tuple[VariantComparisonRow, ...]
    theory: asymptotics.ComparisonReport


def compare_variants(result: ExperimentResult, z: float = 1.959963984540054) -> CompareReport:
    """Paired MSE ratios between variants per checkpoint.

    Ratios are paired through common random numbers (all variants consumed the
    same draws); confidence intervals come from leave-one-replicate-out
    jackknife at the given normal quantile (default 95%).
    """
    present = result.config.variants
    if len(present) < 2:
        raise ValueError("variant comparison requires at least 2 variants")
    pairs = [(a, b) for i, a in enumerate(present) for b in present[i + 1 :]]
    sched = result.config.schedule
    theory = asymptotics.variance_comparison(result.oracle, sched.b1, sched.b_exp)

    rows: list[VariantComparisonRow] = []
    for a, b in pairs:
        sq_a = result.squared_errors(a)
        sq_b = result.squared_errors(b)
        for k, n in enumerate(result.config.n_grid):
            ea, eb = sq_a[k], sq_b[k]
            sa, sb = ea.sum(), eb.sum()
            ratio = (sa / ea.shape[0]) / (sb / eb.shape[0])
            loo = (sa - ea) / (sb - eb)
            se = _jackknife_se(loo)
            rows.append(
                VariantComparisonRow(
                    n=n,
                    pair=f"{a}/{b}",
                    mse_ratio=float(ratio),
                    ci_low=float(ratio - z * se),
                    ci_high=float(ratio + z * se),
                )
            )
    return CompareReport(rows=tuple(rows), theory=theory)


def moment_curve(result: ExperimentResult, key: str, power: int) -> np.ndarray:
    """Empirical E|estimate - truth|^power per checkpoint (used for the
    fourth-moment decay check of the raw quantile iterate)."""
    err = np.abs(result.estimates[key] - result.truth(key))
    return (err**power).mean(axis=1)
