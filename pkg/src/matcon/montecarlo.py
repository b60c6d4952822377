"""Seeded Monte Carlo estimation of norm moments and report assembly.

Determinism contract: every estimate is a pure function of (model, config).
Sample values come from the counter RNG, so they do not depend on how the
index range is chunked; chunk size is fixed by the model alone, partial
results are written back by index, and reductions run in index order.  The
MATCON_THREADS environment variable caps the worker count and affects speed
only, never results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import BoundInputs, main_interval
from .linalg import HermitianMatrix, spectral_norm
from .models import (
    IndependentSumModel,
    SamplerPlan,
    analytic_max_sq,
    analytic_second_moments,
    center,
    seed_value,
)

MEAN = "mean"
MEDIAN_OF_MEANS = "median_of_means"

# coefficient cells (samples x summands) alloted to one chunk
_CHUNK_BUDGET = 1 << 21
_MAX_CHUNK = 128


def default_blocks(samples: int) -> int:
    """Largest power of two <= 16 dividing the sample count."""
    b = 16
    while b > 1 and samples % b:
        b //= 2
    return b


@dataclass(frozen=True)
class MCConfig:
    samples: int
    seed: int
    estimator: str = MEAN
    blocks: int | None = None
    k: float = 3.0

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 samples")
        if self.estimator not in (MEAN, MEDIAN_OF_MEANS):
            raise ValueError(f"estimator must be {MEAN!r} or {MEDIAN_OF_MEANS!r}")
        if self.k < 0:
            raise ValueError("confidence multiplier k must be nonnegative")
        if self.estimator == MEDIAN_OF_MEANS:
            blocks = self.blocks if self.blocks is not None else default_blocks(self.samples)
            if blocks < 1 or self.samples % blocks:
                raise ValueError("blocks must divide the sample count")
            object.__setattr__(self, "blocks", blocks)
        elif self.blocks is not None:
            raise ValueError("blocks only apply to the median-of-means estimator")


@dataclass(frozen=True)
class Estimate:
    """mean with a spread measure: the standard error for the plain mean,
    or the inter-block median absolute deviation for median-of-means
    (std_error is None there; the CLT-based error is undefined for the
    heavy-tailed models the estimator exists for)."""

    mean: float
    std_error: float | None
    spread: float
    samples: int
    seed: int
    estimator: str


def _thread_count() -> int:
    raw = os.environ.get("MATCON_THREADS")
    if raw is None:
        return 1
    count = int(raw)
    if count < 1:
        raise ValueError("MATCON_THREADS must be a positive integer")
    return count


def _chunk_size(n_summands: int) -> int:
    return max(1, min(_MAX_CHUNK, _CHUNK_BUDGET // max(1, n_summands)))


def collect_samples(model: IndependentSumModel, cfg: MCConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample arrays (||Z||, max_i ||S_i||^2), in sample-index order."""
    plan = SamplerPlan(model)
    seed = seed_value(cfg.seed)
    samples = cfg.samples
    chunk = _chunk_size(model.n_summands)
    norms = np.empty(samples)
    max_sq = np.empty(samples)

    def run(start: int) -> None:
        stop = min(start + chunk, samples)
        z, m = plan.realize(seed, np.arange(start, stop, dtype=np.uint64))
        if model.d1 <= model.d2:
            gram = z @ z.conj().transpose(0, 2, 1)
        else:
            gram = z.conj().transpose(0, 2, 1) @ z
        gram = (gram + gram.conj().transpose(0, 2, 1)) / 2.0
        top = np.linalg.eigvalsh(gram)[:, -1]
        norms[start:stop] = np.sqrt(np.clip(top, 0.0, None))
        max_sq[start:stop] = m

    starts = range(0, samples, chunk)
    threads = _thread_count()
    if threads <= 1:
        for s in starts:
            run(s)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, starts))
    return norms, max_sq


def _estimate(values: np.ndarray, cfg: MCConfig) -> Estimate:
    seed = seed_value(cfg.seed)
    # a constant sample is reported exactly: repeated-addition rounding in the
    # accumulator must not manufacture a nonzero standard error
    constant = bool(np.all(values == values[0]))
    if cfg.estimator == MEAN:
        if constant:
            mean, se = float(values[0]), 0.0
        else:
            mean = float(np.mean(values))
            se = float(np.std(values, ddof=1) / math.sqrt(len(values)))
        return Estimate(
            mean=mean,
            std_error=se,
            spread=se,
            samples=len(values),
            seed=seed,
            estimator=MEAN,
        )
    if constant:
        med, mad = float(values[0]), 0.0
    else:
        block_means = values.reshape(cfg.blocks, -1).mean(axis=1)
        med = float(np.median(block_means))
        mad = float(np.median(np.abs(block_means - med)))
    return Estimate(
        mean=med,
        std_error=None,
        spread=mad,
        samples=len(values),
        seed=seed,
        estimator=MEDIAN_OF_MEANS,
    )


def estimate_norm_moment(model: IndependentSumModel, r: int, cfg: MCConfig) -> Estimate:
    """Estimate of E||Z||^r for r in {1, 2}."""
    if r not in (1, 2):
        raise ValueError("r must be 1 or 2")
    norms, _ = collect_samples(model, cfg)
    return _estimate(norms**r, cfg)


def estimate_max_summand_sq(model: IndependentSumModel, cfg: MCConfig) -> Estimate:
    """Estimate of E max_i ||S_i||^2, the square of the large-deviation
    parameter."""
    _, max_sq = collect_samples(model, cfg)
    return _estimate(max_sq, cfg)


def empirical_second_moments(model: IndependentSumModel, cfg: MCConfig):
    """Sample means of ZZ* and Z*Z, symmetrized; needs a centered model."""
    if not model.centered:
        raise ValueError("model is not centered; apply center() first")
    plan = SamplerPlan(model)
    seed = seed_value(cfg.seed)
    chunk = _chunk_size(model.n_summands)
    starts = list(range(0, cfg.samples, chunk))
    partials: list[tuple[np.ndarray, np.ndarray] | None] = [None] * len(starts)

    def run(slot: int) -> None:
        start = starts[slot]
        stop = min(start + chunk, cfg.samples)
        z, _ = plan.realize(seed, np.arange(start, stop, dtype=np.uint64))
        left = np.einsum("kab,kcb->ac", z, z.conj(), optimize=False)
        right = np.einsum("kba,kbc->ac", z.conj(), z, optimize=False)
        partials[slot] = (left, right)

    threads = _thread_count()
    if threads <= 1:
        for i in range(len(starts)):
            run(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(len(starts))))

    left = np.zeros((model.d1, model.d1), dtype=np.complex128)
    right = np.zeros((model.d2, model.d2), dtype=np.complex128)
    for part in partials:
        left += part[0]
        right += part[1]
    left /= cfg.samples
    right /= cfg.samples
    left = (left + left.conj().T) / 2.0
    right = (right + right.conj().T) / 2.0
    return HermitianMatrix(left), HermitianMatrix(right)


@dataclass(frozen=True)
class BoundReport:
    """Everything the report row needs.

    For an uncentered input model the bounds and estimates describe the
    centered sum Z = R - E R; mean_norm records ||E R|| and
    (envelope_lower, envelope_upper) the triangle-inequality envelope
    [max(0, ||E R|| - upper), ||E R|| + upper] for (E||R||^2)^(1/2).
    Centered models carry None in those fields.
    """

    model_name: str
    d1: int
    d2: int
    n: int
    v: float
    v_provenance: str
    L: float
    L_provenance: str
    C: float
    lower: float
    upper: float
    mc_norm: Estimate
    mc_sqnorm: Estimate
    sandwich_ok: bool
    k: float
    samples: int
    seed: int
    mean_norm: float | None = None
    envelope_lower: float | None = None
    envelope_upper: float | None = None


def bound_report(model: IndependentSumModel, cfg: MCConfig) -> BoundReport:
    """Assemble parameters, interval, and Monte Carlo estimates.

    v comes from the exact per-summand moments (all built-in families have
    them); L is exact when every summand has finite ||S||^2 support and
    Monte Carlo otherwise; sandwich_ok checks
    lower - k*spread <= sqrt(mc_sqnorm.mean) <= upper + k*spread.
    """
    work = model
    mean_norm = None
    if not model.centered:
        work, mean_sum = center(model)
        mean_norm = spectral_norm(mean_sum)

    moments = analytic_second_moments(work)
    if moments is not None:
        v = max(spectral_norm(moments[0]), spectral_norm(moments[1]))
        v_prov = "analytic"
    else:  # no built-in family hits this; kept for future summand kinds
        v = max(map(spectral_norm, empirical_second_moments(work, cfg)))
        v_prov = "empirical"

    norms, max_sq = collect_samples(work, cfg)
    exact_max = analytic_max_sq(work)
    if exact_max is not None:
        L = math.sqrt(max(exact_max, 0.0))
        L_prov = "analytic"
    else:
        L = math.sqrt(max(_estimate(max_sq, cfg).mean, 0.0))
        L_prov = "montecarlo"

    interval = main_interval(BoundInputs(v=v, L=L, d1=work.d1, d2=work.d2))
    mc_norm = _estimate(norms, cfg)
    mc_sqnorm = _estimate(norms**2, cfg)
    root = math.sqrt(max(mc_sqnorm.mean, 0.0))
    slack = cfg.k * mc_sqnorm.spread
    ok = interval.lower - slack <= root <= interval.upper + slack

    env_lower = env_upper = None
    if mean_norm is not None:
        env_lower = max(0.0, mean_norm - interval.upper)
        env_upper = mean_norm + interval.upper

    return BoundReport(
        model_name=model.name,
        d1=work.d1,
        d2=work.d2,
        n=model.n,
        v=v,
        v_provenance=v_prov,
        L=L,
        L_provenance=L_prov,
        C=interval.constant,
        lower=interval.lower,
        upper=interval.upper,
        mc_norm=mc_norm,
        mc_sqnorm=mc_sqnorm,
        sandwich_ok=bool(ok),
        k=cfg.k,
        samples=cfg.samples,
        seed=seed_value(cfg.seed),
        mean_norm=mean_norm,
        envelope_lower=env_lower,
        envelope_upper=env_upper,
    )
