"""Stochastic oracle: simulate finite ensembles and form the protocol estimators.

Each trial draws one ensemble of N copies from the scheme's Gaussian
readout channels, forms the mean and (noise-corrected, Bessel-corrected)
variance estimators, and contributes one squared error to each distance
measure.  Per-trial random streams are derived from (seed, trial index) by
a documented deterministic split:

* python engine -- ``default_rng(SeedSequence(entropy=seed, spawn_key=(t,)))``
* compiled engine -- xoshiro256++ state filled by a splitmix64 sequence
  keyed on (seed, t), with Box-Muller normals (see ``_trials.pyx``)

Each engine is bit-reproducible on its own; the two are validated against
each other and the analytics statistically, not bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import EXACT_SMALL_SAMPLE, EnsembleSpec
from .schemes import (
    ArthursKelly,
    Heterodyne,
    Homodyne,
    ModifiedAK,
    Sequential,
    readout_distributions,
)

try:
    from . import _trials as _compiled
except ImportError:  # pure-python fallback only
    _compiled = None

ENGINES = ("auto", "compiled", "python")


def compiled_available():
    """True when the compiled trial kernel was built and imports."""
    return _compiled is not None


@dataclass(frozen=True)
class TrialConfig:
    """A Monte Carlo run: scheme, ensemble, trial count and seed."""

    scheme: object
    ens: EnsembleSpec
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trial count must be >= 1, got {self.trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Channel:
    """One Gaussian readout channel of the ensemble protocol."""

    label: str
    quadrature: str  # "q" or "p"
    mean: float
    variance: float
    noise: float  # known added noise, subtracted from the sample variance
    draws: int  # copies measured through this channel


def channel_plan(scheme, state, n_copies):
    """Per-channel sampling plan for one ensemble of ``n_copies`` copies.

    Homodyne splits the ensemble between the two quadratures; the
    sequential scheme splits it between the two orderings, each copy
    yielding one meter draw and one homodyne draw (independent: the joint
    covariance has no meter/system cross term between the two measured
    coordinates); heterodyne and the Arthurs-Kelly variants read both
    quadratures from every copy.
    """
    if isinstance(scheme, Homodyne):
        if n_copies % 2 != 0:
            raise ValueError("homodyne needs an even number of copies")
        half = n_copies // 2
        ch = readout_distributions(scheme, state)
        return (
            Channel("homodyne_q", "q", ch.q_channel.mean, ch.q_channel.variance, 0.0, half),
            Channel("homodyne_p", "p", ch.p_channel.mean, ch.p_channel.variance, 0.0, half),
        )
    if isinstance(scheme, Sequential):
        if n_copies % 2 != 0:
            raise ValueError("the sequential scheme needs an even number of copies")
        half = n_copies // 2
        plan = []
        for order in ("q_then_p", "p_then_q"):
            ch = readout_distributions(Sequential(scheme.meter, order), state)
            meter_first = order == "q_then_p"
            plan.append(
                Channel(
                    f"{order}_meter",
                    "q" if meter_first else "p",
                    ch.q_channel.mean if meter_first else ch.p_channel.mean,
                    ch.q_channel.variance if meter_first else ch.p_channel.variance,
                    ch.added_noise_q if meter_first else ch.added_noise_p,
                    half,
                )
            )
            plan.append(
                Channel(
                    f"{order}_homodyne",
                    "p" if meter_first else "q",
                    ch.p_channel.mean if meter_first else ch.q_channel.mean,
                    ch.p_channel.variance if meter_first else ch.q_channel.variance,
                    ch.added_noise_p if meter_first else ch.added_noise_q,
                    half,
                )
            )
        return tuple(plan)
    if isinstance(scheme, (Heterodyne, ArthursKelly, ModifiedAK)):
        ch = readout_distributions(scheme, state)
        return (
            Channel("q", "q", ch.q_channel.mean, ch.q_channel.variance, ch.added_noise_q, n_copies),
            Channel("p", "p", ch.p_channel.mean, ch.p_channel.variance, ch.added_noise_p, n_copies),
        )
    raise TypeError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class OutcomeTable:
    """Readout outcomes of one simulated ensemble, one array per channel."""

    channels: tuple  # Channel descriptors
    outcomes: tuple  # matching 1-D float arrays


def sample_outcomes(scheme, state, n_copies, rng):
    """Draw the readout outcomes of one ensemble.

    Args:
        scheme: scheme dataclass instance
        state (GaussianState): 1-mode state being estimated
        n_copies (int): ensemble size (even for half-ensemble schemes)
        rng (numpy.random.Generator): source random stream

    Returns:
        OutcomeTable
    """
    plan = channel_plan(scheme, state, n_copies)
    return OutcomeTable(channels=plan, outcomes=_draw(plan, rng))


def _draw(plan, rng):
    return tuple(
        ch.mean + np.sqrt(ch.variance) * rng.standard_normal(ch.draws) for ch in plan
    )


@dataclass(frozen=True)
class PointEstimates:
    """Per-ensemble estimates of the state's means and quadrature variances."""

    q_mean: float
    p_mean: float
    var_q: float
    var_p: float
    degenerate: bool  # some channel had zero sample variance


def point_estimates(outcomes, scheme=None):
    """Estimators applied to one ensemble's outcome table.

    Means are equal-weight averages of the per-channel sample means;
    variance estimates subtract each channel's known added noise from its
    Bessel-corrected sample variance (unbiased for the state's quadrature
    variances) and average per quadrature.  ``scheme`` is accepted for
    interface symmetry; the outcome table already carries its channels.
    """
    means = {"q": [], "p": []}
    variances = {"q": [], "p": []}
    degenerate = False
    for ch, draws in zip(outcomes.channels, outcomes.outcomes):
        if draws.size == 0:
            raise ValueError(f"channel {ch.label!r} has no outcomes")
        means[ch.quadrature].append(float(draws.mean()))
        if draws.size < 2:
            raise ValueError(
                f"channel {ch.label!r} has fewer than 2 outcomes; cannot estimate variance"
            )
        sample_var = float(draws.var(ddof=1))
        if sample_var == 0.0:
            degenerate = True
        variances[ch.quadrature].append(sample_var - ch.noise)
    if not means["q"] or not means["p"]:
        raise ValueError("outcome table must cover both quadratures")
    return PointEstimates(
        q_mean=float(np.mean(means["q"])),
        p_mean=float(np.mean(means["p"])),
        var_q=float(np.mean(variances["q"])),
        var_p=float(np.mean(variances["p"])),
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class EmpiricalReport:
    """Monte Carlo estimates of the distance measures with standard errors."""

    d1_hat: float
    d2_hat: float
    se_d1: float
    se_d2: float
    trials: int
    convention: str = EXACT_SMALL_SAMPLE
    q_mean_hat: float = 0.0
    p_mean_hat: float = 0.0
    se_q_mean: float = 0.0
    se_p_mean: float = 0.0
    degenerate_trials: int = 0
    engine: str = "python"


def _trial_stream(seed, index):
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _run_python(plan, truth, seed, trials):
    # Inlined per-trial estimator math; draws one standard-normal block per
    # trial, which consumes the stream exactly like the per-channel calls in
    # sample_outcomes (standard_normal batching is position-transparent).
    q0, p0, vq, vp = truth
    n_ch = len(plan)
    mean = np.array([ch.mean for ch in plan])
    sd = np.array([np.sqrt(ch.variance) for ch in plan])
    noise = np.array([ch.noise for ch in plan])
    counts = [ch.draws for ch in plan]
    bounds = np.concatenate([[0], np.cumsum(counts)])
    total = int(bounds[-1])
    is_q = [ch.quadrature == "q" for ch in plan]
    n_q = sum(is_q)
    n_p = n_ch - n_q

    d1 = np.empty(trials)
    d2 = np.empty(trials)
    qh = np.empty(trials)
    ph = np.empty(trials)
    degenerate = 0
    for t in range(trials):
        z = _trial_stream(seed, t).standard_normal(total)
        q_est = p_est = vq_est = vp_est = 0.0
        trial_degenerate = False
        for c in range(n_ch):
            zc = z[bounds[c] : bounds[c + 1]]
            n = counts[c]
            sz = zc.sum()
            szz = zc @ zc
            sample_mean = mean[c] + sd[c] * (sz / n)
            sample_var = sd[c] * sd[c] * (szz - sz * sz / n) / (n - 1)
            if sample_var == 0.0:
                trial_degenerate = True
            if is_q[c]:
                q_est += sample_mean
                vq_est += sample_var - noise[c]
            else:
                p_est += sample_mean
                vp_est += sample_var - noise[c]
        q_est /= n_q
        p_est /= n_p
        vq_est /= n_q
        vp_est /= n_p
        degenerate += trial_degenerate
        d1[t] = (q0 - q_est) ** 2 + (p0 - p_est) ** 2
        d2[t] = (vq - vq_est) ** 2 + (vp - vp_est) ** 2
        qh[t] = q_est
        ph[t] = p_est
    return d1, d2, qh, ph, degenerate


def _run_compiled(plan, truth, seed, trials):
    q0, p0, vq, vp = truth
    mean = np.array([ch.mean for ch in plan])
    sd = np.array([np.sqrt(ch.variance) for ch in plan])
    noise = np.array([ch.noise for ch in plan])
    draws = np.array([ch.draws for ch in plan], dtype=np.int64)
    is_q = np.array([ch.quadrature == "q" for ch in plan], dtype=np.uint8)
    d1 = np.empty(trials)
    d2 = np.empty(trials)
    qh = np.empty(trials)
    ph = np.empty(trials)
    degenerate = _compiled.run_trials(
        mean, sd, noise, draws, is_q, q0, p0, vq, vp, int(seed), trials, d1, d2, qh, ph
    )
    return d1, d2, qh, ph, degenerate


def empirical_distances(cfg, engine="auto"):
    """Monte Carlo (d1, d2) with standard errors over independent trials.

    Args:
        cfg (TrialConfig): run configuration
        engine (str): "auto" (compiled when built), "compiled" or "python"

    Returns:
        EmpiricalReport: estimates under the exact_small_sample convention
    """
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine == "compiled" and _compiled is None:
        raise RuntimeError("compiled trial kernel is not available in this installation")
    resolved = "python" if engine == "python" or _compiled is None else "compiled"

    state = cfg.ens.state
    plan = channel_plan(cfg.scheme, state, cfg.ens.N)
    for ch in plan:
        if ch.draws < 2:
            raise ValueError(
                f"channel {ch.label!r} would see {ch.draws} copies; "
                "variance estimation needs at least 2"
            )
    truth = (state.mean[0], state.mean[1], state.cov[0, 0], state.cov[1, 1])
    runner = _run_compiled if resolved == "compiled" else _run_python
    d1, d2, qh, ph, degenerate = runner(plan, truth, cfg.seed, cfg.trials)

    def se(x):
        return float(x.std(ddof=1) / np.sqrt(x.size)) if x.size > 1 else 0.0

    return EmpiricalReport(
        d1_hat=float(d1.mean()),
        d2_hat=float(d2.mean()),
        se_d1=se(d1),
        se_d2=se(d2),
        trials=cfg.trials,
        q_mean_hat=float(qh.mean()),
        p_mean_hat=float(ph.mean()),
        se_q_mean=se(qh),
        se_p_mean=se(ph),
        degenerate_trials=int(degenerate),
        engine=resolved,
    )
