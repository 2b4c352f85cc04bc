"""Distance measures for mean and variance estimation over finite ensembles.

d1 is the summed mean-square error of the quadrature-mean estimators, d2
the same for the quadrature-variance estimators.  Closed forms follow the
per-scheme channel variances; the sequential scheme's d2 uses the estimator
re-derivation (per-order unbiased sample variances averaged across the two
orderings) rather than the frequently quoted closed form, which is
inconsistent with the scheme's optimum equalling heterodyne; that form
stays available behind ``paper_verbatim`` for comparison.

Two variance-of-variance conventions are exposed: "paper_asymptotic" uses
Var(s^2) = 2 sigma^4 / M, "exact_small_sample" the Bessel-corrected
2 sigma^4 / (M - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .schemes import (
    ArthursKelly,
    Heterodyne,
    Homodyne,
    MeterConfig,
    ModifiedAK,
    Sequential,
    added_noise,
)
from .states import GaussianState, squeezed_coherent_thermal

PAPER_ASYMPTOTIC = "paper_asymptotic"
EXACT_SMALL_SAMPLE = "exact_small_sample"
CONVENTIONS = (PAPER_ASYMPTOTIC, EXACT_SMALL_SAMPLE)

#: Bracket for the bisection oracle locating the critical squeezing.
_RC_BRACKET = (0.0, 5.0)


@dataclass(frozen=True)
class EnsembleSpec:
    """A finite ensemble: N identically prepared copies of a 1-mode state."""

    N: int
    state: GaussianState

    def __post_init__(self):
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError(f"ensemble size must be an even integer >= 2, got {self.N}")
        if self.state.modes != 1:
            raise ValueError("ensemble state must be single-mode")


@dataclass(frozen=True)
class AverageSpec:
    """Uniform squeezing-parameter average at fixed thermal occupancy."""

    nbar: float
    N: int
    r_lo: float = -1.0
    r_hi: float = 1.0

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError(f"mean photon number must be >= 0, got {self.nbar}")
        if not self.r_lo < self.r_hi:
            raise ValueError(f"need r_lo < r_hi, got ({self.r_lo}, {self.r_hi})")
        if self.N < 2 or self.N % 2 != 0:
            raise ValueError(f"ensemble size must be an even integer >= 2, got {self.N}")

    @property
    def default_range(self):
        return self.r_lo == -1.0 and self.r_hi == 1.0


@dataclass(frozen=True)
class DistanceReport:
    """Analytic (d1, d2) for a scheme/ensemble pair under one convention."""

    d1: float
    d2: float
    scheme: object
    convention: str


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _variance_denominator(copies, convention):
    # Var(sample variance) of Gaussian data: 2 sigma^4 / denom.
    if convention == PAPER_ASYMPTOTIC:
        return float(copies)
    if copies < 2:
        raise ValueError(
            f"exact_small_sample needs at least 2 copies per channel, got {copies}"
        )
    return float(copies - 1)


def distance_mean(scheme, ens):
    """Mean-estimation distance d1 for a scheme on a finite ensemble.

    Sum over quadrature channels of (channel variance)/(effective copies);
    the sequential scheme averages the two orderings' estimates with equal
    weights, giving ((dq^2 + dp^2 + dQ1^2 + dP1^2) / N).
    """
    vq, vp = ens.state.cov[0, 0], ens.state.cov[1, 1]
    N = ens.N
    if isinstance(scheme, Homodyne):
        return (vq + vp) / (N / 2)
    if isinstance(scheme, Heterodyne):
        return (vq + 0.5 + vp + 0.5) / N
    if isinstance(scheme, Sequential):
        m = scheme.meter
        return (vq + vp + m.dq1**2 + m.dp1**2) / N
    if isinstance(scheme, (ArthursKelly, ModifiedAK)):
        noise_q, noise_p = added_noise(scheme)
        return (vq + noise_q + vp + noise_p) / N
    raise TypeError(f"unknown scheme {scheme!r}")


def _sequential_verbatim_d2(vq, vp, a, b, N):
    # a = dQ1^2, b = dP1^2; quoted closed form, kept for comparison only
    return (2.0 / N) * (
        vp**2 + vq * (a + vq) ** 2 + b * (vq + vp + b) ** 2 + a * (a + vp) ** 2
    )


def distance_variance(scheme, ens, convention=PAPER_ASYMPTOTIC, paper_verbatim=False):
    """Variance-estimation distance d2 for a scheme on a finite ensemble.

    Args:
        scheme: scheme dataclass instance
        ens (EnsembleSpec): ensemble
        convention (str): "paper_asymptotic" or "exact_small_sample"
        paper_verbatim (bool): sequential only -- evaluate the quoted
            closed form instead of the estimator-derived one

    Returns:
        float: d2
    """
    _check_convention(convention)
    vq, vp = ens.state.cov[0, 0], ens.state.cov[1, 1]
    N = ens.N
    if paper_verbatim:
        if not isinstance(scheme, Sequential):
            raise ValueError("paper_verbatim only applies to the sequential scheme")
        if convention != PAPER_ASYMPTOTIC:
            raise ValueError("the verbatim sequential d2 is an asymptotic-convention formula")
        m = scheme.meter
        return _sequential_verbatim_d2(vq, vp, m.dq1**2, m.dp1**2, N)
    if isinstance(scheme, Homodyne):
        denom = _variance_denominator(N // 2, convention)
        return 2.0 * vq**2 / denom + 2.0 * vp**2 / denom
    if isinstance(scheme, Heterodyne):
        denom = _variance_denominator(N, convention)
        return 2.0 * (vq + 0.5) ** 2 / denom + 2.0 * (vp + 0.5) ** 2 / denom
    if isinstance(scheme, Sequential):
        m = scheme.meter
        a, b = m.dq1**2, m.dp1**2
        denom = _variance_denominator(N // 2, convention)
        channels_sq = (vq + a) ** 2 + (vq + b) ** 2 + (vp + b) ** 2 + (vp + a) ** 2
        return channels_sq / (2.0 * denom)
    if isinstance(scheme, (ArthursKelly, ModifiedAK)):
        noise_q, noise_p = added_noise(scheme)
        denom = _variance_denominator(N, convention)
        return 2.0 * (vq + noise_q) ** 2 / denom + 2.0 * (vp + noise_p) ** 2 / denom
    raise TypeError(f"unknown scheme {scheme!r}")


def distances(scheme, ens, convention=PAPER_ASYMPTOTIC):
    """Both distance measures as a DistanceReport."""
    return DistanceReport(
        d1=distance_mean(scheme, ens),
        d2=distance_variance(scheme, ens, convention),
        scheme=scheme,
        convention=convention,
    )


# -- r-averaged measures ------------------------------------------------------
#
# Over r uniform on [-1, 1] with n1 = 2 nbar + 1:
#   <dq^2 + dp^2>   = n1 sinh(2) / 2
#   <dq^4 + dp^4>   = n1^2 sinh(4) / 8
# d1 is affine and d2 quadratic in the state variances, so the sinh-based
# closed forms below follow directly.


def _closed_form_d1(scheme, nbar, N):
    n1 = 2.0 * nbar + 1.0
    s2 = math.sinh(2.0)
    if isinstance(scheme, Homodyne):
        return n1 * s2 / N
    if isinstance(scheme, Heterodyne):
        return (2.0 + n1 * s2) / (2.0 * N)
    if isinstance(scheme, Sequential):
        m = scheme.meter
        return (2.0 * (m.dq1**2 + m.dp1**2) + n1 * s2) / (2.0 * N)
    if isinstance(scheme, (ArthursKelly, ModifiedAK)):
        noise_q, noise_p = added_noise(scheme)
        return (n1 * s2 / 2.0 + noise_q + noise_p) / N
    raise TypeError(f"unknown scheme {scheme!r}")


def _closed_form_d2(scheme, nbar, N, paper_verbatim=False):
    n1 = 2.0 * nbar + 1.0
    s2, s4 = math.sinh(2.0), math.sinh(4.0)
    if paper_verbatim:
        if not isinstance(scheme, Sequential):
            raise ValueError("paper_verbatim only applies to the sequential scheme")
        m = scheme.meter
        return (4.0 * (m.dq1**2 + m.dp1**2) * (2.0 + n1 * s2) + n1**2 * s4) / (4.0 * N)
    if isinstance(scheme, Homodyne):
        return n1**2 * s4 / (2.0 * N)
    if isinstance(scheme, Heterodyne):
        return (4.0 + 4.0 * n1 * s2 + n1**2 * s4) / (4.0 * N)
    if isinstance(scheme, Sequential):
        m = scheme.meter
        a, b = m.dq1**2, m.dp1**2
        return (n1**2 * s4 / 4.0 + (a + b) * n1 * s2 + 2.0 * (a**2 + b**2)) / N
    if isinstance(scheme, (ArthursKelly, ModifiedAK)):
        noise_q, noise_p = added_noise(scheme)
        return (
            n1**2 * s4 / 4.0
            + (noise_q + noise_p) * n1 * s2
            + 2.0 * (noise_q**2 + noise_p**2)
        ) / N
    raise TypeError(f"unknown scheme {scheme!r}")


def averaged_distances(scheme, avg, method="closed_form", paper_verbatim=False):
    """Distance measures averaged over squeezing r uniform on [r_lo, r_hi].

    ``closed_form`` evaluates the sinh-based expressions (default range
    only); ``quadrature`` integrates distance_mean/distance_variance with
    adaptive Gauss-Kronrod quadrature to absolute tolerance 1e-10.  Both use
    the asymptotic variance convention.

    Returns:
        tuple: (d1bar, d2bar)
    """
    if method == "closed_form":
        if not avg.default_range:
            raise ValueError("closed_form is only valid for the default range (-1, +1)")
        return (
            _closed_form_d1(scheme, avg.nbar, avg.N),
            _closed_form_d2(scheme, avg.nbar, avg.N, paper_verbatim),
        )
    if method != "quadrature":
        raise ValueError(f"method must be 'closed_form' or 'quadrature', got {method!r}")

    def ens_at(r):
        return EnsembleSpec(avg.N, squeezed_coherent_thermal(r=r, nbar=avg.nbar))

    span = avg.r_hi - avg.r_lo
    d1bar, _ = integrate.quad(
        lambda r: distance_mean(scheme, ens_at(r)),
        avg.r_lo, avg.r_hi, epsabs=1e-10, epsrel=1e-12, limit=200,
    )
    d2bar, _ = integrate.quad(
        lambda r: distance_variance(scheme, ens_at(r), PAPER_ASYMPTOTIC, paper_verbatim),
        avg.r_lo, avg.r_hi, epsabs=1e-10, epsrel=1e-12, limit=200,
    )
    return d1bar / span, d2bar / span


# -- optimal meter widths ------------------------------------------------------


@dataclass(frozen=True)
class OptimalWidths:
    """Optimized meter widths (dQ1, dP2); the conjugates follow from purity.

    At |kappa| = 1 the correlated-scheme optimum is a boundary limit where
    one width vanishes; the values remain continuous but cannot be realized
    as a meter configuration there.
    """

    dq1: float
    dp2: float

    @property
    def dp1(self):
        return math.inf if self.dq1 == 0 else 0.5 / self.dq1

    @property
    def dq2(self):
        return math.inf if self.dp2 == 0 else 0.5 / self.dp2

    def meter(self):
        """The corresponding MeterConfig; raises at a degenerate boundary optimum."""
        if self.dq1 == 0 or self.dp2 == 0:
            raise ValueError(
                "optimum is a boundary limit (a meter width vanishes); "
                "no finite meter configuration attains it"
            )
        return MeterConfig(dq1=self.dq1, dq2=0.5 / self.dp2)


def optimal_widths(scheme_kind, kappa=None):
    """Meter widths optimizing the mean-estimation distance of a scheme kind.

    Kinds: "sequential" (dQ1 = dP1 = 1/sqrt(2)), "arthurs_kelly"
    (dQ1 = dP2 = 1/2), and "modified_ak" with the piecewise widths
    dQ1 = sqrt(1+kappa)/2 for kappa > -1 else sqrt(-1-kappa)/2,
    dP2 = sqrt(kappa-1)/2 for kappa > 1 else sqrt(1-kappa)/2.

    Args:
        scheme_kind (str): scheme name
        kappa (float): coupling, required iff scheme_kind is "modified_ak"

    Returns:
        OptimalWidths
    """
    if scheme_kind == "sequential":
        return OptimalWidths(dq1=2.0 ** -0.5, dp2=2.0 ** -0.5)
    if scheme_kind == "arthurs_kelly":
        return OptimalWidths(dq1=0.5, dp2=0.5)
    if scheme_kind == "modified_ak":
        if kappa is None or not np.isfinite(kappa):
            raise ValueError("modified_ak requires a finite kappa")
        dq1 = math.sqrt(1.0 + kappa) / 2.0 if kappa > -1.0 else math.sqrt(-1.0 - kappa) / 2.0
        dp2 = math.sqrt(kappa - 1.0) / 2.0 if kappa > 1.0 else math.sqrt(1.0 - kappa) / 2.0
        return OptimalWidths(dq1=dq1, dp2=dp2)
    raise ValueError(
        f"no width optimum for scheme kind {scheme_kind!r}; expected one of "
        "['sequential', 'arthurs_kelly', 'modified_ak']"
    )


def optimal_d1_cor(kappa, ens):
    """Width-optimized d1 of the correlated (modified Arthurs-Kelly) scheme.

    (1 + dq^2 + dp^2)/N inside |kappa| <= 1, (|kappa| + dq^2 + dp^2)/N
    outside; continuous at the boundary.
    """
    if not np.isfinite(kappa):
        raise ValueError(f"kappa must be finite, got {kappa}")
    vq, vp = ens.state.cov[0, 0], ens.state.cov[1, 1]
    return (max(1.0, abs(kappa)) + vq + vp) / ens.N


# -- critical squeezing --------------------------------------------------------


def critical_squeezing(nbar):
    """Squeezing value where homodyne and heterodyne variance estimation tie.

    Closed form: e^{2 rc} = (1 + sqrt(3 + 2 n1^2)
    + sqrt(2 (2 - n1^2 + sqrt(3 + 2 n1^2)))) / (2 n1) with n1 = 2 nbar + 1.
    Returns None when no crossing exists (the inner square root turns
    negative for large nbar, where heterodyne wins at every r).
    """
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    n1 = 2.0 * nbar + 1.0
    root = math.sqrt(3.0 + 2.0 * n1**2)
    inner = 2.0 * (2.0 - n1**2 + root)
    if inner < 0:
        return None
    return 0.5 * math.log((1.0 + root + math.sqrt(inner)) / (2.0 * n1))


def critical_squeezing_bisection(nbar, N=20, xtol=1e-12):
    """Bisection oracle: root of d2^Hom(r) - d2^Het(r) on the bracket [0, 5].

    Independent of the closed form; returns None if the difference does not
    change sign on the bracket (no crossing).
    """

    def gap(r):
        ens = EnsembleSpec(N, squeezed_coherent_thermal(r=r, nbar=nbar))
        return distance_variance(Homodyne(), ens) - distance_variance(Heterodyne(), ens)

    lo, hi = _RC_BRACKET
    glo, ghi = gap(lo), gap(hi)
    if glo == 0.0:
        return lo
    if glo * ghi > 0:
        return None
    return float(optimize.brentq(gap, lo, hi, xtol=xtol))
