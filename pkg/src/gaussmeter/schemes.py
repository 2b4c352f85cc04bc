"""Measurement schemes: readout laws, post-interaction joint states, meter entanglement.

The estimation channels of every scheme are Gaussian.  Homodyne and
heterodyne are modeled directly as readout laws on the system state; the
meter-based schemes (sequential, Arthurs-Kelly and its correlated variant)
build the joint system-meter state through the symplectic engine, and their
closed-form channel variances are checked against that construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    PHYSICALITY_TOL,
    GaussianState,
    Marginal1D,
    apply_symplectic,
    is_physical,
    symplectic_eigenvalues,
)
from .symplectic import canonical_interaction

HALF_ENSEMBLE = "half_ensemble"
FULL_ENSEMBLE = "full_ensemble"

SEQ_ORDERS = ("q_then_p", "p_then_q")


@dataclass(frozen=True)
class MeterConfig:
    """Widths of the meter position quadratures; meters are pure squeezed vacuum.

    The conjugate widths are derived from the purity constraint
    dq1 * dp1 = dq2 * dp2 = 1/2, so they never drift from it.
    """

    dq1: float
    dq2: float = 2.0 ** -0.5

    def __post_init__(self):
        for name, value in (("dq1", self.dq1), ("dq2", self.dq2)):
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"meter width {name} must be positive and finite, got {value}")

    @property
    def dp1(self):
        return 0.5 / self.dq1

    @property
    def dp2(self):
        return 0.5 / self.dq2


@dataclass(frozen=True)
class Homodyne:
    """Projective readout of single quadratures, one half-ensemble per quadrature."""


@dataclass(frozen=True)
class Heterodyne:
    """Joint readout of both quadratures; adds vacuum noise 1/2 to each."""


@dataclass(frozen=True)
class Sequential:
    """Weak meter readout of one quadrature followed by homodyne of its conjugate.

    ``order`` selects which quadrature the meter couples to first; the
    estimation protocol always runs both orders on ensemble halves.
    """

    meter: MeterConfig
    order: str = "q_then_p"

    def __post_init__(self):
        if self.order not in SEQ_ORDERS:
            raise ValueError(f"order must be one of {SEQ_ORDERS}, got {self.order!r}")


@dataclass(frozen=True)
class ArthursKelly:
    """Impulsive coupling to two meters for simultaneous conjugate readout."""

    meter: MeterConfig


@dataclass(frozen=True)
class ModifiedAK:
    """Arthurs-Kelly variant with a meter-meter coupling of strength kappa."""

    meter: MeterConfig
    kappa: float

    def __post_init__(self):
        if not np.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa}")


@dataclass(frozen=True)
class ReadoutChannels:
    """Per-quadrature estimator channels of a scheme acting on a state.

    Each channel's variance is the state's quadrature variance plus the
    scheme's known added noise; ``copies_per_outcome_pair`` records whether
    one copy yields both outcomes or each half-ensemble yields one.
    """

    q_channel: Marginal1D
    p_channel: Marginal1D
    added_noise_q: float
    added_noise_p: float
    copies_per_outcome_pair: str


def _require_single_mode(state):
    if state.modes != 1:
        raise ValueError(f"scheme readout needs a 1-mode state, got {state.modes} modes")


def added_noise(scheme):
    """Known meter/vacuum noise added to the (q, p) channel variances."""
    if isinstance(scheme, Homodyne):
        return 0.0, 0.0
    if isinstance(scheme, Heterodyne):
        return 0.5, 0.5
    if isinstance(scheme, Sequential):
        m = scheme.meter
        if scheme.order == "q_then_p":
            return m.dq1**2, m.dp1**2
        return m.dp1**2, m.dq1**2
    if isinstance(scheme, ArthursKelly):
        m = scheme.meter
        return m.dq1**2 + m.dq2**2 / 4.0, m.dp1**2 / 4.0 + m.dp2**2
    if isinstance(scheme, ModifiedAK):
        m, k = scheme.meter, scheme.kappa
        noise_q = m.dq1**2 + (k - 1.0) ** 2 / 4.0 * m.dq2**2
        noise_p = (k + 1.0) ** 2 / 4.0 * m.dp1**2 + m.dp2**2
        return noise_q, noise_p
    raise TypeError(f"unknown scheme {scheme!r}")


def readout_distributions(scheme, state):
    """Gaussian readout channels of a scheme on a 1-mode state.

    The channel means are the state's (q0, p0); the channel variances are
    the state variances plus the scheme's added noise.

    Args:
        scheme: a scheme dataclass instance
        state (GaussianState): 1-mode physical state

    Returns:
        ReadoutChannels
    """
    _require_single_mode(state)
    noise_q, noise_p = added_noise(scheme)
    vq, vp = state.cov[0, 0], state.cov[1, 1]
    copies = HALF_ENSEMBLE if isinstance(scheme, (Homodyne, Sequential)) else FULL_ENSEMBLE
    return ReadoutChannels(
        q_channel=Marginal1D(float(state.mean[0]), float(vq + noise_q)),
        p_channel=Marginal1D(float(state.mean[1]), float(vp + noise_p)),
        added_noise_q=float(noise_q),
        added_noise_p=float(noise_p),
        copies_per_outcome_pair=copies,
    )


def post_interaction_state(scheme, state):
    """Joint Gaussian state of system and meter(s) after the impulsive coupling.

    Builds the product state of the system with vacuum-squeezed meters and
    applies the scheme's canonical symplectic transform.  Only defined for
    schemes with meter dynamics (sequential and the Arthurs-Kelly variants).

    Returns:
        GaussianState: 2-mode (sequential) or 3-mode (AK variants) state,
        mode order (system, meter 1[, meter 2])
    """
    _require_single_mode(state)
    if isinstance(scheme, Sequential):
        m = scheme.meter
        meter_vars = [m.dq1**2, m.dp1**2]
        kind, kappa = ("seq_q", None) if scheme.order == "q_then_p" else ("seq_p", None)
    elif isinstance(scheme, ArthursKelly):
        m = scheme.meter
        meter_vars = [m.dq1**2, m.dp1**2, m.dq2**2, m.dp2**2]
        kind, kappa = "arthurs_kelly", None
    elif isinstance(scheme, ModifiedAK):
        m = scheme.meter
        meter_vars = [m.dq1**2, m.dp1**2, m.dq2**2, m.dp2**2]
        kind, kappa = "modified_ak", scheme.kappa
    else:
        raise ValueError(f"scheme {type(scheme).__name__} has no meter dynamics")

    dim = 2 + len(meter_vars)
    mean = np.zeros(dim)
    mean[:2] = state.mean
    cov = np.zeros((dim, dim))
    cov[:2, :2] = state.cov
    cov[range(2, dim), range(2, dim)] = meter_vars
    _, S = canonical_interaction(kind, kappa)
    return apply_symplectic(GaussianState(mean, cov), S)


@dataclass(frozen=True)
class SeparabilityReport:
    """Simon PPT verdict for a two-mode Gaussian state."""

    entangled: bool
    witness: float  # smallest symplectic eigenvalue after partial transpose

    @property
    def verdict(self):
        return "entangled" if self.entangled else "separable"


def simon_separability(two_mode_cov):
    """Simon (PPT) separability test on a two-mode covariance matrix.

    Negates the second mode's momentum row/column (partial transpose in
    phase space) and tests physicality of the result; the state is entangled
    iff the transposed matrix's smallest symplectic eigenvalue drops below
    1/2 - PHYSICALITY_TOL.

    Args:
        two_mode_cov (array): 4 x 4 physical covariance matrix

    Returns:
        SeparabilityReport
    """
    cov = np.asarray(two_mode_cov, dtype=float)
    if cov.shape != (4, 4):
        raise ValueError(f"expected a 4 x 4 covariance matrix, got shape {cov.shape}")
    if not is_physical(cov):
        raise ValueError("input covariance matrix is not physical")
    transpose = np.diag([1.0, 1.0, 1.0, -1.0])
    witness = float(symplectic_eigenvalues(transpose @ cov @ transpose).min())
    return SeparabilityReport(entangled=witness < 0.5 - PHYSICALITY_TOL, witness=witness)
