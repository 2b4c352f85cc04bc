"""Gaussian states on n-mode phase space and the linear algebra acting on them.

Conventions (fixed globally): hbar = 1, quadrature ordering
(q1, p1, ..., qn, pn), vacuum variance 1/2.  Widths such as ``dq`` are
standard deviations; covariance matrices store their squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Symmetry tolerance for covariance matrices and quadratic forms.
SYMMETRY_TOL = 1e-12
#: Symplectic eigenvalues may undershoot 1/2 by at most this much.
PHYSICALITY_TOL = 1e-10


def symplectic_form(n):
    """Return the 2n x 2n symplectic form, block diagonal in omega = [[0,1],[-1,0]].

    Args:
        n (int): number of modes, at least 1

    Returns:
        array: the antisymmetric form matrix
    """
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    omega = np.zeros((2 * n, 2 * n))
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    for k in range(n):
        omega[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = w
    return omega


def symplectic_eigenvalues(cov):
    """Symplectic spectrum of a covariance matrix.

    The eigenvalues of Omega @ cov come in +/- i*nu pairs; the returned
    values are the n distinct moduli nu, sorted ascending (degenerate pairs
    deduplicated by sorting and stride-2 selection).  A state is physical
    iff every nu >= 1/2 - PHYSICALITY_TOL.

    Args:
        cov (array): 2n x 2n symmetric covariance matrix

    Returns:
        array: n symplectic eigenvalues, ascending
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 != 0:
        raise ValueError(f"covariance must be square and even-dimensional, got {cov.shape}")
    if np.abs(cov - cov.T).max() > SYMMETRY_TOL:
        raise ValueError("covariance matrix is not symmetric")
    n = cov.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cov)))
    return moduli[::2]


def is_physical(cov, tol=PHYSICALITY_TOL):
    """True iff all symplectic eigenvalues satisfy nu >= 1/2 - tol."""
    return bool(symplectic_eigenvalues(cov).min() >= 0.5 - tol)


@dataclass(frozen=True)
class Marginal1D:
    """Parameters of a 1-D Gaussian readout law."""

    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")


@dataclass(frozen=True)
class GaussianState:
    """An n-mode Gaussian state: mean vector plus covariance matrix.

    Immutable value; the arrays are copied and marked read-only.  Validation
    enforces matching dimensions, symmetry of the covariance within
    SYMMETRY_TOL and physicality (all symplectic eigenvalues
    >= 1/2 - PHYSICALITY_TOL).
    """

    mean: np.ndarray
    cov: np.ndarray
    modes: int = field(init=False)

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.size % 2 != 0 or mean.size == 0:
            raise ValueError(f"mean vector length must be a positive even number, got {mean.size}")
        modes = mean.size // 2
        if cov.shape != (2 * modes, 2 * modes):
            raise ValueError(f"covariance shape {cov.shape} does not match {modes} mode(s)")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("state parameters must be finite")
        if np.abs(cov - cov.T).max() > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric")
        if not is_physical(cov):
            nu = symplectic_eigenvalues(cov).min()
            raise ValueError(f"unphysical covariance: smallest symplectic eigenvalue {nu} < 1/2")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "modes", modes)

    def quadrature_variances(self):
        """Diagonal of the covariance matrix (variance of each quadrature)."""
        return np.diag(self.cov).copy()


def vacuum_state(modes=1):
    """Vacuum state: zero mean, covariance I/2."""
    return GaussianState(np.zeros(2 * modes), 0.5 * np.eye(2 * modes))


def thermal_state(nbar):
    """Single-mode thermal state with mean photon number nbar >= 0."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    return GaussianState(np.zeros(2), 0.5 * (2.0 * nbar + 1.0) * np.eye(2))


def squeezed_coherent_thermal(q0=0.0, p0=0.0, r=0.0, nbar=0.0):
    """Single-mode squeezed coherent thermal state.

    Mean (q0, p0); covariance diag(((2 nbar + 1)/2) e^{-2r}, ((2 nbar + 1)/2) e^{2r}).
    Positive r squeezes the q quadrature.
    """
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    for name, value in (("q0", q0), ("p0", p0), ("r", r)):
        if not np.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value}")
    half_n1 = 0.5 * (2.0 * nbar + 1.0)
    cov = np.diag([half_n1 * np.exp(-2.0 * r), half_n1 * np.exp(2.0 * r)])
    return GaussianState(np.array([q0, p0]), cov)


def make_state(kind, **params):
    """Build a state by kind name: "vacuum", "thermal" or "squeezed_coherent_thermal"."""
    builders = {
        "vacuum": vacuum_state,
        "thermal": thermal_state,
        "squeezed_coherent_thermal": squeezed_coherent_thermal,
    }
    try:
        builder = builders[kind]
    except KeyError:
        raise ValueError(f"unknown state kind {kind!r}; expected one of {sorted(builders)}") from None
    return builder(**params)


def apply_symplectic(state, S):
    """Act on a state by a symplectic matrix: mean -> S mean, cov -> S cov S^T.

    Args:
        state (GaussianState): input state
        S (array): 2n x 2n symplectic matrix matching the state dimension

    Returns:
        GaussianState: transformed state
    """
    from .symplectic import is_symplectic  # local import, avoids module cycle

    S = np.asarray(S, dtype=float)
    if S.shape != (2 * state.modes, 2 * state.modes):
        raise ValueError(f"matrix shape {S.shape} does not match a {state.modes}-mode state")
    check = is_symplectic(S, tol=PHYSICALITY_TOL)
    if not check.ok:
        raise ValueError(f"matrix is not symplectic (residual {check.residual:.3e})")
    cov = S @ state.cov @ S.T
    return GaussianState(S @ state.mean, 0.5 * (cov + cov.T))


def reduce_modes(state, keep):
    """Reduced state on a subset of modes (partial trace in phase space).

    The mean and covariance are the sub-vector / sub-matrix on the kept
    quadrature pairs, in the order given.

    Args:
        state (GaussianState): input state
        keep (sequence of int): distinct mode indices to retain

    Returns:
        GaussianState: reduced state
    """
    keep = list(keep)
    if not keep:
        raise ValueError("keep list must not be empty")
    if len(set(keep)) != len(keep):
        raise ValueError(f"mode indices must be distinct, got {keep}")
    for m in keep:
        if not 0 <= m < state.modes:
            raise ValueError(f"mode index {m} out of range for {state.modes} mode(s)")
    idx = np.array([2 * m + o for m in keep for o in (0, 1)])
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def wigner_density(state, point):
    """Value of the state's Wigner distribution at a phase-space point.

    Gaussian density with the state's mean and covariance, normalization
    (2 pi)^n sqrt(det V).
    """
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.size != 2 * state.modes:
        raise ValueError(f"point length {point.size} does not match a {state.modes}-mode state")
    det = np.linalg.det(state.cov)
    if det <= 0:
        raise ValueError(f"singular covariance matrix (det {det})")
    dx = point - state.mean
    exponent = -0.5 * dx @ np.linalg.solve(state.cov, dx)
    norm = (2.0 * np.pi) ** state.modes * np.sqrt(det)
    return float(np.exp(exponent) / norm)


def marginal_distribution(state, index):
    """Gaussian marginal of one quadrature.

    Args:
        state (GaussianState): input state
        index (int): quadrature index in (q1, p1, ..., qn, pn) order

    Returns:
        Marginal1D: mean and variance of the marginal readout law
    """
    if not 0 <= index < 2 * state.modes:
        raise ValueError(f"quadrature index {index} out of range for {state.modes} mode(s)")
    return Marginal1D(mean=float(state.mean[index]), variance=float(state.cov[index, index]))
