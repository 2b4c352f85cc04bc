"""Symplectic transforms from quadratic interaction Hamiltonians.

A quadratic Hamiltonian H = (1/2) xi^T K xi (K symmetric) generates the
one-parameter group exp(J) with J = -Omega K, i.e. K = Omega J.  Every
impulsive interaction used by the measurement schemes is of this form with
a nilpotent generator (J^3 = 0), so its exponential is an exact finite sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import SYMMETRY_TOL, symplectic_form

#: Stop the Taylor series once the next term is this small relative to the sum.
_TAYLOR_CUTOFF = 1e-17


@dataclass(frozen=True)
class SymplecticCheck:
    """Result of the S Omega S^T = Omega test."""

    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def is_symplectic(S, tol=1e-12):
    """Test the symplectic condition, reporting the residual.

    Args:
        S (array): square matrix of even dimension
        tol (float): max-abs tolerance on S Omega S^T - Omega

    Returns:
        SymplecticCheck: truth value plus the residual actually measured
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"matrix must be square, got shape {S.shape}")
    if S.shape[0] % 2 != 0:
        raise ValueError(f"matrix dimension must be even, got {S.shape[0]}")
    omega = symplectic_form(S.shape[0] // 2)
    residual = float(np.abs(S @ omega @ S.T - omega).max())
    return SymplecticCheck(ok=residual <= tol, residual=residual)


def generator_from_quadratic(K):
    """Lie-algebra generator of the symplectic flow of H = (1/2) xi^T K xi.

    Returns J = Omega^{-1} K = -Omega K, which satisfies Omega J = K.

    Args:
        K (array): 2n x 2n symmetric coefficient matrix

    Returns:
        array: the generator J
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] % 2 != 0:
        raise ValueError(f"coefficient matrix must be square and even-dimensional, got {K.shape}")
    if np.abs(K - K.T).max() > SYMMETRY_TOL:
        raise ValueError("coefficient matrix is not symmetric")
    return -symplectic_form(K.shape[0] // 2) @ K


def matrix_exponential(J):
    """exp(J) by Taylor series with scaling and squaring.

    Exact (to machine precision) for the nilpotent generators produced by
    canonical_interaction; robust for any quadratic-Hamiltonian generator.
    The input must lie in the symplectic Lie algebra (Omega J symmetric).

    Args:
        J (array): 2n x 2n generator

    Returns:
        array: the symplectic matrix exp(J)
    """
    J = np.asarray(J, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2 != 0:
        raise ValueError(f"generator must be square and even-dimensional, got {J.shape}")
    if not np.all(np.isfinite(J)):
        raise ValueError("generator has non-finite entries")
    omega = symplectic_form(J.shape[0] // 2)
    oj = omega @ J
    if np.abs(oj - oj.T).max() > SYMMETRY_TOL:
        raise ValueError("generator is not in the symplectic Lie algebra (Omega J not symmetric)")

    # Halve until the norm is comfortably inside the series' fast-convergence zone.
    squarings = 0
    norm = np.linalg.norm(J, ord=np.inf)
    while norm > 0.5:
        norm /= 2.0
        squarings += 1
    scaled = J / (2.0**squarings)

    dim = J.shape[0]
    result = np.eye(dim)
    term = np.eye(dim)
    for k in range(1, 40):
        term = term @ scaled / k
        result = result + term
        if np.abs(term).max() <= _TAYLOR_CUTOFF * np.abs(result).max():
            break
    for _ in range(squarings):
        result = result @ result
    return result


def _quadratic_coefficients(n, terms):
    """Symmetric coefficient matrix H_sym with H = (1/2) xi^T H_sym xi.

    ``terms`` maps quadrature index pairs (i, j), i != j, to the coefficient
    of the product xi_i xi_j in H.
    """
    h = np.zeros((2 * n, 2 * n))
    for (i, j), c in terms.items():
        h[i, j] += c
        h[j, i] += c
    return h


# Quadrature indices: q=0, p=1, Q1=2, P1=3, Q2=4, P2=5.
def _interaction_coefficients(kind, kappa=None):
    if kind == "seq_q":
        # H = q P1
        return _quadratic_coefficients(2, {(0, 3): 1.0})
    if kind == "seq_p":
        # H = p P1: only a P1 coupling displaces the meter's Q1, which is
        # what writes the system's p onto the meter readout.
        return _quadratic_coefficients(2, {(1, 3): 1.0})
    if kind == "arthurs_kelly":
        # H = q P1 - p Q2
        return _quadratic_coefficients(3, {(0, 3): 1.0, (1, 4): -1.0})
    if kind == "modified_ak":
        # H = q P1 - p Q2 + (kappa/2) P1 Q2
        return _quadratic_coefficients(3, {(0, 3): 1.0, (1, 4): -1.0, (3, 4): kappa / 2.0})
    raise ValueError(
        f"unknown interaction kind {kind!r}; expected one of "
        "['seq_q', 'seq_p', 'arthurs_kelly', 'modified_ak']"
    )


def canonical_interaction(kind, kappa=None):
    """Coefficient matrix and symplectic transform of a canonical interaction.

    Kinds: "seq_q" (meter coupled to q), "seq_p" (meter coupled to p),
    "arthurs_kelly" (two meters), "modified_ak" (two meters with meter-meter
    coupling strength kappa).  The delta-function time dependence is absorbed
    into a unit-strength impulse.

    Args:
        kind (str): interaction name
        kappa (float): meter-meter coupling, required iff kind is "modified_ak"

    Returns:
        tuple: (K, S) with K the symmetric coefficient matrix of the
        quadratic form (K = Omega J) and S = exp(J) the symplectic transform
    """
    if kind == "modified_ak":
        if kappa is None or not np.isfinite(kappa):
            raise ValueError("modified_ak requires a finite kappa")
    elif kappa is not None:
        raise ValueError(f"kappa is only meaningful for modified_ak, not {kind!r}")
    h_sym = _interaction_coefficients(kind, kappa)
    K = -h_sym
    S = matrix_exponential(generator_from_quadratic(K))
    return K, S
