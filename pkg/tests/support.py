"""Shared helpers for the test suite: random-state generators and the
criterion-level property suites (run small during module tests, at full
draw counts in the acceptance suite)."""

import numpy as np

from gaussmeter import (
    ArthursKelly,
    EnsembleSpec,
    Heterodyne,
    Homodyne,
    MeterConfig,
    ModifiedAK,
    Sequential,
    apply_symplectic,
    canonical_interaction,
    distance_mean,
    distance_variance,
    readout_distributions,
    squeezed_coherent_thermal,
    symplectic_eigenvalues,
)
from gaussmeter.states import GaussianState


def random_state(rng, modes=1):
    """Random physical Gaussian state: thermal core, random squeezing/rotation."""
    mean = rng.normal(0.0, 2.0, size=2 * modes)
    cov = np.zeros((2 * modes, 2 * modes))
    for m in range(modes):
        nbar = rng.uniform(0.0, 2.0)
        cov[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = 0.5 * (2 * nbar + 1) * np.eye(2)
    S = random_symplectic(rng, modes)
    cov = S @ cov @ S.T
    return GaussianState(mean, 0.5 * (cov + cov.T))


def random_symplectic(rng, modes=1):
    """Random symplectic matrix: product of squeezers, rotations, interactions."""
    S = np.eye(2 * modes)
    for _ in range(3):
        block = np.eye(2 * modes)
        for m in range(modes):
            r = rng.uniform(-1.0, 1.0)
            theta = rng.uniform(0.0, 2 * np.pi)
            sq = np.diag([np.exp(-r), np.exp(r)])
            rot = np.array(
                [[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]]
            )
            block[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = rot @ sq
        S = block @ S
    if modes == 2:
        kind = ("seq_q", "seq_p")[rng.integers(2)]
        S = canonical_interaction(kind)[1] @ S
    elif modes == 3:
        S = canonical_interaction("modified_ak", float(rng.uniform(-2, 2)))[1] @ S
    return S


def random_meter(rng):
    return MeterConfig(dq1=float(rng.uniform(0.1, 2.0)), dq2=float(rng.uniform(0.1, 2.0)))


def random_meter_scheme(rng):
    pick = rng.integers(3)
    meter = random_meter(rng)
    if pick == 0:
        return Sequential(meter, order=("q_then_p", "p_then_q")[rng.integers(2)])
    if pick == 1:
        return ArthursKelly(meter)
    return ModifiedAK(meter, kappa=float(rng.uniform(-2.0, 2.0)))


# -- criterion-9 property suites ------------------------------------------------


def congruence_invariance_suite(draws, seed=101):
    """Symplectic congruence preserves the symplectic spectrum within 1e-9."""
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        modes = int(rng.integers(1, 4))
        state = random_state(rng, modes)
        S = random_symplectic(rng, modes)
        before = symplectic_eigenvalues(state.cov)
        after = symplectic_eigenvalues(S @ state.cov @ S.T)
        assert np.abs(before - after).max() < 1e-9


def physicality_preservation_suite(draws, seed=202):
    """apply_symplectic output always validates as physical (constructor checks)."""
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        modes = int(rng.integers(1, 4))
        state = random_state(rng, modes)
        out = apply_symplectic(state, random_symplectic(rng, modes))
        assert symplectic_eigenvalues(out.cov).min() >= 0.5 - 1e-9


def heterodyne_offset_suite(draws, seed=303):
    """Heterodyne channel variance = homodyne channel variance + 1/2, each quadrature."""
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        state = squeezed_coherent_thermal(
            q0=float(rng.normal(0, 2)),
            p0=float(rng.normal(0, 2)),
            r=float(rng.uniform(-1.5, 1.5)),
            nbar=float(rng.uniform(0, 2)),
        )
        hom = readout_distributions(Homodyne(), state)
        het = readout_distributions(Heterodyne(), state)
        assert abs(het.q_channel.variance - hom.q_channel.variance - 0.5) < 1e-14
        assert abs(het.p_channel.variance - hom.p_channel.variance - 0.5) < 1e-14


def mean_independence_suite(draws, seed=404):
    """d1 and d2 do not depend on the state's mean (q0, p0)."""
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        r = float(rng.uniform(-1.5, 1.5))
        nbar = float(rng.uniform(0, 2))
        N = 2 * int(rng.integers(2, 40))
        scheme = (Homodyne(), Heterodyne(), random_meter_scheme(rng))[rng.integers(3)]
        base = EnsembleSpec(N, squeezed_coherent_thermal(r=r, nbar=nbar))
        moved = EnsembleSpec(
            N,
            squeezed_coherent_thermal(
                q0=float(rng.normal(0, 5)), p0=float(rng.normal(0, 5)), r=r, nbar=nbar
            ),
        )
        assert distance_mean(scheme, base) == distance_mean(scheme, moved)
        assert distance_variance(scheme, base) == distance_variance(scheme, moved)
