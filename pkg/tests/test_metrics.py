"""Distance measures: closed forms, averages, optima, critical squeezing."""

import math

import numpy as np
import pytest
from scipy import optimize

from gaussmeter import (
    EXACT_SMALL_SAMPLE,
    PAPER_ASYMPTOTIC,
    ArthursKelly,
    AverageSpec,
    EnsembleSpec,
    Heterodyne,
    Homodyne,
    MeterConfig,
    ModifiedAK,
    Sequential,
    averaged_distances,
    critical_squeezing,
    critical_squeezing_bisection,
    distance_mean,
    distance_variance,
    distances,
    optimal_d1_cor,
    optimal_widths,
    squeezed_coherent_thermal,
)

COHERENT_20 = EnsembleSpec(20, squeezed_coherent_thermal())


def ens(r=0.0, nbar=0.0, N=20):
    return EnsembleSpec(N, squeezed_coherent_thermal(r=r, nbar=nbar))


class TestEnsembleSpec:
    def test_odd_size_rejected(self):
        with pytest.raises(ValueError, match="even"):
            EnsembleSpec(21, squeezed_coherent_thermal())

    def test_too_small_rejected(self):
        with pytest.raises(ValueError, match="even integer >= 2"):
            EnsembleSpec(0, squeezed_coherent_thermal())

    def test_multimode_rejected(self):
        from gaussmeter import vacuum_state

        with pytest.raises(ValueError, match="single-mode"):
            EnsembleSpec(10, vacuum_state(2))


class TestDistanceMean:
    def test_coherent_homodyne_equals_heterodyne(self):
        assert distance_mean(Homodyne(), COHERENT_20) == 0.1
        assert distance_mean(Heterodyne(), COHERENT_20) == 0.1

    def test_squeezed_values(self):
        squeezed = ens(r=1.0)
        assert distance_mean(Homodyne(), squeezed) == pytest.approx(
            0.3762195691083631, abs=1e-12
        )
        assert distance_mean(Heterodyne(), squeezed) == pytest.approx(
            0.23810978455418158, abs=1e-12
        )

    def test_sequential_at_coherent_meter_equals_heterodyne(self):
        meter = MeterConfig(dq1=2.0**-0.5)
        for e in (COHERENT_20, ens(r=1.0), ens(r=0.5, nbar=1.0)):
            assert distance_mean(Sequential(meter), e) == pytest.approx(
                distance_mean(Heterodyne(), e), abs=1e-15
            )

    def test_heterodyne_never_worse_with_coherent_equality(self):
        for r in np.linspace(-1, 1, 41):
            for nbar in (0.0, 0.5, 1.0):
                e = ens(r=float(r), nbar=nbar)
                gap = distance_mean(Homodyne(), e) - distance_mean(Heterodyne(), e)
                vq, vp = e.state.cov[0, 0], e.state.cov[1, 1]
                assert gap == pytest.approx((vq + vp - 1.0) / e.N, abs=1e-15)
                if r == 0.0 and nbar == 0.0:
                    assert gap == pytest.approx(0.0, abs=1e-15)
                else:
                    assert gap > 0.0


class TestDistanceVariance:
    def test_coherent_values(self):
        assert distance_variance(Homodyne(), COHERENT_20) == pytest.approx(0.1, abs=1e-15)
        assert distance_variance(Heterodyne(), COHERENT_20) == pytest.approx(0.2, abs=1e-15)

    def test_sequential_optimum_equals_heterodyne(self):
        meter = MeterConfig(dq1=2.0**-0.5)
        assert distance_variance(Sequential(meter), COHERENT_20) == pytest.approx(
            0.2, abs=1e-14
        )

    def test_arthurs_kelly_optimum_equals_heterodyne(self):
        scheme = ArthursKelly(MeterConfig(dq1=0.5, dq2=1.0))
        for e in (COHERENT_20, ens(r=1.0), ens(r=0.5, nbar=1.0)):
            assert distance_variance(scheme, e) == pytest.approx(
                distance_variance(Heterodyne(), e), abs=1e-14
            )

    def test_exact_small_sample_convention(self):
        # denominators N/2 - 1 (split schemes) and N - 1 (joint schemes)
        assert distance_variance(Homodyne(), COHERENT_20, EXACT_SMALL_SAMPLE) == (
            pytest.approx(2 * 0.25 / 9 * 2, abs=1e-15)
        )
        assert distance_variance(Heterodyne(), COHERENT_20, EXACT_SMALL_SAMPLE) == (
            pytest.approx(4.0 / 19.0, abs=1e-15)
        )

    def test_exact_convention_needs_enough_copies(self):
        tiny = EnsembleSpec(2, squeezed_coherent_thermal())
        with pytest.raises(ValueError, match="at least 2 copies"):
            distance_variance(Homodyne(), tiny, EXACT_SMALL_SAMPLE)

    def test_verbatim_sequential_form_disagrees_at_optimum(self):
        # the verbatim form gives 4.75/N at the optimum for a coherent ensemble,
        # breaking the optimum-equals-heterodyne identity; the default form holds it
        meter = MeterConfig(dq1=2.0**-0.5)
        verbatim = distance_variance(Sequential(meter), COHERENT_20, paper_verbatim=True)
        assert verbatim == pytest.approx(4.75 / 20.0, abs=1e-14)
        default = distance_variance(Sequential(meter), COHERENT_20)
        assert default == pytest.approx(0.2, abs=1e-14)

    def test_verbatim_only_for_sequential(self):
        with pytest.raises(ValueError, match="sequential"):
            distance_variance(Homodyne(), COHERENT_20, paper_verbatim=True)
        with pytest.raises(ValueError, match="asymptotic"):
            distance_variance(
                Sequential(MeterConfig(0.5)), COHERENT_20, EXACT_SMALL_SAMPLE,
                paper_verbatim=True,
            )

    def test_unknown_convention_rejected(self):
        with pytest.raises(ValueError, match="convention"):
            distance_variance(Homodyne(), COHERENT_20, "bayes")

    def test_report_bundle(self):
        report = distances(Heterodyne(), COHERENT_20)
        assert (report.d1, report.d2) == (0.1, 0.2)
        assert report.convention == PAPER_ASYMPTOTIC


class TestAveragedDistances:
    def test_homodyne_closed_form(self):
        avg = AverageSpec(nbar=0.0, N=20)
        d1bar, d2bar = averaged_distances(Homodyne(), avg)
        assert d1bar == pytest.approx(math.sinh(2.0) / 20.0, abs=1e-15)
        assert d2bar == pytest.approx(math.sinh(4.0) / 40.0, abs=1e-15)

    def test_heterodyne_closed_form(self):
        avg = AverageSpec(nbar=0.0, N=20)
        d1bar, _ = averaged_distances(Heterodyne(), avg)
        assert d1bar == pytest.approx((2.0 + math.sinh(2.0)) / 40.0, abs=1e-15)

    @pytest.mark.parametrize("nbar", [0.0, 1.0])
    @pytest.mark.parametrize(
        "scheme",
        [
            Homodyne(),
            Heterodyne(),
            Sequential(MeterConfig(0.6)),
            ArthursKelly(MeterConfig(0.4, 0.9)),
            ModifiedAK(MeterConfig(0.4, 0.9), kappa=1.3),
        ],
        ids=["hom", "het", "seq", "ak", "modak"],
    )
    def test_closed_form_matches_quadrature(self, scheme, nbar):
        avg = AverageSpec(nbar=nbar, N=20)
        closed = averaged_distances(scheme, avg, "closed_form")
        quad = averaged_distances(scheme, avg, "quadrature")
        assert closed[0] == pytest.approx(quad[0], abs=1e-9)
        assert closed[1] == pytest.approx(quad[1], abs=1e-9)

    def test_verbatim_forms_against_inline_oracles(self):
        # the verbatim averaged form and the r-average of the verbatim per-r form
        # disagree with each other; verify both against inline expressions
        avg = AverageSpec(nbar=0.5, N=20)
        scheme = Sequential(MeterConfig(0.55))
        a, b = 0.55**2, (0.5 / 0.55) ** 2
        n1, s2, s4 = 2.0, math.sinh(2.0), math.sinh(4.0)
        verbatim_avg = (4.0 * (a + b) * (2.0 + n1 * s2) + n1**2 * s4) / (4.0 * 20)
        closed = averaged_distances(scheme, avg, "closed_form", paper_verbatim=True)
        assert closed[1] == pytest.approx(verbatim_avg, abs=1e-14)

        rs = np.linspace(-1.0, 1.0, 200001)
        vq = 0.5 * n1 * np.exp(-2.0 * rs)
        vp = 0.5 * n1 * np.exp(2.0 * rs)
        verbatim_per_r = (2.0 / 20) * (
            vp**2 + vq * (a + vq) ** 2 + b * (vq + vp + b) ** 2 + a * (a + vp) ** 2
        )
        oracle = np.trapezoid(verbatim_per_r, rs) / 2.0
        quad = averaged_distances(scheme, avg, "quadrature", paper_verbatim=True)
        assert quad[1] == pytest.approx(oracle, abs=1e-7)
        assert abs(closed[1] - quad[1]) > 1e-3  # the two verbatim forms conflict

    def test_sequential_average_optimum_equals_heterodyne(self):
        avg = AverageSpec(nbar=0.0, N=20)
        seq = Sequential(MeterConfig(dq1=2.0**-0.5))
        assert averaged_distances(seq, avg)[1] == pytest.approx(
            averaged_distances(Heterodyne(), avg)[1], abs=1e-14
        )
        # the verbatim averaged form misses the identity
        verbatim = averaged_distances(seq, avg, paper_verbatim=True)[1]
        assert verbatim - averaged_distances(Heterodyne(), avg)[1] == pytest.approx(
            1.0 / 20.0, abs=1e-12
        )

    def test_nondefault_range_requires_quadrature(self):
        avg = AverageSpec(nbar=0.0, N=20, r_lo=-0.5, r_hi=0.5)
        with pytest.raises(ValueError, match="default range"):
            averaged_distances(Homodyne(), avg, "closed_form")
        d1bar, _ = averaged_distances(Homodyne(), avg, "quadrature")
        # (1/N) * integral of 2 cosh(2r) over [-1/2, 1/2] = 2 sinh(1) / N
        assert d1bar == pytest.approx(2.0 * math.sinh(1.0) / 20.0, abs=1e-10)

    def test_invalid_range_rejected(self):
        with pytest.raises(ValueError, match="r_lo < r_hi"):
            AverageSpec(nbar=0.0, N=20, r_lo=1.0, r_hi=-1.0)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="method"):
            averaged_distances(Homodyne(), AverageSpec(nbar=0.0, N=20), "midpoint")


class TestOptimalWidths:
    def test_sequential(self):
        w = optimal_widths("sequential")
        assert w.dq1 == pytest.approx(0.7071067811865476, abs=1e-15)
        assert w.dp1 == pytest.approx(w.dq1, abs=1e-15)

    def test_arthurs_kelly(self):
        w = optimal_widths("arthurs_kelly")
        assert (w.dq1, w.dp2) == (0.5, 0.5)
        meter = w.meter()
        assert (meter.dq1, meter.dq2) == (0.5, 1.0)

    @pytest.mark.parametrize(
        "kappa,dq1,dp2",
        [
            (0.0, 0.5, 0.5),
            (3.0, 1.0, math.sqrt(2.0) / 2.0),
            (-3.0, math.sqrt(2.0) / 2.0, 1.0),
            (0.5, math.sqrt(1.5) / 2.0, math.sqrt(0.5) / 2.0),
        ],
    )
    def test_modified_ak_piecewise(self, kappa, dq1, dp2):
        w = optimal_widths("modified_ak", kappa)
        assert w.dq1 == pytest.approx(dq1, abs=1e-15)
        assert w.dp2 == pytest.approx(dp2, abs=1e-15)

    def test_boundary_is_continuous_but_degenerate(self):
        w = optimal_widths("modified_ak", 1.0)
        assert w.dq1 == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-15)
        assert w.dp2 == 0.0
        assert w.dq2 == math.inf
        with pytest.raises(ValueError, match="boundary"):
            w.meter()
        wm = optimal_widths("modified_ak", -1.0)
        assert wm.dq1 == 0.0 and wm.dp2 == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-15)
        assert wm.dp1 == math.inf
        with pytest.raises(ValueError, match="boundary"):
            wm.meter()

    def test_kappa_required(self):
        with pytest.raises(ValueError, match="finite kappa"):
            optimal_widths("modified_ak")
        with pytest.raises(ValueError, match="no width optimum"):
            optimal_widths("homodyne")


class TestOptimalD1Cor:
    def test_inside_band_equals_heterodyne(self):
        for kappa in (-1.0, -0.5, 0.0, 0.5, 1.0):
            assert optimal_d1_cor(kappa, COHERENT_20) == 0.1

    def test_outside_band(self):
        assert optimal_d1_cor(2.0, COHERENT_20) == pytest.approx(0.15, abs=1e-15)
        assert optimal_d1_cor(-2.0, COHERENT_20) == pytest.approx(0.15, abs=1e-15)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            optimal_d1_cor(math.inf, COHERENT_20)

    @pytest.mark.parametrize("kappa", [-2.0, -1.0, -0.3, 0.0, 0.6, 1.0, 2.0])
    def test_matches_numerical_minimization(self, kappa):
        # independent oracle: minimize d1 of the correlated scheme over
        # (dQ1, dP2) in (0, 3]^2 by coarse grid plus local refinement
        e = ens(r=0.4, nbar=0.3)

        def d1_of(widths):
            dq1, dp2 = widths
            scheme = ModifiedAK(MeterConfig(dq1=dq1, dq2=0.5 / dp2), kappa=kappa)
            return distance_mean(scheme, e)

        grid = np.linspace(1e-3, 3.0, 80)
        best = min(((d1_of((a, b)), (a, b)) for a in grid for b in grid), key=lambda t: t[0])
        refined = optimize.minimize(
            d1_of,
            x0=best[1],
            bounds=[(1e-9, 3.0), (1e-9, 3.0)],
            method="L-BFGS-B",
        )
        assert refined.fun == pytest.approx(optimal_d1_cor(kappa, e), abs=1e-6)


class TestCriticalSqueezing:
    def test_reference_value(self):
        assert critical_squeezing(0.0) == pytest.approx(0.5306375309525179, abs=1e-12)
        assert critical_squeezing(0.0) == pytest.approx(0.53, abs=5e-3)

    @pytest.mark.parametrize("nbar", [0.0, 0.25, 0.5])
    def test_matches_bisection(self, nbar):
        assert critical_squeezing(nbar) == pytest.approx(
            critical_squeezing_bisection(nbar), abs=1e-9
        )

    def test_no_crossing_for_hot_states(self):
        # n1 > 1 + sqrt(2) has no real solution; both routes must agree
        assert critical_squeezing(1.0) is None
        assert critical_squeezing_bisection(1.0) is None

    def test_homodyne_wins_below_the_root(self):
        e = ens(r=0.0)
        assert distance_variance(Homodyne(), e) < distance_variance(Heterodyne(), e)
        above = ens(r=1.0)
        assert distance_variance(Homodyne(), above) > distance_variance(Heterodyne(), above)

    def test_negative_nbar_rejected(self):
        with pytest.raises(ValueError, match="photon number"):
            critical_squeezing(-0.5)


class TestOptimalEqualityGrid:
    @pytest.mark.parametrize("nbar", [0.0, 1.0])
    def test_sequential_and_ak_match_heterodyne_everywhere(self, nbar):
        seq = Sequential(optimal_widths("sequential").meter())
        ak = ArthursKelly(optimal_widths("arthurs_kelly").meter())
        for r in np.linspace(-1.0, 1.0, 21):
            e = ens(r=float(r), nbar=nbar)
            d1_het = distance_mean(Heterodyne(), e)
            d2_het = distance_variance(Heterodyne(), e)
            assert abs(distance_mean(seq, e) - d1_het) <= 1e-12
            assert abs(distance_mean(ak, e) - d1_het) <= 1e-12
            assert abs(distance_variance(seq, e) - d2_het) <= 1e-12
            assert abs(distance_variance(ak, e) - d2_het) <= 1e-12
