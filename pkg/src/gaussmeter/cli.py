"""Command-line front door: scheme queries, distances, sweeps, Monte Carlo runs.

All tabular output is CSV at 9 significant digits (see sweeps.CsvTable);
exit codes are 0 on success, 2 on usage errors (argparse) and 1 on
computation errors.
"""

from __future__ import annotations

import argparse
import sys

from .metrics import (
    EXACT_SMALL_SAMPLE,
    PAPER_ASYMPTOTIC,
    AverageSpec,
    EnsembleSpec,
    averaged_distances,
    critical_squeezing,
    distance_mean,
    distance_variance,
    optimal_widths,
)
from .montecarlo import ENGINES, TrialConfig, empirical_distances
from .schemes import (
    FULL_ENSEMBLE,
    ArthursKelly,
    Heterodyne,
    Homodyne,
    MeterConfig,
    ModifiedAK,
    Sequential,
    readout_distributions,
)
from .states import squeezed_coherent_thermal, symplectic_eigenvalues
from .sweeps import FIGURE_IDS, CsvTable, SweepSpec, run_sweep
from .symplectic import canonical_interaction

SCHEME_NAMES = ("homodyne", "heterodyne", "sequential", "arthurs_kelly", "modified_ak")
INTERACTION_NAMES = ("seq_q", "seq_p", "arthurs_kelly", "modified_ak")
_CONVENTIONS = {"paper": PAPER_ASYMPTOTIC, "exact": EXACT_SMALL_SAMPLE}


def _meter_from_args(args, kind):
    """Meter config from flags; unspecified widths fall back to the optimum."""
    base = optimal_widths(kind, args.kappa) if kind == "modified_ak" else optimal_widths(kind)
    if args.dq1 is None and args.dq2 is None:
        return base.meter()
    dq1 = args.dq1 if args.dq1 is not None else base.dq1
    dq2 = args.dq2 if args.dq2 is not None else base.dq2
    return MeterConfig(dq1=dq1, dq2=dq2)


def _scheme_from_args(args):
    name = args.scheme
    if name == "homodyne":
        return Homodyne()
    if name == "heterodyne":
        return Heterodyne()
    if name == "sequential":
        return Sequential(_meter_from_args(args, "sequential"))
    if name == "arthurs_kelly":
        return ArthursKelly(_meter_from_args(args, "arthurs_kelly"))
    if name == "modified_ak":
        return ModifiedAK(_meter_from_args(args, "modified_ak"), kappa=args.kappa)
    raise ValueError(f"unknown scheme {name!r}")


def _state_from_args(args):
    return squeezed_coherent_thermal(q0=args.q0, p0=args.p0, r=args.r, nbar=args.nbar)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)


def _emit_table(table, out_path):
    _emit(table.render(), out_path)


def _add_state_flags(parser):
    parser.add_argument("--r", type=float, default=0.0, help="squeezing parameter")
    parser.add_argument("--nbar", type=float, default=0.0, help="mean thermal photon number")
    parser.add_argument("--q0", type=float, default=0.0, help="mean of the q quadrature")
    parser.add_argument("--p0", type=float, default=0.0, help="mean of the p quadrature")


def _add_scheme_flags(parser):
    parser.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    parser.add_argument("--dq1", type=float, default=None, help="first meter width (default: optimal)")
    parser.add_argument("--dq2", type=float, default=None, help="second meter width (default: optimal)")
    parser.add_argument("--kappa", type=float, default=0.0, help="meter-meter coupling (modified_ak)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussmeter",
        description="Estimation accuracy of measurement schemes on Gaussian states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="describe a squeezed coherent thermal state")
    _add_state_flags(p_state)
    p_state.add_argument("--out", default=None, metavar="PATH")

    p_scheme = sub.add_parser("scheme", help="readout channels of a scheme on a state")
    _add_state_flags(p_scheme)
    _add_scheme_flags(p_scheme)
    p_scheme.add_argument("--out", default=None, metavar="PATH")

    p_dist = sub.add_parser("distance", help="analytic distance measures d1 and d2")
    _add_state_flags(p_dist)
    _add_scheme_flags(p_dist)
    p_dist.add_argument("--N", type=int, default=20, help="ensemble size")
    p_dist.add_argument("--convention", choices=sorted(_CONVENTIONS), default="paper")
    p_dist.add_argument("--paper-verbatim", action="store_true",
                        help="evaluate the verbatim sequential d2 variant instead of the estimator-derived form")
    p_dist.add_argument("--out", default=None, metavar="PATH")

    p_avg = sub.add_parser("avg", help="distance measures averaged over r in [-1, 1]")
    _add_scheme_flags(p_avg)
    p_avg.add_argument("--nbar", type=float, default=0.0)
    p_avg.add_argument("--N", type=int, default=20)
    p_avg.add_argument("--paper-verbatim", action="store_true")
    p_avg.add_argument("--out", default=None, metavar="PATH")

    p_sweep = sub.add_parser("sweep", help="figure-reproduction sweep to CSV")
    p_sweep.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p_sweep.add_argument("--N", type=int, default=None)
    p_sweep.add_argument("--nbar", type=float, default=None)
    p_sweep.add_argument("--r", type=float, default=None)
    p_sweep.add_argument("--kappa", type=float, default=None)
    p_sweep.add_argument("--resolution", type=int, default=None, help="grid points (default 200)")
    p_sweep.add_argument("--out", default=None, metavar="PATH")

    p_mc = sub.add_parser("mc", help="Monte Carlo estimate of the distance measures")
    _add_state_flags(p_mc)
    _add_scheme_flags(p_mc)
    p_mc.add_argument("--N", type=int, default=20)
    p_mc.add_argument("--trials", type=int, default=10000)
    p_mc.add_argument("--seed", type=int, default=12345)
    p_mc.add_argument("--engine", choices=ENGINES, default="auto")
    p_mc.add_argument("--convention", choices=sorted(_CONVENTIONS), default="exact",
                      help="convention for the analytic comparison columns")
    p_mc.add_argument("--out", default=None, metavar="PATH")

    p_sym = sub.add_parser("symplectic", help="print a canonical interaction's symplectic matrix")
    p_sym.add_argument("--scheme", required=True, choices=INTERACTION_NAMES)
    p_sym.add_argument("--kappa", type=float, default=None)
    p_sym.add_argument("--out", default=None, metavar="PATH")

    p_rc = sub.add_parser("rc", help="critical squeezing where d2(homodyne) = d2(heterodyne)")
    p_rc.add_argument("--nbar", type=float, default=0.0)
    p_rc.add_argument("--out", default=None, metavar="PATH")

    return parser


def _cmd_state(args):
    state = _state_from_args(args)
    nu = symplectic_eigenvalues(state.cov).min()
    table = CsvTable(
        ("q0", "p0", "var_q", "var_p", "nu_min"),
        ((state.mean[0], state.mean[1], state.cov[0, 0], state.cov[1, 1], nu),),
    )
    _emit_table(table, args.out)


def _cmd_scheme(args):
    scheme = _scheme_from_args(args)
    channels = readout_distributions(scheme, _state_from_args(args))
    copies_fraction = 1.0 if channels.copies_per_outcome_pair == FULL_ENSEMBLE else 0.5
    table = CsvTable(
        ("q_mean", "p_mean", "var_q", "var_p", "noise_q", "noise_p", "copies_fraction"),
        (
            (
                channels.q_channel.mean,
                channels.p_channel.mean,
                channels.q_channel.variance,
                channels.p_channel.variance,
                channels.added_noise_q,
                channels.added_noise_p,
                copies_fraction,
            ),
        ),
    )
    _emit_table(table, args.out)


def _cmd_distance(args):
    scheme = _scheme_from_args(args)
    ens = EnsembleSpec(args.N, _state_from_args(args))
    d1 = distance_mean(scheme, ens)
    d2 = distance_variance(
        scheme, ens, _CONVENTIONS[args.convention], paper_verbatim=args.paper_verbatim
    )
    _emit_table(CsvTable(("d1", "d2"), ((d1, d2),)), args.out)


def _cmd_avg(args):
    scheme = _scheme_from_args(args)
    avg = AverageSpec(nbar=args.nbar, N=args.N)
    d1bar, d2bar = averaged_distances(scheme, avg, paper_verbatim=args.paper_verbatim)
    _emit_table(CsvTable(("d1_avg", "d2_avg"), ((d1bar, d2bar),)), args.out)


def _cmd_sweep(args):
    spec = SweepSpec(
        figure=args.figure,
        N=args.N,
        nbar=args.nbar,
        r=args.r,
        kappa=args.kappa,
        resolution=args.resolution,
    )
    _emit_table(run_sweep(spec), args.out)


def _cmd_mc(args):
    scheme = _scheme_from_args(args)
    ens = EnsembleSpec(args.N, _state_from_args(args))
    cfg = TrialConfig(scheme=scheme, ens=ens, trials=args.trials, seed=args.seed)
    report = empirical_distances(cfg, engine=args.engine)
    d1 = distance_mean(scheme, ens)
    d2 = distance_variance(scheme, ens, _CONVENTIONS[args.convention])
    table = CsvTable(
        ("d1_hat", "se_d1", "d2_hat", "se_d2", "d1_analytic", "d2_analytic", "trials"),
        ((report.d1_hat, report.se_d1, report.d2_hat, report.se_d2, d1, d2, report.trials),),
    )
    _emit_table(table, args.out)


def _cmd_symplectic(args):
    if args.scheme == "modified_ak" and args.kappa is None:
        raise ValueError("modified_ak requires --kappa")
    _, S = canonical_interaction(args.scheme, args.kappa)
    labels = ("q", "p", "Q1", "P1", "Q2", "P2")[: S.shape[0]]
    table = CsvTable(labels, tuple(tuple(row) for row in S))
    _emit_table(table, args.out)


def _cmd_rc(args):
    rc = critical_squeezing(args.nbar)
    text = "no crossing\n" if rc is None else format(rc, ".9g") + "\n"
    _emit(text, args.out)


_COMMANDS = {
    "state": _cmd_state,
    "scheme": _cmd_scheme,
    "distance": _cmd_distance,
    "avg": _cmd_avg,
    "sweep": _cmd_sweep,
    "mc": _cmd_mc,
    "symplectic": _cmd_symplectic,
    "rc": _cmd_rc,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
