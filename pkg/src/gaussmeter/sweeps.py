"""Figure-reproduction sweeps with deterministic CSV output.

Each panel id maps to a parameter sweep of the analytic distance measures;
the output is a rectangular CSV table (one column per plotted curve,
ascending sweep variable, 9 significant digits) suitable for golden-file
regression.  Meter widths: panels swept over the first meter width use
dP2 = 1/2 for the Arthurs-Kelly curve (its optimum); panels swept over the
state parameters evaluate sequential and Arthurs-Kelly at their optimal
widths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import (
    AverageSpec,
    EnsembleSpec,
    averaged_distances,
    distance_mean,
    distance_variance,
    optimal_d1_cor,
    optimal_widths,
)
from .schemes import ArthursKelly, Heterodyne, Homodyne, MeterConfig, Sequential
from .states import squeezed_coherent_thermal

#: Sweep ranges; the meter-width grid starts away from 0 (divergent noise).
_DQ1_RANGE = (0.01, 2.0)
_R_RANGE = (0.0, 1.0)
_NBAR_RANGE = (0.0, 1.0)
_KAPPA_RANGE = (-2.0, 2.0)

DEFAULT_RESOLUTION = 200
DEFAULT_N = 20

SCHEME_COLUMNS = ("homodyne", "heterodyne", "sequential", "arthurs_kelly")


@dataclass(frozen=True)
class SweepSpec:
    """A figure id plus optional parameter overrides."""

    figure: str
    N: int | None = None
    nbar: float | None = None
    r: float | None = None
    kappa: float | None = None
    resolution: int | None = None

    def __post_init__(self):
        if self.resolution is not None and self.resolution < 2:
            raise ValueError(f"grid resolution must be >= 2, got {self.resolution}")


@dataclass(frozen=True)
class CsvTable:
    """Rectangular numeric table rendered at 9 significant digits."""

    header: tuple
    rows: tuple

    def __post_init__(self):
        width = len(self.header)
        for row in self.rows:
            if len(row) != width:
                raise ValueError("table rows must match the header width")

    def render(self):
        lines = [",".join(self.header)]
        for row in self.rows:
            lines.append(",".join(format(value, ".9g") for value in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text):
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty CSV text")
        header = tuple(lines[0].split(","))
        rows = tuple(tuple(float(x) for x in line.split(",")) for line in lines[1:] if line)
        return cls(header=header, rows=rows)


def _optimal_schemes():
    seq = Sequential(optimal_widths("sequential").meter())
    ak_w = optimal_widths("arthurs_kelly")
    ak = ArthursKelly(ak_w.meter())
    return seq, ak


def _width_sweep_table(metric_for, r, nbar, N, resolution):
    """d1/d2-style sweep over the first meter width."""
    state = squeezed_coherent_thermal(r=r, nbar=nbar)
    ens = EnsembleSpec(N, state)
    xs = np.linspace(*_DQ1_RANGE, resolution)
    metric = metric_for(ens)
    rows = []
    for x in xs:
        meter_seq = MeterConfig(dq1=float(x))
        meter_ak = MeterConfig(dq1=float(x), dq2=1.0)  # dP2 = 1/2
        rows.append(
            (
                float(x),
                metric(Homodyne()),
                metric(Heterodyne()),
                metric(Sequential(meter_seq)),
                metric(ArthursKelly(meter_ak)),
            )
        )
    return CsvTable(("dq1",) + SCHEME_COLUMNS, tuple(rows))


def _state_sweep_table(metric_of_ens, variable, fixed, N, resolution):
    """d1/d2-style sweep over a state parameter, schemes at optimal widths."""
    seq, ak = _optimal_schemes()
    schemes = (Homodyne(), Heterodyne(), seq, ak)
    if variable == "r":
        xs = np.linspace(*_R_RANGE, resolution)
        states = [squeezed_coherent_thermal(r=float(x), nbar=fixed) for x in xs]
    else:
        xs = np.linspace(*_NBAR_RANGE, resolution)
        states = [squeezed_coherent_thermal(r=fixed, nbar=float(x)) for x in xs]
    rows = []
    for x, state in zip(xs, states):
        ens = EnsembleSpec(N, state)
        rows.append((float(x),) + tuple(metric_of_ens(s, ens) for s in schemes))
    return CsvTable((variable,) + SCHEME_COLUMNS, tuple(rows))


def _average_sweep_table(index, nbar, N, resolution):
    """Averaged-measure sweep over the first meter width."""
    xs = np.linspace(*_DQ1_RANGE, resolution)
    avg = AverageSpec(nbar=nbar, N=N)
    rows = []
    for x in xs:
        meter_seq = MeterConfig(dq1=float(x))
        meter_ak = MeterConfig(dq1=float(x), dq2=1.0)
        rows.append(
            (
                float(x),
                averaged_distances(Homodyne(), avg)[index],
                averaged_distances(Heterodyne(), avg)[index],
                averaged_distances(Sequential(meter_seq), avg)[index],
                averaged_distances(ArthursKelly(meter_ak), avg)[index],
            )
        )
    return CsvTable(("dq1",) + SCHEME_COLUMNS, tuple(rows))


def _varcor_a_table(r, nbar, N, resolution):
    state = squeezed_coherent_thermal(r=r, nbar=nbar)
    ens = EnsembleSpec(N, state)
    het = distance_mean(Heterodyne(), ens)
    xs = np.linspace(*_KAPPA_RANGE, resolution)
    rows = tuple((float(k), optimal_d1_cor(float(k), ens), het) for k in xs)
    return CsvTable(("kappa", "d1_cor_opt", "heterodyne"), rows)


def _varcor_b_table(resolution):
    xs = np.linspace(*_KAPPA_RANGE, resolution)
    rows = []
    for k in xs:
        w = optimal_widths("modified_ak", float(k))
        rows.append((float(k), w.dq1, w.dp2))
    return CsvTable(("kappa", "dq1_opt", "dp2_opt"), rows)


# figure id -> (builder key, default panel parameters, overridable names)
_PANELS = {
    "fig3a": ("d1_width", {"r": 0.0, "nbar": 0.0}, {"r", "nbar"}),
    "fig3b": ("d1_width", {"r": 1.0, "nbar": 0.0}, {"r", "nbar"}),
    "fig4a": ("d2_width", {"r": 0.0, "nbar": 0.0}, {"r", "nbar"}),
    "fig4b": ("d2_width", {"r": 1.0, "nbar": 0.0}, {"r", "nbar"}),
    "fig5a": ("d1_vs_r", {"nbar": 0.0}, {"nbar"}),
    "fig5b": ("d1_vs_nbar", {"r": 1.0}, {"r"}),
    "fig6a": ("d2_vs_r", {"nbar": 0.0}, {"nbar"}),
    "fig6b": ("d2_vs_nbar", {"r": 1.0}, {"r"}),
    "fig7a": ("avg_d1_width", {"nbar": 0.0}, {"nbar"}),
    "fig7b": ("avg_d1_width", {"nbar": 1.0}, {"nbar"}),
    "fig8a": ("avg_d2_width", {"nbar": 0.0}, {"nbar"}),
    "fig8b": ("avg_d2_width", {"nbar": 1.0}, {"nbar"}),
    "varcor_a": ("varcor_a", {"r": 0.0, "nbar": 0.0}, {"r", "nbar"}),
    "varcor_b": ("varcor_b", {}, set()),
}

FIGURE_IDS = tuple(sorted(_PANELS))


def run_sweep(spec):
    """Evaluate one figure panel.

    Args:
        spec (SweepSpec): panel id plus overrides

    Returns:
        CsvTable
    """
    if spec.figure not in _PANELS:
        raise ValueError(
            f"unknown figure id {spec.figure!r}; valid ids: {', '.join(FIGURE_IDS)}"
        )
    kind, defaults, overridable = _PANELS[spec.figure]
    params = dict(defaults)
    for name in ("nbar", "r", "kappa"):
        value = getattr(spec, name)
        if value is None:
            continue
        if name not in overridable:
            raise ValueError(f"figure {spec.figure!r} has no {name} parameter to override")
        params[name] = value
    N = spec.N if spec.N is not None else DEFAULT_N
    resolution = spec.resolution if spec.resolution is not None else DEFAULT_RESOLUTION

    if kind == "d1_width":
        return _width_sweep_table(
            lambda ens: (lambda s: distance_mean(s, ens)),
            params["r"], params["nbar"], N, resolution,
        )
    if kind == "d2_width":
        return _width_sweep_table(
            lambda ens: (lambda s: distance_variance(s, ens)),
            params["r"], params["nbar"], N, resolution,
        )
    if kind == "d1_vs_r":
        return _state_sweep_table(distance_mean, "r", params["nbar"], N, resolution)
    if kind == "d1_vs_nbar":
        return _state_sweep_table(distance_mean, "nbar", params["r"], N, resolution)
    if kind == "d2_vs_r":
        return _state_sweep_table(distance_variance, "r", params["nbar"], N, resolution)
    if kind == "d2_vs_nbar":
        return _state_sweep_table(distance_variance, "nbar", params["r"], N, resolution)
    if kind == "avg_d1_width":
        return _average_sweep_table(0, params["nbar"], N, resolution)
    if kind == "avg_d2_width":
        return _average_sweep_table(1, params["nbar"], N, resolution)
    if kind == "varcor_a":
        return _varcor_a_table(params["r"], params["nbar"], N, resolution)
    if kind == "varcor_b":
        return _varcor_b_table(resolution)
    raise AssertionError(f"unhandled panel kind {kind!r}")
