"""Parameter sweeps producing flat result rows.

A sweep varies one of {detuning, coupling, temperature} over a uniform
grid and evaluates analytic shifts, rate prefactors, and exact
diagonalization at every point.  Points where the math breaks down
(resonant denominators, collapsed ladders, ambiguous labeling) produce
rows flagged with the error name rather than being dropped, so output
files always have one row per surviving grid point.

Detuning grids exclude the resonance window |detuning| < 3 g0 by default;
exact-only sweeps keep the full grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .exact import AmbiguousLabeling, DimensionOverflow, exact_shifts
from .model import JC, RABI, NonPositiveSplitting, SystemConfig
from .rates import (dressed_dephasing_prefactors, photon_assisted_prefactor,
                    purcell_prefactor, purcell_rates, second_order_rates)
from .shifts import ResonantDivergence, shift_report

DETUNING = "detuning"
COUPLING = "coupling"
TEMPERATURE = "temperature"
SWEEP_VARIABLES = (DETUNING, COUPLING, TEMPERATURE)

RESONANCE_WINDOW_FACTOR = 3.0
# Fit grids keep points closer to resonance than analytic sweeps do: the
# near-resonance points carry most of the information about the coupling,
# and dropping everything inside 3 g0 biases the fitted g0 upward.
FIT_WINDOW_FACTOR = 1.5

_ROW_ERRORS = (ResonantDivergence, NonPositiveSplitting, AmbiguousLabeling,
               DimensionOverflow)


class SweepError(ValueError):
    """A sweep request could not be interpreted."""


@dataclass(frozen=True)
class SweepRequest:
    variable: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise SweepError(f"sweep variable must be one of {SWEEP_VARIABLES}, "
                             f"got {self.variable!r}")
        if self.count < 2:
            raise SweepError(f"sweep count must be >= 2, got {self.count}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text: str) -> "SweepRequest":
        """Parse the CLI form VAR:START:STOP:COUNT."""
        parts = text.split(":")
        if len(parts) != 4:
            raise SweepError(f"sweep must look like VAR:START:STOP:COUNT, got {text!r}")
        var, start, stop, count = parts
        try:
            return cls(variable=var, start=float(start), stop=float(stop),
                       count=int(count))
        except ValueError as exc:
            raise SweepError(f"bad sweep {text!r}: {exc}") from exc


def default_detuning_grid(g0: float, start: float = -3.0, stop: float = 3.0,
                          count: int = 161, window: float | None = None) -> np.ndarray:
    """The standard fit grid: uniform points minus the resonance window.

    window is the excluded half-width in GHz; None means 3 * g0.
    """
    if window is None:
        window = RESONANCE_WINDOW_FACTOR * g0
    grid = np.linspace(start, stop, count)
    return grid[np.abs(grid) >= window]


def apply_resonance_exclusion(request: SweepRequest, config: SystemConfig,
                              window: float | None = None) -> np.ndarray:
    """Grid points of a request, minus the resonance window for detuning sweeps.

    window overrides the excluded half-width (GHz); None means 3 * g0,
    and 0 keeps the full grid.
    """
    grid = request.grid()
    if request.variable == DETUNING:
        if window is None:
            window = RESONANCE_WINDOW_FACTOR * config.transmon.g0
        if window > 0.0:
            grid = grid[np.abs(grid) >= window]
    return grid


def _build(config: SystemConfig, variable: str, value: float):
    if variable == DETUNING:
        return config.build(detuning=value)
    if variable == COUPLING:
        return config.build(coupling=value)
    return config.build(temperature=value)


_NAN = float("nan")


@dataclass(frozen=True)
class ShiftRow:
    """Analytic and exact shift observables at one sweep point."""

    delta0_ghz: float
    chi0: float = _NAN
    xi0: float = _NAN
    chi_tilde0: float = _NAN
    pull_rabi: float = _NAN
    pull_jc: float = _NAN
    qshift_rabi: float = _NAN
    qshift_jc: float = _NAN
    exact_pull: float = _NAN
    exact_qshift: float = _NAN
    err_frac_rabi: float = _NAN
    err_frac_jc: float = _NAN
    error: str = ""


@dataclass(frozen=True)
class RateRow:
    """Fourth-order prefactors and headline rates at one sweep point."""

    delta0_ghz: float
    p0_rabi: float = _NAN
    p0_jc: float = _NAN
    d0: float = _NAN
    c0_rabi: float = _NAN
    a0_rabi: float = _NAN
    a0_jc: float = _NAN
    gamma_down0_mhz: float = _NAN
    gamma_up0_mhz: float = _NAN
    gamma_phi0_mhz: float = _NAN
    kappa_minus_mhz: float = _NAN
    kappa_plus_mhz: float = _NAN
    purcell_down0_rabi_mhz: float = _NAN
    purcell_down0_jc_mhz: float = _NAN
    error: str = ""


@dataclass(frozen=True)
class ExactRow:
    delta0_ghz: float
    exact_pull: float = _NAN
    exact_qshift: float = _NAN
    error: str = ""


def columns(row_type) -> list[str]:
    return [f.name for f in fields(row_type)]


def _detuning_of(config: SystemConfig, variable: str, value: float) -> float:
    if variable == DETUNING:
        return value
    return config.transmon.omega_10 - config.resonator.omega_r


def _frac_err(analytic: float, exact: float) -> float:
    """(analytic - exact) / exact, with 0/0 -> 0 so zero-coupling rows stay finite."""
    if exact != 0.0:
        return (analytic - exact) / exact
    return 0.0 if analytic == 0.0 else math.inf


def shift_rows(config: SystemConfig, variable: str, values,
               include_exact: bool = True) -> list[ShiftRow]:
    rows = []
    for value in values:
        delta0 = _detuning_of(config, variable, float(value))
        try:
            system = _build(config, variable, float(value))
            report = shift_report(system)
            row = dict(
                delta0_ghz=delta0,
                chi0=report.chi[0], xi0=report.xi[0], chi_tilde0=report.chi_tilde[0],
                pull_rabi=report.resonator_pull_rabi, pull_jc=report.resonator_pull_jc,
                qshift_rabi=report.qubit_shift_rabi, qshift_jc=report.qubit_shift_jc)
            if include_exact:
                exact = exact_shifts(system, RABI)
                row["exact_pull"] = exact.resonator_pull
                row["exact_qshift"] = exact.qubit_shift
                row["err_frac_rabi"] = _frac_err(report.resonator_pull_rabi,
                                                 exact.resonator_pull)
                row["err_frac_jc"] = _frac_err(report.resonator_pull_jc,
                                               exact.resonator_pull)
            rows.append(ShiftRow(**row))
        except _ROW_ERRORS as exc:
            rows.append(ShiftRow(delta0_ghz=delta0, error=type(exc).__name__))
    return rows


def rate_rows(config: SystemConfig, variable: str, values) -> list[RateRow]:
    rows = []
    for value in values:
        delta0 = _detuning_of(config, variable, float(value))
        try:
            system = _build(config, variable, float(value))
            second = second_order_rates(system)
            by_label = {(t.jump.label): t.rate_mhz for t in second}
            d0, c0_rabi = dressed_dephasing_prefactors(0, system, RABI)
            purcell_rabi = purcell_rates(0, system, RABI)
            purcell_jc = purcell_rates(0, system, JC)
            rows.append(RateRow(
                delta0_ghz=delta0,
                p0_rabi=purcell_prefactor(0, system, RABI),
                p0_jc=purcell_prefactor(0, system, JC),
                d0=d0,
                c0_rabi=c0_rabi,
                a0_rabi=photon_assisted_prefactor(0, system, RABI),
                a0_jc=photon_assisted_prefactor(0, system, JC),
                gamma_down0_mhz=by_label["sigma(0,1)"],
                gamma_up0_mhz=by_label["sigma(1,0)"],
                gamma_phi0_mhz=by_label["sigma(0,0)"],
                kappa_minus_mhz=by_label["a"],
                kappa_plus_mhz=by_label["adag"],
                purcell_down0_rabi_mhz=purcell_rabi[0],
                purcell_down0_jc_mhz=purcell_jc[0]))
        except _ROW_ERRORS as exc:
            rows.append(RateRow(delta0_ghz=delta0, error=type(exc).__name__))
    return rows


def exact_rows(config: SystemConfig, variable: str, values,
               model: str | None = None) -> list[ExactRow]:
    if model is None:
        model = config.interaction_model
    rows = []
    for value in values:
        delta0 = _detuning_of(config, variable, float(value))
        try:
            system = _build(config, variable, float(value))
            exact = exact_shifts(system, model)
            rows.append(ExactRow(delta0_ghz=delta0, exact_pull=exact.resonator_pull,
                                 exact_qshift=exact.qubit_shift))
        except _ROW_ERRORS as exc:
            rows.append(ExactRow(delta0_ghz=delta0, error=type(exc).__name__))
    return rows


def all_rows_failed(rows) -> bool:
    return bool(rows) and all(row.error for row in rows)


def format_csv(rows, row_type) -> str:
    """Serialize rows deterministically: 17 significant digits, one header."""
    names = columns(row_type)
    lines = [",".join(names)]
    for row in rows:
        cells = []
        for name in names:
            value = getattr(row, name)
            if isinstance(value, str):
                cells.append(value)
            else:
                cells.append(format(float(value), ".17g"))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[dict[str, float | str]]]:
    """Read a CSV produced by format_csv back into dict rows."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty CSV")
    names = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(names):
            raise ValueError(f"row has {len(cells)} cells, header has {len(names)}")
        row: dict[str, float | str] = {}
        for name, cell in zip(names, cells):
            if name == "error":
                row[name] = cell
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    row[name] = cell
        rows.append(row)
    return names, rows
