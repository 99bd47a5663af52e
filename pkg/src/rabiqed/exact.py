"""Exact diagonalization on the truncated product space, plus coupling fits.

The Hamiltonian (GHz, ordinary frequencies) is

    H = omega_r a+ a + sum_k omega_k sigma_kk + H_int,

with H_int = sum_k g_k (sigma_{k,k+1} + sigma_{k+1,k})(a+ + a) for the
full-dipole model and sum_k g_k (sigma_{k,k+1} a+ + sigma_{k+1,k} a) for
the rotating-wave model.  Dressed eigenstates are labeled by maximum
overlap with the bare product basis, greedily in order of increasing bare
energy, and the dispersive observables are read off the labeled energies:

    resonator pull = [E(0,1) - E(0,0)] - omega_r
    qubit shift    = [E(1,0) - E(0,0)] - omega_10
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .model import (RABI, ResonatorSpec, SystemSpec, TransmonSpec, check_model,
                    expand_transmon, silent_baths)
from .operators import ProductSpace, annihilator, number_operator, qubit_lower
from .shifts import DEFAULT_TOL_RES, ResonantDivergence, shift_report

DIM_CAP = 4096

RESONATOR_PULL = "resonator_pull"
QUBIT_SHIFT = "qubit_shift"
OBSERVABLES = (RESONATOR_PULL, QUBIT_SHIFT)


class DimensionOverflow(ValueError):
    """Requested product space exceeds the dense-solver cap."""


class ConvergenceFailure(RuntimeError):
    """The eigensolver failed to converge."""


class AmbiguousLabeling(RuntimeError):
    """No eigenvector overlaps the requested bare state by more than 1/2."""

    def __init__(self, pair: tuple[int, int], overlap: float):
        self.pair = pair
        self.overlap = overlap
        super().__init__(f"bare state {pair} has best available overlap "
                         f"{overlap:.4f} <= 0.5; dressed labeling breaks down here")


class NoBracket(RuntimeError):
    """The residual scan found no interior minimum to bracket."""


class DegenerateCurvature(RuntimeError):
    """Residual curvature at the fit minimum is not positive."""


def build_hamiltonian(system: SystemSpec, model: str | None = None,
                      dim_cap: int = DIM_CAP) -> np.ndarray:
    """Dense, exactly symmetric Hamiltonian on the product space."""
    if model is None:
        model = system.interaction_model
    check_model(model)
    q = system.qubit
    n_levels = q.num_levels
    m = system.resonator.fock_truncation
    if n_levels * m > dim_cap:
        raise DimensionOverflow(f"product dimension {n_levels * m} exceeds cap {dim_cap}")
    space = ProductSpace(n_levels, m)
    a = annihilator(m)
    h = np.kron(np.diag(q.level_energies), np.eye(m))
    h += np.kron(np.eye(n_levels), system.omega_r * number_operator(m))
    lower = sum(q.coupling_ladder[k] * qubit_lower(k, n_levels)
                for k in range(n_levels - 1))
    if model == RABI:
        h += np.kron(lower + lower.T, a + a.T)
    else:
        coupl = np.kron(lower, a.T)
        h += coupl + coupl.T
    space.check_operator(h)
    return h


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hamiltonian."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def diagonalize(h: np.ndarray) -> Spectrum:
    """Dense symmetric eigensolve; raises ConvergenceFailure on LAPACK failure."""
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


@dataclass(frozen=True)
class Labeling:
    """Partial map from bare (k, n) pairs to eigenvector indices.

    Pairs whose best available overlap is <= 1/2 stay unassigned; their
    best weight is still recorded in overlaps for diagnostics.
    """

    labels: dict[tuple[int, int], int]
    overlaps: dict[tuple[int, int], float]


def label_dressed_states(spectrum: Spectrum, system: SystemSpec,
                         required: Iterable[tuple[int, int]] | None = None,
                         threshold: float = 0.5) -> Labeling:
    """Greedy maximum-overlap assignment of bare product labels.

    Bare states are processed in order of increasing bare energy (ties by
    lexicographic (k, n)), each claiming its best-overlap eigenvector among
    those still unclaimed.  A claim needs squared overlap strictly above
    ``threshold``; anything at or below stays unlabeled.  If a pair listed
    in ``required`` ends up unlabeled, AmbiguousLabeling is raised.
    """
    q = system.qubit
    m = system.resonator.fock_truncation
    space = ProductSpace(q.num_levels, m)
    weights = np.abs(spectrum.eigenvectors) ** 2
    order = sorted(space.pairs(),
                   key=lambda kn: (q.level_energies[kn[0]] + kn[1] * system.omega_r, kn))
    unclaimed = np.ones(space.dimension, dtype=bool)
    labels: dict[tuple[int, int], int] = {}
    overlaps: dict[tuple[int, int], float] = {}
    for k, n in order:
        row = weights[space.index(k, n)]
        candidates = np.where(unclaimed)[0]
        best = candidates[np.argmax(row[candidates])]
        overlap = float(row[best])
        overlaps[(k, n)] = overlap
        # a strictly-greater-than-half claim; exact 50/50 hybridization is
        # ambiguous, and floating point puts it at 0.5 +- a few ulp
        if overlap > threshold + 1e-12:
            labels[(k, n)] = int(best)
            unclaimed[best] = False
    if required is not None:
        for pair in required:
            if pair not in labels:
                raise AmbiguousLabeling(pair, overlaps.get(pair, 0.0))
    return Labeling(labels=labels, overlaps=overlaps)


@dataclass(frozen=True)
class ExactShifts:
    resonator_pull: float
    qubit_shift: float


_REQUIRED_PAIRS = ((0, 0), (0, 1), (1, 0))


def exact_shifts(system: SystemSpec, model: str | None = None) -> ExactShifts:
    """Dispersive observables from labeled exact eigenenergies."""
    h = build_hamiltonian(system, model)
    spectrum = diagonalize(h)
    labeling = label_dressed_states(spectrum, system, required=_REQUIRED_PAIRS)
    e = spectrum.eigenvalues
    e00 = e[labeling.labels[(0, 0)]]
    e01 = e[labeling.labels[(0, 1)]]
    e10 = e[labeling.labels[(1, 0)]]
    return ExactShifts(
        resonator_pull=float(e01 - e00 - system.omega_r),
        qubit_shift=float(e10 - e00 - system.qubit.splitting(0)))


def analytic_shift(detuning: float, g0: float, model: str, observable: str, *,
                   omega_r: float, anharmonicity: float, num_levels: int,
                   tol_res: float = DEFAULT_TOL_RES) -> float:
    """Second-order shift prediction for a transmon ladder at one detuning."""
    if observable not in OBSERVABLES:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {observable!r}")
    t = TransmonSpec(omega_10=omega_r + detuning, anharmonicity=anharmonicity,
                     g0=g0, num_levels=num_levels)
    system = SystemSpec(qubit=expand_transmon(t),
                        resonator=ResonatorSpec(omega_r=omega_r, fock_truncation=2),
                        interaction_model=check_model(model), baths=silent_baths())
    report = shift_report(system, tol_res=tol_res)
    if observable == RESONATOR_PULL:
        return report.resonator_pull(model)
    return report.qubit_shift(model)


@dataclass(frozen=True)
class FitResult:
    g0_hat: float
    stderr: float
    residual_sum: float
    n_points: int
    model: str
    observable: str


def _golden_section(f: Callable[[float], float], a: float, b: float, c: float,
                    tol: float) -> float:
    """Minimize a unimodal f over the bracket a < b < c."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = c - invphi * (c - a)
    x2 = a + invphi * (c - a)
    f1, f2 = f(x1), f(x2)
    while c - a > tol:
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - invphi * (c - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (c - a)
            f2 = f(x2)
    return 0.5 * (a + c)


def _usable_pairs(data, model: str, observable: str, *, omega_r: float,
                  anharmonicity: float, num_levels: int,
                  probe_g0: float) -> list[tuple[float, float]]:
    """Drop data points where the analytic prediction diverges.

    The resonant denominators depend only on the frequencies, so the set of
    detunings where the prediction diverges is the same for every trial g0
    (and for both models); one probe evaluation per point settles it.
    """
    pairs = []
    for d, y in data:
        detuning, observed = float(d), float(y)
        try:
            analytic_shift(detuning, probe_g0, model, observable, omega_r=omega_r,
                           anharmonicity=anharmonicity, num_levels=num_levels)
        except ResonantDivergence:
            continue
        pairs.append((detuning, observed))
    return pairs


def _residual_function(pairs, model: str, observable: str, *, omega_r: float,
                       anharmonicity: float, num_levels: int) -> Callable[[float], float]:
    def residual_sum(g0: float) -> float:
        total = 0.0
        for detuning, observed in pairs:
            predicted = analytic_shift(detuning, g0, model, observable,
                                       omega_r=omega_r, anharmonicity=anharmonicity,
                                       num_levels=num_levels)
            total += (predicted - observed) ** 2
        return total

    return residual_sum


def fit_residual_curve(data: Sequence[tuple[float, float]], model: str,
                       observable: str, *, omega_r: float, anharmonicity: float,
                       num_levels: int, grid: Sequence[float]) -> np.ndarray:
    """Residual sum of the g0 fit evaluated on an explicit g0 grid."""
    check_model(model)
    pairs = _usable_pairs(data, model, observable, omega_r=omega_r,
                          anharmonicity=anharmonicity, num_levels=num_levels,
                          probe_g0=1e-4)
    if not pairs:
        raise ValueError("no usable data points")
    residual_sum = _residual_function(pairs, model, observable, omega_r=omega_r,
                                      anharmonicity=anharmonicity,
                                      num_levels=num_levels)
    return np.array([residual_sum(float(g)) for g in grid])


def fit_g0(data: Sequence[tuple[float, float]], model: str, observable: str, *,
           omega_r: float, anharmonicity: float, num_levels: int,
           g_lo: float = 1e-4, g_hi: float = 2.0, scan_points: int = 61,
           tol: float = 1e-10) -> FitResult:
    """Least-squares fit of the ladder coupling g0 to observed shifts.

    ``data`` holds (detuning, observed shift) pairs in GHz.  The residual
    sum is scanned over a geometric g0 grid to bracket the minimum, the
    bracket is refined by golden section, and the quoted standard error
    comes from the curvature of the residual sum at the minimum scaled by
    the residual variance.
    """
    check_model(model)
    pairs = _usable_pairs(data, model, observable, omega_r=omega_r,
                          anharmonicity=anharmonicity, num_levels=num_levels,
                          probe_g0=g_lo)
    if len(pairs) < 3:
        raise ValueError(f"need at least 3 usable data points, got {len(pairs)}")
    residual_sum = _residual_function(pairs, model, observable, omega_r=omega_r,
                                      anharmonicity=anharmonicity,
                                      num_levels=num_levels)

    grid = np.geomspace(g_lo, g_hi, scan_points)
    values = [residual_sum(g) for g in grid]
    j = int(np.argmin(values))
    if j == 0 or j == len(grid) - 1:
        raise NoBracket(f"residual minimum sits at the scan boundary g0 = {grid[j]:.3e}")
    g_hat = _golden_section(residual_sum, grid[j - 1], grid[j], grid[j + 1], tol)
    s_min = residual_sum(g_hat)

    h = max(1e-7, 1e-4 * g_hat)
    curvature = (residual_sum(g_hat + h) - 2.0 * s_min + residual_sum(g_hat - h)) / h ** 2
    if not (math.isfinite(curvature) and curvature > 0.0):
        raise DegenerateCurvature(f"residual curvature {curvature} at g0 = {g_hat:.6f}")
    variance = s_min / (len(pairs) - 1)
    stderr = math.sqrt(2.0 * variance / curvature)
    return FitResult(g0_hat=float(g_hat), stderr=float(stderr),
                     residual_sum=float(s_min), n_points=len(pairs),
                     model=model, observable=observable)
