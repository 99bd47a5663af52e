"""System parameter types: multi-level qubit, resonator, bath assignments.

Conventions used throughout the package:

- hbar = k_B = 1; every stored frequency is an ordinary (/2pi) frequency
  in GHz.  Every analytic expression downstream is homogeneous in
  frequency, so GHz in means GHz out; angular factors of 2pi enter only
  when real-time dynamics is integrated.
- Qubit levels are indexed k = 0..N-1 with level energies omega_k
  (omega_0 = 0 by choice of reference) and nearest-neighbour coupling
  matrix elements g_k on the k <-> k+1 transition.
- Transition frequencies are written omega_{k+1,k} = omega_{k+1} - omega_k.
- Out-of-range ladder quantities (g_k, beta_k for k < 0 or k > N-2) are
  identically zero; accessors below implement that convention so that
  boundary terms never need special-casing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Mapping

from .baths import SpectralFunction, bath_from_config

RABI = "rabi"
JC = "jc"
MODELS = (RABI, JC)

BATH_LABELS = ("X", "Z", "R")


class NonPositiveSplitting(ValueError):
    """A qubit transition frequency came out <= 0."""


class ConfigError(ValueError):
    """A configuration file could not be interpreted."""


class InvalidSpec(ValueError):
    """Validation found hard errors; carries the full list."""

    def __init__(self, errors: tuple[str, ...]):
        self.errors = tuple(errors)
        super().__init__("; ".join(errors))


def check_model(model: str) -> str:
    if model not in MODELS:
        raise ValueError(f"interaction model must be one of {MODELS}, got {model!r}")
    return model


@dataclass(frozen=True)
class QubitSpec:
    """An N-level qubit ladder.

    Attributes
    ----------
    level_energies : tuple of float, length N
        omega_k in GHz, with omega_0 = 0.
    coupling_ladder : tuple of float, length N-1
        g_k in GHz for the k <-> k+1 transition.
    transverse_bath_couplings : tuple of float, length N-1
        Dimensionless sensitivities beta_k of the k <-> k+1 transition to
        the transverse bath.
    dephasing_sensitivities : tuple of float, length N
        Dimensionless sensitivities delta-omega_k of level k to the
        longitudinal (dephasing) bath.
    """

    level_energies: tuple[float, ...]
    coupling_ladder: tuple[float, ...]
    transverse_bath_couplings: tuple[float, ...]
    dephasing_sensitivities: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "level_energies", tuple(float(x) for x in self.level_energies))
        object.__setattr__(self, "coupling_ladder", tuple(float(x) for x in self.coupling_ladder))
        object.__setattr__(self, "transverse_bath_couplings",
                           tuple(float(x) for x in self.transverse_bath_couplings))
        object.__setattr__(self, "dephasing_sensitivities",
                           tuple(float(x) for x in self.dephasing_sensitivities))
        n = len(self.level_energies)
        if n < 2:
            raise ValueError(f"qubit needs at least 2 levels, got {n}")
        if len(self.coupling_ladder) != n - 1:
            raise ValueError(f"coupling_ladder must have length {n - 1}, "
                             f"got {len(self.coupling_ladder)}")
        if len(self.transverse_bath_couplings) != n - 1:
            raise ValueError(f"transverse_bath_couplings must have length {n - 1}, "
                             f"got {len(self.transverse_bath_couplings)}")
        if len(self.dephasing_sensitivities) != n:
            raise ValueError(f"dephasing_sensitivities must have length {n}, "
                             f"got {len(self.dephasing_sensitivities)}")

    @property
    def num_levels(self) -> int:
        return len(self.level_energies)

    def splitting(self, k: int) -> float:
        """omega_{k+1,k}; only defined for 0 <= k <= N-2."""
        if not 0 <= k <= self.num_levels - 2:
            raise IndexError(f"transition index {k} out of range for {self.num_levels} levels")
        return self.level_energies[k + 1] - self.level_energies[k]

    # Total-function ladder accessors: zero outside the physical range, so
    # boundary terms (k = 0 and k = N-1) drop out of sums automatically.

    def g(self, k: int) -> float:
        if 0 <= k <= self.num_levels - 2:
            return self.coupling_ladder[k]
        return 0.0

    def beta(self, k: int) -> float:
        if 0 <= k <= self.num_levels - 2:
            return self.transverse_bath_couplings[k]
        return 0.0

    def dw(self, k: int) -> float:
        if 0 <= k <= self.num_levels - 1:
            return self.dephasing_sensitivities[k]
        return 0.0


@dataclass(frozen=True)
class TransmonSpec:
    """Ladder parameters for a weakly anharmonic (transmon-like) qubit.

    omega_{k+1,k} = omega_10 - k * anharmonicity, g_k = sqrt(k+1) * g0.
    """

    omega_10: float
    anharmonicity: float
    g0: float
    num_levels: int

    def __post_init__(self) -> None:
        if self.num_levels < 2:
            raise ValueError(f"num_levels must be >= 2, got {self.num_levels}")


def expand_transmon(spec: TransmonSpec,
                    bath_couplings: tuple[float, ...] | None = None,
                    dephasing_sensitivities: tuple[float, ...] | None = None) -> QubitSpec:
    """Expand a transmon ladder into an explicit QubitSpec.

    Level energies follow from summing the splittings,
    omega_k = k * omega_10 - anharmonicity * k (k - 1) / 2.  Defaults:
    beta_k = sqrt(k+1) (matrix-element scaling of charge-like transverse
    noise) and delta-omega_k = k (level k rides k times the 0-1 frequency
    fluctuation).  Both can be overridden.

    Raises NonPositiveSplitting if any omega_{k+1,k} <= 0.
    """
    n = spec.num_levels
    for k in range(n - 1):
        w = spec.omega_10 - k * spec.anharmonicity
        if w <= 0.0:
            raise NonPositiveSplitting(
                f"transition {k + 1},{k} has frequency {w} GHz <= 0 "
                f"(omega_10={spec.omega_10}, anharmonicity={spec.anharmonicity})")
    energies = tuple(k * spec.omega_10 - spec.anharmonicity * k * (k - 1) / 2.0
                     for k in range(n))
    couplings = tuple(math.sqrt(k + 1) * spec.g0 for k in range(n - 1))
    if bath_couplings is None:
        bath_couplings = tuple(math.sqrt(k + 1) for k in range(n - 1))
    if dephasing_sensitivities is None:
        dephasing_sensitivities = tuple(float(k) for k in range(n))
    return QubitSpec(level_energies=energies,
                     coupling_ladder=couplings,
                     transverse_bath_couplings=bath_couplings,
                     dephasing_sensitivities=dephasing_sensitivities)


@dataclass(frozen=True)
class ResonatorSpec:
    """A single harmonic mode: frequency omega_r (GHz) and Fock cutoff M."""

    omega_r: float
    fock_truncation: int

    def __post_init__(self) -> None:
        if int(self.fock_truncation) != self.fock_truncation:
            raise ValueError(f"fock_truncation must be an integer, got {self.fock_truncation}")
        object.__setattr__(self, "fock_truncation", int(self.fock_truncation))


@dataclass(frozen=True)
class SystemSpec:
    """Qubit + resonator + interaction model + bath assignments.

    baths maps "X" (transverse qubit noise), "Z" (longitudinal qubit
    noise) and "R" (resonator bath) to SpectralFunction instances.
    """

    qubit: QubitSpec
    resonator: ResonatorSpec
    interaction_model: str
    baths: Mapping[str, SpectralFunction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "baths", dict(self.baths))

    @property
    def omega_r(self) -> float:
        return self.resonator.omega_r

    def bath(self, label: str) -> SpectralFunction:
        return self.baths[label]

    def with_model(self, model: str) -> "SystemSpec":
        return replace(self, interaction_model=check_model(model))


def silent_baths(temperature_ghz: float = 0.0) -> dict[str, SpectralFunction]:
    return {label: SpectralFunction.silent(temperature_ghz) for label in BATH_LABELS}


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(system: SystemSpec) -> ValidationReport:
    """Check a SystemSpec for hard errors and dispersive-regime warnings.

    Errors make the system unusable (non-monotonic ladder, negative
    couplings, missing baths).  Warnings flag parameter regimes where the
    dispersive expansion is unreliable: any transition within 10 g_k of
    the resonator, or g_0 / |omega_10 - omega_r| > 0.1.
    """
    errors: list[str] = []
    warnings: list[str] = []
    q = system.qubit
    n = q.num_levels

    if q.level_energies[0] != 0.0:
        errors.append(f"qubit.level_energies[0]: ground level must sit at 0, "
                      f"got {q.level_energies[0]}")
    for k in range(n - 1):
        if not q.level_energies[k + 1] > q.level_energies[k]:
            errors.append(f"qubit.level_energies[{k + 1}]: energies must increase "
                          f"strictly ({q.level_energies[k + 1]} <= {q.level_energies[k]})")
    for k, g in enumerate(q.coupling_ladder):
        if g < 0.0:
            errors.append(f"qubit.coupling_ladder[{k}]: coupling must be >= 0, got {g}")
    for k, b in enumerate(q.transverse_bath_couplings):
        if not math.isfinite(b):
            errors.append(f"qubit.transverse_bath_couplings[{k}]: not finite")
    if not system.resonator.omega_r > 0.0:
        errors.append(f"resonator.omega_r: must be > 0, got {system.resonator.omega_r}")
    if system.resonator.fock_truncation < 2:
        errors.append(f"resonator.fock_truncation: must be >= 2, "
                      f"got {system.resonator.fock_truncation}")
    if system.interaction_model not in MODELS:
        errors.append(f"interaction_model: must be one of {MODELS}, "
                      f"got {system.interaction_model!r}")
    for label in BATH_LABELS:
        if label not in system.baths:
            errors.append(f"baths[{label!r}]: missing")
        elif not isinstance(system.baths[label], SpectralFunction):
            errors.append(f"baths[{label!r}]: not a SpectralFunction")

    if not errors:
        omega_r = system.resonator.omega_r
        for k in range(n - 1):
            w = q.splitting(k)
            g = q.coupling_ladder[k]
            if g > 0.0 and abs(w - omega_r) < 10.0 * g:
                warnings.append(f"transition {k + 1},{k} within 10 g_{k} of the resonator "
                                f"(|{w} - {omega_r}| < {10.0 * g})")
        detuning = q.splitting(0) - omega_r
        g0 = q.coupling_ladder[0]
        if detuning == 0.0 or (g0 > 0.0 and g0 / abs(detuning) > 0.1):
            warnings.append("dispersive parameter g_0/|Delta_0| exceeds 0.1; "
                            "second-order results are unreliable here")

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def require_valid(system: SystemSpec) -> SystemSpec:
    report = validate(system)
    if not report.ok:
        raise InvalidSpec(report.errors)
    return system


@dataclass(frozen=True)
class SystemConfig:
    """A parsed configuration: transmon ladder plus everything else.

    Kept separate from SystemSpec because sweeps re-expand the ladder at
    each grid point (detuning and coupling sweeps change omega_10 / g0).
    """

    transmon: TransmonSpec
    resonator: ResonatorSpec
    interaction_model: str
    baths: dict[str, SpectralFunction]

    @property
    def omega_r(self) -> float:
        return self.resonator.omega_r

    def build(self, detuning: float | None = None, coupling: float | None = None,
              temperature: float | None = None) -> SystemSpec:
        """Expand into a SystemSpec, optionally overriding swept variables.

        detuning sets omega_10 = omega_r + detuning; coupling sets g0;
        temperature replaces the temperature of every bath.
        """
        t = self.transmon
        if detuning is not None:
            t = replace(t, omega_10=self.resonator.omega_r + detuning)
        if coupling is not None:
            t = replace(t, g0=coupling)
        baths = self.baths
        if temperature is not None:
            baths = {label: sf.with_temperature(temperature) for label, sf in baths.items()}
        return SystemSpec(qubit=expand_transmon(t), resonator=self.resonator,
                          interaction_model=self.interaction_model, baths=dict(baths))


_CONFIG_KEYS = {"omega_r_ghz", "omega_10_ghz", "anharmonicity_ghz", "g0_ghz",
                "num_qubit_levels", "fock_truncation", "model", "temperature_ghz",
                "bath_X", "bath_Z", "bath_R"}
_REQUIRED_KEYS = ("omega_r_ghz", "omega_10_ghz", "g0_ghz",
                  "num_qubit_levels", "fock_truncation")


def parse_config(data: Mapping) -> SystemConfig:
    """Build a SystemConfig from a decoded JSON object."""
    if not isinstance(data, Mapping):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    unknown = {k for k in data if not k.startswith("_")} - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in data]
    if missing:
        raise ConfigError(f"missing config keys: {missing}")
    try:
        temperature = float(data.get("temperature_ghz", 0.0))
        transmon = TransmonSpec(
            omega_10=float(data["omega_10_ghz"]),
            anharmonicity=float(data.get("anharmonicity_ghz", 0.0)),
            g0=float(data["g0_ghz"]),
            num_levels=int(data["num_qubit_levels"]))
        resonator = ResonatorSpec(
            omega_r=float(data["omega_r_ghz"]),
            fock_truncation=int(data["fock_truncation"]))
        model = check_model(str(data.get("model", RABI)))
        baths = silent_baths(temperature)
        for label in BATH_LABELS:
            key = f"bath_{label}"
            if key in data:
                baths[label] = bath_from_config(data[key], default_temperature=temperature)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    return SystemConfig(transmon=transmon, resonator=resonator,
                        interaction_model=model, baths=baths)


def load_config(path: str) -> SystemConfig:
    """Read a JSON config file.  See parse_config for the schema."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)
