"""Golden-rule dissipator tables: second order plus the three fourth-order families.

Second order (independent of the qubit-resonator coupling):

    gamma_down_k = beta_k^2 C_X(+omega_{k+1,k})     D[sigma_{k,k+1}]
    gamma_up_k   = beta_k^2 C_X(-omega_{k+1,k})     D[sigma_{k+1,k}]
    gamma_phi_k  = dw_k^2   C_Z(0)                  D[sigma_{k,k}]
    kappa_minus  = C_R(+omega_r)                    D[a]
    kappa_plus   = C_R(-omega_r)                    D[a+]

Fourth order, with model-dependent dimensionless prefactors:

    Purcell            p_k   C_R(+-omega_{k+1,k})   D[sigma_{k,k+1}], D[sigma_{k+1,k}]
    dressed dephasing  d_k   C_Z(+-(omega_{k+1,k} - omega_r))
                                                    D[sigma_{k,k+1} a+], D[sigma_{k+1,k} a]
                       c_k   C_Z(+-(omega_{k+1,k} + omega_r))
                                                    D[sigma_{k,k+1} a], D[sigma_{k+1,k} a+]
    photon-assisted    a_k   C_X(+-omega_r)         D[sigma_{k,k} a], D[sigma_{k,k} a+]

Rates are reported in MHz (spectral weights come out in GHz and are scaled
by 1e3 here); prefactors are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import JC, RABI, SystemSpec, check_model
from .shifts import DEFAULT_TOL_RES, ResonantDivergence

SECOND_ORDER = "second_order"
PURCELL = "purcell"
DRESSED_DEPHASING = "dressed_dephasing"
PHOTON_ASSISTED = "photon_assisted"
DRIVEN_EFFECTIVE = "driven_effective"

_PRODUCT_ORIGINS = (DRESSED_DEPHASING, PHOTON_ASSISTED)

_GHZ_TO_MHZ = 1e3


class NegativePhotonNumber(ValueError):
    """Driven-frame photon number must be >= 0."""


@dataclass(frozen=True)
class JumpDescriptor:
    """Symbolic jump operator: optional qubit factor times optional photon factor.

    qubit is None or ("lower", k) for sigma_{k,k+1} = |k><k+1|,
    ("raise", k) for sigma_{k+1,k}, ("diag", k) for sigma_{k,k}.
    photon is None, "annihilate" or "create".
    """

    qubit: tuple[str, int] | None = None
    photon: str | None = None

    def __post_init__(self) -> None:
        if self.qubit is None and self.photon is None:
            raise ValueError("jump descriptor needs at least one factor")
        if self.qubit is not None:
            kind, k = self.qubit
            if kind not in ("lower", "raise", "diag") or k < 0:
                raise ValueError(f"bad qubit factor {self.qubit!r}")
            object.__setattr__(self, "qubit", (kind, int(k)))
        if self.photon not in (None, "annihilate", "create"):
            raise ValueError(f"bad photon factor {self.photon!r}")

    @property
    def label(self) -> str:
        parts = []
        if self.qubit is not None:
            kind, k = self.qubit
            if kind == "lower":
                parts.append(f"sigma({k},{k + 1})")
            elif kind == "raise":
                parts.append(f"sigma({k + 1},{k})")
            else:
                parts.append(f"sigma({k},{k})")
        if self.photon is not None:
            parts.append("a" if self.photon == "annihilate" else "adag")
        return "*".join(parts)


def sigma_lower(k: int) -> JumpDescriptor:
    return JumpDescriptor(qubit=("lower", k))

def sigma_raise(k: int) -> JumpDescriptor:
    return JumpDescriptor(qubit=("raise", k))

def sigma_diag(k: int) -> JumpDescriptor:
    return JumpDescriptor(qubit=("diag", k))


@dataclass(frozen=True)
class DissipatorTerm:
    """One Lindblad dissipator: jump descriptor, rate in MHz, and origin tag."""

    jump: JumpDescriptor
    rate_mhz: float
    origin: str

    def __post_init__(self) -> None:
        if not self.rate_mhz >= 0.0:
            raise ValueError(f"rate must be >= 0, got {self.rate_mhz} ({self.jump.label})")
        if self.jump.qubit is not None and self.jump.photon is not None \
                and self.origin not in _PRODUCT_ORIGINS:
            raise ValueError(f"product jump {self.jump.label} only arises from "
                             f"{_PRODUCT_ORIGINS}, got {self.origin!r}")


def second_order_rates(system: SystemSpec) -> list[DissipatorTerm]:
    """Leading-order dissipator list for a system (both bath directions)."""
    q = system.qubit
    cx = system.bath("X")
    cz = system.bath("Z")
    cr = system.bath("R")
    terms = []
    for k in range(q.num_levels - 1):
        w = q.splitting(k)
        b2 = q.beta(k) ** 2
        terms.append(DissipatorTerm(sigma_lower(k), _GHZ_TO_MHZ * b2 * cx.evaluate(w),
                                    SECOND_ORDER))
        terms.append(DissipatorTerm(sigma_raise(k), _GHZ_TO_MHZ * b2 * cx.evaluate(-w),
                                    SECOND_ORDER))
    cz0 = cz.evaluate(0.0)
    for k in range(q.num_levels):
        terms.append(DissipatorTerm(sigma_diag(k), _GHZ_TO_MHZ * q.dw(k) ** 2 * cz0,
                                    SECOND_ORDER))
    omega_r = system.omega_r
    terms.append(DissipatorTerm(JumpDescriptor(photon="annihilate"),
                                _GHZ_TO_MHZ * cr.evaluate(omega_r), SECOND_ORDER))
    terms.append(DissipatorTerm(JumpDescriptor(photon="create"),
                                _GHZ_TO_MHZ * cr.evaluate(-omega_r), SECOND_ORDER))
    return terms


def _transition(system: SystemSpec, k: int) -> tuple[float, float, float]:
    """(g_k, beta_k, omega_{k+1,k}); raises IndexError out of range."""
    q = system.qubit
    if not 0 <= k <= q.num_levels - 2:
        raise IndexError(f"transition index {k} out of range for {q.num_levels} levels")
    return q.coupling_ladder[k], q.beta(k), q.splitting(k)


def _guard_resonance(k: int, w: float, omega_r: float, tol_res: float) -> None:
    if abs(omega_r - w) < tol_res:
        raise ResonantDivergence(k, "omega_r - omega_{k+1,k}", omega_r - w)


def purcell_prefactor(k: int, system: SystemSpec, model: str,
                      tol_res: float = DEFAULT_TOL_RES) -> float:
    """Dimensionless p_k multiplying C_R(+-omega_{k+1,k}).

    Full dipole: 8 g_k^2 omega_r^2 / (omega_r^2 - omega_{k+1,k}^2)^2;
    rotating wave: 2 g_k^2 / (omega_r - omega_{k+1,k})^2.
    """
    check_model(model)
    g, _, w = _transition(system, k)
    omega_r = system.omega_r
    _guard_resonance(k, w, omega_r, tol_res)
    if model == RABI:
        return 8.0 * g * g * omega_r * omega_r / (omega_r * omega_r - w * w) ** 2
    return 2.0 * g * g / (omega_r - w) ** 2


def purcell_rates(k: int, system: SystemSpec, model: str) -> tuple[float, float]:
    """(decay, excitation) Purcell rates in MHz for transition k."""
    p = purcell_prefactor(k, system, model)
    w = system.qubit.splitting(k)
    cr = system.bath("R")
    return (_GHZ_TO_MHZ * p * cr.evaluate(w), _GHZ_TO_MHZ * p * cr.evaluate(-w))


def dressed_dephasing_prefactors(k: int, system: SystemSpec, model: str,
                                 tol_res: float = DEFAULT_TOL_RES) -> tuple[float, float]:
    """(d_k, c_k) for transition k.

    d_k = 2 g_k^2 (dw_k - dw_{k+1})^2 / (omega_r - omega_{k+1,k})^2 for both
    models; c_k carries the counter-rotating denominator and vanishes for
    the rotating-wave model.
    """
    check_model(model)
    g, _, w = _transition(system, k)
    q = system.qubit
    omega_r = system.omega_r
    _guard_resonance(k, w, omega_r, tol_res)
    spread = (q.dw(k) - q.dw(k + 1)) ** 2
    d = 2.0 * g * g * spread / (omega_r - w) ** 2
    if model == RABI:
        c = 2.0 * g * g * spread / (omega_r + w) ** 2
    else:
        c = 0.0
    return d, c


def dressed_dephasing_terms(k: int, system: SystemSpec, model: str) -> list[DissipatorTerm]:
    """The four photon-exchange dephasing dissipators for transition k.

    Rates pair d_k with C_Z evaluated at the difference frequency and c_k
    with C_Z at the sum frequency:

        d_k C_Z(omega_{k+1,k} - omega_r)   D[sigma_{k,k+1} a+]
        d_k C_Z(omega_r - omega_{k+1,k})   D[sigma_{k+1,k} a]
        c_k C_Z(omega_r + omega_{k+1,k})   D[sigma_{k,k+1} a]
        c_k C_Z(-omega_r - omega_{k+1,k})  D[sigma_{k+1,k} a+]
    """
    d, c = dressed_dephasing_prefactors(k, system, model)
    w = system.qubit.splitting(k)
    omega_r = system.omega_r
    cz = system.bath("Z")
    down_plus = JumpDescriptor(qubit=("lower", k), photon="create")
    up_minus = JumpDescriptor(qubit=("raise", k), photon="annihilate")
    down_minus = JumpDescriptor(qubit=("lower", k), photon="annihilate")
    up_plus = JumpDescriptor(qubit=("raise", k), photon="create")
    return [
        DissipatorTerm(down_plus, _GHZ_TO_MHZ * d * cz.evaluate(w - omega_r),
                       DRESSED_DEPHASING),
        DissipatorTerm(up_minus, _GHZ_TO_MHZ * d * cz.evaluate(omega_r - w),
                       DRESSED_DEPHASING),
        DissipatorTerm(down_minus, _GHZ_TO_MHZ * c * cz.evaluate(omega_r + w),
                       DRESSED_DEPHASING),
        DissipatorTerm(up_plus, _GHZ_TO_MHZ * c * cz.evaluate(-omega_r - w),
                       DRESSED_DEPHASING),
    ]


def photon_assisted_prefactor(k: int, system: SystemSpec, model: str,
                              tol_res: float = DEFAULT_TOL_RES) -> float:
    """Dimensionless a_k multiplying C_X(+-omega_r), for qubit level k.

    Built from the two transitions adjacent to level k; out-of-range
    neighbours contribute zero, so k runs over all levels 0..N-1.  The
    cross term is negative (the two paths interfere destructively).
    """
    check_model(model)
    q = system.qubit
    if not 0 <= k <= q.num_levels - 1:
        raise IndexError(f"level index {k} out of range for {q.num_levels} levels")
    omega_r = system.omega_r
    g_up, b_up = q.g(k), q.beta(k)
    g_dn, b_dn = q.g(k - 1), q.beta(k - 1)
    w_up = q.splitting(k) if k <= q.num_levels - 2 else 0.0
    w_dn = q.splitting(k - 1) if k >= 1 else 0.0
    if g_up != 0.0:
        _guard_resonance(k, w_up, omega_r, tol_res)
    if g_dn != 0.0:
        _guard_resonance(k - 1, w_dn, omega_r, tol_res)
    if model == RABI:
        den_up = (omega_r * omega_r - w_up * w_up)
        den_dn = (omega_r * omega_r - w_dn * w_dn)
        total = 0.0
        if g_up != 0.0:
            total += 8.0 * g_up ** 2 * b_up ** 2 * w_up ** 2 / den_up ** 2
        if g_dn != 0.0:
            total += 8.0 * g_dn ** 2 * b_dn ** 2 * w_dn ** 2 / den_dn ** 2
        if g_up != 0.0 and g_dn != 0.0:
            total -= 16.0 * g_up * g_dn * b_up * b_dn * w_up * w_dn / (den_dn * den_up)
        return total
    den_up = omega_r - w_up
    den_dn = omega_r - w_dn
    total = 0.0
    if g_up != 0.0:
        total += 2.0 * g_up ** 2 * b_up ** 2 / den_up ** 2
    if g_dn != 0.0:
        total += 2.0 * g_dn ** 2 * b_dn ** 2 / den_dn ** 2
    if g_up != 0.0 and g_dn != 0.0:
        total -= 4.0 * g_up * g_dn * b_up * b_dn / (den_dn * den_up)
    return total


def photon_assisted_terms(k: int, system: SystemSpec, model: str) -> list[DissipatorTerm]:
    """Photon-assisted dephasing dissipators for level k:

        a_k C_X(+omega_r)  D[sigma_{k,k} a]
        a_k C_X(-omega_r)  D[sigma_{k,k} a+]
    """
    a = photon_assisted_prefactor(k, system, model)
    cx = system.bath("X")
    omega_r = system.omega_r
    minus = JumpDescriptor(qubit=("diag", k), photon="annihilate")
    plus = JumpDescriptor(qubit=("diag", k), photon="create")
    return [
        DissipatorTerm(minus, _GHZ_TO_MHZ * a * cx.evaluate(omega_r), PHOTON_ASSISTED),
        DissipatorTerm(plus, _GHZ_TO_MHZ * a * cx.evaluate(-omega_r), PHOTON_ASSISTED),
    ]


@dataclass(frozen=True)
class PrefactorRecord:
    """Fourth-order prefactors touching ladder index k for one model.

    p, d, c belong to transition k (absent for k = N-1); a belongs to
    level k and is always present.
    """

    k: int
    p: float | None
    d: float | None
    c: float | None
    a: float


@dataclass(frozen=True)
class RateTable:
    """Eagerly evaluated dissipator lists for one system, both models.

    second_order does not depend on the interaction model; fourth_order
    and prefactors are keyed by "rabi" / "jc".
    """

    second_order: tuple[DissipatorTerm, ...]
    fourth_order: dict[str, tuple[DissipatorTerm, ...]]
    prefactors: dict[str, tuple[PrefactorRecord, ...]]

    def fourth(self, model: str) -> tuple[DissipatorTerm, ...]:
        return self.fourth_order[check_model(model)]


def build_rate_table(system: SystemSpec) -> RateTable:
    """Evaluate every rate for all ladder indices and both models."""
    second = tuple(second_order_rates(system))
    fourth: dict[str, tuple[DissipatorTerm, ...]] = {}
    prefs: dict[str, tuple[PrefactorRecord, ...]] = {}
    n = system.qubit.num_levels
    for model in (RABI, JC):
        terms: list[DissipatorTerm] = []
        records: list[PrefactorRecord] = []
        for k in range(n):
            if k <= n - 2:
                p = purcell_prefactor(k, system, model)
                d, c = dressed_dephasing_prefactors(k, system, model)
                down, up = purcell_rates(k, system, model)
                terms.append(DissipatorTerm(sigma_lower(k), down, PURCELL))
                terms.append(DissipatorTerm(sigma_raise(k), up, PURCELL))
                terms.extend(dressed_dephasing_terms(k, system, model))
            else:
                p = d = c = None
            terms.extend(photon_assisted_terms(k, system, model))
            records.append(PrefactorRecord(
                k=k, p=p, d=d, c=c,
                a=photon_assisted_prefactor(k, system, model)))
        fourth[model] = tuple(terms)
        prefs[model] = tuple(records)
    return RateTable(second_order=second, fourth_order=fourth, prefactors=prefs)


def driven_effective_rates(table: RateTable, n_photons: float,
                           model: str) -> list[DissipatorTerm]:
    """Qubit-only dissipators induced by a coherent drive of |alpha|^2 = n photons.

    Displacing the resonator turns each photon-exchange dissipator
    D[sigma a] / D[sigma a+] into n times the bare qubit dissipator
    D[sigma] (the cross terms trace out over the resonator).  Per
    transition k the decay and excitation channels collect both photon
    directions; per level k the two photon-assisted channels add up to a
    pure dephasing rate:

        gamma_down(k) = n (gamma_down+ + gamma_down-)
        gamma_up(k)   = n (gamma_up-   + gamma_up+)
        gamma_phi(k)  = n (gamma_phi-  + gamma_phi+)

    n = 0 returns an empty list.
    """
    check_model(model)
    if n_photons < 0.0:
        raise NegativePhotonNumber(f"photon number must be >= 0, got {n_photons}")
    if n_photons == 0.0:
        return []
    down: dict[int, float] = {}
    up: dict[int, float] = {}
    phi: dict[int, float] = {}
    for term in table.fourth_order[check_model(model)]:
        if term.jump.photon is None or term.jump.qubit is None:
            continue
        kind, k = term.jump.qubit
        if kind == "lower":
            down[k] = down.get(k, 0.0) + term.rate_mhz
        elif kind == "raise":
            up[k] = up.get(k, 0.0) + term.rate_mhz
        else:
            phi[k] = phi.get(k, 0.0) + term.rate_mhz
    out = []
    for k in sorted(down):
        out.append(DissipatorTerm(sigma_lower(k), n_photons * down[k], DRIVEN_EFFECTIVE))
    for k in sorted(up):
        out.append(DissipatorTerm(sigma_raise(k), n_photons * up[k], DRIVEN_EFFECTIVE))
    for k in sorted(phi):
        out.append(DissipatorTerm(sigma_diag(k), n_photons * phi[k], DRIVEN_EFFECTIVE))
    return out
