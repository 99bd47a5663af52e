"""Lindblad generators, time evolution, steady states, and the drive identity.

A generator built here acts on density matrices in units of 1/ns: stored
frequencies are ordinary (/2pi) GHz and stored rates are MHz, so the
application routine multiplies the Hamiltonian by 2 pi and each rate by
2 pi * 1e-3.  Time arguments are in ns throughout.

Two assembly modes are supported:

- ``dressed_analytic``: diagonal Hamiltonian (bare energies plus the
  second-order diagonal corrections) with the second- and fourth-order
  dissipator lists realized on the product space.
- ``bare_plus_interaction``: the full interaction Hamiltonian with the
  second-order dissipators only; used to cross-check the dressed picture
  against real-time dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exact import build_hamiltonian
from .model import SystemSpec, check_model
from .operators import DimensionMismatch, ProductSpace, jump_matrix
from .rates import DissipatorTerm, JumpDescriptor, RateTable, build_rate_table
from .shifts import ShiftReport, shift_report

TWO_PI = 2.0 * math.pi
_RATE_TO_INV_NS = TWO_PI * 1e-3  # MHz -> angular rate in 1/ns

DRESSED_ANALYTIC = "dressed_analytic"
BARE_PLUS_INTERACTION = "bare_plus_interaction"
MODES = (DRESSED_ANALYTIC, BARE_PLUS_INTERACTION)

# dense superoperators below this squared dimension, sparse at or above
DENSE_SUPEROP_LIMIT = 10_000


class NegativeRate(ValueError):
    """A dissipator was handed a negative rate."""


class StepUnderflow(RuntimeError):
    """Adaptive step size collapsed below the resolution floor."""


class DegenerateNullSpace(RuntimeError):
    """The generator has more than one steady state."""


class TruncationTooSmall(ValueError):
    """Fock truncation cannot hold the requested coherent amplitude."""


@dataclass(frozen=True)
class LindbladGenerator:
    """Hamiltonian (GHz) plus a list of (jump matrix, rate in MHz)."""

    hamiltonian: np.ndarray
    dissipators: tuple[tuple[np.ndarray, float], ...]

    def __post_init__(self) -> None:
        h = np.asarray(self.hamiltonian)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionMismatch(f"hamiltonian must be square, got {h.shape}")
        scale = max(1.0, float(np.max(np.abs(h))))
        if float(np.max(np.abs(h - h.conj().T))) > 1e-9 * scale:
            raise ValueError("hamiltonian is not Hermitian")
        pairs = []
        for op, rate in self.dissipators:
            op = np.asarray(op)
            if op.shape != h.shape:
                raise DimensionMismatch(f"jump operator shape {op.shape} does not "
                                        f"match hamiltonian {h.shape}")
            if not rate >= 0.0:
                raise NegativeRate(f"dissipator rate must be >= 0, got {rate}")
            pairs.append((op, float(rate)))
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "dissipators", tuple(pairs))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Right-hand side d rho / dt in 1/ns."""
        h = self.hamiltonian
        out = -1j * TWO_PI * (h @ rho - rho @ h)
        for op, rate in self.dissipators:
            if rate == 0.0:
                continue
            gamma = _RATE_TO_INV_NS * rate
            op_dag = op.conj().T
            sandwich = op @ rho @ op_dag
            norm_op = op_dag @ op
            out += gamma * (sandwich - 0.5 * (norm_op @ rho + rho @ norm_op))
        return out

    def superoperator(self, sparse: bool | None = None):
        """Matrix of the generator on row-major vectorized density matrices.

        Returns a dense ndarray or a scipy CSC matrix depending on size
        (or on the explicit ``sparse`` flag); entries are in 1/ns.
        """
        d = self.dim
        if sparse is None:
            sparse = d * d >= DENSE_SUPEROP_LIMIT
        if sparse:
            eye = sp.identity(d, format="csc")
            h = sp.csc_matrix(self.hamiltonian)
            liouville = -1j * TWO_PI * (sp.kron(h, eye, format="csc")
                                        - sp.kron(eye, h.T, format="csc"))
            for op, rate in self.dissipators:
                if rate == 0.0:
                    continue
                gamma = _RATE_TO_INV_NS * rate
                l_op = sp.csc_matrix(op)
                norm_op = (l_op.conj().T @ l_op).tocsc()
                liouville = liouville + gamma * (
                    sp.kron(l_op, l_op.conj(), format="csc")
                    - 0.5 * sp.kron(norm_op, eye, format="csc")
                    - 0.5 * sp.kron(eye, norm_op.T, format="csc"))
            return liouville.tocsc()
        eye = np.eye(d)
        h = self.hamiltonian
        liouville = -1j * TWO_PI * (np.kron(h, eye) - np.kron(eye, h.T))
        liouville = liouville.astype(complex)
        for op, rate in self.dissipators:
            if rate == 0.0:
                continue
            gamma = _RATE_TO_INV_NS * rate
            norm_op = op.conj().T @ op
            liouville += gamma * (np.kron(op, op.conj())
                                  - 0.5 * np.kron(norm_op, eye)
                                  - 0.5 * np.kron(eye, norm_op.T))
        return liouville


def realize_terms(terms: Iterable[DissipatorTerm],
                  space: ProductSpace) -> list[tuple[np.ndarray, float]]:
    """Turn symbolic dissipator terms into (matrix, rate) pairs.

    Zero-rate terms are dropped; they contribute nothing to the generator.
    """
    out = []
    for term in terms:
        if term.rate_mhz == 0.0:
            continue
        out.append((jump_matrix(term.jump, space), term.rate_mhz))
    return out


def dressed_hamiltonian(system: SystemSpec, model: str,
                        report: ShiftReport | None = None) -> np.ndarray:
    """Diagonal bare-plus-second-order Hamiltonian on the product space."""
    if report is None:
        report = shift_report(system)
    h2 = report.h2(model)
    q = system.qubit
    m = system.resonator.fock_truncation
    space = ProductSpace(q.num_levels, m)
    energies = np.empty(space.dimension)
    for k, n in space.pairs():
        n_coeff, static = h2[k]
        energies[space.index(k, n)] = (q.level_energies[k] + n * system.omega_r
                                       + n * n_coeff + static)
    return np.diag(energies)


def assemble(system: SystemSpec, mode: str = DRESSED_ANALYTIC,
             model: str | None = None, report: ShiftReport | None = None,
             table: RateTable | None = None, include_fourth_order: bool = True,
             extra_terms: Sequence[DissipatorTerm] = ()) -> LindbladGenerator:
    """Build a LindbladGenerator for a system in one of the two modes."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if model is None:
        model = system.interaction_model
    check_model(model)
    q = system.qubit
    space = ProductSpace(q.num_levels, system.resonator.fock_truncation)
    if table is None:
        table = build_rate_table(system)
    terms = list(table.second_order)
    if mode == DRESSED_ANALYTIC:
        h = dressed_hamiltonian(system, model, report)
        if include_fourth_order:
            terms.extend(table.fourth(model))
    else:
        h = build_hamiltonian(system, model)
    terms.extend(extra_terms)
    return LindbladGenerator(hamiltonian=h, dissipators=tuple(realize_terms(terms, space)))


def _check_density_matrix(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"state shape {rho.shape} does not match dimension {dim}")
    if float(np.max(np.abs(rho - rho.conj().T))) > 1e-10:
        raise ValueError("initial state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
        raise ValueError(f"initial state trace is {np.trace(rho)}, expected 1")
    if float(np.linalg.eigvalsh(rho)[0]) < -1e-10:
        raise ValueError("initial state has a negative eigenvalue")
    return 0.5 * (rho + rho.conj().T)


@dataclass
class Trajectory:
    """Times (ns) and density matrices recorded along an evolution."""

    times: np.ndarray
    states: list[np.ndarray] = field(repr=False)

    def expectation(self, op: np.ndarray) -> np.ndarray:
        return np.array([np.trace(op @ rho) for rho in self.states])

    def final(self) -> np.ndarray:
        return self.states[-1]


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# b5 - b4: weights of the embedded error estimate
_DP_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def evolve(gen: LindbladGenerator, rho0: np.ndarray, t_max: float,
           rtol: float = 1e-8, atol: float = 1e-10,
           sample_times: Sequence[float] | None = None,
           max_steps: int = 5_000_000) -> Trajectory:
    """Integrate d rho/dt = L rho from 0 to t_max (ns).

    Embedded Dormand-Prince 5(4) with proportional step control.  The
    state is re-symmetrized after every accepted step, which keeps the
    trajectory Hermitian without touching its trace.  With sample_times
    given, steps land exactly on each requested time and only those states
    are recorded; otherwise every accepted step is recorded.
    """
    rho = _check_density_matrix(rho0, gen.dim)
    if t_max < 0.0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")

    targets: list[float] | None = None
    if sample_times is not None:
        targets = sorted(float(t) for t in sample_times)
        if targets and (targets[0] < 0.0 or targets[-1] > t_max * (1 + 1e-12)):
            raise ValueError("sample_times must lie within [0, t_max]")

    times = [0.0]
    states = [rho.copy()]
    if targets is not None:
        times, states = [], []
        while targets and targets[0] <= 1e-15:
            targets.pop(0)
            times.append(0.0)
            states.append(rho.copy())

    if t_max == 0.0:
        return Trajectory(times=np.array(times if times else [0.0]),
                          states=states if states else [rho.copy()])

    t = 0.0
    k1 = gen.apply(rho)
    h = min(t_max * 1e-3, 1e-2)
    h_floor = max(1e-14, 1e-14 * t_max)
    stages: list[np.ndarray] = [k1] * 7

    for _ in range(max_steps):
        if t >= t_max * (1 - 1e-14):
            break
        h = min(h, t_max - t)
        if targets:
            h = min(h, max(targets[0] - t, h_floor))
        stages[0] = k1
        for i in range(1, 7):
            acc = rho + h * sum(a * stages[j] for j, a in enumerate(_DP_A[i]) if a != 0.0)
            stages[i] = gen.apply(acc)
        rho_new = rho + h * sum(b * stages[i] for i, b in enumerate(_DP_B5) if b != 0.0)
        rho_new = 0.5 * (rho_new + rho_new.conj().T)
        # recompute the last stage on the symmetrized state so the FSAL
        # reuse and the error estimate both refer to the accepted value
        stages[6] = gen.apply(rho_new)
        err_mat = h * sum(e * stages[i] for i, e in enumerate(_DP_E) if e != 0.0)
        scale = atol + rtol * max(float(np.linalg.norm(rho)), float(np.linalg.norm(rho_new)))
        err = float(np.linalg.norm(err_mat)) / scale
        if err <= 1.0:
            t = t + h
            rho = rho_new
            k1 = stages[6]
            if targets and abs(t - targets[0]) <= 1e-12 * max(1.0, t):
                targets.pop(0)
                times.append(t)
                states.append(rho.copy())
            elif targets is None:
                times.append(t)
                states.append(rho.copy())
        factor = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        h = h * min(5.0, max(0.2, factor))
        if h < h_floor:
            raise StepUnderflow(f"step size {h:.3e} ns underflowed at t = {t:.6f} ns")
    else:
        raise RuntimeError(f"integration did not reach t_max within {max_steps} steps")

    if targets is None and times[-1] < t_max * (1 - 1e-14):
        times.append(t)
        states.append(rho.copy())
    return Trajectory(times=np.array(times), states=states)


def steady_state(gen: LindbladGenerator, residual_tol: float = 1e-10,
                 positivity_tol: float = 1e-9) -> np.ndarray:
    """Unique steady state of the generator.

    Solves L rho = 0 with the first row of the vectorized generator
    replaced by the trace constraint.  Uniqueness is verified through the
    singular spectrum when the superoperator is small enough to afford a
    dense SVD; a second vanishing singular value raises
    DegenerateNullSpace.
    """
    d = gen.dim
    liouville = gen.superoperator()
    dense = not sp.issparse(liouville)

    if dense and d * d <= 1024:
        singulars = np.linalg.svd(liouville, compute_uv=False)
        top = singulars[0] if singulars[0] > 0.0 else 1.0
        null_count = int(np.sum(singulars < 1e-12 * top))
        if null_count > 1:
            raise DegenerateNullSpace(f"{null_count} singular values vanish; "
                                      f"steady state is not unique")

    trace_row = np.zeros(d * d, dtype=complex)
    trace_row[::d + 1] = 1.0
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    if dense:
        a = liouville.copy()
        a[0, :] = trace_row
        try:
            vec = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateNullSpace(str(exc)) from exc
    else:
        a = liouville.tolil()
        a[0, :] = trace_row
        vec = spla.spsolve(a.tocsc(), rhs)

    rho = vec.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real

    residual = liouville @ rho.reshape(-1)
    norm_scale = float(np.abs(liouville).max()) if dense else float(abs(liouville).max())
    if float(np.max(np.abs(residual))) > residual_tol * max(1.0, norm_scale):
        raise DegenerateNullSpace(f"steady-state residual {np.max(np.abs(residual)):.3e} "
                                  f"exceeds tolerance; null space is ill-conditioned")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -positivity_tol:
        raise RuntimeError(f"steady state has eigenvalue {min_eig:.3e} < -{positivity_tol}")
    return rho


def partial_trace_resonator(rho: np.ndarray, space: ProductSpace) -> np.ndarray:
    """Reduce a product-space density matrix to the qubit factor."""
    d = space.dimension
    rho = np.asarray(rho)
    if rho.shape != (d, d):
        raise DimensionMismatch(f"state shape {rho.shape} does not match space "
                                f"dimension {d}")
    reshaped = rho.reshape(space.qubit_dim, space.fock_dim,
                           space.qubit_dim, space.fock_dim)
    return np.einsum("injn->ij", reshaped)


def partial_trace_qubit(rho: np.ndarray, space: ProductSpace) -> np.ndarray:
    """Reduce a product-space density matrix to the resonator factor."""
    d = space.dimension
    rho = np.asarray(rho)
    if rho.shape != (d, d):
        raise DimensionMismatch(f"state shape {rho.shape} does not match space "
                                f"dimension {d}")
    reshaped = rho.reshape(space.qubit_dim, space.fock_dim,
                           space.qubit_dim, space.fock_dim)
    return np.einsum("inim->nm", reshaped)


def thermal_resonator_state(m: int, nbar: float) -> np.ndarray:
    """Truncated thermal state with Bose ratio r = nbar / (1 + nbar)."""
    if nbar < 0.0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if nbar == 0.0:
        p = np.zeros(m)
        p[0] = 1.0
    else:
        r = nbar / (1.0 + nbar)
        p = r ** np.arange(m)
        p = p / p.sum()
    return np.diag(p).astype(complex)


def _dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    op_dag = op.conj().T
    norm_op = op_dag @ op
    return op @ rho @ op_dag - 0.5 * (norm_op @ rho + rho @ norm_op)


def verify_displacement_identity(alpha: complex, k: int, dims: tuple[int, int],
                                 thermal_occupations: Sequence[float] = (0.0, 0.5, 1.0)
                                 ) -> float:
    """Check the displaced-frame dissipator reduction on the qubit.

    Displacing a drive of amplitude alpha maps D[sigma_{k,k+1} a+] onto
    D[sigma_{k,k+1} (a+ + conj(alpha))].  Expanding gives the two kept
    pieces, D[sigma a+] + |alpha|^2 D[sigma], plus cross terms that are
    linear in a single photon operator and therefore trace to zero against
    any resonator state that is diagonal in the Fock basis.  This routine
    builds all three dissipators on an (N, M) product space, applies them
    to a basis of qubit operators tensored with truncated thermal states,
    and returns the largest entry of the qubit-reduced discrepancy.
    """
    n_levels, m = dims
    if abs(alpha) ** 2 > m / 4.0:
        raise TruncationTooSmall(f"|alpha|^2 = {abs(alpha) ** 2:.3f} exceeds M/4 = {m / 4.0}")
    if not 0 <= k <= n_levels - 2:
        raise IndexError(f"transition {k} outside {n_levels}-level qubit")
    space = ProductSpace(n_levels, m)
    a_op = jump_matrix(JumpDescriptor(qubit=("lower", k), photon="create"), space)
    b_op = jump_matrix(JumpDescriptor(qubit=("lower", k)), space)
    j_op = a_op + np.conj(alpha) * b_op
    weight = abs(alpha) ** 2

    worst = 0.0
    for i in range(n_levels):
        for j in range(n_levels):
            qubit_basis = np.zeros((n_levels, n_levels), dtype=complex)
            qubit_basis[i, j] = 1.0
            for nbar in thermal_occupations:
                rho = np.kron(qubit_basis, thermal_resonator_state(m, nbar))
                delta = (_dissipator(j_op, rho) - _dissipator(a_op, rho)
                         - weight * _dissipator(b_op, rho))
                reduced = partial_trace_resonator(delta, space)
                worst = max(worst, float(np.max(np.abs(reduced))))
    return worst
