"""Tests for the master-equation generator, integrator, and steady state."""

import math

import numpy as np
import pytest

from rabiqed import (
    BARE_PLUS_INTERACTION,
    DRESSED_ANALYTIC,
    DRIVEN_EFFECTIVE,
    RABI,
    DegenerateNullSpace,
    DimensionMismatch,
    DissipatorTerm,
    JumpDescriptor,
    LindbladGenerator,
    NegativeRate,
    ProductSpace,
    SpectralFunction,
    TruncationTooSmall,
    annihilator,
    assemble,
    build_hamiltonian,
    dressed_hamiltonian,
    embed,
    evolve,
    number_operator,
    partial_trace_qubit,
    partial_trace_resonator,
    qubit_projector,
    realize_terms,
    shift_report,
    sigma_lower,
    steady_state,
    thermal_resonator_state,
    verify_displacement_identity,
)

from conftest import build_system

TWO_PI = 2.0 * math.pi
RATE = TWO_PI * 1e-3  # MHz -> angular rate in 1/ns


def random_density_matrix(dim, seed):
    """A full-rank random density matrix."""
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = mat @ mat.conj().T
    return rho / np.trace(rho)


def test_generator_validation():
    """Non-Hermitian Hamiltonians, bad shapes, and negative rates are rejected."""
    with pytest.raises(ValueError):
        LindbladGenerator(np.array([[0.0, 1.0], [0.0, 0.0]]), ())
    with pytest.raises(DimensionMismatch):
        LindbladGenerator(np.zeros((2, 3)), ())
    h = np.diag([0.0, 1.0])
    with pytest.raises(DimensionMismatch):
        LindbladGenerator(h, ((np.zeros((3, 3)), 1.0),))
    with pytest.raises(NegativeRate):
        LindbladGenerator(h, ((np.array([[0.0, 1.0], [0.0, 0.0]]), -2.0),))


def test_apply_matches_superoperator():
    """The right-hand side equals the vectorized superoperator, dense and sparse."""
    system = build_system(
        detuning=1.0, num_levels=3, fock=4,
        baths={
            "X": SpectralFunction.flat(0.002, temperature_ghz=0.1),
            "Z": SpectralFunction.flat(0.01, temperature_ghz=0.1),
            "R": SpectralFunction.flat(0.05, temperature_ghz=0.1),
        },
    )
    gen = assemble(system, mode=DRESSED_ANALYTIC)
    rho = random_density_matrix(gen.dim, seed=5)
    direct = gen.apply(rho).reshape(-1)
    dense = gen.superoperator(sparse=False) @ rho.reshape(-1)
    sparse = gen.superoperator(sparse=True) @ rho.reshape(-1)
    scale = np.linalg.norm(direct)
    assert np.linalg.norm(dense - direct) / scale < 1e-12
    assert np.linalg.norm(sparse - direct) / scale < 1e-12


def test_damped_cavity_decays_exponentially():
    """A lone cavity loses photons as <n>(t) = n0 exp(-kappa t)."""
    system = build_system(g0=0.0, baths={"R": SpectralFunction.flat(0.05)})
    gen = assemble(system, mode=DRESSED_ANALYTIC)
    space = ProductSpace(3, 5)
    rho0 = np.zeros((15, 15), dtype=complex)
    rho0[space.index(0, 2), space.index(0, 2)] = 1.0
    kappa = RATE * 50.0  # flat level 0.05 GHz -> 50 MHz
    ts = np.array([0.5, 1.0, 2.0]) / kappa
    traj = evolve(gen, rho0, ts[-1], sample_times=ts)
    n_op = embed(None, number_operator(5), space)
    for t, n_num in zip(traj.times, traj.expectation(n_op).real):
        np.testing.assert_allclose(n_num, 2.0 * math.exp(-kappa * t), rtol=1e-6)


def test_excited_qubit_decays_exponentially():
    """Transverse noise at T = 0 empties the first excited level at beta^2 C_X(w)."""
    system = build_system(baths={"X": SpectralFunction.flat(0.002)})
    gen = assemble(system, mode=DRESSED_ANALYTIC)
    space = ProductSpace(3, 5)
    rho0 = np.zeros((15, 15), dtype=complex)
    rho0[space.index(1, 0), space.index(1, 0)] = 1.0
    gamma = RATE * 2.0
    ts = np.array([0.5, 1.0]) / gamma
    traj = evolve(gen, rho0, ts[-1], sample_times=ts)
    p1 = embed(qubit_projector(1, 3), None, space)
    for t, pop in zip(traj.times, traj.expectation(p1).real):
        np.testing.assert_allclose(pop, math.exp(-gamma * t), rtol=1e-6)


def test_steady_state_thermal_occupation():
    """Detailed-balance photon rates settle at nbar = up / (down - up)."""
    system = build_system(
        g0=0.0,
        baths={
            "X": SpectralFunction.flat(0.002, temperature_ghz=0.1),
            "R": SpectralFunction.flat(0.05, temperature_ghz=0.5),
        },
    )
    gen = assemble(system, mode=DRESSED_ANALYTIC)
    rho = steady_state(gen)
    space = ProductSpace(3, 5)
    nbar = float(np.real(np.trace(embed(None, number_operator(5), space) @ rho)))
    cr = system.bath("R")
    expected = cr.evaluate(-5.0) / (cr.evaluate(5.0) - cr.evaluate(-5.0))
    np.testing.assert_allclose(nbar, expected, rtol=1e-10)
    np.testing.assert_allclose(np.trace(rho).real, 1.0, rtol=0, atol=1e-12)


def test_steady_state_rejects_degenerate_generators():
    """Pure Hamiltonian evolution has no unique stationary state."""
    gen = LindbladGenerator(np.diag([0.0, 1.0, 2.5]), ())
    with pytest.raises(DegenerateNullSpace):
        steady_state(gen)


def test_evolve_lands_on_sample_times():
    """Requested sample times are hit exactly and are the only records."""
    system = build_system(baths={"R": SpectralFunction.flat(0.05)})
    gen = assemble(system)
    rho0 = np.zeros((15, 15), dtype=complex)
    rho0[0, 0] = 1.0
    ts = [0.0, 0.7, 1.31, 4.0]
    traj = evolve(gen, rho0, 4.0, sample_times=ts)
    np.testing.assert_allclose(traj.times, ts, rtol=0, atol=1e-12)
    assert len(traj.states) == len(ts)


def test_evolve_input_validation():
    """Bad initial states, times, and sample windows raise immediately."""
    gen = LindbladGenerator(np.diag([0.0, 1.0]), ())
    good = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        evolve(gen, good, -1.0)
    with pytest.raises(ValueError):
        evolve(gen, good, 1.0, sample_times=[2.0])
    with pytest.raises(ValueError):
        evolve(gen, good, 1.0, sample_times=[-0.5])
    with pytest.raises(DimensionMismatch):
        evolve(gen, np.eye(3) / 3.0, 1.0)
    with pytest.raises(ValueError):
        evolve(gen, np.array([[0.5, 1.0], [0.0, 0.5]]), 1.0)
    with pytest.raises(ValueError):
        evolve(gen, 2.0 * good, 1.0)


def test_evolution_preserves_trace_and_positivity():
    """A noisy evolution keeps unit trace and non-negative spectrum."""
    system = build_system(
        detuning=1.0, num_levels=3, fock=5,
        baths={
            "X": SpectralFunction.flat(0.002, temperature_ghz=0.1),
            "Z": SpectralFunction.flat(0.01, temperature_ghz=0.1),
            "R": SpectralFunction.flat(0.05, temperature_ghz=0.1),
        },
    )
    gen = assemble(system)
    space = ProductSpace(3, 5)
    psi = np.zeros(15, dtype=complex)
    psi[space.index(0, 0)] = 1.0 / math.sqrt(2.0)
    psi[space.index(1, 1)] = 1.0 / math.sqrt(2.0)
    rho0 = np.outer(psi, psi.conj())
    traj = evolve(gen, rho0, 20.0, sample_times=np.linspace(0.0, 20.0, 9))
    for rho in traj.states:
        np.testing.assert_allclose(np.trace(rho).real, 1.0, rtol=0, atol=1e-10)
        assert float(np.max(np.abs(rho - rho.conj().T))) < 1e-12
        assert float(np.linalg.eigvalsh(rho)[0]) > -1e-8


def test_partial_traces_on_product_state():
    """Partial traces of a product state recover its factors."""
    space = ProductSpace(3, 4)
    rho_q = random_density_matrix(3, seed=9)
    rho_r = random_density_matrix(4, seed=10)
    rho = np.kron(rho_q, rho_r)
    np.testing.assert_allclose(partial_trace_resonator(rho, space), rho_q, atol=1e-14)
    np.testing.assert_allclose(partial_trace_qubit(rho, space), rho_r, atol=1e-14)


def test_partial_traces_on_entangled_state():
    """A maximally entangled pair reduces to maximally mixed factors."""
    space = ProductSpace(2, 2)
    psi = np.zeros(4, dtype=complex)
    psi[space.index(0, 0)] = 1.0 / math.sqrt(2.0)
    psi[space.index(1, 1)] = 1.0 / math.sqrt(2.0)
    rho = np.outer(psi, psi.conj())
    np.testing.assert_allclose(partial_trace_resonator(rho, space), np.eye(2) / 2.0, atol=1e-15)
    np.testing.assert_allclose(partial_trace_qubit(rho, space), np.eye(2) / 2.0, atol=1e-15)
    with pytest.raises(DimensionMismatch):
        partial_trace_qubit(np.eye(3) / 3.0, space)


def test_thermal_resonator_state_geometry():
    """Thermal populations follow the Bose ratio and normalize to one."""
    rho = thermal_resonator_state(8, 0.5)
    p = np.diag(rho).real
    np.testing.assert_allclose(p.sum(), 1.0, rtol=1e-14)
    ratios = p[1:] / p[:-1]
    np.testing.assert_allclose(ratios, (0.5 / 1.5) * np.ones(7), rtol=1e-12)
    vacuum = thermal_resonator_state(4, 0.0)
    np.testing.assert_allclose(np.diag(vacuum).real, [1.0, 0.0, 0.0, 0.0], atol=0.0)
    with pytest.raises(ValueError):
        thermal_resonator_state(4, -0.1)


def test_dressed_hamiltonian_diagonal_entries():
    """Each (k, n) entry is E_k + n w_r + n * pull_k + static_k."""
    system = build_system(detuning=1.0, g0=0.1, alpha=0.25, num_levels=3, fock=4)
    report = shift_report(system)
    h = dressed_hamiltonian(system, RABI, report)
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
    space = ProductSpace(3, 4)
    for k in range(3):
        n_coeff, static = report.h2_rabi[k]
        for n in range(4):
            expected = system.qubit.level_energies[k] + n * 5.0 + n * n_coeff + static
            np.testing.assert_allclose(h[space.index(k, n), space.index(k, n)],
                                       expected, rtol=1e-14)


def test_assemble_modes_and_terms():
    """The two modes differ in Hamiltonian; term lists respect the flags."""
    system = build_system(
        detuning=1.0, num_levels=3, fock=4,
        baths={
            "X": SpectralFunction.flat(0.002, temperature_ghz=0.1),
            "Z": SpectralFunction.flat(0.01, temperature_ghz=0.1),
            "R": SpectralFunction.flat(0.05, temperature_ghz=0.1),
        },
    )
    dressed = assemble(system, mode=DRESSED_ANALYTIC)
    bare = assemble(system, mode=BARE_PLUS_INTERACTION)
    assert np.count_nonzero(dressed.hamiltonian - np.diag(np.diag(dressed.hamiltonian))) == 0
    np.testing.assert_allclose(bare.hamiltonian, build_hamiltonian(system), rtol=0)
    # 2(N-1)+N+2 = 9 second-order terms, minus the zero-rate level-0 dephasor;
    # the full-dipole fourth order adds 2(N-1) Purcell + 4(N-1) dressed + 2N.
    assert len(bare.dissipators) == 8
    assert len(dressed.dissipators) == 8 + 2 * 6 + 3 * 2
    second_only = assemble(system, mode=DRESSED_ANALYTIC, include_fourth_order=False)
    assert len(second_only.dissipators) == 8
    extra = DissipatorTerm(sigma_lower(0), 3.0, DRIVEN_EFFECTIVE)
    widened = assemble(system, mode=DRESSED_ANALYTIC, extra_terms=[extra])
    assert len(widened.dissipators) == len(dressed.dissipators) + 1
    with pytest.raises(ValueError):
        assemble(system, mode="rotating_frame")


def test_realize_terms_drops_zero_rates():
    """Zero-rate dissipators never reach the generator."""
    space = ProductSpace(2, 3)
    terms = [
        DissipatorTerm(sigma_lower(0), 0.0, "second_order"),
        DissipatorTerm(JumpDescriptor(photon="annihilate"), 2.0, "second_order"),
    ]
    pairs = realize_terms(terms, space)
    assert len(pairs) == 1
    np.testing.assert_allclose(pairs[0][0], embed(None, annihilator(3), space), rtol=0)
    assert pairs[0][1] == 2.0


def test_displacement_identity_reduction():
    """Displacing the photon factor adds |alpha|^2 of the bare qubit dissipator."""
    assert verify_displacement_identity(1.0, 0, (2, 16)) < 1e-12
    assert verify_displacement_identity(0.5 + 0.5j, 0, (3, 12)) < 1e-12
    with pytest.raises(TruncationTooSmall):
        verify_displacement_identity(2.0, 0, (2, 8))
    with pytest.raises(IndexError):
        verify_displacement_identity(0.5, 1, (2, 12))
