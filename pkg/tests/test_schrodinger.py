import cmath
import math

import numpy as np
import pytest

import wavepacket as wp
import interferometer as mzi
import schrodinger as sch


@pytest.fixture
def psi(gaussian):
    return wp.to_position(gaussian)


def test_pulse_and_config_validation():
    assert sch.ImpulsePulse(20.0, 0.01).delta == pytest.approx(0.2)
    assert sch.ImpulsePulse.for_kick(0.2, 0.01).force == pytest.approx(20.0)
    with pytest.raises(ValueError):
        sch.ImpulsePulse(1.0, -0.1)
    with pytest.raises(ValueError):
        sch.ImpulsePulse(1.0, 0.1, substeps=0)
    with pytest.raises(ValueError):
        sch.ImpulsePulse.for_kick(0.2, 0.0)
    with pytest.raises(ValueError):
        sch.PropagationConfig(mass=0)
    with pytest.raises(ValueError):
        sch.PropagationConfig(time_step=-1e-3)
    assert sch.PropagationConfig(time_step=1e-4, total_time=1.0).steps == 10000


def test_position_moments(psi):
    mean, std = sch.position_moments(psi)
    assert mean == pytest.approx(0, abs=1e-12)
    assert std == pytest.approx(1/math.sqrt(2), rel=1e-9)


def test_free_propagation_identity(psi):
    assert sch.free_propagate(psi, 0.0) is psi


def test_free_spreading(psi, gaussian):
    later = sch.free_propagate(psi, 3.0, sch.PropagationConfig(mass=1.0))
    mean, std = sch.position_moments(later)
    sigma0 = 1/math.sqrt(2)
    expected = sigma0*math.sqrt(1 + (3.0/(2*sigma0**2))**2)
    assert std == pytest.approx(expected, rel=1e-6)
    assert mean == pytest.approx(0, abs=1e-9)
    assert np.allclose(wp.to_momentum(later).density(), gaussian.density(), atol=1e-12)


def test_stepwise_matches_exact(psi):
    config = sch.PropagationConfig(mass=2.0, time_step=0.05, total_time=1.0)
    stepped = sch.propagate(psi, config)
    exact = sch.free_propagate(psi, 1.0, config)
    assert np.allclose(stepped.amplitudes, exact.amplitudes, atol=1e-10)


def test_norm_drift_over_many_steps():
    grid = wp.GridSpec(512, -16.0, 16.0)
    psi = wp.to_position(wp.gaussian_init(wp.GaussianParams(), grid))
    later = sch.propagate(psi, sch.PropagationConfig(time_step=1e-4, total_time=1.0))
    assert abs(later.norm() - psi.norm()) <= 1e-9


def test_leakage_is_reported():
    grid = wp.GridSpec(256, -16.0, 16.0)
    psi = wp.to_position(wp.gaussian_init(wp.GaussianParams(), grid))
    with pytest.raises(sch.BoundaryLeakageError):
        sch.propagate(psi, sch.PropagationConfig(time_step=1.0, total_time=50.0))


def test_free_propagation_leakage_is_reported():
    grid = wp.GridSpec(256, -16.0, 16.0)
    psi = wp.to_position(wp.gaussian_init(wp.GaussianParams(), grid))
    with pytest.raises(sch.BoundaryLeakageError):
        sch.free_propagate(psi, 50.0)


def test_zero_duration_pulse(psi):
    assert sch.apply_impulse(psi, sch.ImpulsePulse(5.0, 0.0)) is psi


def test_impulse_aliasing_guard(psi):
    with pytest.raises(wp.AliasingError):
        sch.apply_impulse(psi, sch.ImpulsePulse(10.0, 1.0))


def test_quasi_static_pulse(gaussian, psi):
    pulse = sch.ImpulsePulse(1.0, 0.2)
    after = sch.apply_impulse(psi, pulse, sch.PropagationConfig(mass=1e4))
    assert sch.kick_fidelity(gaussian, after, 0.2) >= 0.999
    assert wp.mean_momentum(wp.to_momentum(after)) == pytest.approx(0.2, abs=1e-9)


def test_long_pulse_distorts_but_keeps_mean(gaussian, psi):
    after = sch.apply_impulse(psi, sch.ImpulsePulse(1.0, 1.0), sch.PropagationConfig(mass=1.0))
    fidelity = sch.kick_fidelity(gaussian, after, 1.0)
    assert fidelity < 0.999
    #phase along p(t) = p0 + F t is -(tau p0^2 + F tau^2 p0)/2m + const
    assert fidelity == pytest.approx(1.25**-0.25*math.exp(-0.05), abs=1e-6)
    assert wp.mean_momentum(wp.to_momentum(after)) == pytest.approx(1.0, abs=1e-9)
    assert after.norm() == pytest.approx(psi.norm(), abs=1e-12)


def test_impulsive_limit_is_monotone(gaussian, psi):
    fidelities = []
    for tau in [0.4, 0.2, 0.1, 0.05, 0.025]:
        after = sch.apply_impulse(psi, sch.ImpulsePulse.for_kick(0.2, tau), sch.PropagationConfig(mass=1.0))
        fidelities.append(sch.kick_fidelity(gaussian, after, 0.2))
    assert all(a < b for a, b in zip(fidelities, fidelities[1:]))


def test_short_pulse_acceptance(gaussian, psi):
    pulse = sch.ImpulsePulse(20.0, 0.01)
    config = sch.PropagationConfig(mass=1.0)
    after = sch.apply_impulse(psi, pulse, config)
    assert sch.kick_fidelity(gaussian, after, pulse.delta) >= 0.999
    assert wp.mean_momentum(wp.to_momentum(after)) - wp.mean_momentum(gaussian) == pytest.approx(0.2, abs=1e-9)

    out_c, out_d = sch.run_mzi_impulse(gaussian, 0.85, pulse, config)
    ideal_c, ideal_d = mzi.run_mzi(gaussian, 0.85, 0.2, mzi.PhaseSetting())
    assert out_c.probability == pytest.approx(ideal_c.probability, abs=1e-4)
    assert out_c.mean_p == pytest.approx(ideal_c.mean_p, abs=1e-4)
    assert out_d.mean_p == pytest.approx(ideal_d.mean_p, abs=1e-4)


def test_pipeline_alpha_pi_swaps_ports(gaussian):
    pulse = sch.ImpulsePulse(20.0, 0.01)
    out_c, _ = sch.run_mzi_impulse(gaussian, 0.85, pulse)
    _, flipped_d = sch.run_mzi_impulse(gaussian, 0.85, pulse, alpha=math.pi)
    assert flipped_d.probability == pytest.approx(out_c.probability, abs=1e-9)


def test_kick_fidelity_values(gaussian, grid):
    assert sch.kick_fidelity(gaussian, wp.shift(gaussian, 0.5), 0.5) == pytest.approx(1, abs=1e-10)
    assert sch.kick_fidelity(gaussian, gaussian, 2.0) == pytest.approx(math.exp(-1), abs=1e-10)
    odd = wp.MomentumWavefunction(grid, grid.momenta*gaussian.amplitudes)
    assert sch.kick_fidelity(gaussian, odd, 0.0) == pytest.approx(0, abs=1e-12)
    empty = wp.scale(gaussian, 0)
    assert sch.kick_fidelity(gaussian, empty, 0.0) == 0


def test_kick_phase(gaussian):
    turned = wp.scale(wp.shift(gaussian, 0.3), cmath.exp(0.4j))
    assert sch.kick_phase(gaussian, turned, 0.3) == pytest.approx(0.4, abs=1e-10)
    assert sch.kick_phase(wp.to_position(gaussian), wp.to_position(turned), 0.3) == pytest.approx(0.4, abs=1e-10)
