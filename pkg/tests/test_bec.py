import math

import numpy as np
import pytest
import hypothesis as hyp
import hypothesis.strategies as st

import wavepacket as wp
import interferometer as mzi
import bec


def mzi_ports(gaussian, t, delta):
    state = mzi.apply_kick(mzi.split(gaussian, mzi.BeamSplitterCoeffs(t)), delta, mzi.PhaseSetting())
    return mzi.recombine(state)


def test_pulse_identity(gaussian):
    state = bec.SpinorWavefunction.pure(gaussian)
    same = bec.microwave_pulse(state, 1.0)
    assert np.array_equal(same.comp_a.amplitudes, gaussian.amplitudes)
    assert wp.norm(same.comp_b) == 0


def test_half_pulse_balances(gaussian):
    state = bec.microwave_pulse(bec.SpinorWavefunction.pure(gaussian), bec.pi_over_two)
    assert wp.norm(state.comp_a) == pytest.approx(0.5, abs=1e-12)
    assert wp.norm(state.comp_b) == pytest.approx(0.5, abs=1e-12)


def test_pulses_compose(gaussian):
    state = bec.SpinorWavefunction(wp.scale(gaussian, 0.6), wp.scale(wp.shift(gaussian, 0.3), 0.8))
    t1, t2 = 0.9, 0.95
    r1, r2 = math.sqrt(1 - t1**2), math.sqrt(1 - t2**2)
    twice = bec.microwave_pulse(bec.microwave_pulse(state, t1), t2)
    once = bec.microwave_pulse(state, t1*t2 - r1*r2)
    assert np.allclose(twice.comp_a.amplitudes, once.comp_a.amplitudes, atol=1e-12)
    assert np.allclose(twice.comp_b.amplitudes, once.comp_b.amplitudes, atol=1e-12)


def test_pulse_rejects_bad_coefficient(gaussian):
    with pytest.raises(ValueError):
        bec.microwave_pulse(bec.SpinorWavefunction.pure(gaussian), 1.2)


def test_stern_gerlach(gaussian):
    state = bec.SpinorWavefunction.pure(gaussian)
    assert np.array_equal(bec.stern_gerlach(state, bec.SgKick()).comp_a.amplitudes, gaussian.amplitudes)
    kicked = bec.stern_gerlach(state, bec.SgKick(0.3, -1.0))
    assert wp.mean_momentum(kicked.comp_a) == pytest.approx(0.3, abs=1e-9)
    assert bec.SgKick(0.3, -1.0).reversed() == bec.SgKick(-0.3, 1.0)


def test_select_pure_state(gaussian):
    state = bec.SpinorWavefunction.pure(gaussian, 'A')
    assert bec.select_internal(state, 'A').probability == pytest.approx(1, abs=1e-10)
    assert bec.select_internal(state, 'B').dark
    with pytest.raises(ValueError):
        bec.select_internal(state, 'C')


def test_canonical_protocol():
    outcome = bec.run_protocol(0.85, 0.1, 0.3)
    assert 0.054 <= outcome.probability <= 0.060
    assert -0.31 <= outcome.mean_p <= -0.27


def test_protocol_preserves_norm():
    assert bec.protocol_state(0.6, -0.4, 0.9).norm() == pytest.approx(1, abs=1e-10)


def test_equal_kicks_give_no_shift():
    outcome = bec.run_protocol(0.85, 0.25, 0.25)
    assert outcome.mean_p == pytest.approx(0, abs=1e-12)


def test_balanced_dark():
    outcome = bec.run_protocol(bec.pi_over_two, 0.2, 0.2)
    assert outcome.dark


def test_state_b_is_displaced_port_d(gaussian):
    outcome = bec.run_protocol(0.85, 0.1, 0.3, which='B')
    _, port_d = mzi.run_mzi(gaussian, 0.85, 0.2, mzi.PhaseSetting())
    assert outcome.probability == pytest.approx(port_d.probability, abs=1e-10)
    assert outcome.mean_p == pytest.approx(port_d.mean_p - 0.2, abs=1e-9)
    expected = wp.shift(port_d.wavefunction, -0.2)
    assert np.allclose(outcome.wavefunction.amplitudes, expected.amplitudes, atol=1e-10)


@hyp.settings(max_examples=100)
@hyp.given(t=st.floats(0.05, 0.95), delta_a=st.floats(-1.0, 1.0), delta_b=st.floats(-1.0, 1.0))
def test_equivalent_to_interferometer(gaussian, t, delta_a, delta_b):
    delta = delta_b - delta_a
    state = bec.protocol_state(t, delta_a, delta_b, gaussian)
    raw_c, _ = mzi_ports(gaussian, t, delta)
    assert np.max(np.abs(state.comp_a.amplitudes - raw_c.amplitudes)) <= 1e-10

    outcome = bec.select_internal(state, 'A')
    port_c = mzi.port_stats(raw_c, 'C')
    assert outcome.probability == pytest.approx(port_c.probability, abs=1e-10)
    hyp.assume(not port_c.dark and port_c.probability > 1e-6)
    assert outcome.mean_p == pytest.approx(port_c.mean_p, abs=1e-8)


@hyp.given(t=st.floats(0.05, 0.95), offset=st.floats(-0.5, 0.5))
def test_depends_only_on_difference(t, offset):
    one = bec.run_protocol(t, 0.1, 0.3)
    other = bec.run_protocol(t, 0.1 + offset, 0.3 + offset)
    assert other.probability == pytest.approx(one.probability, abs=1e-10)
    assert other.mean_p == pytest.approx(one.mean_p, abs=1e-8)
