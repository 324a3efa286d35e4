"""
Internal-state interferometer for condensate atoms: microwave pulses mix
|A> and |B>, Stern-Gerlach pulses kick each internal state by its own
amount, and selecting |A> plays the role of port C.
"""
import logging
import math
import typing
from dataclasses import dataclass

import wavepacket as wp
import interferometer as mzi
from wavepacket import MomentumWavefunction

log = logging.getLogger(__name__)

internal_states = ('A', 'B')
pi_over_two = 1/math.sqrt(2)


@dataclass(frozen=True, eq=False)
class SpinorWavefunction():
    comp_a: MomentumWavefunction
    comp_b: MomentumWavefunction

    def __post_init__(self):
        wp.check_grid(self.comp_a, self.comp_b)

    @property
    def grid(self):
        return self.comp_a.grid

    def norm(self) -> float:
        return wp.norm(self.comp_a) + wp.norm(self.comp_b)

    def component(self, which: str) -> MomentumWavefunction:
        mzi.check_label(which, internal_states)
        return self.comp_a if which == 'A' else self.comp_b

    @classmethod
    def pure(cls, wf: MomentumWavefunction, which: str = 'A') -> 'SpinorWavefunction':
        mzi.check_label(which, internal_states)
        empty = wp.scale(wf, 0)
        if which == 'A':
            return cls(wf, empty)
        return cls(empty, wf)


@dataclass(frozen=True)
class SgKick():
    delta_a: float = 0.0
    delta_b: float = 0.0

    def reversed(self) -> 'SgKick':
        return SgKick(-self.delta_a, -self.delta_b)


def microwave_pulse(state: SpinorWavefunction, t_coeff: float) -> SpinorWavefunction:
    """
    Real rotation |A> -> t|A> + r|B>, |B> -> -r|A> + t|B>
    """
    if not 0 <= t_coeff <= 1:
        raise ValueError(f'Pulse coefficient must lie in [0, 1], got {t_coeff}')
    r = math.sqrt(max(0.0, 1 - t_coeff**2))
    a, b = state.comp_a, state.comp_b
    return SpinorWavefunction(
        wp.superpose(t_coeff, a, -r, b),
        wp.superpose(r, a, t_coeff, b),
        )


def stern_gerlach(state: SpinorWavefunction, kick: SgKick) -> SpinorWavefunction:
    return SpinorWavefunction(
        wp.shift(state.comp_a, kick.delta_a),
        wp.shift(state.comp_b, kick.delta_b),
        )


def select_internal(state: SpinorWavefunction, which: str) -> mzi.PortOutcome:
    return mzi.port_stats(state.component(which), which)


def protocol_state(t_coeff: float, delta_a: float, delta_b: float,
        initial: typing.Optional[MomentumWavefunction] = None) -> SpinorWavefunction:
    """
    pulse(t) -> kick(delta_a, delta_b) -> pi/2 pulse -> kick(-delta_a, -delta_b)
    starting from the Gaussian in |A>
    """
    if initial is None:
        initial = wp.gaussian_init(wp.GaussianParams())
    kick = SgKick(delta_a, delta_b)
    state = SpinorWavefunction.pure(initial, 'A')
    state = microwave_pulse(state, t_coeff)
    state = stern_gerlach(state, kick)
    state = microwave_pulse(state, pi_over_two)
    state = stern_gerlach(state, kick.reversed())
    log.debug('Protocol t=%s delta_a=%s delta_b=%s, final norm %.12f', t_coeff, delta_a, delta_b, state.norm())
    return state


def run_protocol(t_coeff: float, delta_a: float, delta_b: float,
        initial: typing.Optional[MomentumWavefunction] = None, which: str = 'A') -> mzi.PortOutcome:
    return select_internal(protocol_state(t_coeff, delta_a, delta_b, initial), which)
