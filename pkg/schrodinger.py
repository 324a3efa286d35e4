"""
1D split-step propagation in the z direction, hbar = 1.

The kinetic factor exp(-i p^2 dt / 2m) is applied on the momentum grid and
the linear potential V(z) = -F z as the exact phase exp(i F z dt) on the
position grid. Steps are Strang split: half potential, kinetic, half
potential.
"""
import cmath
import logging
import math
import typing
from dataclasses import dataclass

import numpy as np

import wavepacket as wp
import interferometer as mzi
from wavepacket import MomentumWavefunction, PositionWavefunction

log = logging.getLogger(__name__)

#Fraction of the box on each side that must stay empty
edge_fraction = 1/16
leakage_tolerance = 1e-6


class BoundaryLeakageError(ValueError):
    pass


@dataclass(frozen=True)
class ImpulsePulse():
    """
    Constant force F acting for duration tau, integrated in `substeps`
    Strang steps. The intended kick is delta = F tau.
    """
    force: float
    duration: float
    substeps: int = 100

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f'Pulse duration must be non-negative, got {self.duration}')
        if self.substeps < 1:
            raise ValueError(f'substeps must be >= 1, got {self.substeps}')

    @property
    def delta(self) -> float:
        return self.force*self.duration

    @classmethod
    def for_kick(cls, delta: float, duration: float, substeps: int = 100) -> 'ImpulsePulse':
        if duration <= 0:
            raise ValueError('A non-zero kick needs a positive duration')
        return cls(delta/duration, duration, substeps)


@dataclass(frozen=True)
class PropagationConfig():
    mass: float = 1.0
    time_step: float = 1e-3
    total_time: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f'mass must be positive, got {self.mass}')
        if not self.time_step > 0:
            raise ValueError(f'time_step must be positive, got {self.time_step}')
        if self.total_time < 0:
            raise ValueError(f'total_time must be non-negative, got {self.total_time}')

    @property
    def steps(self) -> int:
        return int(math.ceil(self.total_time/self.time_step - 1e-9))


def kinetic_phase(grid: wp.GridSpec, time: float, mass: float) -> np.ndarray:
    p = grid.momenta
    return np.exp(-0.5j*p**2*time/mass)


def check_boundaries(wf: PositionWavefunction):
    """
    Raise if more than leakage_tolerance of the norm sits in the edge bands
    of the position box
    """
    density = wf.density()
    total = np.sum(density)
    if total == 0:
        return
    edge = int(wf.grid.n_points*edge_fraction)
    outside = np.sum(density[:edge]) + np.sum(density[-edge:])
    if outside/total > leakage_tolerance:
        raise BoundaryLeakageError(
            f'{outside/total:.3g} of the norm reached the edges of the position box; enlarge the grid')


def free_propagate(wf: PositionWavefunction, time: float, config: PropagationConfig = PropagationConfig()) -> PositionWavefunction:
    """
    Exact free evolution: multiply by exp(-i p^2 t / 2m) in momentum space
    """
    if time == 0:
        return wf
    phi = wp.to_momentum(wf)
    evolved = MomentumWavefunction(wf.grid, phi.amplitudes*kinetic_phase(wf.grid, time, config.mass))
    result = wp.to_position(evolved)
    check_boundaries(result)
    return result


def propagate(wf: PositionWavefunction, config: PropagationConfig) -> PositionWavefunction:
    """
    Free evolution over config.total_time in config.time_step increments
    """
    kinetic = kinetic_phase(wf.grid, config.time_step, config.mass)
    for _ in range(config.steps):
        phi = wp.to_momentum(wf)
        wf = wp.to_position(MomentumWavefunction(wf.grid, phi.amplitudes*kinetic))
    check_boundaries(wf)
    return wf


def apply_impulse(wf: PositionWavefunction, pulse: ImpulsePulse, config: PropagationConfig = PropagationConfig()) -> PositionWavefunction:
    """
    Strang-split evolution under V(z) = -F z for the pulse duration
    """
    if pulse.duration == 0:
        return wf
    wp.check_shift(wf.grid, pulse.delta)
    dt = pulse.duration/pulse.substeps
    z = wf.grid.positions
    half_potential = np.exp(0.5j*pulse.force*z*dt)
    kinetic = kinetic_phase(wf.grid, dt, config.mass)

    log.debug('Impulse F=%s tau=%s in %d substeps (m=%s)', pulse.force, pulse.duration, pulse.substeps, config.mass)
    psi = wf.amplitudes*half_potential
    for step in range(pulse.substeps):
        phi = wp.to_momentum(PositionWavefunction(wf.grid, psi))
        psi = wp.to_position(MomentumWavefunction(wf.grid, phi.amplitudes*kinetic)).amplitudes
        if step < pulse.substeps - 1:
            psi = psi*half_potential*half_potential
    result = PositionWavefunction(wf.grid, psi*half_potential)
    check_boundaries(result)
    return result


def _as_momentum(wf) -> MomentumWavefunction:
    if isinstance(wf, PositionWavefunction):
        return wp.to_momentum(wf)
    return wf


def kick_fidelity(before, after, delta: float) -> float:
    """
    |<shift(before, delta)|after>| normalized by both norms
    """
    before = _as_momentum(before)
    after = _as_momentum(after)
    wp.check_grid(before, after)
    n = math.sqrt(wp.norm(before)*wp.norm(after))
    if n == 0:
        return 0.0
    return abs(wp.inner(wp.shift(before, delta), after))/n


def kick_phase(before, after, delta: float) -> float:
    """
    The extra phase gamma of after relative to the rigid shift of before
    """
    return cmath.phase(wp.inner(wp.shift(_as_momentum(before), delta), _as_momentum(after)))


def position_moments(wf: PositionWavefunction) -> typing.Tuple[float, float]:
    """
    (mean, standard deviation) of |psi(z)|^2
    """
    z = wf.positions
    rho = wf.density()
    rho = rho/np.sum(rho)
    mean = np.sum(z*rho)
    return float(mean), float(math.sqrt(np.sum((z - mean)**2*rho)))


def run_mzi_impulse(input: MomentumWavefunction, t: float, pulse: ImpulsePulse,
        config: PropagationConfig = PropagationConfig(), alpha: float = 0.0) -> typing.Tuple[mzi.PortOutcome, mzi.PortOutcome]:
    """
    Interferometer in which arm A propagates freely for the pulse duration
    and arm B feels the force. The measured kick phase gamma is removed
    so that alpha is the total relative phase between the arms.
    """
    state = mzi.split(input, mzi.BeamSplitterCoeffs(t))
    arm_a = free_propagate(wp.to_position(state.path_a), pulse.duration, config)
    arm_b = apply_impulse(wp.to_position(state.path_b), pulse, config)
    arm_a, arm_b = wp.to_momentum(arm_a), wp.to_momentum(arm_b)

    #arm B carries i r from BS1, arm A carries t
    gamma = kick_phase(wp.scale(arm_a, 1j), arm_b, pulse.delta)
    log.debug('Measured kick phase gamma=%.6g', gamma)
    arm_b = wp.scale(arm_b, cmath.exp(1j*(alpha - gamma)))

    raw_c, raw_d = mzi.recombine(mzi.TwoPathState(arm_a, arm_b))
    return mzi.port_stats(raw_c, 'C'), mzi.port_stats(raw_d, 'D')
