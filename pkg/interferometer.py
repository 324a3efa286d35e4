"""
Mach-Zehnder pipeline: BS1 with transmission t and reflection i*r, a kick
and phase in the arms, the balanced BS2, and post-selection at ports C/D.
"""
import cmath
import logging
import math
import typing
from dataclasses import dataclass, field

import numpy as np

import wavepacket as wp
from wavepacket import MomentumWavefunction

log = logging.getLogger(__name__)

#Port probabilities below this have no meaningful mean
dark_port_threshold = 1e-15

paths = ('A', 'B')
ports = ('C', 'D')


class DarkPortError(ValueError):
    pass


@dataclass(frozen=True)
class BeamSplitterCoeffs():
    """
    Real transmission t and reflection r = sqrt(1 - t^2); the reflected
    amplitude carries an extra factor i.
    """
    t: float
    r: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.t <= 1:
            raise ValueError(f'Transmission t must lie in [0, 1], got {self.t}')
        object.__setattr__(self, 'r', math.sqrt(max(0.0, 1 - self.t**2)))


@dataclass(frozen=True)
class PhaseSetting():
    """
    Propagation phase beta and kick phase gamma. Only alpha = beta + gamma
    enters the dynamics.
    """
    beta: float = 0.0
    gamma: float = 0.0

    @property
    def alpha(self) -> float:
        return self.beta + self.gamma

    @classmethod
    def from_alpha(cls, alpha: float) -> 'PhaseSetting':
        return cls(beta=alpha)


@dataclass(frozen=True, eq=False)
class TwoPathState():
    path_a: MomentumWavefunction
    path_b: MomentumWavefunction

    def __post_init__(self):
        wp.check_grid(self.path_a, self.path_b)
        total = self.norm()
        if total > 1 + 1e-9:
            raise ValueError(f'Two-path state norm {total} exceeds 1')

    @property
    def grid(self):
        return self.path_a.grid

    def norm(self) -> float:
        return wp.norm(self.path_a) + wp.norm(self.path_b)

    def get_path(self, path: str) -> MomentumWavefunction:
        check_label(path, paths)
        return self.path_a if path == 'A' else self.path_b

    def with_path(self, path: str, wf: MomentumWavefunction) -> 'TwoPathState':
        check_label(path, paths)
        if path == 'A':
            return TwoPathState(wf, self.path_b)
        return TwoPathState(self.path_a, wf)


@dataclass(frozen=True, eq=False)
class PortOutcome():
    """
    Post-selection statistics for one exit port (or internal state). A dark
    outcome keeps its probability but has no wavefunction or mean.
    """
    port: str
    probability: float
    wavefunction: typing.Optional[MomentumWavefunction]
    mean_p: typing.Optional[float]

    @property
    def dark(self) -> bool:
        return self.mean_p is None

    def weighted_mean(self) -> float:
        """
        P_j <p>_j, zero for a dark outcome
        """
        if self.dark:
            return 0.0
        return self.probability*self.mean_p

    def require_bright(self) -> 'PortOutcome':
        if self.dark:
            raise DarkPortError(
                f'Port {self.port} is dark (P = {self.probability:.3g}); its mean momentum is undefined')
        return self

    def __repr__(self):
        if self.dark:
            return f'PortOutcome({self.port}: P={self.probability:.6g}, dark)'
        return f'PortOutcome({self.port}: P={self.probability:.6g}, <p>={self.mean_p:.6g})'


def check_label(label: str, allowed: typing.Sequence[str]):
    if label not in allowed:
        raise ValueError(f'Expected one of {", ".join(allowed)}, got {label!r}')


def split(input: MomentumWavefunction, bs: BeamSplitterCoeffs) -> TwoPathState:
    return TwoPathState(wp.scale(input, bs.t), wp.scale(input, 1j*bs.r))


def kick_path(state: TwoPathState, path: str, delta: float) -> TwoPathState:
    return state.with_path(path, wp.shift(state.get_path(path), delta))


def phase_path(state: TwoPathState, path: str, alpha: float) -> TwoPathState:
    return state.with_path(path, wp.scale(state.get_path(path), cmath.exp(1j*alpha)))


def apply_kick(state: TwoPathState, delta: float, phase: PhaseSetting) -> TwoPathState:
    """
    Arm B becomes e^(i alpha) Phi_B(p - delta); arm A is untouched
    """
    return phase_path(kick_path(state, 'B', delta), 'B', phase.alpha)


def recombine(state: TwoPathState) -> typing.Tuple[MomentumWavefunction, MomentumWavefunction]:
    """
    Balanced BS2 (transmission 1/sqrt2, reflection i/sqrt2). The overall
    factor i on port D is dropped.
    """
    a, b = state.path_a, state.path_b
    s = 1/math.sqrt(2)
    raw_c = wp.superpose(s, a, 1j*s, b)
    raw_d = wp.superpose(s, a, -1j*s, b)
    return raw_c, raw_d


def port_stats(raw: MomentumWavefunction, port: str) -> PortOutcome:
    probability = wp.norm(raw)
    if probability < dark_port_threshold:
        log.debug('Port %s is dark (P=%.3g)', port, probability)
        return PortOutcome(port, probability, None, None)
    wavefunction = wp.scale(raw, 1/math.sqrt(probability))
    return PortOutcome(port, probability, wavefunction, wp.mean_momentum(raw))


def state_momentum(state: TwoPathState) -> float:
    """
    Sum over arms of N_j <p>_j, the momentum the ports must share
    """
    total = 0.0
    for path in paths:
        wf = state.get_path(path)
        n = wp.norm(wf)
        if n >= wp.zero_norm_threshold:
            total += n*wp.mean_momentum(wf)
    return total


def conservation_residual(out_c: PortOutcome, out_d: PortOutcome, t: float, delta: float, mean_in: float) -> float:
    """
    |P_C <p>_C + P_D <p>_D - (t^2 <p>_in + r^2 (<p>_in + delta))|
    """
    r2 = 1 - t**2
    expected = t**2*mean_in + r2*(mean_in + delta)
    return abs(out_c.weighted_mean() + out_d.weighted_mean() - expected)


def run_mzi(input: MomentumWavefunction, t: float, delta: float, phase: PhaseSetting) -> typing.Tuple[PortOutcome, PortOutcome]:
    log.debug('run_mzi t=%s delta=%s alpha=%s', t, delta, phase.alpha)
    state = split(input, BeamSplitterCoeffs(t))
    state = apply_kick(state, delta, phase)
    raw_c, raw_d = recombine(state)
    return port_stats(raw_c, 'C'), port_stats(raw_d, 'D')


def port_components(input: MomentumWavefunction, t: float, delta: float, alpha: float = 0.0) -> typing.Dict[str, np.ndarray]:
    """
    The two terms of the port C amplitude and their difference:
    direct = t Phi(p)/sqrt2, kicked = r e^(i alpha) Phi(p - delta)/sqrt2,
    port_c = direct - kicked.
    """
    bs = BeamSplitterCoeffs(t)
    s = 1/math.sqrt(2)
    direct = wp.scale(input, bs.t*s)
    kicked = wp.scale(wp.shift(input, delta), bs.r*s*cmath.exp(1j*alpha))
    port_c = wp.superpose(1, direct, -1, kicked)
    return {
        'p': input.momenta,
        'direct': direct.amplitudes,
        'kicked': kicked.amplitudes,
        'port_c': port_c.amplitudes,
        }
