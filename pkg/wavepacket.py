"""
Momentum space wave functions on a uniform grid.

Natural units throughout: hbar = 1 and momenta in units of the Gaussian
width W. The position grid is tied to the momentum grid by the discrete
Fourier pair, dz = 2*pi/(n*dp), so Riemann sums on either grid obey
Parseval exactly.
"""
import logging
import typing
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

#Below this integrated density a wave function is treated as a dark port
zero_norm_threshold = 1e-30

#Gaussians must fit inside the grid out to this many widths
gaussian_span = 6.0


class GridTooNarrowError(ValueError):
    pass

class ZeroNormError(ValueError):
    pass

class AliasingError(ValueError):
    pass

class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec():
    """
    Uniform momentum grid p_k = p_min + k*dp, k = 0..n_points-1
    """
    n_points: int = 4096
    p_min: float = -16.0
    p_max: float = 16.0

    def __post_init__(self):
        n = self.n_points
        if n < 2 or n & (n - 1) != 0:
            raise ValueError(f'n_points must be a power of two >= 2, got {n}')
        if not self.p_max > self.p_min:
            raise ValueError(f'p_max ({self.p_max}) must exceed p_min ({self.p_min})')

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min)/self.n_points

    @property
    def span(self) -> float:
        return self.p_max - self.p_min

    @property
    def dz(self) -> float:
        return 2*np.pi/(self.n_points*self.dp)

    @property
    def momenta(self) -> np.ndarray:
        return self.p_min + self.dp*np.arange(self.n_points)

    @property
    def positions(self) -> np.ndarray:
        return self.dz*(np.arange(self.n_points) - self.n_points//2)

    @property
    def z_min(self) -> float:
        return -self.dz*(self.n_points//2)

    def max_shift(self) -> float:
        """
        Largest kick the grid accepts before wrap-around becomes a concern
        """
        return self.span/4


def _frozen(amplitudes) -> np.ndarray:
    result = np.array(amplitudes, dtype=complex)
    result.setflags(write=False)
    return result


@dataclass(frozen=True, eq=False)
class MomentumWavefunction():
    """
    Complex amplitudes Phi(p_k) on a GridSpec, units W^(-1/2). The norm is
    never assumed, always measured.
    """
    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = _frozen(self.amplitudes)
        if amplitudes.shape != (self.grid.n_points,):
            raise ValueError(f'Expected {self.grid.n_points} amplitudes, got shape {amplitudes.shape}')
        if not np.all(np.isfinite(amplitudes)):
            raise ValueError('Amplitudes must be finite')
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def momenta(self) -> np.ndarray:
        return self.grid.momenta

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes)**2

    def __repr__(self):
        return f'MomentumWavefunction(n={self.grid.n_points}, norm={norm(self):.6g})'


@dataclass(frozen=True, eq=False)
class PositionWavefunction():
    """
    Amplitudes psi(z_j) on the position grid conjugate to `grid`
    """
    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = _frozen(self.amplitudes)
        if amplitudes.shape != (self.grid.n_points,):
            raise ValueError(f'Expected {self.grid.n_points} amplitudes, got shape {amplitudes.shape}')
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def positions(self) -> np.ndarray:
        return self.grid.positions

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes)**2

    def norm(self) -> float:
        return float(np.sum(self.density())*self.grid.dz)

    def __repr__(self):
        return f'PositionWavefunction(n={self.grid.n_points}, norm={self.norm():.6g})'


@dataclass(frozen=True)
class GaussianParams():
    width: float = 1.0
    mean: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f'Gaussian width must be positive, got {self.width}')


def check_grid(wf1, wf2):
    if wf1.grid != wf2.grid:
        raise GridMismatchError(f'Grid mismatch: {wf1.grid} vs {wf2.grid}')


def gaussian_init(params: GaussianParams, grid: GridSpec = GridSpec()) -> MomentumWavefunction:
    """
    Sample pi^(-1/4) W^(-1/2) exp(-(p-mu)^2/(2W^2)) on the grid
    """
    W, mu = params.width, params.mean
    lo, hi = mu - gaussian_span*W, mu + gaussian_span*W
    if grid.p_min > lo or grid.p_max < hi:
        raise GridTooNarrowError(
            f'Grid [{grid.p_min}, {grid.p_max}) does not span [{lo}, {hi}] for W={W}, mean={mu}')
    p = grid.momenta
    amplitudes = np.pi**-0.25/np.sqrt(W)*np.exp(-0.5*((p - mu)/W)**2)
    return MomentumWavefunction(grid, amplitudes)


def norm(wf: MomentumWavefunction) -> float:
    """
    Integrated density sum |Phi|^2 dp
    """
    return float(np.sum(wf.density())*wf.grid.dp)


def inner(wf1: MomentumWavefunction, wf2: MomentumWavefunction) -> complex:
    """
    <wf1|wf2> by the same Riemann sum as norm
    """
    check_grid(wf1, wf2)
    return complex(np.sum(np.conj(wf1.amplitudes)*wf2.amplitudes)*wf1.grid.dp)


def _checked_norm(wf) -> float:
    n = norm(wf)
    if n < zero_norm_threshold:
        raise ZeroNormError(f'Wave function norm {n:.3g} is below {zero_norm_threshold:g}')
    return n


def mean_momentum(wf: MomentumWavefunction) -> float:
    n = _checked_norm(wf)
    return float(np.sum(wf.momenta*wf.density())*wf.grid.dp/n)


def variance_momentum(wf: MomentumWavefunction) -> float:
    n = _checked_norm(wf)
    p = wf.momenta
    rho = wf.density()*wf.grid.dp/n
    mean = np.sum(p*rho)
    return float(np.sum((p - mean)**2*rho))


def scale(wf: MomentumWavefunction, c: complex) -> MomentumWavefunction:
    return MomentumWavefunction(wf.grid, c*wf.amplitudes)


def superpose(a: complex, wf1: MomentumWavefunction, b: complex, wf2: MomentumWavefunction) -> MomentumWavefunction:
    check_grid(wf1, wf2)
    return MomentumWavefunction(wf1.grid, a*wf1.amplitudes + b*wf2.amplitudes)


def to_position(wf: MomentumWavefunction) -> PositionWavefunction:
    """
    psi(z_j) = (1/sqrt(2 pi)) sum_k Phi(p_k) exp(i p_k z_j) dp
    """
    grid = wf.grid
    n = grid.n_points
    k = np.arange(n)
    a = wf.amplitudes*np.exp(1j*k*grid.dp*grid.z_min)
    psi = n*grid.dp/np.sqrt(2*np.pi)*np.exp(1j*grid.p_min*grid.positions)*np.fft.ifft(a)
    return PositionWavefunction(grid, psi)


def to_momentum(wf: PositionWavefunction) -> MomentumWavefunction:
    """
    Inverse of to_position
    """
    grid = wf.grid
    k = np.arange(grid.n_points)
    b = wf.amplitudes*np.exp(-1j*grid.p_min*grid.positions)
    phi = grid.dz/np.sqrt(2*np.pi)*np.exp(-1j*k*grid.dp*grid.z_min)*np.fft.fft(b)
    return MomentumWavefunction(grid, phi)


def check_shift(grid: GridSpec, delta: float):
    if not abs(delta) < grid.max_shift():
        raise AliasingError(
            f'Kick {delta} exceeds the aliasing guard {grid.max_shift()} for grid span {grid.span}')


def shift(wf: MomentumWavefunction, delta: float) -> MomentumWavefunction:
    """
    Return Phi(p - delta). The displacement is applied as the phase ramp
    exp(i delta z) in position space, so delta need not be a multiple of dp.
    """
    check_shift(wf.grid, delta)
    if delta == 0:
        return wf
    psi = to_position(wf)
    kicked = PositionWavefunction(wf.grid, psi.amplitudes*np.exp(1j*delta*psi.positions))
    return to_momentum(kicked)


def peak(wf: MomentumWavefunction) -> typing.Tuple[float, complex]:
    """
    Grid node with the largest |Phi| and the amplitude there
    """
    idx = int(np.argmax(np.abs(wf.amplitudes)))
    return float(wf.momenta[idx]), complex(wf.amplitudes[idx])
