"""
Closed-form port statistics for a zero-mean Gaussian input.

With K = exp(-delta^2/4) the overlap of two unit Gaussians displaced by
delta (units of W), and c = t r cos(alpha) K:

    P_C,D    = (1 -+ 2c)/2
    <p>_C,D  = delta (r^2 -+ c) / (2 P_C,D)

The first moment of Phi(p)Phi(p - delta) is (delta/2) K, which is where
the delta in front of the cross term comes from. The grid integrator in
interferometer.py is the reference these are checked against.
"""
import logging
import typing
from dataclasses import dataclass

import numpy as np

from interferometer import dark_port_threshold

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MziParams():
    t: float
    delta_over_w: float
    alpha: float = 0.0

    def __post_init__(self):
        if not 0 <= self.t <= 1:
            raise ValueError(f'Transmission t must lie in [0, 1], got {self.t}')


@dataclass(frozen=True)
class ClosedFormStats():
    """
    Port probabilities and mean momenta in units of W; a dark port has a
    nan mean.
    """
    p_c: float
    p_d: float
    mean_c: float
    mean_d: float

    @property
    def dark_c(self) -> bool:
        return bool(np.isnan(self.mean_c))

    @property
    def dark_d(self) -> bool:
        return bool(np.isnan(self.mean_d))


def gaussian_overlap(delta_over_w):
    """
    Integral of Phi(p)Phi(p - delta) for unit-norm Gaussians of width W
    """
    delta = np.asarray(delta_over_w, dtype=float)
    if np.any(delta < 0):
        raise ValueError('delta must be non-negative')
    result = np.exp(-delta**2/4)
    if result.ndim == 0:
        return float(result)
    return result


def closed_form_grid(t, delta, alpha = 0.0) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized closed forms over broadcastable arrays of t, delta, alpha.
    Returns (p_c, p_d, mean_c, mean_d); means are nan where a port is dark.
    """
    t = np.asarray(t, dtype=float)
    delta = np.asarray(delta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise ValueError('Transmission t must lie in [0, 1]')
    r = np.sqrt(np.clip(1 - t**2, 0, None))
    c = t*r*np.cos(alpha)*gaussian_overlap(np.abs(delta))
    p_c = (1 - 2*c)/2
    p_d = (1 + 2*c)/2
    num_c = delta*(r**2 - c)/2
    num_d = delta*(r**2 + c)/2
    with np.errstate(divide='ignore', invalid='ignore'):
        mean_c = np.where(p_c < dark_port_threshold, np.nan, num_c/p_c)
        mean_d = np.where(p_d < dark_port_threshold, np.nan, num_d/p_d)
    return p_c, p_d, mean_c, mean_d


def closed_form_stats(params: MziParams) -> ClosedFormStats:
    p_c, p_d, mean_c, mean_d = closed_form_grid(params.t, params.delta_over_w, params.alpha)
    return ClosedFormStats(float(p_c), float(p_d), float(mean_c), float(mean_d))


def find_min_mean_c(t_range: typing.Tuple[float, float], delta_range: typing.Tuple[float, float],
        resolution, alpha: float = 0.0) -> typing.Tuple[float, float, float]:
    """
    Dense grid search for the most negative <p>_C. resolution is either an
    int (points per axis) or a (t_points, delta_points) pair. Returns
    (t, delta, min_mean_c).
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    n_t, n_delta = resolution
    t_lo, t_hi = t_range
    d_lo, d_hi = delta_range
    if n_t < 1 or n_delta < 1 or t_lo > t_hi or d_lo > d_hi:
        raise ValueError(f'Empty search range t={t_range} delta={delta_range} resolution={resolution}')
    if t_lo < 0 or t_hi > 1 or d_lo < 0:
        raise ValueError('Search range outside t in [0, 1], delta >= 0')

    ts = np.linspace(t_lo, t_hi, n_t)
    deltas = np.linspace(d_lo, d_hi, n_delta)
    T, D = np.meshgrid(ts, deltas, indexing='ij')
    _, _, mean_c, _ = closed_form_grid(T, D, alpha)
    if np.all(np.isnan(mean_c)):
        raise ValueError('Every cell of the search range is a dark port')
    idx = np.unravel_index(np.nanargmin(mean_c), mean_c.shape)
    log.debug('min <p>_C = %.6g at t=%.6g delta=%.6g', mean_c[idx], T[idx], D[idx])
    return float(T[idx]), float(D[idx]), float(mean_c[idx])
