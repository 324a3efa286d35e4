"""
SI estimates for the electron interferometer: beam spreading after the
slit, the momentum width W of the prepared state and the kick delta a
capacitor in one arm delivers.

The slit of width a is replaced by a minimum-uncertainty Gaussian of
position standard deviation a/2, so W = hbar/(2 sigma0) = hbar/a.
"""
import logging
import math
from dataclasses import dataclass, replace

import scipy.constants as const

from gaussian_oracle import MziParams

log = logging.getLogger(__name__)

#CODATA values, all physical constants used by this module
hbar = const.hbar
h = const.h
m_e = const.m_e
e = const.e
electron_rest_energy_ev = const.physical_constants['electron mass energy equivalent in MeV'][0]*1e6

#Reject beams above this fraction of the rest energy
max_energy_fraction = 0.05


class RelativisticError(ValueError):
    pass


@dataclass(frozen=True)
class ElectronScenario():
    """
    Defaults reproduce the 6 keV grating interferometer estimate.
    """
    kinetic_energy: float = 6e3          #eV
    slit_width: float = 1.5e-6           #m
    drift_distance: float = 1.0          #m
    plate_separation: float = 1e-3       #m
    plate_length: float = 1e-2           #m
    voltage: float = 0.2e-3              #V
    grating_period: float = 100e-9       #m
    grating_distance: float = 0.35       #m

    def __post_init__(self):
        for name in ('kinetic_energy', 'slit_width', 'drift_distance', 'plate_separation',
                'plate_length', 'grating_period', 'grating_distance'):
            if not getattr(self, name) > 0:
                raise ValueError(f'{name} must be positive, got {getattr(self, name)}')
        if self.voltage < 0:
            raise ValueError(f'voltage must be non-negative, got {self.voltage}')

    @property
    def kinetic_energy_joule(self) -> float:
        return self.kinetic_energy*e

    @classmethod
    def from_joule(cls, kinetic_energy_joule: float, **kwargs) -> 'ElectronScenario':
        return cls(kinetic_energy=kinetic_energy_joule/e, **kwargs)


@dataclass(frozen=True)
class FeasibilityReport():
    speed: float                #m/s
    momentum: float             #kg m/s
    time_of_flight: float       #s
    initial_width: float        #m, sigma0
    beam_width_at_drift: float  #m
    momentum_width: float       #kg m/s, W
    kick: float                 #kg m/s, delta
    ratio: float                #delta/W
    wavelength: float           #m
    path_separation: float      #m, at grating_distance


def electron_report(s: ElectronScenario) -> FeasibilityReport:
    if s.kinetic_energy > max_energy_fraction*electron_rest_energy_ev:
        raise RelativisticError(
            f'{s.kinetic_energy:g} eV is not small against the {electron_rest_energy_ev:.6g} eV rest energy')

    p = math.sqrt(2*m_e*s.kinetic_energy_joule)
    v = p/m_e
    time_of_flight = s.drift_distance/v
    sigma0 = s.slit_width/2
    spread = hbar*time_of_flight/(2*m_e*sigma0**2)
    sigma = sigma0*math.sqrt(1 + spread**2)
    W = hbar/(2*sigma0)
    force = e*s.voltage/s.plate_separation
    delta = force*s.plate_length/v
    wavelength = h/p

    log.debug('Electron scenario %s: v=%.6g m/s, W=%.6g, delta=%.6g', s, v, W, delta)
    return FeasibilityReport(
        speed=v,
        momentum=p,
        time_of_flight=time_of_flight,
        initial_width=sigma0,
        beam_width_at_drift=sigma,
        momentum_width=W,
        kick=delta,
        ratio=delta/W,
        wavelength=wavelength,
        path_separation=s.grating_distance*wavelength/s.grating_period,
        )


def scaled(s: ElectronScenario, **factors) -> ElectronScenario:
    """
    Copy of s with the named fields multiplied by the given factors
    """
    return replace(s, **{key: getattr(s, key)*factor for key, factor in factors.items()})


def ratio_to_mzi_params(report: FeasibilityReport, t: float, alpha: float = 0.0) -> MziParams:
    return MziParams(t=t, delta_over_w=report.ratio, alpha=alpha)


def report_lines(s: ElectronScenario, report: FeasibilityReport):
    lines = []
    lines.append(f'Beam: {s.kinetic_energy/1e3:g} keV electrons, v = {report.speed:.4g} m/s, '
        f'lambda = {report.wavelength*1e12:.4g} pm')
    lines.append(f'Slit {s.slit_width*1e6:g} um -> sigma0 = {report.initial_width*1e6:.4g} um, '
        f'W = {report.momentum_width:.4g} kg m/s')
    lines.append(f'Beam width after {s.drift_distance:g} m ({report.time_of_flight*1e9:.4g} ns): '
        f'{report.beam_width_at_drift*1e6:.4g} um')
    lines.append(f'Capacitor {s.voltage*1e3:g} mV over {s.plate_separation*1e3:g} mm, '
        f'{s.plate_length*1e2:g} cm long: delta = {report.kick:.4g} kg m/s')
    lines.append(f'delta/W = {report.ratio:.4g}')
    lines.append(f'Path separation at {s.grating_distance*1e2:g} cm from a {s.grating_period*1e9:g} nm grating: '
        f'{report.path_separation*1e6:.4g} um (informational)')
    return lines
