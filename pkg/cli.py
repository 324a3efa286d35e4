"""
Command line tools for the interference-of-force simulator.

    > python cli.py simulate samples/canonical.qif
    > python cli.py sweep --out sweep.csv
    > python cli.py oracle-check --seed 1
    > python cli.py propagate --force 20 --duration 0.01
    > python cli.py feasibility
    > python cli.py bec --t 0.85 --delta-a 0.1 --delta-b 0.3
"""
import csv
import math
import types
import logging
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import click
import jaraco.logging
import numpy as np
from more_itertools import chunked

import wavepacket as wp
import interferometer as mzi
import gaussian_oracle as oracle
import schrodinger
import feasibility
import bec
import circuitfile
from config import GridConfig
from report import Report, format_value

log = logging.getLogger(__name__)

exit_parse_error = 2
exit_runtime_error = 3

csv_header = ['t', 'delta', 'alpha', 'p_c', 'mean_c', 'p_d', 'mean_d', 'residual']

unitarity_tolerance = 1e-9
conservation_tolerance = 1e-8
oracle_tolerance = 1e-6


##########
# Sweeps #
##########

@dataclass(frozen=True)
class SweepSpec():
    t_range: typing.Tuple[float, float, int] = (0.01, 0.99, 200)
    delta_range: typing.Tuple[float, float, int] = (0.01, 2.0, 200)
    alpha: float = 0.0
    backend: str = 'oracle'

    def __post_init__(self):
        for name, (lo, hi, steps) in (('t', self.t_range), ('delta', self.delta_range)):
            if steps < 2:
                raise ValueError(f'{name} range needs at least 2 steps, got {steps}')
            if lo > hi:
                raise ValueError(f'{name} range is empty: {lo} > {hi}')
        if self.t_range[0] < 0 or self.t_range[1] > 1:
            raise ValueError(f't range must lie in [0, 1], got {self.t_range[:2]}')
        if self.delta_range[0] < 0:
            raise ValueError(f'delta range must be non-negative, got {self.delta_range[:2]}')
        if self.backend not in ('oracle', 'grid'):
            raise ValueError(f'backend must be oracle or grid, got {self.backend!r}')

    def values(self) -> typing.Tuple[np.ndarray, np.ndarray]:
        return np.linspace(*self.t_range), np.linspace(*self.delta_range)

    def cells(self) -> typing.List[typing.Tuple[float, float]]:
        """
        (t, delta) pairs in t-major order
        """
        ts, deltas = self.values()
        return [(float(t), float(delta)) for t in ts for delta in deltas]


@dataclass(frozen=True)
class SweepRow():
    t: float
    delta: float
    alpha: float
    p_c: float
    mean_c: float
    p_d: float
    mean_d: float
    residual: float

    def fields(self):
        return [self.t, self.delta, self.alpha, self.p_c, self.mean_c, self.p_d, self.mean_d, self.residual]


def _mean_or_nan(outcome):
    return float('nan') if outcome.dark else outcome.mean_p

def oracle_rows(spec: SweepSpec) -> typing.List[SweepRow]:
    ts, deltas = spec.values()
    T, D = np.meshgrid(ts, deltas, indexing='ij')
    p_c, p_d, mean_c, mean_d = oracle.closed_form_grid(T, D, spec.alpha)
    measured = np.nan_to_num(p_c*mean_c) + np.nan_to_num(p_d*mean_d)
    residual = np.abs(measured - (1 - T**2)*D)
    rows = []
    for idx in np.ndindex(T.shape):
        rows.append(SweepRow(float(T[idx]), float(D[idx]), spec.alpha, float(p_c[idx]), float(mean_c[idx]),
            float(p_d[idx]), float(mean_d[idx]), float(residual[idx])))
    return rows

def grid_rows(spec: SweepSpec, grid: wp.GridSpec, workers: int = 4, chunk_size: int = 64) -> typing.List[SweepRow]:
    wp.check_shift(grid, max(abs(spec.delta_range[0]), abs(spec.delta_range[1])))
    initial = wp.gaussian_init(wp.GaussianParams(), grid)
    phase = mzi.PhaseSetting.from_alpha(spec.alpha)

    def compute(cells):
        rows = []
        for t, delta in cells:
            out_c, out_d = mzi.run_mzi(initial, t, delta, phase)
            residual = mzi.conservation_residual(out_c, out_d, t, delta, 0.0)
            rows.append(SweepRow(t, delta, spec.alpha, out_c.probability, _mean_or_nan(out_c),
                out_d.probability, _mean_or_nan(out_d), residual))
        return rows

    with ThreadPoolExecutor(max_workers=workers) as executor:
        chunks = executor.map(compute, chunked(spec.cells(), chunk_size))
        return [row for chunk in chunks for row in chunk]

def sweep_rows(spec: SweepSpec, grid: wp.GridSpec, workers: int = 4) -> typing.List[SweepRow]:
    if spec.backend == 'oracle':
        return oracle_rows(spec)
    return grid_rows(spec, grid, workers)

def validate_row(row: SweepRow):
    if abs(row.p_c + row.p_d - 1) > unitarity_tolerance:
        raise ValueError(f'Row t={row.t} delta={row.delta} violates unitarity: P_C + P_D = {row.p_c + row.p_d!r}')
    if row.residual > conservation_tolerance:
        raise ValueError(f'Row t={row.t} delta={row.delta} violates momentum conservation: residual {row.residual!r}')

def format_csv_value(value):
    return format(value, '.17g')

def write_rows(rows: typing.Iterable[SweepRow], out):
    """
    Header plus one line per row, full precision, LF line endings. Rows
    are checked with validate_row before the file is opened.
    """
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(csv_header)
    for row in rows:
        writer.writerow([format_csv_value(v) for v in row.fields()])

def sweep_minimum(rows: typing.Sequence[SweepRow]) -> typing.Optional[SweepRow]:
    bright = [row for row in rows if not math.isnan(row.mean_c)]
    if len(bright) == 0:
        return None
    return min(bright, key=lambda row: row.mean_c)


###################
# Command Helpers #
###################

def grid_options(func):
    func = click.option('--p-max', type=float, default=None, help='Momentum span end in units of W')(func)
    func = click.option('--p-min', type=float, default=None, help='Lowest momentum node in units of W')(func)
    func = click.option('--n-points', type=int, default=None, help='Grid size (power of two)')(func)
    return func

def get_grid(ctx, n_points, p_min, p_max) -> wp.GridSpec:
    config = GridConfig(ctx.obj.get('config_file'))
    return config.grid({'n_points': n_points, 'p_min': p_min, 'p_max': p_max})

def fail(ctx, message, code):
    click.echo(message, err=True)
    ctx.exit(code)


############
# Commands #
############

@click.group()
@click.option('-l', '--log-level', default='warning', show_default=True, help='Set log level (DEBUG, INFO, WARNING, ERROR)')
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None, help='Json config file')
@click.pass_context
def cli(ctx, log_level, config_file):
    jaraco.logging.setup(types.SimpleNamespace(log_level=jaraco.logging.log_level(log_level)),
        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    ctx.ensure_object(dict)
    ctx.obj['config_file'] = config_file


@cli.command()
@click.argument('path', type=click.Path(dir_okay=False))
@grid_options
@click.pass_context
def simulate(ctx, path, n_points, p_min, p_max):
    """
    Run a .qif interferometer program
    """
    try:
        with open(path, 'r', encoding='utf-8') as fp:
            text = fp.read()
    except (OSError, UnicodeDecodeError) as e:
        fail(ctx, f'Cannot read {path}: {e}', exit_runtime_error)
    try:
        program = circuitfile.parse(text)
    except circuitfile.ParseError as e:
        fail(ctx, f'{path}: {e}', exit_parse_error)
    try:
        grid = get_grid(ctx, n_points, p_min, p_max)
        result = circuitfile.execute(program, grid)
    except ValueError as e:
        fail(ctx, f'{path}: {e}', exit_runtime_error)
    click.echo(result.text, nl=False)


@cli.command()
@click.option('--t-range', type=(float, float, int), default=(0.01, 0.99, 200), show_default=True, help='lo hi steps')
@click.option('--delta-range', type=(float, float, int), default=(0.01, 2.0, 200), show_default=True, help='lo hi steps, units of W')
@click.option('--alpha', type=float, default=0.0, show_default=True)
@click.option('--backend', type=click.Choice(['oracle', 'grid']), default='oracle', show_default=True)
@click.option('--workers', type=int, default=4, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), required=True)
@grid_options
@click.pass_context
def sweep(ctx, t_range, delta_range, alpha, backend, workers, out, n_points, p_min, p_max):
    """
    Port statistics over a (t, delta) grid as CSV, t-major
    """
    try:
        spec = SweepSpec(tuple(t_range), tuple(delta_range), alpha, backend)
        grid = get_grid(ctx, n_points, p_min, p_max)
        rows = sweep_rows(spec, grid, workers)
        for row in rows:
            validate_row(row)
        with open(out, 'w', newline='', encoding='utf-8') as fp:
            write_rows(rows, fp)
    except (ValueError, OSError) as e:
        fail(ctx, f'Sweep failed: {e}', exit_runtime_error)

    report = Report(f'Sweep of {len(rows)} cells ({backend} backend) written to {out}')
    best = sweep_minimum(rows)
    if best is None:
        report.add_line('every cell of port C is dark')
    else:
        report.add_line(f'min <p>_C = {format_value(best.mean_c)} W at t = {format_value(best.t)}, '
            f'delta = {format_value(best.delta)} W (P_C = {format_value(best.p_c)})')
    anomalous = sum(1 for row in rows if row.mean_c < 0)
    report.add_line(f'cells with <p>_C < 0: {anomalous}')
    click.echo(report.get_text(), nl=False)


@cli.command('oracle-check')
@click.option('--samples', type=int, default=1000, show_default=True)
@click.option('--seed', type=int, required=True)
@grid_options
@click.pass_context
def oracle_check(ctx, samples, seed, n_points, p_min, p_max):
    """
    Compare grid runs with the closed forms at random (t, delta, alpha)
    """
    try:
        grid = get_grid(ctx, n_points, p_min, p_max)
    except ValueError as e:
        fail(ctx, str(e), exit_runtime_error)
    report = Report(f'Oracle check: {samples} samples, seed {seed}, grid n={grid.n_points} [{grid.p_min}, {grid.p_max})')
    if samples <= 0:
        report.add_line('no samples')
        click.echo(report.get_text(), nl=False)
        return

    rng = np.random.default_rng(seed)
    initial = wp.gaussian_init(wp.GaussianParams(), grid)
    deviation = 0.0
    for t, delta, alpha in zip(rng.uniform(0, 1, samples), rng.uniform(0, 2, samples), rng.uniform(0, 2*np.pi, samples)):
        out_c, out_d = mzi.run_mzi(initial, t, delta, mzi.PhaseSetting.from_alpha(alpha))
        stats = oracle.closed_form_stats(oracle.MziParams(t, delta, alpha))
        pairs = [(out_c.probability, stats.p_c), (out_d.probability, stats.p_d)]
        if not (out_c.dark or stats.dark_c):
            pairs.append((out_c.mean_p, stats.mean_c))
        if not (out_d.dark or stats.dark_d):
            pairs.append((out_d.mean_p, stats.mean_d))
        deviation = max(deviation, max(abs(a - b) for a, b in pairs))
    report.add_line(f'max |grid - oracle| over P_C, <p>_C, P_D, <p>_D: {deviation:.3g}')
    if deviation <= oracle_tolerance:
        report.add_line(f'within {oracle_tolerance:g}')
    else:
        log.warning('Grid deviates from closed forms by %.3g; the grid may be too coarse', deviation)
        report.add_line(f'exceeds {oracle_tolerance:g} (grid too coarse?)')
    click.echo(report.get_text(), nl=False)


@cli.command()
@click.option('--force', type=float, default=20.0, show_default=True, help='F in units of W per unit time')
@click.option('--duration', type=float, default=0.01, show_default=True, help='Pulse duration tau')
@click.option('--substeps', type=int, default=100, show_default=True)
@click.option('--mass', type=float, default=1.0, show_default=True)
@click.option('--width', type=float, default=1.0, show_default=True, help='Initial momentum width W')
@grid_options
@click.pass_context
def propagate(ctx, force, duration, substeps, mass, width, n_points, p_min, p_max):
    """
    Split-step impulse on a Gaussian: kick fidelity and Ehrenfest check
    """
    try:
        grid = get_grid(ctx, n_points, p_min, p_max)
        pulse = schrodinger.ImpulsePulse(force, duration, substeps)
        config = schrodinger.PropagationConfig(mass=mass)
        before = wp.gaussian_init(wp.GaussianParams(width), grid)
        after = wp.to_momentum(schrodinger.apply_impulse(wp.to_position(before), pulse, config))
        fidelity = schrodinger.kick_fidelity(before, after, pulse.delta)
        gain = wp.mean_momentum(after) - wp.mean_momentum(before)
    except ValueError as e:
        fail(ctx, f'Propagation failed: {e}', exit_runtime_error)

    report = Report(f'Impulse F = {force:g}, tau = {duration:g} ({substeps} substeps), m = {mass:g}, W = {width:g}')
    report.add_line(f'dispersion time m/W^2 = {mass/width**2:.6g}, tau is {duration*width**2/mass:.3g} of it')
    report.add_line(f'kick fidelity |<shift(Phi, F tau)|Phi\'>| = {fidelity:.9f}')
    report.add_line(f'mean momentum gain {gain:.12g} vs F tau = {pulse.delta:.12g} (error {abs(gain - pulse.delta):.3g})')
    report.add_line(f'norm drift {abs(wp.norm(after) - wp.norm(before)):.3g}')
    click.echo(report.get_text(), nl=False)


@cli.command('feasibility')
@click.option('--energy', type=float, default=6e3, show_default=True, help='Kinetic energy (eV)')
@click.option('--slit', type=float, default=1.5e-6, show_default=True, help='Slit width (m)')
@click.option('--drift', type=float, default=1.0, show_default=True, help='Drift distance (m)')
@click.option('--plate-separation', type=float, default=1e-3, show_default=True, help='Capacitor gap (m)')
@click.option('--plate-length', type=float, default=1e-2, show_default=True, help='Capacitor length (m)')
@click.option('--voltage', type=float, default=0.2e-3, show_default=True, help='Capacitor voltage (V)')
@click.option('--grating-period', type=float, default=100e-9, show_default=True, help='Grating period (m)')
@click.option('--grating-distance', type=float, default=0.35, show_default=True, help='Distance from the grating (m)')
@click.option('--t', 't_coeff', type=float, default=0.73, show_default=True, help='BS1 transmission for the prediction')
@click.pass_context
def feasibility_cmd(ctx, energy, slit, drift, plate_separation, plate_length, voltage, grating_period, grating_distance, t_coeff):
    """
    Electron interferometer estimates in SI units
    """
    try:
        scenario = feasibility.ElectronScenario(energy, slit, drift, plate_separation, plate_length, voltage,
            grating_period, grating_distance)
        result = feasibility.electron_report(scenario)
        stats = oracle.closed_form_stats(feasibility.ratio_to_mzi_params(result, t_coeff))
    except ValueError as e:
        fail(ctx, f'Feasibility failed: {e}', exit_runtime_error)

    report = Report('Electron feasibility')
    report.add_lines(feasibility.report_lines(scenario, result))
    report.add_div()
    report.add_line(f'predicted at t = {t_coeff:g}, alpha = 0: P_C = {format_value(stats.p_c)}, '
        f'<p>_C = {format_value(stats.mean_c)} W')
    click.echo(report.get_text(), nl=False)


@cli.command('bec')
@click.option('--t', 't_coeff', type=float, default=0.85, show_default=True)
@click.option('--delta-a', type=float, default=0.1, show_default=True)
@click.option('--delta-b', type=float, default=0.3, show_default=True)
@grid_options
@click.pass_context
def bec_cmd(ctx, t_coeff, delta_a, delta_b, n_points, p_min, p_max):
    """
    Microwave / Stern-Gerlach protocol with selection of |A>
    """
    try:
        grid = get_grid(ctx, n_points, p_min, p_max)
        initial = wp.gaussian_init(wp.GaussianParams(), grid)
        outcome = bec.run_protocol(t_coeff, delta_a, delta_b, initial)
        out_c, _ = mzi.run_mzi(initial, t_coeff, delta_b - delta_a, mzi.PhaseSetting())
    except ValueError as e:
        fail(ctx, f'Protocol failed: {e}', exit_runtime_error)

    report = Report(f'Condensate protocol t = {t_coeff:g}, delta_a = {delta_a:g}, delta_b = {delta_b:g}')
    report.add_outcome(outcome)
    if outcome.dark or out_c.dark:
        report.add_line('equivalence with port C not checked: dark selection')
    else:
        diff = float(np.max(np.abs(outcome.wavefunction.amplitudes - out_c.wavefunction.amplitudes)))
        flag = 'yes' if diff <= 1e-10 else 'no'
        report.add_line(f'matches interferometer port C at delta = {delta_b - delta_a:g}: {flag} (max diff {diff:.3g})')
    click.echo(report.get_text(), nl=False)


@cli.command()
@click.option('--t', 't_coeff', type=float, default=0.85, show_default=True)
@click.option('--delta', type=float, default=0.2, show_default=True)
@click.option('--alpha', type=float, default=0.0, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), required=True)
@grid_options
@click.pass_context
def components(ctx, t_coeff, delta, alpha, out, n_points, p_min, p_max):
    """
    The two terms of the port C wavefunction and their difference, as CSV
    """
    try:
        grid = get_grid(ctx, n_points, p_min, p_max)
        initial = wp.gaussian_init(wp.GaussianParams(), grid)
        curves = mzi.port_components(initial, t_coeff, delta, alpha)
        with open(out, 'w', newline='', encoding='utf-8') as fp:
            writer = csv.writer(fp, lineterminator='\n')
            writer.writerow(['p', 'direct', 'kicked_re', 'kicked_im', 'port_c_re', 'port_c_im', 'density_c'])
            for p, direct, kicked, port_c in zip(curves['p'], curves['direct'], curves['kicked'], curves['port_c']):
                writer.writerow([format_csv_value(v) for v in
                    (p, direct.real, kicked.real, kicked.imag, port_c.real, port_c.imag, abs(port_c)**2)])
    except (ValueError, OSError) as e:
        fail(ctx, f'Components failed: {e}', exit_runtime_error)
    click.echo(f'{grid.n_points} rows written to {out}')


@cli.command('config')
@grid_options
@click.pass_context
def config_cmd(ctx, n_points, p_min, p_max):
    """
    Show the effective grid configuration
    """
    config = GridConfig(ctx.obj.get('config_file'))
    try:
        text = config.get_config_options({'n_points': n_points, 'p_min': p_min, 'p_max': p_max})
    except ValueError as e:
        fail(ctx, f'Bad grid configuration: {e}', exit_runtime_error)
    click.echo(text)


if __name__ == '__main__':
    cli(obj={})
