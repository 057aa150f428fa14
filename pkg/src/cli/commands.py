"""Click commands of the ``puck`` command-line tool.

Commands that analyse a price file write a line-delimited JSON report to
``--out`` (stdout when omitted); ``simulate`` and ``make-demo`` write a price
file to ``--out`` and their report record to stdout. ``--plot-dir`` adds
columnar text files for plotting.
"""

import functools
import json
import logging
import os
from dataclasses import replace
from typing import Any, Callable, Dict, Optional, Sequence

import click
import numpy as np

from src.analysis.barrier import barrier_report
from src.analysis.empirical import empirical_potential, fitted_potential_curve, volatility
from src.analysis.regime import classify_regime
from src.analysis.scanner import boundaries_for, first_alarm, scan_windows
from src.analysis.scenarios import make_demo_scenario
from src.analysis.stability import spectral_radius, stability_boundaries
from src.cli.config import RunConfig, resolve_config
from src.core.dynamics import moving_center_series, simulate, smooth
from src.core.potential import potential_value
from src.core.types import NoiseModel, PotentialModel, SimulationConfig, TickSeries
from src.data.loader import FORMATS, IngestSpec, TickLoader, write_series
from src.data.plots import write_plot, write_surface
from src.data.reports import ReportWriter
from src.estimation.fitting import criterion_surface, select_families, select_model
from src.utils.config import Config
from src.utils.errors import PuckError
from src.utils.logger import get_run_logs, log_run, logger

NOISE_CHOICES = ["gaussian", "student-t", "student_t"]

# Flag names that map onto RunConfig fields.
CONFIG_FLAGS = {
    "window": "window",
    "step": "step",
    "criterion": "criterion",
    "noise": "noise_kind",
    "dof": "dof",
    "epsilon": "epsilon",
    "delta_threshold": "delta_threshold",
    "bins": "bins",
    "min_count": "min_count",
    "smooth": "smooth",
    "seed": "seed",
    "workers": "max_workers",
    "refine": "refine",
}


def _apply(options: Sequence[Callable]) -> Callable:
    def decorator(func: Callable) -> Callable:
        for option in reversed(options):
            func = option(func)
        return func
    return decorator


input_options = _apply([
    click.option("--input", "input_path", required=True,
                 type=click.Path(dir_okay=False), help="Price file (CSV)."),
    click.option("--format", "input_format", type=click.Choice(FORMATS),
                 default="csv_price_only", show_default=True, help="Column layout."),
    click.option("--delimiter", default=",", show_default=True, help="Column separator."),
    click.option("--skip-header", is_flag=True, help="Ignore the first line."),
    click.option("--smooth", type=int, default=None, help="Trailing smoothing span (1 = off)."),
])

config_options = _apply([
    click.option("--grid-spec", "--config", "config_path", type=click.Path(dir_okay=False),
                 default=None, help="YAML run configuration (grid and defaults)."),
    click.option("--criterion", type=click.Choice(["aic", "bic"]), default=None),
    click.option("--noise", type=click.Choice(NOISE_CHOICES), default=None,
                 help="Noise density of the likelihood."),
    click.option("--dof", type=float, default=None, help="Student-t degrees of freedom."),
    click.option("--refine", is_flag=True,
                 help="Refine the best grid point by coordinate descent."),
    click.option("--epsilon", type=float, default=None, help="Random-walk band half-width."),
    click.option("--delta-threshold", type=float, default=None,
                 help="Criterion margin of the cubic precursor alarm."),
    click.option("--seed", type=int, default=None),
    click.option("--out", type=click.Path(dir_okay=False), default=None,
                 help="Report file (stdout when omitted)."),
    click.option("--plot-dir", type=click.Path(file_okay=False), default=None,
                 help="Directory for plot-ready columnar files."),
])

model_options = _apply([
    click.option("--b-quad", type=float, default=0.0, show_default=True),
    click.option("--b-nl", type=float, default=0.0, show_default=True),
    click.option("--gamma", type=int, default=2, show_default=True),
    click.option("--m", type=int, default=2, show_default=True),
    click.option("--sigma", type=float, default=1.0, show_default=True),
    click.option("--noise", type=click.Choice(NOISE_CHOICES), default="gaussian",
                 show_default=True),
    click.option("--dof", type=float, default=4.0, show_default=True),
    click.option("--seed", type=int, default=0, show_default=True),
])


def logged(command: str) -> Callable:
    """Record the run in the history file and turn library errors into exit status 1."""
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(**kwargs):
            details = {key: value for key, value in kwargs.items() if value is not None}
            try:
                result = func(**kwargs)
            except PuckError as e:
                logger.error(f"{command} failed: {str(e)}")
                log_run(command, {**details, "status": "error", "error": str(e)})
                raise click.ClickException(str(e))
            log_run(command, {**details, "status": "ok"})
            return result
        return wrapper
    return decorator


def _run_config(params: Dict[str, Any]) -> RunConfig:
    overrides = {field: params.get(flag) for flag, field in CONFIG_FLAGS.items()}
    return resolve_config(params.get("config_path"), overrides)


def _load_series(params: Dict[str, Any], config: RunConfig) -> TickSeries:
    loader = TickLoader()
    series = loader.load(IngestSpec(
        path=params["input_path"],
        format=params["input_format"],
        delimiter=params["delimiter"],
        skip_header=params["skip_header"],
    ))
    if loader.skipped_rows:
        click.echo(f"Skipped {loader.skipped_rows} malformed row(s)", err=True)
    return smooth(series, config.smooth)


def _header(config: RunConfig, params: Dict[str, Any]) -> Dict[str, Any]:
    options = {key: value for key, value in params.items() if value is not None}
    return {**config.to_dict(), "options": options}


def _plot_path(plot_dir: str, name: str) -> str:
    return os.path.join(plot_dir, name)


def _model(params: Dict[str, Any]) -> PotentialModel:
    return PotentialModel(b_quad=params["b_quad"], gamma=params["gamma"], b_nl=params["b_nl"],
                          m=params["m"], sigma=params["sigma"])


def _noise(params: Dict[str, Any]) -> NoiseModel:
    return NoiseModel(kind=params["noise"], sigma=params["sigma"], dof=params["dof"])


@click.group()
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]),
              default=None, help="Override PUCK_LOG_LEVEL.")
def cli(log_level: Optional[str]) -> None:
    """Simulate the PUCK market model and estimate its potential from prices."""
    error = Config.validate()
    if error:
        raise click.ClickException(f"Configuration error: {error}")
    if log_level:
        logger.setLevel(getattr(logging, log_level))


@cli.command("simulate")
@model_options
@click.option("--n", "n_steps", type=int, required=True, help="Generated ticks after warm-up.")
@click.option("--start-price", type=float, default=100.0, show_default=True,
              help="Flat warm-up price (m ticks).")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Price file.")
@logged("simulate")
def simulate_command(**params) -> None:
    """Generate a price series from a potential model."""
    model = _model(params)
    config = SimulationConfig(
        model=model,
        noise=_noise(params),
        n_steps=params["n_steps"],
        initial_prices=[params["start_price"]] * model.m,
        rng_seed=params["seed"],
    )
    series = simulate(config)
    write_series(series, params["out"])
    click.echo(json.dumps({
        "record": "simulation",
        "model": model.to_dict(),
        "noise": config.noise.to_dict(),
        "n_steps": config.n_steps,
        "warmup": model.m,
        "seed": config.rng_seed,
        "out": params["out"],
    }, sort_keys=True))


@cli.command("fit")
@input_options
@config_options
@logged("fit")
def fit_command(**params) -> None:
    """Best model of each nested family; the criterion winner is marked selected."""
    config = _run_config(params)
    series = _load_series(params, config)
    results = select_families(series, config.grid, config.criterion, config.noise)
    with ReportWriter(params["out"], "fit", _header(config, params)) as report:
        for result in results.values():
            report.write_fit(result)
    if params["plot_dir"]:
        selected = next(result for result in results.values() if result.selected)
        _write_trace_plots(params["plot_dir"], series, selected.model.m)


@cli.command("scan")
@input_options
@config_options
@click.option("--window", type=int, default=None, help="Ticks per window.")
@click.option("--step", type=int, default=None, help="Offset between window starts.")
@click.option("--workers", type=int, default=None, help="Threads evaluating windows.")
@logged("scan")
def scan_command(**params) -> None:
    """Sliding-window model selection, regimes and precursor alarms."""
    config = _run_config(params)
    series = _load_series(params, config)
    records = scan_windows(
        series,
        window=config.window,
        step=config.step,
        grid=config.grid,
        criterion=config.criterion,
        epsilon=config.epsilon,
        delta_threshold=config.delta_threshold,
        noise=config.noise,
        max_workers=config.max_workers,
    )
    with ReportWriter(params["out"], "scan", _header(config, params)) as report:
        for record in records:
            report.write_window(record)
        alarm = first_alarm(records)
        report.write("summary", {
            "windows": len(records),
            "alarms": sum(record.alarm for record in records),
            "first_alarm_tick": None if alarm is None else alarm.end,
        })

    if params["plot_dir"]:
        fitted = [record for record in records if record.fit is not None]
        ends = [record.end for record in fitted]
        plot_dir = params["plot_dir"]
        write_plot(_plot_path(plot_dir, "scan_b_quad.dat"), ends,
                   [record.fit.model.b_quad for record in fitted])
        write_plot(_plot_path(plot_dir, "scan_b_nl.dat"), ends,
                   [record.fit.model.b_nl for record in fitted])
        write_plot(_plot_path(plot_dir, "scan_delta_criterion.dat"), ends,
                   [record.regime.delta_criterion for record in fitted])
        write_plot(_plot_path(plot_dir, "scan_volatility.dat"),
                   [record.end for record in records], [record.volatility for record in records])


def _write_trace_plots(plot_dir: str, series: TickSeries, m: int) -> None:
    ticks = np.arange(len(series))
    write_plot(_plot_path(plot_dir, "price.dat"), ticks, series.prices)
    write_plot(_plot_path(plot_dir, "moving_center.dat"), ticks[m - 1:],
               moving_center_series(series.prices, m))


@cli.command("potential")
@input_options
@config_options
@click.option("--m", type=int, default=None,
              help="Moving-average span; taken from the selected fit when omitted.")
@click.option("--bins", type=int, default=None, help="Equal-width displacement bins.")
@click.option("--min-count", type=int, default=None, help="Minimum ticks per bin.")
@click.option("--overlay", is_flag=True, help="Also fit the model and emit its potential.")
@logged("potential")
def potential_command(**params) -> None:
    """Empirical potential from binned increments, optionally with the fitted curve."""
    config = _run_config(params)
    series = _load_series(params, config)
    fit = None
    if params["m"] is None or params["overlay"]:
        grid = config.grid if params["m"] is None else replace(config.grid, m_set=(params["m"],))
        fit = select_model(series, grid, config.criterion, config.noise)
    m = params["m"] if params["m"] is not None else fit.model.m
    empirical = empirical_potential(series, m, config.bins, config.min_count)

    with ReportWriter(params["out"], "potential", _header(config, params)) as report:
        report.write("potential", empirical.to_dict())
        if fit is not None:
            report.write_fit(fit)

    if params["plot_dir"]:
        plot_dir = params["plot_dir"]
        write_plot(_plot_path(plot_dir, "potential_empirical.dat"),
                   empirical.bin_centers, empirical.u_values)
        write_plot(_plot_path(plot_dir, "potential_force.dat"),
                   empirical.bin_centers, empirical.mean_increment)
        if fit is not None:
            write_plot(_plot_path(plot_dir, "potential_fitted.dat"), empirical.bin_centers,
                       fitted_potential_curve(fit.model, empirical.bin_centers))
        _write_trace_plots(plot_dir, series, m)


@cli.command("classify")
@input_options
@config_options
@logged("classify")
def classify_command(**params) -> None:
    """Select a model for the whole series and label its market state."""
    config = _run_config(params)
    series = _load_series(params, config)
    fit = select_model(series, config.grid, config.criterion, config.noise)
    label = classify_regime(fit, boundaries_for(fit.model.m), config.epsilon,
                            config.delta_threshold)
    with ReportWriter(params["out"], "classify", _header(config, params)) as report:
        report.write_fit(fit)
        report.write("regime", {**label.to_dict(), "volatility": volatility(series)})


@cli.command("stability")
@click.option("--m", type=int, required=True, help="Moving-average span (>= 2).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--plot-dir", type=click.Path(file_okay=False), default=None)
@logged("stability")
def stability_command(**params) -> None:
    """Quadratic coefficients bounding the non-divergent region for span m."""
    m = params["m"]
    b_low, b_high = stability_boundaries(m)
    with ReportWriter(params["out"], "stability", {"m": m}) as report:
        report.write("stability", {"m": m, "b_low": b_low, "b_high": b_high})
    if params["plot_dir"]:
        b = np.linspace(b_low - 1.0, b_high + 1.0, 401)
        write_plot(_plot_path(params["plot_dir"], f"spectral_radius_m{m}.dat"), b,
                   spectral_radius(b, m))


@cli.command("barrier")
@model_options
@click.option("--horizon", type=int, default=1000, show_default=True,
              help="Steps per walker.")
@click.option("--trials", type=int, default=1000, show_default=True,
              help="Number of walkers.")
@click.option("--escape-buffer", type=float, default=0.0, show_default=True,
              help="Distance beyond the barrier counted as escape.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--plot-dir", type=click.Path(file_okay=False), default=None)
@logged("barrier")
def barrier_command(**params) -> None:
    """Barrier geometry and Monte Carlo escape fraction of a cubic well."""
    model = _model(params)
    noise = _noise(params)
    report_data = barrier_report(model, noise, params["horizon"], params["trials"],
                                 rng_seed=params["seed"], escape_buffer=params["escape_buffer"])
    header = {"model": model.to_dict(), "noise": noise.to_dict(), "seed": params["seed"]}
    with ReportWriter(params["out"], "barrier", header) as report:
        report.write("barrier", report_data.to_dict())
    if params["plot_dir"]:
        reach = 1.5 * abs(report_data.barrier_position)
        p = np.linspace(-reach, reach, 301)
        write_plot(_plot_path(params["plot_dir"], "barrier_potential.dat"), p,
                   potential_value(p, model))


@cli.command("contour")
@input_options
@config_options
@click.option("--gamma", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=None, help="Span of the (b_quad, b_nl) plane.")
@logged("contour")
def contour_command(**params) -> None:
    """Criterion surfaces around the optimum, as three-column plot files.

    The files go to ``--plot-dir``, or beside the ``--out`` report when no
    plot directory is given.
    """
    plot_dir = params["plot_dir"]
    if plot_dir is None:
        if params["out"] is None:
            raise click.UsageError("contour writes plot files; pass --plot-dir or --out")
        plot_dir = os.path.dirname(os.path.abspath(params["out"]))
    config = _run_config(params)
    series = _load_series(params, config)
    surface = criterion_surface(series, config.grid, params["gamma"], params["m"],
                                config.criterion)
    with ReportWriter(params["out"], "contour", _header(config, params)) as report:
        report.write_fit(surface.best)
    write_surface(_plot_path(plot_dir, f"contour_bq_bnl_gamma{surface.gamma}.dat"),
                  surface.b_quad_values, surface.b_nl_values, surface.plane_bq_bnl)
    write_surface(_plot_path(plot_dir, f"contour_m_bnl_gamma{surface.gamma}.dat"),
                  surface.m_values, surface.b_nl_values, surface.plane_m_bnl)


@cli.command("make-demo")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--m", type=int, default=4, show_default=True)
@click.option("--sigma", type=float, default=0.5, show_default=True)
@click.option("--quadratic-length", type=int, default=4000, show_default=True)
@click.option("--cubic-length", type=int, default=4000, show_default=True)
@click.option("--crash-length", type=int, default=500, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Price file.")
@logged("make-demo")
def make_demo_command(**params) -> None:
    """Write the synthetic quadratic, cubic and crash price series."""
    scenario = make_demo_scenario(
        seed=params["seed"],
        m=params["m"],
        sigma=params["sigma"],
        quadratic_length=params["quadratic_length"],
        cubic_length=params["cubic_length"],
        crash_length=params["crash_length"],
    )
    write_series(scenario.series, params["out"])
    click.echo(json.dumps({
        "record": "demo",
        "segments": {name: list(bounds) for name, bounds in scenario.segments.items()},
        "seed": params["seed"],
        "out": params["out"],
    }, sort_keys=True))


@cli.command("history")
@click.option("--limit", type=int, default=20, show_default=True)
def history_command(limit: int) -> None:
    """Show recent runs recorded in PUCK_RUN_LOG."""
    for record in get_run_logs(limit):
        click.echo(json.dumps(record, sort_keys=True, default=str))


def run_command(argv: Sequence[str]) -> int:
    """Run one subcommand and return its exit status (0 ok, 1 error, 2 usage)."""
    try:
        cli.main(args=list(argv), prog_name="puck", standalone_mode=True)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0
