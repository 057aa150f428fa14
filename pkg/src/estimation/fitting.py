"""Grid-search maximum likelihood and nested-family model selection.

For a fixed (M, gamma) the residual sum of squares is a quadratic form in
(b_quad, b_nl):

    S = Sdd + 2 b_quad Sdp + 2 b_nl Sdq + b_quad^2 Spp + b_nl^2 Sqq + 2 b_quad b_nl Spq

with d the price increments, p the displacements and q = p^gamma, so the
Gaussian profile likelihood of a whole (b_quad, b_nl) plane is evaluated from
six sums. Every candidate model shares the warm-up of max(m_set) - 1 ticks, so
all likelihoods in a run are computed over the same residual ticks.
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.dynamics import displacements, residuals
from src.core.types import NoiseModel, PotentialModel, TickSeries
from src.estimation import get_noise_density
from src.estimation.base import NoiseDensity
from src.estimation.gaussian import GaussianDensity
from src.estimation.grid import (
    CRITERIA,
    FAMILIES,
    FAMILY_K,
    FAMILY_NONE,
    FAMILY_NONLINEAR,
    FAMILY_QUADRATIC,
    FitResult,
    GridSpec,
)
from src.utils.errors import ArgumentError, DegenerateFitError, InsufficientDataError
from src.utils.logger import logger

REFINE_TOLERANCE = 1e-9
MAX_SWEEPS = 10_000


@dataclass
class _Design:
    """Residual-window data shared by every candidate of one run."""

    series: TickSeries
    increments: np.ndarray
    p_by_m: Dict[int, np.ndarray]
    max_m: int
    offset: int

    @property
    def n_obs(self) -> int:
        return int(self.increments.size)

    @property
    def start(self) -> int:
        return self.max_m - 1

    def window(self, m: int) -> Tuple[int, int]:
        lead = self.max_m - m
        return self.offset + lead, len(self.series) - lead


@dataclass
class _Stats:
    sdd: float
    sdp: float
    sdq: float
    spp: float
    sqq: float
    spq: float

    def sum_squares(self, b_quad, b_nl):
        """Residual sum of squares, broadcasting over coefficient arrays."""
        return (self.sdd + 2.0 * b_quad * self.sdp + 2.0 * b_nl * self.sdq
                + b_quad ** 2 * self.spp + b_nl ** 2 * self.sqq
                + 2.0 * b_quad * b_nl * self.spq)


@dataclass
class _Points:
    """Flat arrays describing evaluated grid points of one family."""

    m: np.ndarray
    gamma: np.ndarray
    b_quad: np.ndarray
    b_nl: np.ndarray
    log_likelihood: np.ndarray
    sigma: np.ndarray

    def take(self, index) -> "_Points":
        return _Points(*(getattr(self, name)[index] for name in
                         ("m", "gamma", "b_quad", "b_nl", "log_likelihood", "sigma")))

    @staticmethod
    def concat(parts: Sequence["_Points"]) -> "_Points":
        return _Points(*(np.concatenate([getattr(part, name) for part in parts]) for name in
                         ("m", "gamma", "b_quad", "b_nl", "log_likelihood", "sigma")))

    def __len__(self) -> int:
        return int(self.m.size)


def _prepare(series: TickSeries, grid: GridSpec, offset: int = 0) -> _Design:
    max_m = grid.max_m
    if len(series) <= max_m + 2:
        raise InsufficientDataError(
            f"series of length {len(series)} is too short for max(m_set)={max_m}; "
            f"need more than {max_m + 2} ticks"
        )
    prices = series.prices
    start = max_m - 1
    increments = np.diff(prices)[start:]
    if not np.any(increments):
        raise DegenerateFitError(
            f"window {series.label or '(unnamed)'} has constant prices; likelihood is unbounded"
        )
    p_by_m = {m: displacements(prices, m)[start - (m - 1):-1] for m in grid.m_set}
    return _Design(series=series, increments=increments, p_by_m=p_by_m,
                   max_m=max_m, offset=offset)


def _stats(design: _Design, m: int, gamma: int) -> _Stats:
    d = design.increments
    p = design.p_by_m[m]
    q = p ** gamma
    return _Stats(
        sdd=float(d @ d), sdp=float(d @ p), sdq=float(d @ q),
        spp=float(p @ p), sqq=float(q @ q), spq=float(p @ q),
    )


def _gaussian_points(design: _Design, m: int, gamma: int,
                     b_quad: np.ndarray, b_nl: np.ndarray) -> _Points:
    stats = _stats(design, m, gamma)
    bq, bn = np.meshgrid(b_quad, b_nl, indexing="ij")
    bq, bn = bq.ravel(), bn.ravel()
    floor = np.finfo(float).tiny
    sum_squares = np.maximum(stats.sum_squares(bq, bn), floor)
    n = design.n_obs
    return _Points(
        m=np.full(bq.size, m),
        gamma=np.full(bq.size, gamma),
        b_quad=bq,
        b_nl=bn,
        log_likelihood=GaussianDensity.profiled_log_likelihood(sum_squares, n),
        sigma=np.sqrt(sum_squares / n),
    )


def _family_blocks(design: _Design, grid: GridSpec, family: str) -> List[_Points]:
    zero = np.zeros(1)
    if family == FAMILY_NONE:
        return [_gaussian_points(design, grid.m_set[0], grid.gamma_set[0], zero, zero)]
    if family == FAMILY_QUADRATIC:
        return [_gaussian_points(design, m, grid.gamma_set[0], grid.b_quad_values, zero)
                for m in grid.m_set]
    if family == FAMILY_NONLINEAR:
        return [_gaussian_points(design, m, gamma, grid.b_quad_values, grid.b_nl_values)
                for m in grid.m_set for gamma in grid.gamma_set]
    raise ArgumentError(f"Unknown potential family: {family}")


def _point_model(points: _Points, i: int) -> PotentialModel:
    return PotentialModel(
        b_quad=float(points.b_quad[i]),
        gamma=int(points.gamma[i]),
        b_nl=float(points.b_nl[i]),
        m=int(points.m[i]),
        sigma=float(points.sigma[i]),
    )


def _exact_score(design: _Design, density: NoiseDensity,
                 model: PotentialModel) -> Tuple[float, float]:
    values = residuals(design.series, model, warmup=design.start)
    sigma = density.fit_sigma(values)
    return density.log_likelihood(values, sigma), sigma


def _rescore(design: _Design, density: NoiseDensity, block: _Points, top: int) -> _Points:
    """Exact non-Gaussian likelihood for the best Gaussian-screened points."""
    order = _order(block)[:top]
    chosen = block.take(order)
    for i in range(len(chosen)):
        ll, sigma = _exact_score(design, density, _point_model(chosen, i))
        chosen.log_likelihood[i] = ll
        chosen.sigma[i] = sigma
    return chosen


def _evaluate_family(design: _Design, grid: GridSpec, family: str,
                     density: NoiseDensity) -> _Points:
    blocks = _family_blocks(design, grid, family)
    if not isinstance(density, GaussianDensity):
        blocks = [_rescore(design, density, block, grid.screen_top) for block in blocks]
    return _Points.concat(blocks)


def _order(points: _Points) -> np.ndarray:
    """Best first: higher likelihood, then smaller M, |b_nl|, |b_quad|, gamma."""
    return np.lexsort((
        points.b_nl,
        points.b_quad,
        points.gamma,
        np.abs(points.b_quad),
        np.abs(points.b_nl),
        points.m,
        -points.log_likelihood,
    ))


def _coordinate_descent(objective: Callable[[float, float], float], x0: Sequence[float],
                        steps: Sequence[float]) -> Tuple[List[float], float]:
    """Greedy axis moves of fixed size until a sweep gains less than the tolerance."""
    x = list(x0)
    best = objective(*x)
    for _ in range(MAX_SWEEPS):
        sweep_start = best
        for axis, step in enumerate(steps):
            if step == 0.0:
                continue
            for direction in (1.0, -1.0):
                for _ in range(MAX_SWEEPS):
                    trial = list(x)
                    trial[axis] = x[axis] + direction * step
                    value = objective(*trial)
                    if value > best:
                        x, best = trial, value
                    else:
                        break
        if best - sweep_start < REFINE_TOLERANCE:
            break
    return x, best


def _refine(design: _Design, grid: GridSpec, family: str, density: NoiseDensity,
            points: _Points, i: int) -> _Points:
    if family == FAMILY_NONE:
        return points.take([i])
    m, gamma = int(points.m[i]), int(points.gamma[i])
    n = design.n_obs
    bq_step = grid.b_quad_range[2] / 10.0
    bnl_step = grid.b_nl_range[2] / 10.0 if family == FAMILY_NONLINEAR else 0.0

    if isinstance(density, GaussianDensity):
        stats = _stats(design, m, gamma)
        floor = np.finfo(float).tiny

        def objective(b_quad: float, b_nl: float) -> float:
            s = max(stats.sum_squares(b_quad, b_nl), floor)
            return float(GaussianDensity.profiled_log_likelihood(s, n))
    else:
        def objective(b_quad: float, b_nl: float) -> float:
            model = PotentialModel(b_quad=b_quad, gamma=gamma, b_nl=b_nl, m=m)
            return _exact_score(design, density, model)[0]

    (b_quad, b_nl), ll = _coordinate_descent(
        objective, (float(points.b_quad[i]), float(points.b_nl[i])), (bq_step, bnl_step)
    )
    if isinstance(density, GaussianDensity):
        sigma = float(np.sqrt(max(stats.sum_squares(b_quad, b_nl), floor) / n))
    else:
        model = PotentialModel(b_quad=b_quad, gamma=gamma, b_nl=b_nl, m=m)
        ll, sigma = _exact_score(design, density, model)
    logger.debug(f"Refined {family} fit at m={m}, gamma={gamma}: b_quad={b_quad}, b_nl={b_nl}")
    return _Points(np.array([m]), np.array([gamma]), np.array([b_quad]),
                   np.array([b_nl]), np.array([ll]), np.array([sigma]))


def _build(design: _Design, points: _Points, i: int, family: str,
           density: NoiseDensity, **extra) -> FitResult:
    model = _point_model(points, i)
    return FitResult.build(
        model=model,
        log_likelihood=float(points.log_likelihood[i]),
        k_params=FAMILY_K[family],
        n_obs=design.n_obs,
        window=design.window(model.m),
        family=family,
        noise_kind=density.kind,
        **extra,
    )


def _density_for(noise: Optional[NoiseModel]) -> NoiseDensity:
    return get_noise_density(noise) if noise is not None else GaussianDensity()


def fit_grid(series: TickSeries, grid: GridSpec, family: str = FAMILY_NONLINEAR,
             noise: Optional[NoiseModel] = None, offset: int = 0,
             limit: Optional[int] = None) -> List[FitResult]:
    """Evaluate the profiled likelihood at every grid point of one family.

    Args:
        series: Price trace (one window).
        grid: Parameter grid.
        family: ``none``, ``quadratic`` or ``nonlinear``; sets k for every point.
        noise: Noise kind (Gaussian when omitted); its sigma is ignored and
            profiled per point.
        offset: Index of ``series[0]`` in the enclosing trace, for window metadata.
        limit: Return only the best ``limit`` results.

    Returns:
        List[FitResult]: Results in ascending AIC order with deterministic
        tie-breaking; the refined optimum leads the list when ``grid.refine``.
    """
    if family not in FAMILIES:
        raise ArgumentError(f"Unknown potential family: {family}")
    if grid.size == 0:
        raise ArgumentError("grid has no points")
    design = _prepare(series, grid, offset)
    density = _density_for(noise)
    logger.info(
        f"Fitting {family} family over {grid.size} grid points, {design.n_obs} residuals"
    )

    points = _evaluate_family(design, grid, family, density)
    order = _order(points)
    points = points.take(order)
    if grid.refine:
        refined = _refine(design, grid, family, density, points, 0)
        if refined.log_likelihood[0] > points.log_likelihood[0]:
            points = _Points.concat([refined, points])

    count = len(points) if limit is None else min(limit, len(points))
    return [_build(design, points, i, family, density) for i in range(count)]


def select_families(series: TickSeries, grid: GridSpec, criterion: str = "aic",
                    noise: Optional[NoiseModel] = None,
                    offset: int = 0) -> Dict[str, FitResult]:
    """Best model of each nested family, with the criterion winner marked.

    Args:
        series: Price trace (one window).
        grid: Parameter grid.
        criterion: ``aic`` or ``bic``.
        noise: Noise kind (Gaussian when omitted).
        offset: Index of ``series[0]`` in the enclosing trace.

    Returns:
        Dict[str, FitResult]: One result per family; exactly one has ``selected``.
    """
    if criterion not in CRITERIA:
        raise ArgumentError(f"Unknown criterion: {criterion}")
    design = _prepare(series, grid, offset)
    density = _density_for(noise)

    bests: Dict[str, _Points] = {}
    for family in FAMILIES:
        points = _evaluate_family(design, grid, family, density)
        best = int(_order(points)[0])
        bests[family] = (_refine(design, grid, family, density, points, best)
                         if grid.refine else points.take([best]))

    # Each family contains the previous one; keep the maximized likelihood nested.
    if bests[FAMILY_QUADRATIC].log_likelihood[0] < bests[FAMILY_NONE].log_likelihood[0]:
        bests[FAMILY_QUADRATIC] = bests[FAMILY_NONE]
    if bests[FAMILY_NONLINEAR].log_likelihood[0] < bests[FAMILY_QUADRATIC].log_likelihood[0]:
        bests[FAMILY_NONLINEAR] = bests[FAMILY_QUADRATIC]

    results = {family: _build(design, bests[family], 0, family, density, criterion=criterion)
               for family in FAMILIES}
    scores = {family: results[family].score(criterion) for family in FAMILIES}
    winner = min(FAMILIES, key=lambda family: (scores[family], FAMILY_K[family]))
    logger.info(
        f"Selected {winner} family by {criterion.upper()} "
        f"({', '.join(f'{f}={s:.3f}' for f, s in scores.items())})"
    )
    return {
        family: replace(result, selected=(family == winner), family_scores=scores)
        for family, result in results.items()
    }


def select_model(series: TickSeries, grid: GridSpec, criterion: str = "aic",
                 noise: Optional[NoiseModel] = None, offset: int = 0) -> FitResult:
    """Choose among no-potential, quadratic and quadratic-plus-nonlinear models.

    Args:
        series: Price trace (one window).
        grid: Parameter grid.
        criterion: ``aic`` or ``bic``.
        noise: Noise kind (Gaussian when omitted).
        offset: Index of ``series[0]`` in the enclosing trace.

    Returns:
        FitResult: The winning family's best model, ``selected=True``, with the
        best criterion value of every family in ``family_scores``.
    """
    results = select_families(series, grid, criterion, noise, offset)
    return next(result for result in results.values() if result.selected)


@dataclass(frozen=True)
class CriterionSurface:
    """Criterion landscape around the nonlinear-family optimum for one gamma.

    ``plane_bq_bnl[i, j]`` is the criterion at (b_quad_values[i], b_nl_values[j])
    for the optimal M; ``plane_m_bnl[i, j]`` is the criterion at
    (m_values[i], b_nl_values[j]) for the optimal b_quad.
    """

    gamma: int
    criterion: str
    best: FitResult
    b_quad_values: np.ndarray
    b_nl_values: np.ndarray
    m_values: np.ndarray
    plane_bq_bnl: np.ndarray
    plane_m_bnl: np.ndarray


def criterion_surface(series: TickSeries, grid: GridSpec, gamma: int,
                      m: Optional[int] = None, criterion: str = "aic") -> CriterionSurface:
    """Criterion over the (b_quad, b_nl) and (M, b_nl) planes (Gaussian noise).

    Args:
        series: Price trace.
        grid: Parameter grid; ``gamma`` need not belong to ``grid.gamma_set``.
        gamma: Nonlinear exponent of the surface.
        m: Moving-average span of the (b_quad, b_nl) plane; the best span when omitted.
        criterion: ``aic`` or ``bic``.

    Returns:
        CriterionSurface: Both planes and the optimum they surround.
    """
    if criterion not in CRITERIA:
        raise ArgumentError(f"Unknown criterion: {criterion}")
    grid = replace(grid, gamma_set=(gamma,), refine=False)
    design = _prepare(series, grid)
    density = GaussianDensity()
    points = _evaluate_family(design, grid, FAMILY_NONLINEAR, density)
    if m is not None:
        if m not in grid.m_set:
            raise ArgumentError(f"m={m} is not in the grid's m_set {grid.m_set}")
        points = points.take(np.flatnonzero(points.m == m))
    best_points = points.take(_order(points)[:1])
    best = _build(design, best_points, 0, FAMILY_NONLINEAR, density, criterion=criterion)

    def to_criterion(ll: np.ndarray) -> np.ndarray:
        k, n = FAMILY_K[FAMILY_NONLINEAR], design.n_obs
        penalty = 2.0 * k if criterion == "aic" else k * np.log(n)
        return -2.0 * ll + penalty

    bq_values, bnl_values = grid.b_quad_values, grid.b_nl_values
    plane_bq = _gaussian_points(design, best.model.m, gamma, bq_values, bnl_values)
    plane_bq_bnl = to_criterion(plane_bq.log_likelihood).reshape(bq_values.size, bnl_values.size)

    rows = [_gaussian_points(design, span, gamma, np.array([best.model.b_quad]), bnl_values)
            for span in grid.m_set]
    plane_m_bnl = np.vstack([to_criterion(row.log_likelihood) for row in rows])

    return CriterionSurface(
        gamma=gamma,
        criterion=criterion,
        best=best,
        b_quad_values=bq_values,
        b_nl_values=bnl_values,
        m_values=np.array(grid.m_set),
        plane_bq_bnl=plane_bq_bnl,
        plane_m_bnl=plane_m_bnl,
    )
