# -*- coding: utf-8 -*-
# Copyright 2026 The gramfiber developers

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Monte Carlo estimates of the fiber body of the Gram spectrahedra: the
integral over sums of squares f of the Gram spectrahedra of f.

Forms are sampled uniformly on the unit sphere of coefficient vectors and
kept if they are sums of squares. Fibers scale linearly, so integrating over
the radius contributes the factor 1/(M + 1) analytically.
"""

from dataclasses import dataclass
import csv
import enum
import functools
import logging
import math
import multiprocessing

import numpy as np

from .gram import face, face_subspace, image_basis
from .linalg import OPTIMIZER_RANK_TOLERANCE
from .polyalg import Form, evaluate, prod_space_dims
from .sdp import (DEFAULT_SETTINGS, SdpStatus, SliceProblem, SolverError,
                  feasible, solve)

LOGGER = logging.getLogger(__name__)

MIN_ACCEPTANCE = 1e-4
MAX_TRIALS = 10**6
MAX_FAILURE_FRACTION = 0.05
DIFFERENT_FACE = 1e-5
NOT_IN_CONE_FRACTION = 0.1


class SamplingError(RuntimeError):
    """Raised when sampling or the per-sample solves break down."""


@enum.unique
class ConeMembership(enum.Enum):
    """Sampled evidence on normal cone membership"""
    IN_CONE = 'InCone'
    NOT_IN_CONE = 'NotInCone'
    UNDETERMINED = 'Undetermined'


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    Sums of squares on the unit sphere of coefficient vectors.

    Attributes
    ----------
    ctx : gram.GramContext
    forms : tuple[polyalg.Form]
    seed : int
    weights : numpy.ndarray
        Per-sample factor measure/((M + 1)·count) turning a sample mean into
        the integral over all sums of squares of norm at most 1.
    trials : int
        Total number of candidates drawn.
    """
    ctx: object
    forms: tuple
    seed: int
    weights: np.ndarray
    trials: int

    def __len__(self):
        return len(self.forms)

    @property
    def acceptance_rate(self):
        return len(self.forms) / self.trials

    @property
    def measure(self):
        """Estimated area of the sums of squares on the unit sphere."""
        return self.acceptance_rate * sphere_area(self.ctx.M)

    def prefix(self, count):
        """The first `count` samples, with weights for a set of that size."""
        count = min(count, len(self.forms))
        weights = np.full(count, self.weights[0] * len(self.forms) / count)
        return SampleSet(self.ctx, self.forms[:count], self.seed, weights,
                         max(count, round(count / self.acceptance_rate)))


@dataclass
class CloudRecord:
    """
    An estimated boundary point of the fiber body.

    Attributes
    ----------
    direction : numpy.ndarray
        Coordinates of the direction in W.
    point : numpy.ndarray
        Coordinates of the weighted sum of optimizers.
    count : int
    stderr : float
        Standard error of the support value in this direction.
    """
    direction: np.ndarray
    point: np.ndarray
    count: int
    stderr: float


def sphere_area(dim):
    """The area of the unit sphere in R^dim."""
    return 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def _probe_points(n):  # pylint: disable=invalid-name
    """Fixed points on which a candidate must be nonnegative."""
    if n == 2:
        angles = np.linspace(0, np.pi, 64, endpoint=False)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if n == 3:
        return fibonacci_directions(200)
    return np.eye(n)


def _parallel_map(func, items, workers):
    """map(), on a process pool if workers > 1. The order of results is kept."""
    if workers is None or workers <= 1:
        return list(map(func, items))
    with multiprocessing.Pool(workers) as pool:
        return pool.map(func, items)


def _draw_one(seed_seq, ctx, max_trials, settings):
    """Draws until one sum of squares is found. Returns (form, trials)."""
    rng = np.random.default_rng(seed_seq)
    probes = _probe_points(ctx.n)
    for trial in range(1, max_trials + 1):
        coeffs = rng.standard_normal(ctx.M)
        coeffs /= np.linalg.norm(coeffs)
        form = Form(ctx.target, coeffs)
        if np.any(evaluate(form, probes) < 0):
            continue
        try:
            accepted = feasible(ctx.v_rep(form), ctx.kernel_array, settings)
        except SolverError as error:
            LOGGER.debug('Rejecting an undecided candidate: %s', error)
            continue
        if accepted:
            return form, trial
    return None, max_trials


def sample_forms(ctx, count, seed, workers=1, settings=DEFAULT_SETTINGS):
    """
    Samples `count` sums of squares uniformly from the unit sphere of
    coefficient vectors by rejection.

    Every sample gets its own random stream spawned from `seed`, so the
    result does not depend on `workers`.

    Parameters
    ----------
    ctx : gram.GramContext
    count : int
    seed : int
    workers : int
        Number of processes.
    settings : sdp.SolverSettings

    Returns
    -------
    SampleSet

    Raises
    ------
    SamplingError
        If the acceptance rate is below 1e-4.
    """
    if count < 1:
        raise ValueError('Need at least one sample, not {}'.format(count))
    max_trials = max(int(1 / MIN_ACCEPTANCE), MAX_TRIALS // count)
    streams = np.random.SeedSequence(seed).spawn(count)
    draw = functools.partial(_draw_one, ctx=ctx, max_trials=max_trials, settings=settings)
    results = _parallel_map(draw, streams, workers)
    trials = sum(result[1] for result in results)
    if any(form is None for form, _ in results):
        raise SamplingError('Acceptance rate fell below {} after {} trials'
                            .format(MIN_ACCEPTANCE, trials))
    forms = tuple(form for form, _ in results)
    rate = count / trials
    measure = rate * sphere_area(ctx.M)
    weights = np.full(count, measure / ((ctx.M + 1) * count))
    LOGGER.info('Sampled %d sums of squares for %s in %d trials (acceptance rate %.4g)',
                count, ctx, trials, rate)
    return SampleSet(ctx, forms, seed, weights, trials)


def _solve_one(form, ctx, objective, settings):
    """Optimizer and value of one fiber, or None on solver failure."""
    problem = SliceProblem(ctx.v_rep(form), ctx.kernel_array, objective, settings)
    try:
        solution = solve(problem)
    except SolverError as error:
        LOGGER.debug('Solver failure on %s: %s', form, error)
        return None
    if solution.status != SdpStatus.OPTIMAL:
        return None
    return solution.X, solution.objective_value


def _unit_objective(direction, ctx):
    """The norm of the W-component of `direction`, and the objective of its unit vector."""
    w_direction = ctx.w_part(np.asarray(direction, dtype=float))
    norm = np.linalg.norm(w_direction)
    if norm == 0:
        raise ValueError('The direction has no component in W')
    return norm, ctx.trace_objective(w_direction / norm)


def _solve_all(direction, samples, workers, settings):
    """
    Per-sample optimizers of the W-component of `direction`, normalized to
    unit norm. Returns the norm, and the list of results with None for
    failures.
    """
    ctx = samples.ctx
    norm, objective = _unit_objective(direction, ctx)
    solve_one = functools.partial(_solve_one, ctx=ctx, objective=objective, settings=settings)
    results = _parallel_map(solve_one, samples.forms, workers)
    failures = sum(result is None for result in results)
    if failures:
        LOGGER.warning('%d of %d fiber problems failed and are skipped',
                       failures, len(results))
    if failures > MAX_FAILURE_FRACTION * len(results):
        raise SamplingError('{} of {} fiber problems failed'.format(failures, len(results)))
    return norm, results


def _weighted_mean(values, samples, keep):
    """Σ w_i v_i over the kept samples, rescaled to the full weight."""
    weights = samples.weights[keep]
    total = np.sum(samples.weights)
    stacked = np.array(values)
    return total / np.sum(weights) * np.tensordot(weights, stacked, axes=1)


def _stderr(values, samples):
    """
    Standard error of total·mean(values). Counts the spread of the values
    and the uncertainty of the acceptance rate, which scales the total.
    """
    values = np.asarray(values, dtype=float)
    if not len(values):
        return 0.0
    spread = np.var(values, ddof=1) / len(values) if len(values) > 1 else 0.0
    # The number of trials until `count` acceptances is negative binomial.
    rate = samples.acceptance_rate
    acceptance = np.mean(values) ** 2 * (1 - rate) / len(samples)
    return float(np.sum(samples.weights) * np.sqrt(spread + acceptance))


def support_estimate(direction, samples, workers=1, settings=DEFAULT_SETTINGS):
    """
    Estimates the support function h(w) = ∫ min{⟨w, X⟩ : X ∈ Gram(f)} df of
    the fiber body.

    Parameters
    ----------
    direction : numpy.ndarray
        An N×N matrix; only its W-component matters.
    samples : SampleSet
    workers : int
    settings : sdp.SolverSettings

    Returns
    -------
    tuple[float, float]
        The estimate and its standard error.
    """
    norm, results = _solve_all(direction, samples, workers, settings)
    keep = [idx for idx, result in enumerate(results) if result is not None]
    values = [results[idx][1] for idx in keep]
    estimate = float(_weighted_mean(values, samples, keep))
    return norm * estimate, norm * _stderr(values, samples)


def boundary_point(direction, samples, workers=1, settings=DEFAULT_SETTINGS):
    """
    The weighted sum of the per-sample optimizers in direction w: the point
    of the fiber body exposed by w when almost all faces are points.

    Returns
    -------
    CloudRecord
    """
    ctx = samples.ctx
    norm, results = _solve_all(direction, samples, workers, settings)
    keep = [idx for idx, result in enumerate(results) if result is not None]
    optimizers = [results[idx][0] for idx in keep]
    values = [results[idx][1] for idx in keep]
    for optimizer in optimizers:
        u_basis = image_basis(optimizer, ctx)
        if not u_basis:
            continue
        dim_u2, _, _ = prod_space_dims(u_basis, tol=OPTIMIZER_RANK_TOLERANCE)
        if len(u_basis) * (len(u_basis) + 1) // 2 > dim_u2:
            LOGGER.warning('An optimizer lies on a face of positive dimension; the '
                           'exposed face of the fiber body is not a point')
            break
    coordinates = [ctx.coordinates(optimizer) for optimizer in optimizers]
    point = _weighted_mean(coordinates, samples, keep)
    return CloudRecord(ctx.coordinates(np.asarray(direction, dtype=float)), point,
                       len(keep), norm * _stderr(values, samples))


def face_dim_estimate(direction, samples, tol=OPTIMIZER_RANK_TOLERANCE,
                      settings=DEFAULT_SETTINGS):
    """
    The dimension of the face of the fiber body in direction w, as the
    dimension of the span of the face directions of all sampled fibers.

    Returns
    -------
    tuple[int, list[numpy.ndarray]]
        The dimension and an orthonormal (Frobenius) basis of the span.
    """
    ctx = samples.ctx
    rows = []
    for form in samples.forms:
        try:
            report = face(form, direction, ctx, settings=settings, tol=tol)
        except SolverError as error:
            LOGGER.warning('Skipping a fiber: %s', error)
            continue
        for matrix in face_subspace(report.u_basis, ctx, tol=tol):
            rows.append((matrix / np.linalg.norm(matrix)).ravel())
    if not rows:
        return 0, []
    _, singular, vt = np.linalg.svd(np.array(rows))  # pylint: disable=invalid-name
    dim = int(np.sum(singular > tol * singular[0]))
    return dim, [vt[idx].reshape(ctx.N, ctx.N) for idx in range(dim)]


def _face_excess(optimizer, objective, value):
    """
    How far `optimizer` is from attaining the minimum `value` of `objective`
    on its fiber, divided by the norm of `objective`: a lower bound on its
    distance to the exposed face.
    """
    excess = float(np.trace(objective @ optimizer)) - value
    return max(0.0, excess) / np.linalg.norm(objective)


def nc_probe(direction, other, samples, workers=1, tol=DIFFERENT_FACE,
             settings=DEFAULT_SETTINGS):
    """
    Sampled evidence on whether `other` lies in the normal cone of the fiber
    body at the face exposed by `direction`: it does if both directions
    expose the same face on almost all fibers.

    On one fiber the two faces count as equal when each optimizer is within
    `tol` (relative to its norm) of the face exposed by the other direction.
    Interior point optimizers lie in the relative interior of their faces.

    Returns
    -------
    ConeMembership
    """
    ctx = samples.ctx
    objectives = [_unit_objective(vector, ctx)[1] for vector in (direction, other)]
    _, first = _solve_all(direction, samples, workers, settings)
    _, second = _solve_all(other, samples, workers, settings)
    compared = 0
    differ = 0
    for result, other_result in zip(first, second):
        if result is None or other_result is None:
            continue
        compared += 1
        excess = max(_face_excess(result[0], objectives[1], other_result[1]),
                     _face_excess(other_result[0], objectives[0], result[1]))
        scale = max(1.0, np.linalg.norm(result[0]), np.linalg.norm(other_result[0]))
        if excess > tol * scale:
            differ += 1
    LOGGER.info('Exposed faces differ on %d of %d fibers', differ, compared)
    if differ > NOT_IN_CONE_FRACTION * compared:
        return ConeMembership.NOT_IN_CONE
    if differ == 0:
        return ConeMembership.IN_CONE
    return ConeMembership.UNDETERMINED


def fibonacci_directions(count):
    """`count` nearly evenly spread points on the unit sphere in R³."""
    idxs = np.arange(count) + 0.5
    heights = 1 - 2 * idxs / count
    radii = np.sqrt(1 - heights ** 2)
    angles = np.pi * (3 - np.sqrt(5)) * idxs
    return np.stack([radii * np.cos(angles), radii * np.sin(angles), heights], axis=1)


def gaussian_directions(count, dim, seed):
    """`count` uniformly random points on the unit sphere in R^dim."""
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, dim))
    return points / np.linalg.norm(points, axis=1)[:, None]


def default_directions(ctx, count, seed):
    """Fibonacci points for three dimensional W, Gaussian ones otherwise."""
    if ctx.dim_w == 3:
        return fibonacci_directions(count)
    return gaussian_directions(count, ctx.dim_w, seed)


def _record_for(coordinates, samples, settings):
    direction = samples.ctx.from_coordinates(np.asarray(coordinates, dtype=float))
    record = boundary_point(direction, samples, settings=settings)
    record.direction = np.asarray(coordinates, dtype=float)
    return record


def export_cloud(directions, samples, sink, workers=1, settings=DEFAULT_SETTINGS):
    """
    Writes one CSV row per direction: the direction coordinates, the
    estimated boundary point, the sample count and the standard error.

    Parameters
    ----------
    directions : collections.abc.Sequence
        Coordinate vectors of directions in W.
    samples : SampleSet
    sink : io.TextIOBase
        An open text stream.
    workers : int

    Returns
    -------
    int
        The number of rows written.
    """
    directions = [np.asarray(direction, dtype=float) for direction in directions]
    if not directions:
        raise ValueError('Need at least one direction')
    dim = samples.ctx.dim_w
    writer = csv.writer(sink, lineterminator='\n')
    writer.writerow(['dir_{}'.format(idx + 1) for idx in range(dim)]
                    + ['pt_{}'.format(idx + 1) for idx in range(dim)]
                    + ['n_samples', 'stderr'])
    record_for = functools.partial(_record_for, samples=samples, settings=settings)
    records = _parallel_map(record_for, directions, workers)
    for record in records:
        writer.writerow(['{:.17g}'.format(value) for value in record.direction]
                        + ['{:.17g}'.format(value) for value in record.point]
                        + [record.count, '{:.17g}'.format(record.stderr)])
    LOGGER.info('Exported %d directions', len(records))
    return len(records)
