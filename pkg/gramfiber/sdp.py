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
A small log-det barrier interior point method for linear optimization over an
affine slice {G0 + Σ λ_i R_i} of the cone of positive semidefinite matrices.

The iterates follow the central path, so an optimal solution is the analytic
center of the optimal face. Downstream face computations rely on that: the
returned optimizer has the maximal rank among all optimizers.
"""

from dataclasses import dataclass, field, replace
import enum
import logging

import numpy as np

from .linalg import numeric_rank, min_eigenvalue

LOGGER = logging.getLogger(__name__)


@enum.unique
class SdpStatus(enum.Enum):
    """Possible outcomes of a slice problem"""
    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    NUMERICAL_FAILURE = 'NumericalFailure'


@dataclass(frozen=True)
class SolverSettings:
    """
    Knobs of the barrier method.

    Attributes
    ----------
    gap_tolerance : float
        Stop when the duality gap N/t is below gap_tolerance·(1 + |value|).
    growth : float
        Factor by which the barrier parameter grows between centerings.
    initial_t : float
    max_newton : int
        Newton steps per centering.
    max_outer : int
        Number of centerings.
    newton_tolerance : float
        Half the squared Newton decrement at which a centering stops.
    feasibility_threshold : float
        A phase-I value below this counts as feasible.
    """
    gap_tolerance: float = 1e-10
    growth: float = 1.5
    initial_t: float = 1.0
    max_newton: int = 80
    max_outer: int = 300
    newton_tolerance: float = 1e-12
    feasibility_threshold: float = 1e-9


DEFAULT_SETTINGS = SolverSettings()


class SolverError(ArithmeticError):
    """
    Raised when the barrier method breaks down. The last iterate is available
    as `solution`.
    """
    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


@dataclass
class SliceProblem:
    """
    minimize tr(C X) subject to X = G0 + Σ λ_i R_i ⪰ 0.

    Attributes
    ----------
    G0 : numpy.ndarray
        The base point of the slice.
    basis : numpy.ndarray
        The directions R_i of the slice, shape (k, N, N). Must be linearly
        independent.
    objective : numpy.ndarray
        The symmetric matrix C.
    settings : SolverSettings
    """
    G0: np.ndarray  # pylint: disable=invalid-name
    basis: np.ndarray
    objective: np.ndarray = None
    settings: SolverSettings = field(default=DEFAULT_SETTINGS)

    def __post_init__(self):
        self.G0 = np.asarray(self.G0, dtype=float)
        size = self.G0.shape[0]
        if self.G0.shape != (size, size):
            raise ValueError('G0 must be square, not {}'.format(self.G0.shape))
        self.basis = np.asarray(self.basis, dtype=float).reshape(-1, size, size)
        if self.objective is None:
            self.objective = np.zeros((size, size))
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.shape != (size, size):
            raise ValueError('The objective must be {0}x{0}, not {1}'
                             .format(size, self.objective.shape))
        if len(self.basis):
            flat = self.basis.reshape(len(self.basis), -1)
            rank = numeric_rank(flat)
            if rank < len(self.basis):
                raise ValueError('The {} slice directions only span a space of '
                                 'dimension {}'.format(len(self.basis), rank))

    @classmethod
    def from_context(cls, ctx, form, direction, settings=DEFAULT_SETTINGS):
        """
        The slice problem minimizing ⟨`direction`, ·⟩ (in the pairing of
        `ctx`) over the Gram spectrahedron of `form`.
        """
        return cls(ctx.v_rep(form), ctx.kernel_array,
                   ctx.trace_objective(direction), settings)

    @property
    def size(self):
        return self.G0.shape[0]

    def point(self, lam):
        """G0 + Σ λ_i R_i"""
        return self.G0 + np.tensordot(lam, self.basis, axes=1)


@dataclass
class SdpSolution:
    """
    The result of :func:`solve`.

    Attributes
    ----------
    lam : numpy.ndarray
        The slice coordinates of the optimizer.
    X : numpy.ndarray
        The optimizer G0 + Σ λ_i R_i.
    objective_value : float
    status : SdpStatus
    min_eigenvalue : float
    phase_one_value : float
        The optimal value of the phase-I problem, min s with X + sI ⪰ 0. It is
        positive for infeasible slices.
    iterations : int
        Total number of Newton steps.
    """
    lam: np.ndarray
    X: np.ndarray  # pylint: disable=invalid-name
    objective_value: float
    status: SdpStatus
    min_eigenvalue: float
    phase_one_value: float = None
    iterations: int = 0


def _barrier_value(X):  # pylint: disable=invalid-name
    """−log det X, or None if X is not positive definite."""
    try:
        chol = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return None
    diag = np.diag(chol)
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        return None
    return -2 * np.sum(np.log(diag))


class _Barrier:
    """
    f(λ) = t·cᵀλ − log det(G0 + Σ λ_i R_i) − log(ρ² − ‖λ_b‖²), where the last
    term is only present if a radius ρ is given and bounds the coordinates
    selected by `bounded`.
    """
    def __init__(self, G0, basis, cost, radius=None, bounded=None):  # pylint: disable=invalid-name
        self.G0 = G0  # pylint: disable=invalid-name
        self.basis = basis
        self.cost = cost
        self.radius = radius
        self.bounded = bounded

    def point(self, lam):
        return self.G0 + np.tensordot(lam, self.basis, axes=1)

    def value(self, lam, t):  # pylint: disable=invalid-name
        barrier = _barrier_value(self.point(lam))
        if barrier is None:
            return None
        out = t * self.cost @ lam + barrier
        if self.radius is not None:
            slack = self.radius ** 2 - np.sum(lam[self.bounded] ** 2)
            if slack <= 0:
                return None
            out -= np.log(slack)
        return out

    def derivatives(self, lam, t):  # pylint: disable=invalid-name
        X = self.point(lam)  # pylint: disable=invalid-name
        inverse = np.linalg.inv(X)
        scaled = inverse @ self.basis
        grad = t * self.cost - np.trace(scaled, axis1=1, axis2=2)
        hess = np.einsum('iab,jba->ij', scaled, scaled)
        if self.radius is not None:
            sub = lam[self.bounded]
            slack = self.radius ** 2 - np.sum(sub ** 2)
            grad[self.bounded] += 2 * sub / slack
            block = 2 * np.eye(len(sub)) / slack + 4 * np.outer(sub, sub) / slack ** 2
            hess[np.ix_(self.bounded, self.bounded)] += block
        return grad, (hess + hess.T) / 2


def _center(barrier, lam, t, settings, stop=None):  # pylint: disable=invalid-name
    """
    Minimizes the barrier function for fixed t with damped Newton steps.

    Returns
    -------
    tuple[numpy.ndarray, int, bool]
        The new point, the number of Newton steps and whether `stop` fired.
    """
    for step_count in range(1, settings.max_newton + 1):
        grad, hess = barrier.derivatives(lam, t)
        try:
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError as error:
            raise SolverError('Singular Newton system') from error
        decrement = -grad @ step
        if decrement / 2 <= settings.newton_tolerance:
            return lam, step_count, False
        current = barrier.value(lam, t)
        alpha = 1.0
        while True:
            candidate = lam + alpha * step
            value = barrier.value(candidate, t)
            if value is not None and value <= current - 0.25 * alpha * decrement:
                break
            alpha /= 2
            if alpha < 1e-14:
                # No progress possible at machine precision; the point is as
                # centered as it gets.
                return lam, step_count, False
        lam = candidate
        if stop is not None and stop(lam):
            return lam, step_count, True
    LOGGER.debug('Centering at t=%g hit the Newton cap', t)
    return lam, settings.max_newton, False


@dataclass
class PhaseOneResult:
    """Outcome of the phase-I problem min s subject to X(λ) + sI ⪰ 0."""
    lam: np.ndarray
    value: float
    strictly_feasible: bool
    feasible: bool
    iterations: int
    decided: bool = True


def phase_one(G0, basis, settings=DEFAULT_SETTINGS):  # pylint: disable=invalid-name
    """
    Looks for a point of the slice G0 + span(basis) in the interior of the
    psd cone by minimizing s subject to G0 + Σ λ_i R_i + s·I ⪰ 0.

    The search stops as soon as s < 0, since that is a strictly feasible
    point; it reports infeasibility as soon as the barrier lower bound on the
    optimal s is positive. If neither happens within settings.max_outer
    centerings the result is undecided, with `decided` False.

    Returns
    -------
    PhaseOneResult
    """
    G0 = np.asarray(G0, dtype=float)  # pylint: disable=invalid-name
    size = G0.shape[0]
    basis = np.asarray(basis, dtype=float).reshape(-1, size, size)
    k = len(basis)
    extended = np.concatenate([basis, np.eye(size)[None]], axis=0)
    cost = np.zeros(k + 1)
    cost[-1] = 1
    scale = 1 + np.linalg.norm(G0)
    radius = 1e6 * scale
    barrier = _Barrier(G0, extended, cost, radius=radius, bounded=np.arange(k))

    lam = np.zeros(k + 1)
    lam[-1] = max(0.0, -min_eigenvalue(G0)) + scale
    margin = 1e-6 * scale
    threshold = settings.feasibility_threshold

    t = settings.initial_t / scale  # pylint: disable=invalid-name
    iterations = 0
    gap = np.inf
    for _ in range(settings.max_outer):
        lam, steps, stopped = _center(barrier, lam, t, settings,
                                      stop=lambda point: point[-1] < -margin)
        iterations += steps
        value = lam[-1]
        gap = (size + 1) / t
        if stopped or value < -margin:
            return PhaseOneResult(lam[:-1], value, True, True, iterations)
        if value - gap > threshold:
            LOGGER.debug('Phase I certified infeasibility, s >= %g', value - gap)
            return PhaseOneResult(lam[:-1], value, False, False, iterations)
        if gap <= settings.gap_tolerance * scale:
            return PhaseOneResult(lam[:-1], value, value < 0, value < threshold, iterations)
        t *= settings.growth  # pylint: disable=invalid-name
    LOGGER.debug('Phase I hit the outer iteration cap at s=%g, gap %g', lam[-1], gap)
    return PhaseOneResult(lam[:-1], lam[-1], False, False, iterations, decided=False)


def feasible(G0, basis, settings=DEFAULT_SETTINGS):  # pylint: disable=invalid-name
    """
    Whether the slice G0 + span(basis) meets the psd cone, that is whether
    max over λ of the smallest eigenvalue of G0 + Σ λ_i R_i exceeds
    −feasibility_threshold.

    Parameters
    ----------
    G0 : numpy.ndarray
    basis : collections.abc.Sequence[numpy.ndarray]
    settings : SolverSettings

    Returns
    -------
    bool

    Raises
    ------
    SolverError
        If phase I runs out of outer iterations before deciding.
    """
    result = phase_one(G0, basis, settings)
    if not result.decided:
        raise SolverError('Phase I did not decide feasibility in {} outer '
                          'iterations'.format(settings.max_outer))
    return result.feasible


def solve(problem):
    """
    Minimizes tr(C X) over X = G0 + Σ λ_i R_i ⪰ 0 by following the central
    path of the log-det barrier.

    Parameters
    ----------
    problem : SliceProblem

    Returns
    -------
    SdpSolution
        With status OPTIMAL, or INFEASIBLE if the slice misses the psd cone.
        With a zero objective the analytic center of the slice is returned.

    Raises
    ------
    SolverError
        If the slice has no interior, phase I is undecided after
        settings.max_outer centerings, or the path following does not reach
        the gap tolerance. The exception carries the last iterate with status
        NUMERICAL_FAILURE.
    """
    settings = problem.settings
    start = phase_one(problem.G0, problem.basis, settings)
    if not start.decided:
        # Report whichever of the last iterate and G0 is closer to the psd cone.
        lam = start.lam
        if min_eigenvalue(problem.point(lam)) < min_eigenvalue(problem.G0):
            lam = np.zeros_like(lam)
        X = problem.point(lam)  # pylint: disable=invalid-name
        raise SolverError('Phase I did not decide feasibility in {} outer '
                          'iterations'.format(settings.max_outer),
                          SdpSolution(lam, X, float(np.trace(problem.objective @ X)),
                                      SdpStatus.NUMERICAL_FAILURE, min_eigenvalue(X),
                                      start.value, start.iterations))
    if not start.feasible:
        X = problem.point(start.lam)  # pylint: disable=invalid-name
        return SdpSolution(start.lam, X, np.nan, SdpStatus.INFEASIBLE,
                           min_eigenvalue(X), start.value, start.iterations)
    if not start.strictly_feasible:
        X = problem.point(start.lam)  # pylint: disable=invalid-name
        raise SolverError('The slice has no strictly feasible point; phase I '
                          'value {}'.format(start.value),
                          SdpSolution(start.lam, X, float(np.trace(problem.objective @ X)),
                                      SdpStatus.NUMERICAL_FAILURE, min_eigenvalue(X),
                                      start.value, start.iterations))

    cost = np.einsum('ab,iba->i', problem.objective, problem.basis)
    offset = float(np.trace(problem.objective @ problem.G0))
    barrier = _Barrier(problem.G0, problem.basis, cost)
    lam = start.lam
    iterations = start.iterations
    size = problem.size

    def make_solution(status):
        X = problem.point(lam)  # pylint: disable=invalid-name
        return SdpSolution(lam, X, offset + float(cost @ lam), status,
                           min_eigenvalue(X), start.value, iterations)

    if not len(cost):
        return make_solution(SdpStatus.OPTIMAL)
    if not np.any(cost):
        lam, steps, _ = _center(barrier, lam, 0.0, settings)
        iterations += steps
        return make_solution(SdpStatus.OPTIMAL)

    scale = 1 + np.linalg.norm(problem.objective) * (1 + np.linalg.norm(problem.G0))
    t = settings.initial_t * size / scale  # pylint: disable=invalid-name
    for outer in range(settings.max_outer):
        lam, steps, _ = _center(barrier, lam, t, settings)
        iterations += steps
        value = offset + float(cost @ lam)
        gap = size / t
        LOGGER.debug('Outer iteration %d: t=%g, value=%.12g, gap=%g',
                     outer, t, value, gap)
        if gap <= settings.gap_tolerance * (1 + abs(value)):
            return make_solution(SdpStatus.OPTIMAL)
        t *= settings.growth  # pylint: disable=invalid-name
    raise SolverError('The barrier method did not reach a duality gap of {} in {} '
                      'outer iterations'.format(settings.gap_tolerance, settings.max_outer),
                      make_solution(SdpStatus.NUMERICAL_FAILURE))


def support(problem):
    """The value of :func:`solve`, h(C) = min tr(C X) over the slice."""
    solution = solve(problem)
    if solution.status != SdpStatus.OPTIMAL:
        raise ValueError('The slice problem is {}'.format(solution.status.value))
    return solution.objective_value


def with_objective(problem, objective):
    """A copy of `problem` minimizing a different objective."""
    return replace(problem, objective=objective)
