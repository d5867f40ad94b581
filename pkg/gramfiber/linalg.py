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
Dense linear algebra helpers: a symmetric eigensolver, numerical ranks and
null spaces, polynomial roots, and exact elimination over the rationals.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
import math

import numpy as np

LOGGER = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-8
"""Relative eigenvalue or singular value threshold for exact inputs."""
OPTIMIZER_RANK_TOLERANCE = 1e-6
"""Relative threshold for matrices coming out of the interior point solver."""
ROOT_RESIDUAL = 1e-8
"""Bound on |p(z)| at a computed root z, relative to the size of p."""


class ConvergenceError(ArithmeticError):
    """Raised when an iterative method does not converge."""


class NotPositiveSemidefiniteError(ValueError):
    """Raised when an LDLᵀ factorization meets a negative pivot."""


def eigh(matrix, max_sweeps=100):
    """
    Eigen decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : numpy.ndarray
        A symmetric n×n matrix.
    max_sweeps : int
        The maximum number of sweeps over all off-diagonal entries.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray]
        The eigenvalues in descending order, and the orthonormal eigenvectors
        as the corresponding columns.

    Raises
    ------
    ValueError
        If `matrix` is not square or contains non-finite entries.
    ConvergenceError
        If the off-diagonal mass is not gone after `max_sweeps` sweeps.
    """
    work = np.array(matrix, dtype=float)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ValueError('Can only diagonalize square matrices, not {}'
                         .format(work.shape))
    if not np.all(np.isfinite(work)):
        raise ValueError('Matrix has non-finite entries')
    size = len(work)
    work = (work + work.T) / 2
    vectors = np.eye(size)
    scale = np.linalg.norm(work)
    eps = np.finfo(float).eps

    for _ in range(max_sweeps):
        off = np.linalg.norm(work - np.diag(np.diag(work)))
        if off <= eps * scale:
            break
        for p in range(size - 1):  # pylint: disable=invalid-name
            for q in range(p + 1, size):  # pylint: disable=invalid-name
                apq = work[p, q]
                if abs(apq) <= eps * eps * scale:
                    continue
                theta = (work[q, q] - work[p, p]) / (2 * apq)
                tangent = math.copysign(1, theta) / (abs(theta) + math.hypot(theta, 1))
                cos = 1 / math.hypot(tangent, 1)
                sin = tangent * cos

                col_p = work[:, p].copy()
                col_q = work[:, q].copy()
                work[:, p] = cos * col_p - sin * col_q
                work[:, q] = sin * col_p + cos * col_q
                row_p = work[p, :].copy()
                row_q = work[q, :].copy()
                work[p, :] = cos * row_p - sin * row_q
                work[q, :] = sin * row_p + cos * row_q
                work[p, q] = work[q, p] = 0

                vec_p = vectors[:, p].copy()
                vec_q = vectors[:, q].copy()
                vectors[:, p] = cos * vec_p - sin * vec_q
                vectors[:, q] = sin * vec_p + cos * vec_q
    else:
        raise ConvergenceError('Jacobi rotations did not converge in {} sweeps'
                               .format(max_sweeps))

    values = np.diag(work).copy()
    order = np.argsort(-values, kind='stable')
    return values[order], vectors[:, order]


def rank_tol(matrix, tol=RANK_TOLERANCE):
    """
    The number of eigenvalues of a symmetric matrix whose magnitude exceeds
    `tol` times the largest eigenvalue magnitude.
    """
    values, _ = eigh(matrix)
    biggest = np.max(np.abs(values)) if len(values) else 0
    if biggest == 0:
        return 0
    return int(np.sum(np.abs(values) > tol * biggest))


def min_eigenvalue(matrix):
    """The smallest eigenvalue of a symmetric matrix."""
    values, _ = eigh(matrix)
    return values[-1]


def numeric_rank(matrix, tol=RANK_TOLERANCE):
    """
    The number of singular values of `matrix` larger than `tol` times the
    largest singular value.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular > tol * singular[0]))


def null_space(matrix, tol=RANK_TOLERANCE):
    """
    An orthonormal basis of the right null space of `matrix`, as columns.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    _, singular, vt = np.linalg.svd(matrix)  # pylint: disable=invalid-name
    if singular.size and singular[0] > 0:
        rank = int(np.sum(singular > tol * singular[0]))
    else:
        rank = 0
    return vt[rank:].T.copy()


def orthonormal_columns(matrix, tol=RANK_TOLERANCE):
    """An orthonormal basis of the column space of `matrix`, as columns."""
    left, singular, _ = np.linalg.svd(np.asarray(matrix, dtype=float),
                                      full_matrices=False)
    if not singular.size or singular[0] == 0:
        return left[:, :0]
    rank = int(np.sum(singular > tol * singular[0]))
    return left[:, :rank]


def determinant3(matrix):
    """
    The determinant of a 3×3 matrix by cofactor expansion. Works for float
    and for :class:`fractions.Fraction` entries.
    """
    a = matrix  # pylint: disable=invalid-name
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def adjugate(matrix):
    """
    The adjugate (transposed cofactor matrix) of a square matrix.

    For 3×3 matrices the cofactors are written out and the entry type
    (float or :class:`fractions.Fraction`) is kept. Larger matrices are
    handled by numpy in floating point.
    """
    arr = np.asarray(matrix)
    if arr.shape == (3, 3):
        a = arr  # pylint: disable=invalid-name
        cof = [[a[1][1] * a[2][2] - a[1][2] * a[2][1],
                a[1][2] * a[2][0] - a[1][0] * a[2][2],
                a[1][0] * a[2][1] - a[1][1] * a[2][0]],
               [a[0][2] * a[2][1] - a[0][1] * a[2][2],
                a[0][0] * a[2][2] - a[0][2] * a[2][0],
                a[0][1] * a[2][0] - a[0][0] * a[2][1]],
               [a[0][1] * a[1][2] - a[0][2] * a[1][1],
                a[0][2] * a[1][0] - a[0][0] * a[1][2],
                a[0][0] * a[1][1] - a[0][1] * a[1][0]]]
        return np.array(cof, dtype=arr.dtype).T
    if arr.dtype == object:
        raise ValueError('Exact adjugates are only available for 3x3 matrices')
    size = arr.shape[0]
    out = np.empty_like(arr, dtype=float)
    for idx in range(size):
        for jdx in range(size):
            minor = np.delete(np.delete(arr, idx, axis=0), jdx, axis=1)
            out[jdx, idx] = (-1) ** (idx + jdx) * np.linalg.det(minor)
    return out


def _root_residual(coeffs, roots):
    """
    max |p(z)| over the roots, relative to the larger of ‖c‖ and the
    rounding scale Σ |c_k||z|^k.
    """
    descending = coeffs[::-1]
    values = np.abs(np.polyval(descending, roots))
    scale = np.maximum(np.linalg.norm(coeffs), np.polyval(np.abs(descending), np.abs(roots)))
    return float(np.max(values / scale))


def poly_roots(coefficients, max_iterations=500, tol=1e-14, seed=0):
    """
    All complex roots of a univariate polynomial by simultaneous Aberth
    iteration.

    Parameters
    ----------
    coefficients : collections.abc.Sequence[complex]
        Coefficients in ascending order of degree; the last one must not be 0.
    max_iterations : int
        Iteration cap per attempt.
    tol : float
        Relative correction size at which a root counts as converged.
    seed : int
        Seed of the random restart used when the first attempt stalls.

    Returns
    -------
    numpy.ndarray
        The roots, sorted by real then imaginary part.

    Raises
    ------
    ValueError
        If the leading coefficient is 0.
    ConvergenceError
        If neither attempt converges to roots with |p(z)| at most 1e-8
        relative to ‖c‖ (or to Σ |c_k||z|^k for large roots).
    """
    coeffs = np.asarray(coefficients, dtype=complex)
    if coeffs.size == 0 or coeffs[-1] == 0:
        raise ValueError('The leading coefficient must not be zero')
    degree = coeffs.size - 1
    if degree == 0:
        return np.array([], dtype=complex)
    monic = coeffs / coeffs[-1]
    descending = monic[::-1]
    derivative = np.polyder(descending)
    # Cauchy bound on the root moduli.
    radius = 1 + np.max(np.abs(monic[:-1]))
    rng = np.random.default_rng(seed)

    for attempt in range(2):
        offset = 0.4 if attempt == 0 else rng.uniform(0, 2 * np.pi)
        angles = 2 * np.pi * np.arange(degree) / degree + offset
        scale = radius / 2 if attempt == 0 else radius * rng.uniform(0.3, 1)
        roots = scale * np.exp(1j * angles)
        for _ in range(max_iterations):
            values = np.polyval(descending, roots)
            slopes = np.polyval(derivative, roots)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratio = values / slopes
                diffs = roots[:, None] - roots[None, :]
                np.fill_diagonal(diffs, np.inf)
                repulsion = np.sum(1 / diffs, axis=1)
                step = ratio / (1 - ratio * repulsion)
            step = np.where(values == 0, 0, step)
            if not np.all(np.isfinite(step)):
                break
            roots = roots - step
            if np.all(np.abs(step) <= tol * np.maximum(1, np.abs(roots))):
                break
        else:
            LOGGER.debug('Aberth iteration stalled on attempt %d', attempt)
            continue
        residual = _root_residual(coeffs, roots)
        if np.all(np.isfinite(roots)) and residual <= ROOT_RESIDUAL:
            order = np.lexsort((roots.imag, roots.real))
            return roots[order]
        LOGGER.debug('Attempt %d ended with relative residual %g', attempt, residual)
    raise ConvergenceError('Aberth iteration did not converge to roots with relative '
                           'residual {} in {} iterations'.format(ROOT_RESIDUAL, max_iterations))


@dataclass
class LinearSolution:
    """
    The solution set of an exact linear system A x = b.

    Attributes
    ----------
    particular : numpy.ndarray or None
        One solution (free variables set to 0), shaped like b; None if the
        system is inconsistent.
    nullspace : list[numpy.ndarray]
        A basis of the null space of A.
    consistent : bool
    """
    particular: object
    nullspace: list
    consistent: bool


def _integer_rows(matrix):
    """Scales each row of a rational matrix to integers."""
    rows = []
    for row in matrix:
        fracs = [Fraction(value) for value in row]
        lcm = math.lcm(*(frac.denominator for frac in fracs)) if fracs else 1
        rows.append([int(frac * lcm) for frac in fracs])
    return rows


def rational_solve(matrix, rhs):
    """
    Solves A x = b exactly by fraction-free (Bareiss) elimination.

    Parameters
    ----------
    matrix : numpy.ndarray
        An m×n matrix of rationals (Fraction, int or "p/q" convertible).
    rhs : numpy.ndarray
        An m-vector or an m×k matrix of rationals.

    Returns
    -------
    LinearSolution
        With Fraction entries.
    """
    matrix = np.asarray(matrix, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    vector_rhs = rhs.ndim == 1
    if vector_rhs:
        rhs = rhs[:, None]
    n_rows, n_cols = matrix.shape
    if rhs.shape[0] != n_rows:
        raise ValueError('The right hand side has {} rows, the matrix {}'
                         .format(rhs.shape[0], n_rows))
    n_rhs = rhs.shape[1]
    work = _integer_rows(np.hstack([matrix, rhs]) if n_rows else np.zeros((0, n_cols + n_rhs)))
    total = n_cols + n_rhs

    previous = 1
    row = 0
    pivots = []
    for col in range(n_cols):
        if row == n_rows:
            break
        pivot_row = next((idx for idx in range(row, n_rows) if work[idx][col] != 0), None)
        if pivot_row is None:
            continue
        work[row], work[pivot_row] = work[pivot_row], work[row]
        pivot = work[row][col]
        for idx in range(row + 1, n_rows):
            factor = work[idx][col]
            for jdx in range(col + 1, total):
                quotient, remainder = divmod(pivot * work[idx][jdx]
                                             - factor * work[row][jdx], previous)
                assert remainder == 0, 'Bareiss division must be exact'
                work[idx][jdx] = quotient
            work[idx][col] = 0
        previous = pivot
        pivots.append(col)
        row += 1

    consistent = all(work[idx][jdx] == 0
                     for idx in range(row, n_rows) for jdx in range(n_cols, total))

    def back_substitute(values, rhs_column):
        """Fills in pivot variables of `values` from the echelon form."""
        for prow in range(len(pivots) - 1, -1, -1):
            pcol = pivots[prow]
            acc = Fraction(work[prow][n_cols + rhs_column]) if rhs_column is not None else Fraction(0)
            for jdx in range(pcol + 1, n_cols):
                acc -= work[prow][jdx] * values[jdx]
            values[pcol] = acc / work[prow][pcol]
        return values

    particular = None
    if consistent:
        columns = []
        for rhs_column in range(n_rhs):
            columns.append(back_substitute([Fraction(0)] * n_cols, rhs_column))
        particular = np.array(columns, dtype=object).T
        if vector_rhs:
            particular = particular[:, 0]

    nullspace = []
    for free in (col for col in range(n_cols) if col not in pivots):
        values = [Fraction(0)] * n_cols
        values[free] = Fraction(1)
        nullspace.append(np.array(back_substitute(values, None), dtype=object))
    return LinearSolution(particular, nullspace, consistent)


@dataclass
class LDLFactorization:
    """
    P A Pᵀ = L D Lᵀ with (P A Pᵀ)_ij = A[perm[i], perm[j]], L unit lower
    triangular and D diagonal.
    """
    perm: list
    lower: np.ndarray
    diagonal: list


def rational_ldl(matrix):
    """
    Exact LDLᵀ factorization of a symmetric positive semidefinite rational
    matrix with symmetric pivoting on the largest remaining diagonal entry.

    Parameters
    ----------
    matrix : numpy.ndarray
        A symmetric matrix of rationals.

    Returns
    -------
    LDLFactorization

    Raises
    ------
    ValueError
        If `matrix` is not square or not symmetric.
    NotPositiveSemidefiniteError
        If `matrix` is not positive semidefinite.
    """
    work = [[Fraction(value) for value in row] for row in np.asarray(matrix, dtype=object)]
    size = len(work)
    if any(len(row) != size for row in work):
        raise ValueError('LDL factorization needs a square matrix')
    if any(work[idx][jdx] != work[jdx][idx] for idx in range(size) for jdx in range(idx)):
        raise ValueError('LDL factorization needs a symmetric matrix')
    perm = list(range(size))
    lower = [[Fraction(int(idx == jdx)) for jdx in range(size)] for idx in range(size)]
    diagonal = []

    for k in range(size):
        pivot = max(range(k, size), key=lambda idx: (work[idx][idx], -idx))
        if work[pivot][pivot] < 0:
            raise NotPositiveSemidefiniteError(
                'Negative pivot {} at step {}'.format(work[pivot][pivot], k))
        if work[pivot][pivot] == 0:
            if any(work[idx][jdx] != 0 for idx in range(k, size) for jdx in range(k, size)):
                raise NotPositiveSemidefiniteError(
                    'Zero diagonal with nonzero off-diagonal entries at step {}'.format(k))
            diagonal.extend([Fraction(0)] * (size - k))
            break
        if pivot != k:
            work[k], work[pivot] = work[pivot], work[k]
            for row in work:
                row[k], row[pivot] = row[pivot], row[k]
            perm[k], perm[pivot] = perm[pivot], perm[k]
            for jdx in range(k):
                lower[k][jdx], lower[pivot][jdx] = lower[pivot][jdx], lower[k][jdx]
        head = work[k][k]
        diagonal.append(head)
        for idx in range(k + 1, size):
            lower[idx][k] = work[idx][k] / head
        for idx in range(k + 1, size):
            for jdx in range(k + 1, size):
                work[idx][jdx] -= lower[idx][k] * work[k][jdx]
    return LDLFactorization(perm, np.array(lower, dtype=object), diagonal)
