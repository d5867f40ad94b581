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
Ternary quartics. A direction w in the kernel W of the Gram map is encoded by
a ternary quadratic form Q(w); its rank and determinant decide what the face
of the fiber body in direction w looks like. Also here: the rank one
completions and splittings that certify extremality, the three dimensional
faces, and exact rational sums of squares certificates.
"""

from dataclasses import dataclass
import enum
from fractions import Fraction
import logging

import numpy as np

from .gram import make_context
from .linalg import (NotPositiveSemidefiniteError, RANK_TOLERANCE, adjugate,
                     determinant3, eigh, rank_tol, rational_ldl, rational_solve)
from .polyalg import (Form, apolar_complement, as_fractions, monomial_basis,
                      multiply, quadric_from_matrix, quadric_matrix, tensor_square)

LOGGER = logging.getLogger(__name__)

SPLIT_ZERO_BAND = 1e-9
"""Eigenvalues of Q(w) below this (relative) are zero."""
DET_THRESHOLD = 1e-10

# Position and sign of λ_i (0-based) in Q(w).
_SLOTS = ((2, 2, 1), (1, 1, 1), (0, 0, 1), (1, 2, -1), (0, 2, -1), (0, 1, -1))


@enum.unique
class DirectionTag(enum.Enum):
    """The kinds of faces of the fiber body of ternary quartics"""
    THREE_DIM_FACE = 'ThreeDimFace'
    EXTREME_BY_RANK1 = 'ExtremeByRank1'
    EXTREME_BY_SPLIT = 'ExtremeBySplit'
    EXTREME_BORDERLINE = 'ExtremeBorderline'


@dataclass
class DirectionClass:
    """The classification of a direction w ∈ W by its quadratic form Q(w)."""
    tag: DirectionTag
    Q: np.ndarray  # pylint: disable=invalid-name
    det_q: float
    rank_q: int


class WrongClassError(ValueError):
    """Raised when a construction is asked for a direction of the wrong class."""


def _context():
    return make_context(3, 2)


def q_of_lambda(lam):
    """
    Q(w) = [[λ₃, −λ₆, −λ₅], [−λ₆, λ₂, −λ₄], [−λ₅, −λ₄, λ₁]] from the
    coordinates of w. Exact coordinates give an exact matrix.
    """
    lam = np.asarray(lam)
    if lam.shape != (6,):
        raise ValueError('Q(w) needs 6 coordinates, got {}'.format(lam.shape))
    out = np.empty((3, 3), dtype=lam.dtype if lam.dtype == object else float)
    for value, (idx, jdx, sign) in zip(lam, _SLOTS):
        out[idx, jdx] = out[jdx, idx] = sign * value
    return out


def lambda_of_q(matrix):
    """The inverse of :func:`q_of_lambda`."""
    matrix = np.asarray(matrix)
    if matrix.shape != (3, 3):
        raise ValueError('Q must be 3x3, not {}'.format(matrix.shape))
    dtype = object if matrix.dtype == object else float
    return np.array([sign * matrix[idx, jdx] for idx, jdx, sign in _SLOTS], dtype=dtype)


def q_of_w(direction):
    """
    The quadratic form Q(w) of the W-component of `direction`. For a
    rank one tensor θ = q⊗q, Q(θ) is the adjugate of the matrix of q.
    """
    return q_of_lambda(_context().coordinates(np.asarray(direction)))


def w_of_q(matrix):
    """The direction w ∈ W with Q(w) = `matrix`."""
    return _context().from_coordinates(lambda_of_q(matrix))


def classify(direction, zero_band=SPLIT_ZERO_BAND, tol=RANK_TOLERANCE):
    """
    Classifies a direction w by the eigenvalues of Q(w).

    Eigenvalues below `zero_band` times the largest magnitude are zero, those
    above `tol` times it are nonzero. Anything in between makes the rank
    ambiguous and the direction ExtremeBorderline.

    Returns
    -------
    DirectionClass
    """
    matrix = q_of_w(direction)
    values, _ = eigh(matrix)
    scale = np.max(np.abs(values))
    if scale == 0:
        return DirectionClass(DirectionTag.EXTREME_BORDERLINE, matrix, 0.0, 0)
    magnitudes = np.abs(values)
    rank = int(np.sum(magnitudes > tol * scale))
    ambiguous = np.any((magnitudes > zero_band * scale) & (magnitudes <= tol * scale))
    det = float(np.prod(values))
    if ambiguous:
        tag = DirectionTag.EXTREME_BORDERLINE
    elif rank == 1:
        tag = DirectionTag.THREE_DIM_FACE
    elif rank == 3 and det > 0:
        tag = DirectionTag.EXTREME_BY_RANK1
    else:
        tag = DirectionTag.EXTREME_BY_SPLIT
    return DirectionClass(tag, matrix, det if rank == 3 else 0.0, rank)


def _quadric_of_adjugate(matrix):
    """The quadric whose matrix is adj(`matrix`)."""
    return quadric_from_matrix(adjugate(matrix), monomial_basis(3, 2))


def rank1_complete(direction, strict=True):
    """
    The quadric q with pr_W(q⊗q) = det Q(w)·w, for det Q(w) > 0.

    q is the form of adj(Q(w)).

    Raises
    ------
    WrongClassError
        If det Q(w) ≤ 1e-10·‖Q(w)‖³.
    """
    ctx = _context()
    lam = ctx.coordinates(np.asarray(direction, dtype=float))
    matrix = q_of_lambda(lam)
    det = determinant3(matrix)
    norm = np.max(np.abs(eigh(matrix)[0]))
    if det <= DET_THRESHOLD * norm ** 3:
        raise WrongClassError('det Q(w) = {} is not positive'.format(det))
    form = _quadric_of_adjugate(matrix)
    residual = ctx.coordinates(tensor_square(form)) - det * lam
    if np.max(np.abs(residual)) > 1e-8 * det * np.max(np.abs(lam)):
        msg = 'The rank one completion misses by {}'.format(np.max(np.abs(residual)))
        if strict:
            raise ArithmeticError(msg)
        LOGGER.warning(msg)
    return form


def _split_diagonal(values, scale):
    """
    Diagonal recipes splitting diag(values) into two diagonal matrices with
    positive determinant. `values` are sorted with positives first, in
    ascending order, then negatives, then zeros.
    """
    signs = tuple(int(np.sign(value)) for value in values)
    d1, d2, d3 = values  # pylint: disable=invalid-name
    if signs == (1, 1, -1):
        return (d1 / 2, 2 * d2, -d3), (d1 / 2, -d2, 2 * d3)
    if signs == (-1, -1, -1):
        return (2 * d1, -d2, d3 / 2), (-d1, 2 * d2, d3 / 2)
    if signs == (1, 1, 0):
        return (d1 / 2, 2 * d2, scale), (d1 / 2, -d2, -scale)
    if signs == (1, -1, 0):
        return (d1 / 2, -d2, scale), (d1 / 2, 2 * d2, -scale)
    if signs == (-1, -1, 0):
        return (2 * d1, d2 / 2, scale), (-d1, d2 / 2, -scale)
    raise WrongClassError('No splitting recipe for eigenvalue signs {}'.format(signs))


def split_psd_pair(matrix, zero_band=SPLIT_ZERO_BAND):
    """
    Writes Q = Q₁ + Q₂ with det Q₁ > 0 and det Q₂ > 0, for Q with negative
    determinant or rank 2.

    Q is diagonalized, a fixed recipe per eigenvalue sign pattern splits the
    diagonal, and the parts are conjugated back.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray]

    Raises
    ------
    WrongClassError
        For rank ≤ 1 or positive determinant.
    """
    matrix = np.asarray(matrix, dtype=float)
    values, vectors = eigh(matrix)
    scale = np.max(np.abs(values))
    if scale == 0:
        raise WrongClassError('Can not split the zero matrix')
    values = np.where(np.abs(values) <= zero_band * scale, 0.0, values)
    positive = sorted(idx for idx in range(3) if values[idx] > 0)
    positive.sort(key=lambda idx: values[idx])
    negative = [idx for idx in range(3) if values[idx] < 0]
    negative.sort(key=lambda idx: values[idx])
    zero = [idx for idx in range(3) if values[idx] == 0]
    order = positive + negative + zero
    first, second = _split_diagonal(values[order], scale)
    basis = vectors[:, order]
    part1 = basis @ np.diag(first) @ basis.T
    part2 = matrix - part1
    for part in (part1, part2):
        if np.linalg.det(part) <= 0:
            raise WrongClassError('Splitting produced a part with determinant {}'
                                  .format(np.linalg.det(part)))
    LOGGER.debug('Split with diagonal parts %s and %s', first, second)
    return part1, part2


def split_tensor(direction):
    """
    A Gram side tensor θ = Σ q_i⊗q_i/det Q_i with pr_W(θ) = w, from the
    splitting Q(w) = Q₁ + Q₂. Here q_i is the form of adj(Q_i).

    Returns
    -------
    tuple[numpy.ndarray, list[polyalg.Form]]
        θ and the two quadrics.
    """
    parts = split_psd_pair(q_of_w(direction))
    forms = [_quadric_of_adjugate(part) for part in parts]
    theta = sum(tensor_square(form) / np.linalg.det(part)
                for form, part in zip(forms, parts))
    return theta, forms


def _linear_form(vector):
    return Form(monomial_basis(3, 1), np.asarray(vector, dtype=float))


def substitution_matrix(linear_forms):
    """
    The 6×6 matrix P of the substitution (x, y, z) ↦ (l₁, l₂, l₃) on
    quadrics: column j holds the coefficients of m_j(l₁, l₂, l₃). A tensor
    G is mapped to P G Pᵀ.
    """
    order = monomial_basis(3, 2)
    linear = [_linear_form(form) for form in linear_forms]
    columns = []
    for exponent in order.exponents:
        factors = [linear[idx] for idx, power in enumerate(exponent) for _ in range(power)]
        columns.append(multiply(*factors).coeffs)
    return np.array(columns).T


def face_direction_subspace(direction):
    """
    The three dimensional space of directions of the face of the fiber body
    in a direction w with rank Q(w) = 1.

    With Q(w) = ±vvᵀ, a linear substitution with l₁ × l₂ ∥ v and l₃ = v maps
    R₁ to a multiple of w; the image of span(R₂, R₃, R₆) under the same
    substitution is returned.

    Returns
    -------
    list[numpy.ndarray]

    Raises
    ------
    WrongClassError
        If rank Q(w) ≠ 1.
    """
    ctx = _context()
    matrix = q_of_w(direction)
    if rank_tol(matrix) != 1:
        raise WrongClassError('Q(w) has rank {}, not 1'.format(rank_tol(matrix)))
    pivot = int(np.argmax(np.abs(np.diag(matrix))))
    vector = matrix[:, pivot] / np.sqrt(abs(matrix[pivot, pivot]))
    first = int(np.flatnonzero(np.abs(vector) > 1e-12 * np.max(np.abs(vector)))[0])
    vector = vector / vector[first]
    others = [idx for idx in range(3) if idx != first]
    linear = []
    for idx in others:
        row = np.zeros(3)
        row[idx] = 1
        row[first] = -vector[idx]
        linear.append(row)
    linear.append(vector)
    pushforward = substitution_matrix(linear)

    image = pushforward @ ctx.kernel_array[0] @ pushforward.T
    image_q = q_of_w(image)
    if rank_tol(image_q) != 1 or abs(abs(np.sum(image_q * matrix))
                                     - np.linalg.norm(image_q) * np.linalg.norm(matrix)) \
            > 1e-8 * np.linalg.norm(image_q) * np.linalg.norm(matrix):
        raise ArithmeticError('The substitution does not map R₁ onto the ray of w')
    return [pushforward @ ctx.kernel_array[idx] @ pushforward.T for idx in (1, 2, 5)]


def spanning_direction(form):
    """
    The direction spanning the normal cone of the fiber body at the rank 5
    extreme points whose image is the apolar complement of the rank 3
    quadric `form`: the w with Q(w) = adj(Q_q).
    """
    return w_of_q(adjugate(quadric_matrix(form)))


def binary_disc_coordinate(form):
    """
    For a binary quadric q(x, y) = a x² + b xy + c y² seen as a ternary
    quadric, the R₁ coordinate of q⊗q, which is −disc(q)/4 = ac − b²/4.
    """
    ctx = _context()
    coeffs = np.asarray(form.coeffs, dtype=float)
    if form.order.n == 2:
        a, b, c = coeffs  # pylint: disable=invalid-name
        coeffs = np.array([a, c, 0, b, 0, 0])
    return ctx.coordinates(np.outer(coeffs, coeffs))[0]


def example_vanishing():
    """
    The quadrics q₁ = 2xz + 2yz, q₂ = 2xz + 4yz and Q(q₁⊗q₁ + q₂⊗q₂), which
    has rank 2, in exact arithmetic.
    """
    ctx = _context()
    order = monomial_basis(3, 2)
    q1 = Form(order, as_fractions([0, 0, 0, 0, 2, 2]))  # pylint: disable=invalid-name
    q2 = Form(order, as_fractions([0, 0, 0, 0, 2, 4]))  # pylint: disable=invalid-name
    theta = tensor_square(q1) + tensor_square(q2)
    return q1, q2, q_of_lambda(ctx.coordinates(theta))


@dataclass
class RationalCertificate:
    """
    An exact sum of squares certificate f = Σ w_k f_k² from a rational Gram
    matrix θ with image span(q)^⊥.

    If the construction fails, `violation` says why and the other
    attributes other than `q` are None or empty.
    """
    theta: np.ndarray
    sos: list
    f_check: bool
    q: Form  # pylint: disable=invalid-name
    violation: str = None


def rational_certificate(form, lam):
    """
    Computes the rational Gram matrix of f whose image is U = span(q)^⊥,
    q the quadric of adj(Q(w)), and reads off a rational sum of squares.

    Parameters
    ----------
    form : polyalg.Form
        A ternary quartic with rational coefficients.
    lam : collections.abc.Sequence
        The rational coordinates of w.

    Returns
    -------
    RationalCertificate
    """
    ctx = _context()
    lam = as_fractions(lam)
    coeffs = as_fractions(form.coeffs)
    if form.order != ctx.target:
        raise ValueError('Expected a ternary quartic, not {}'.format(form))
    matrix = q_of_lambda(lam)
    det = determinant3(matrix)
    if det <= 0:
        return RationalCertificate(None, [], False, None,
                                   'det Q(w) = {} is not positive'.format(det))
    q_form = quadric_from_matrix(adjugate(matrix), monomial_basis(3, 2))
    u_basis = apolar_complement([q_form], exact=True)
    size = len(u_basis)

    pairs = [(idx, jdx) for idx in range(size) for jdx in range(idx, size)]
    columns = []
    for idx, jdx in pairs:
        product = multiply(u_basis[idx], u_basis[jdx]).coeffs
        columns.append(product if idx == jdx else 2 * product)
    system = np.array(columns, dtype=object).T
    solution = rational_solve(system, coeffs)
    if not solution.consistent:
        return RationalCertificate(None, [], False, q_form,
                                   'f has no Gram matrix with image span(q)^⊥')
    if solution.nullspace:
        LOGGER.info('The Gram matrix with image span(q)^⊥ is not unique; '
                    'using the particular solution')
    small = np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)
    for value, (idx, jdx) in zip(solution.particular, pairs):
        small[idx, jdx] = small[jdx, idx] = value
    try:
        factorization = rational_ldl(small)
    except NotPositiveSemidefiniteError as error:
        return RationalCertificate(None, [], False, q_form,
                                   'The Gram matrix is not positive semidefinite: {}'
                                   .format(error))
    if any(value == 0 for value in factorization.diagonal):
        return RationalCertificate(None, [], False, q_form,
                                   'The Gram matrix has rank {}, not {}'.format(
                                       sum(value != 0 for value in factorization.diagonal),
                                       size))

    frame = np.array([form_.coeffs for form_ in u_basis], dtype=object).T
    theta = frame @ small @ frame.T
    unpermuted = np.empty_like(factorization.lower)
    for row, original in enumerate(factorization.perm):
        unpermuted[original, :] = factorization.lower[row, :]
    sos = []
    total = np.array([Fraction(0)] * len(ctx.target), dtype=object)
    for k, weight in enumerate(factorization.diagonal):
        square = Form(ctx.basis, frame @ unpermuted[:, k])
        sos.append((weight, square))
        total = total + weight * multiply(square, square).coeffs
    f_check = bool(np.all(total == coeffs)) and bool(np.all(ctx.mu_apply(theta).coeffs == coeffs))
    return RationalCertificate(theta, sos, f_check, q_form)
