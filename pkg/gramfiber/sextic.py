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
Binary sextics: the rank 2 points of a Gram spectrahedron from the
factorizations f = g·ḡ, the set S of directions without a rank one
completion, and the quadrics bounding the normal cones at rank 2 points.
"""

from dataclasses import dataclass
import itertools
import logging

import numpy as np
import sympy

from .gram import make_context
from .linalg import ConvergenceError, eigh, poly_roots
from .polyalg import Form, monomial_basis

LOGGER = logging.getLogger(__name__)

REPEATED_ROOT_TOLERANCE = 1e-7
"""Relative distance below which two zeros count as equal or a zero as real."""
MULTIPLE_ROOT_DERIVATIVE = 1e-6
"""Relative size of f′ at a zero below which the zero counts as multiple."""
SIGN_TOLERANCE = 1e-12
DISJOINT_SAMPLES = 10**5

LEMMA_ZEROS = (
    (1 + 6j, 2 + 5j, 3 + 4j),
    (-4 + 2j, -2 + 2j, -1 + 2j),
)
"""Upper half plane zeros of the two sextics with disjoint normal cones."""

LEMMA_MATRICES = (
    [
        [[-5, 11, 101], [11, -149, 277], [101, 277, -4017]],
        [[-3, 1, 115], [1, -107, 135], [115, 135, -4567]],
        [[-7, 19, 55], [19, -163, 545], [55, 545, -4683]],
    ],
    [
        [[-1, -1, 3], [-1, -2, 7], [3, 7, 20]],
        [[-1, -2, 0], [-2, -10, -25], [0, -25, -100]],
        [[-1, -4, -12], [-4, -14, -47], [-12, -47, -220]],
    ],
)
"""The normal cone quadrics at the three non-distinguished rank 2 points of
each sextic in LEMMA_ZEROS, each up to a positive factor."""


class DegenerateFormError(ValueError):
    """
    Raised for sextics with real, repeated or infinite zeros, and for rank 2
    points where the normal cone quadric degenerates.
    """


def _context():
    return make_context(2, 3)


def form_from_zeros(zeros, lead=1.0):
    """
    The real binary sextic lead·Π(x − z y)(x − z̄ y) over the given upper
    half plane zeros z.
    """
    roots = list(zeros) + [np.conj(zero) for zero in zeros]
    coeffs = lead * np.poly(roots)
    return Form(monomial_basis(2, 2 * len(zeros)), np.real(coeffs))


def lemma_sextics():
    """The two monic sextics whose three normal cones do not meet."""
    return [form_from_zeros(zeros) for zeros in LEMMA_ZEROS]


def lemma_matrices():
    """The printed normal cone quadrics, as two lists of three integer matrices."""
    return [[np.array(matrix, dtype=float) for matrix in group] for group in LEMMA_MATRICES]


@dataclass
class Rank2Set:
    """
    The four rank 2 points of the Gram spectrahedron of a positive binary
    sextic with distinct zeros.

    Attributes
    ----------
    points : list[numpy.ndarray]
        The 4×4 Gram matrices h₁h₁ᵀ + h₂h₂ᵀ.
    distinguished : int
        The index of θ_f, whose factor g has all its zeros in the upper half
        plane.
    groupings : list[tuple[complex, complex, complex]]
        The zeros of g for each point.
    """
    points: list
    distinguished: int
    groupings: list

    @property
    def theta(self):
        """θ_f"""
        return self.points[self.distinguished]

    def others(self):
        """The three points other than θ_f."""
        return [point for idx, point in enumerate(self.points) if idx != self.distinguished]


def _zeros(form):
    """The zeros of f(x, 1), checked to be simple and non-real."""
    coeffs = np.asarray(form.coeffs, dtype=float)
    scale = np.max(np.abs(coeffs))
    if scale == 0:
        raise ValueError('The zero form has no rank 2 Gram matrices')
    if abs(coeffs[0]) <= SIGN_TOLERANCE * scale:
        raise DegenerateFormError('{} vanishes at [1:0]'.format(form))
    if coeffs[0] < 0:
        raise ValueError('{} is not positive'.format(form))
    try:
        zeros = poly_roots(coeffs[::-1])
    except ConvergenceError as error:
        raise DegenerateFormError('Could not find the zeros of {}'.format(form)) from error

    derivative = np.polyder(coeffs)
    for zero in zeros:
        size = max(1, abs(zero))
        if abs(zero.imag) <= REPEATED_ROOT_TOLERANCE * size:
            raise DegenerateFormError('{} has a real zero near {}'.format(form, zero))
        magnitude = np.polyval(np.abs(coeffs), size)
        if abs(np.polyval(derivative, zero)) <= MULTIPLE_ROOT_DERIVATIVE * magnitude:
            raise DegenerateFormError('{} has a multiple zero near {}'.format(form, zero))
    for first, second in itertools.combinations(zeros, 2):
        if abs(first - second) <= REPEATED_ROOT_TOLERANCE * max(1, abs(first)):
            raise DegenerateFormError('{} has a repeated zero near {}'.format(form, first))
    return zeros


def rank2_points(form, strict=True):
    """
    The rank 2 points of the Gram spectrahedron of a positive binary sextic.

    Every factorization f = g·ḡ with g a complex cubic gives the Gram matrix
    of f = (Re g)² + (Im g)². Up to swapping g and ḡ there are four of them.

    Parameters
    ----------
    form : polyalg.Form
        A binary sextic with positive leading coefficient and six distinct
        non-real zeros.
    strict : bool
        Whether to raise if μ(point) = f fails by more than 1e-9 (relative).
        Otherwise a warning is logged.

    Returns
    -------
    Rank2Set

    Raises
    ------
    DegenerateFormError
        If `form` has a real, repeated or infinite zero.
    """
    ctx = _context()
    if form.order != ctx.target:
        raise ValueError('Expected a binary sextic, not {}'.format(form))
    zeros = _zeros(form)
    upper = sorted((zero for zero in zeros if zero.imag > 0),
                   key=lambda zero: (zero.real, zero.imag))
    if len(upper) != 3:
        raise DegenerateFormError('{} does not have three zeros in the upper half '
                                  'plane'.format(form))
    lead = float(form.coeffs[0])
    coeffs = np.asarray(form.coeffs, dtype=float)
    points = []
    groupings = []
    for signs in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)):
        chosen = tuple(zero if sign > 0 else np.conj(zero)
                       for zero, sign in zip(upper, signs))
        factor = np.sqrt(lead) * np.poly(chosen)
        point = np.outer(factor.real, factor.real) + np.outer(factor.imag, factor.imag)
        residual = np.max(np.abs(ctx.mu_apply(point).coeffs - coeffs))
        if residual > 1e-9 * np.max(np.abs(coeffs)):
            msg = 'Rank 2 point reproduces {} only up to {}'.format(form, residual)
            if strict:
                raise ArithmeticError(msg)
            LOGGER.warning(msg)
        points.append(point)
        groupings.append(chosen)
    return Rank2Set(points, 0, groupings)


def distinguished_point(form):
    """θ_f, the rank 2 point whose factor has all zeros in the upper half plane."""
    return rank2_points(form).theta


def scoords(direction):
    """
    The coordinates λ_i = tr(w R_i) of a direction in W, or the input itself
    if it already is a triple of coordinates.
    """
    direction = np.asarray(direction, dtype=float)
    if direction.shape == (3,):
        return direction
    return _context().coordinates(direction)


def in_S(direction):  # pylint: disable=invalid-name
    """
    Whether the direction lies in S = {λ₂² ≤ 4λ₁λ₃, λ₁ ≥ 0, λ₃ ≥ 0}, the
    directions of W that are not a projection of a rank one tensor q⊗q.
    """
    lam1, lam2, lam3 = scoords(direction)
    return bool(lam1 >= 0 and lam3 >= 0 and lam2 ** 2 <= 4 * lam1 * lam3)


def _hankel_minors(values):
    """2×2 minors (a₁a₃ − a₂², a₁a₄ − a₂a₃, a₂a₄ − a₃²), times 2."""
    a1, a2, a3, a4 = values  # pylint: disable=invalid-name
    return 2 * np.array([a1 * a3 - a2 ** 2, a1 * a4 - a2 * a3, a2 * a4 - a3 ** 2])


def _hankel_jacobian(values):
    a1, a2, a3, a4 = values  # pylint: disable=invalid-name
    return 2 * np.array([[a3, -2 * a2, a1, 0],
                         [a4, -a3, -a2, a1],
                         [0, a4, -2 * a3, a2]])


def _hankel_sequence(m1, m2, m3):  # pylint: disable=invalid-name
    """
    A real sequence a₁…a₄ whose Hankel matrix [[a₁,a₂,a₃],[a₂,a₃,a₄]] has the
    2×2 minors (m1, m2, m3), or None if there is none.

    Such sequences are α ρᵏ + β σᵏ with ρ, σ the roots of m1 t² − m2 t + m3.
    """
    scale = max(abs(m1), abs(m2), abs(m3))
    if abs(m1) < abs(m3):
        reverse = _hankel_sequence(m3, m2, m1)
        return None if reverse is None else reverse[::-1]
    powers = np.arange(4)
    if abs(m1) <= SIGN_TOLERANCE * scale:
        return np.array([1.0, 0.0, 0.0, m2])
    disc = m2 ** 2 - 4 * m1 * m3
    if disc > SIGN_TOLERANCE * scale ** 2:
        rho, sigma = poly_roots([m3, -m2, m1]).real
        beta = m1 / (rho - sigma) ** 2
        return rho ** powers + beta * sigma ** powers
    if m1 > 0:
        return None
    if disc < -SIGN_TOLERANCE * scale ** 2:
        roots = poly_roots([m3, -m2, m1])
        rho = roots[np.argmax(roots.imag)]
        alpha = np.sqrt(-m1 / (4 * rho.imag ** 2))
        return 2 * alpha * np.real(rho ** powers)
    rho = m2 / (2 * m1)
    if abs(rho) <= SIGN_TOLERANCE:
        return np.array([0.0, np.sqrt(-m1), 0.0, 0.0])
    beta = np.sqrt(-m1) / abs(rho)
    return (1 + beta * powers) * rho ** powers


def _polish(values, lam, iterations=50):
    """Gauss-Newton on the minor equations."""
    target = np.linalg.norm(lam)
    for _ in range(iterations):
        residual = _hankel_minors(values) - lam
        if np.linalg.norm(residual) <= 1e-14 * target:
            break
        step = np.linalg.lstsq(_hankel_jacobian(values), -residual, rcond=None)[0]
        values = values + step
    return values, np.linalg.norm(_hankel_minors(values) - lam)


def rank1_complete(direction, seed=0, starts=20, strict=True):
    """
    A cubic q with pr_W(q⊗q) = w, if there is one.

    The coordinates of q⊗q are twice the 2×2 minors of the Hankel matrix of
    the coefficients of q, so the problem is a Hankel completion problem. It
    has a real solution exactly when w is not in S. The closed form solution
    is refined by Gauss-Newton; should that fail, Newton is restarted from
    seeded random starts.

    Parameters
    ----------
    direction : numpy.ndarray
        A 4×4 matrix or the coordinates of a nonzero w ∈ W.
    seed : int
    starts : int
        Number of random restarts.
    strict : bool
        Whether to raise when no completion is found for w ∉ S.

    Returns
    -------
    polyalg.Form or None
        None if w ∈ S.
    """
    lam = scoords(direction)
    if not np.any(lam):
        raise ValueError('Can not complete the zero direction')
    if in_S(lam):
        return None
    candidate = _hankel_sequence(*(lam / 2))
    tolerance = 1e-8 * np.linalg.norm(lam)
    if candidate is not None:
        candidate, error = _polish(candidate, lam)
    if candidate is None or error > tolerance:
        rng = np.random.default_rng(seed)
        for _ in range(starts):
            start = rng.standard_normal(4) * np.sqrt(np.linalg.norm(lam))
            candidate, error = _polish(start, lam)
            if error <= tolerance:
                break
        else:
            msg = 'No rank one completion found for λ = {}'.format(lam)
            if strict:
                raise ArithmeticError(msg)
            LOGGER.warning(msg)
            return None
    return Form(_context().basis, candidate)


@dataclass
class NormalConeQuadric:
    """
    taylor2 is the quadratic part of det(θ + Σ a_i R_i) in the coefficients
    a; dual_form = taylor2⁻¹ describes the normal cone at θ in the
    coordinates λ_i = tr(w R_i).
    """
    taylor2: np.ndarray
    dual_form: np.ndarray


def nc_quadric(form, theta, strict=True):  # pylint: disable=unused-argument
    """
    The quadric bounding the normal cone of the Gram spectrahedron at a rank
    2 point θ.

    The determinant is expanded symbolically with sympy and its quadratic
    part read off; at a rank 2 point the constant and linear parts vanish.

    Parameters
    ----------
    form : polyalg.Form
        The sextic; only used in messages.
    theta : numpy.ndarray
        A rank 2 point of its Gram spectrahedron.
    strict : bool
        Whether to raise if the lower order parts of the determinant do not
        vanish. Otherwise a warning is logged.

    Returns
    -------
    NormalConeQuadric

    Raises
    ------
    DegenerateFormError
        If the quadratic part is singular.
    """
    ctx = _context()
    symbols = sympy.symbols('a1:4')
    matrix = sympy.Matrix(np.asarray(theta, dtype=float).tolist())
    for symbol, kernel in zip(symbols, ctx.kernel_basis):
        matrix += symbol * sympy.Matrix(kernel.tolist())
    poly = sympy.Poly(sympy.expand(matrix.det(method='berkowitz')), *symbols)

    taylor = np.zeros((3, 3))
    lower = 0.0
    for monomial, coeff in poly.terms():
        degree = sum(monomial)
        if degree < 2:
            lower = max(lower, abs(float(coeff)))
        elif degree == 2:
            idxs = [idx for idx, power in enumerate(monomial) for _ in range(power)]
            idx, jdx = idxs
            if idx == jdx:
                taylor[idx, idx] = float(coeff)
            else:
                taylor[idx, jdx] = taylor[jdx, idx] = float(coeff) / 2
    scale = np.max(np.abs(taylor))
    if lower > 1e-6 * max(scale, 1):
        msg = 'θ does not look like a rank 2 point of {}'.format(form)
        if strict:
            raise ValueError(msg)
        LOGGER.warning(msg)
    values, _ = eigh(taylor)
    if scale == 0 or np.min(np.abs(values)) <= 1e-12 * scale:
        raise DegenerateFormError('The normal cone quadric at this rank 2 point of {} '
                                  'is degenerate'.format(form))
    return NormalConeQuadric(taylor, np.linalg.inv(taylor))


def _orient(quadric):
    """Scales a quadric of signature (1, 2) or (2, 1) to unit norm and signature (1, 2)."""
    quadric = quadric / np.linalg.norm(quadric)
    values, _ = eigh(quadric)
    if np.sum(values > 0) >= 2:
        quadric = -quadric
    return quadric


def _pencil_certificate(first, second, iterations=200):
    """
    min over s ∈ [0, 1] of the largest eigenvalue of (1 − s)A + sB. It is
    negative exactly if the cones {uᵀAu ≥ 0} and {uᵀBu ≥ 0} only meet in 0.
    The function is convex in s, so golden section search finds its minimum.
    """
    def largest(weight):
        return eigh((1 - weight) * first + weight * second)[0][0]

    ratio = (np.sqrt(5) - 1) / 2
    low, high = 0.0, 1.0
    left = high - ratio * (high - low)
    right = low + ratio * (high - low)
    f_left, f_right = largest(left), largest(right)
    for _ in range(iterations):
        if high - low < 1e-12:
            break
        if f_left < f_right:
            high, right, f_right = right, left, f_left
            left = high - ratio * (high - low)
            f_left = largest(left)
        else:
            low, left, f_left = left, right, f_right
            right = low + ratio * (high - low)
            f_right = largest(right)
    return min(f_left, f_right, largest(0.0), largest(1.0))


def _common_witness(first, second, samples, rng):
    """A sampled unit vector in both cones, or None."""
    points = rng.standard_normal((samples, 3))
    points /= np.linalg.norm(points, axis=1)[:, None]
    in_first = np.einsum('ki,ij,kj->k', points, first, points) >= 0
    in_second = np.einsum('ki,ij,kj->k', points, second, points) >= 0
    both = np.flatnonzero(in_first & in_second)
    return points[both[0]] if len(both) else None


def cones_disjoint(form, samples=DISJOINT_SAMPLES, seed=0):
    """
    Whether the normal cones at the three non-distinguished rank 2 points of
    `form` pairwise only meet in 0.

    Each pair is decided by the sign of a pencil certificate and checked
    against sampled witnesses; a witness overrides the certificate.

    Parameters
    ----------
    form : polyalg.Form
    samples : int
        Number of unit vectors sampled per pair.
    seed : int

    Returns
    -------
    bool
    """
    points = rank2_points(form).others()
    quadrics = [_orient(nc_quadric(form, point).dual_form) for point in points]
    rng = np.random.default_rng(seed)
    disjoint = True
    for first, second in itertools.combinations(quadrics, 2):
        certificate = _pencil_certificate(first, second)
        witness = _common_witness(first, second, samples, rng) if samples else None
        pair_disjoint = certificate < 0
        if pair_disjoint and witness is not None:
            LOGGER.warning('Sampled vector %s lies in two cones with a disjointness '
                           'certificate of %g', witness, certificate)
            pair_disjoint = False
        disjoint = disjoint and pair_disjoint
    return disjoint


def _fit_positive_multiple(computed, printed):
    """The least squares s with s·computed ≈ printed, and the relative error."""
    scale = np.sum(computed * printed) / np.sum(computed * computed)
    error = np.max(np.abs(scale * computed - printed)) / np.max(np.abs(printed))
    return scale, error


def lemma_check(samples=DISJOINT_SAMPLES, seed=0):
    """
    Recomputes the normal cone quadrics of the two sextics in LEMMA_ZEROS,
    matches them to the printed ones up to a positive factor, and decides
    disjointness.

    Returns
    -------
    list[dict]
        One entry per sextic, with keys 'zeros', 'matches' and 'disjoint'.
        Every match has the printed and computed matrix, the fitted scale and
        the relative error.
    """
    report = []
    for zeros, printed_group, form in zip(LEMMA_ZEROS, lemma_matrices(), lemma_sextics()):
        computed = [nc_quadric(form, point).dual_form
                    for point in rank2_points(form).others()]
        best = None
        for perm in itertools.permutations(range(3)):
            fits = [_fit_positive_multiple(computed[idx], printed)
                    for idx, printed in zip(perm, printed_group)]
            total = sum(error if scale > 0 else np.inf for scale, error in fits)
            if best is None or total < best[0]:
                best = (total, perm, fits)
        _, perm, fits = best
        matches = [{'printed': printed.tolist(), 'computed': computed[idx].tolist(),
                    'scale': float(scale), 'relative_error': float(error)}
                   for idx, printed, (scale, error) in zip(perm, printed_group, fits)]
        report.append({'zeros': [[zero.real, zero.imag] for zero in zeros],
                       'matches': matches,
                       'disjoint': cones_disjoint(form, samples=samples, seed=seed)})
    return report
