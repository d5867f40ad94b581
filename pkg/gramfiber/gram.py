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
Gram map contexts: the map μ from symmetric matrices to forms, its kernel W,
the splitting Sym² = V ⊕ W, and the face and normal cone dimension formulas
for a subspace U of forms.
"""

from dataclasses import dataclass
from fractions import Fraction
import functools
import logging
import math

import numpy as np
import sympy

from . import KERNELS
from .linalg import (RANK_TOLERANCE, OPTIMIZER_RANK_TOLERANCE, eigh, numeric_rank,
                     null_space, orthonormal_columns, rational_solve)
from .polyalg import (Form, apolarity_weights, check_independent, monomial_basis,
                      prod_space_dims)
from .sdp import DEFAULT_SETTINGS, SdpStatus, SliceProblem, solve

LOGGER = logging.getLogger(__name__)

MAX_VARIABLES = 3
MAX_DEGREE = 6


def _svec_pairs(size):
    """Index pairs (i, j), i ≤ j, in row major order."""
    return [(idx, jdx) for idx in range(size) for jdx in range(idx, size)]


def svec(matrix):
    """The upper triangle of a symmetric matrix, row by row."""
    matrix = np.asarray(matrix)
    return np.array([matrix[idx, jdx] for idx, jdx in _svec_pairs(len(matrix))],
                    dtype=matrix.dtype)


class GramContext:
    """
    Precomputed data of the Gram map μ: Sym²R[x]_d → R[x]_2d, with
    μ(G) = Σ G_ij m_i m_j.

    Two pairings on Sym² are in use. Binary forms use the trace pairing
    tr(A B); ternary forms use the apolarity pairing tr(M A M B). Coordinates
    of W are always the pairings λ_i = ⟨θ, B_i⟩ with the coordinate basis B_i,
    which is the kernel basis for the trace pairing and half of it (the
    symmetrized tensors) for the apolarity pairing.

    Attributes
    ----------
    n : int
    d : int
    basis : polyalg.MonomialOrder
        Monomials of degree d, N of them.
    target : polyalg.MonomialOrder
        Monomials of degree 2d, M of them.
    mu : numpy.ndarray
        The integer M×N(N+1)/2 matrix of μ acting on :func:`svec`.
    kernel_basis : list[numpy.ndarray]
        Integer N×N matrices spanning W = ker μ.
    pairing : str
        'trace' or 'apolar'.
    """
    def __init__(self, n, d):  # pylint: disable=invalid-name
        if n < 1 or d < 1 or n > MAX_VARIABLES or 2 * d > MAX_DEGREE:
            raise ValueError('Gram contexts are available for at most {} variables '
                             'and forms of degree at most {}, not n={}, 2d={}'
                             .format(MAX_VARIABLES, MAX_DEGREE, n, 2 * d))
        self.n = n  # pylint: disable=invalid-name
        self.d = d  # pylint: disable=invalid-name
        self.basis = monomial_basis(n, d)
        self.target = monomial_basis(n, 2 * d)
        self.pairing = 'trace' if n <= 2 else 'apolar'

        size = len(self.basis)
        pairs = _svec_pairs(size)
        mu = np.zeros((len(self.target), len(pairs)), dtype=int)
        for col, (idx, jdx) in enumerate(pairs):
            exponent = tuple(a + b for a, b in zip(self.basis.exponents[idx],
                                                   self.basis.exponents[jdx]))
            mu[self.target.index(exponent), col] = 1 if idx == jdx else 2
        self.mu = mu
        self.kernel_basis = self._find_kernel()
        self.kernel_array = np.array(self.kernel_basis, dtype=float).reshape(-1, size, size)

        if self.pairing == 'apolar':
            self._weights = apolarity_weights(self.basis)
            self._exact_weights = apolarity_weights(self.basis, exact=True)
            self._scale = Fraction(1, 2)
        else:
            self._weights = np.ones(size)
            self._exact_weights = np.array([Fraction(1)] * size, dtype=object)
            self._scale = Fraction(1)
        self.coordinate_array = self.kernel_array * float(self._scale)
        self.coordinate_gram = np.array(
            [[self.pair(b_i, b_j) for b_j in self.coordinate_array]
             for b_i in self.coordinate_array], dtype=float).reshape(self.dim_w, self.dim_w)
        self.kernel_gram = np.array(
            [[self.pair(r_i, r_j) for r_j in self.kernel_array]
             for r_i in self.kernel_array], dtype=float).reshape(self.dim_w, self.dim_w)
        for array in (self.mu, self.kernel_array, self.coordinate_array,
                      self.coordinate_gram, self.kernel_gram):
            array.setflags(write=False)

    def _find_kernel(self):
        """
        The kernel of μ as integer matrices. Where a canonical basis is known
        it is checked against the exact nullspace and returned instead.
        """
        size = len(self.basis)
        pairs = _svec_pairs(size)
        kernel = []
        for vector in sympy.Matrix(self.mu.tolist()).nullspace():
            lcm = functools.reduce(sympy.ilcm, [sympy.fraction(entry)[1] for entry in vector], 1)
            ints = [int(entry * lcm) for entry in vector]
            gcd = functools.reduce(math.gcd, ints, 0) or 1
            matrix = np.zeros((size, size), dtype=int)
            for (idx, jdx), value in zip(pairs, ints):
                matrix[idx, jdx] = matrix[jdx, idx] = value // gcd
            kernel.append(matrix)

        known = KERNELS.get((self.n, self.d))
        if known is None:
            return kernel
        known = [np.array(matrix, dtype=int) for matrix in known]
        for matrix in known:
            if np.any(self.mu @ svec(matrix)):
                raise ValueError('A stored kernel matrix for n={}, d={} is not '
                                 'in the kernel of the Gram map'.format(self.n, self.d))
        stacked = np.array([svec(matrix) for matrix in known + kernel], dtype=float)
        if len(known) != len(kernel) or numeric_rank(stacked) != len(kernel):
            raise ValueError('The stored kernel matrices for n={}, d={} do not span '
                             'the kernel of the Gram map'.format(self.n, self.d))
        return known

    @property
    def N(self):  # pylint: disable=invalid-name
        """dim R[x]_d"""
        return len(self.basis)

    @property
    def M(self):  # pylint: disable=invalid-name
        """dim R[x]_2d"""
        return len(self.target)

    @property
    def dim_sym2(self):
        return self.N * (self.N + 1) // 2

    @property
    def dim_w(self):
        return len(self.kernel_basis)

    def __repr__(self):
        return 'GramContext(n={}, d={})'.format(self.n, self.d)

    def __reduce__(self):
        return make_context, (self.n, self.d)

    def _check_shape(self, theta):
        theta = np.asarray(theta)
        if theta.shape != (self.N, self.N):
            raise ValueError('Expected a {0}x{0} matrix for {1}, got shape {2}'
                             .format(self.N, self, theta.shape))
        return theta

    def pair(self, first, second):
        """The scalar product of this context on symmetric N×N matrices."""
        first = self._check_shape(first)
        second = self._check_shape(second)
        exact = object in (first.dtype, second.dtype)
        weights = self._exact_weights if exact else self._weights
        return (weights[:, None] * first * weights[None, :] * second.T).sum()

    def mu_apply(self, theta):
        """μ(θ) as a Form of degree 2d."""
        theta = self._check_shape(theta)
        coeffs = self.mu.astype(theta.dtype) @ svec(theta) if theta.dtype == object \
            else self.mu @ svec(theta).astype(float)
        return Form(self.target, coeffs)

    def v_rep(self, form, exact=None):
        """
        The trace-orthogonal right inverse of μ: entry (i, j) is the
        coefficient of m_i m_j in `form`, divided by the number of ordered
        pairs (k, l) with m_k m_l = m_i m_j.

        Parameters
        ----------
        form : polyalg.Form
            A form of degree 2d.
        exact : bool or None
            Whether to compute with Fractions; defaults to whether `form`
            is exact.

        Returns
        -------
        numpy.ndarray
        """
        if form.order != self.target:
            raise ValueError('Expected a form of degree {} in {} variables'
                             .format(2 * self.d, self.n))
        exact = form.exact if exact is None else exact
        counts = {}
        for exp_i in self.basis.exponents:
            for exp_j in self.basis.exponents:
                key = tuple(a + b for a, b in zip(exp_i, exp_j))
                counts[key] = counts.get(key, 0) + 1
        out = np.empty((self.N, self.N), dtype=object if exact else float)
        for idx, exp_i in enumerate(self.basis.exponents):
            for jdx, exp_j in enumerate(self.basis.exponents):
                key = tuple(a + b for a, b in zip(exp_i, exp_j))
                coeff = form.coeffs[self.target.index(key)]
                out[idx, jdx] = (Fraction(coeff) / counts[key] if exact
                                 else float(coeff) / counts[key])
        return out

    def coordinates(self, theta):
        """
        λ_i = ⟨θ, B_i⟩ for the coordinate basis B_i. Exact matrices give
        exact coordinates.
        """
        theta = self._check_shape(theta)
        if theta.dtype == object:
            return np.array([self.pair(theta, np.asarray(matrix, dtype=object) * self._scale)
                             for matrix in self.kernel_basis], dtype=object)
        return np.array([self.pair(theta, matrix) for matrix in self.coordinate_array])

    def from_coordinates(self, lam):
        """The element of W with coordinates `lam`."""
        lam = np.asarray(lam)
        if lam.shape != (self.dim_w,):
            raise ValueError('{} has {} coordinates, got {}'
                             .format(self, self.dim_w, lam.shape))
        if lam.dtype == object:
            exact_basis = [np.asarray(matrix, dtype=object) * self._scale
                           for matrix in self.kernel_basis]
            gram = np.array([[self.pair(b_i, b_j) for b_j in exact_basis]
                             for b_i in exact_basis], dtype=object)
            coeffs = rational_solve(gram, lam).particular
            out = np.array([[Fraction(0)] * self.N for _ in range(self.N)], dtype=object)
            for coeff, matrix in zip(coeffs, exact_basis):
                out = out + coeff * matrix
            return out
        coeffs = np.linalg.solve(self.coordinate_gram, lam.astype(float))
        return np.tensordot(coeffs, self.coordinate_array, axes=1)

    def pair_coordinates(self, first, second):
        """⟨w, w'⟩ for w, w' ∈ W given by their coordinates."""
        return float(np.asarray(first, dtype=float)
                     @ np.linalg.solve(self.coordinate_gram, np.asarray(second, dtype=float)))

    def expansion(self, theta):
        """
        The coefficients a_i of the W-component Σ a_i R_i of θ over the
        kernel basis.
        """
        theta = self._check_shape(theta)
        if not self.dim_w:
            return np.zeros(0)
        rhs = np.array([self.pair(theta, matrix) for matrix in self.kernel_array])
        return np.linalg.solve(self.kernel_gram, rhs)

    def w_part(self, theta):
        """The orthogonal projection of θ onto W."""
        return np.tensordot(self.expansion(theta), self.kernel_array, axes=1)

    def v_part(self, theta):
        """The orthogonal projection of θ onto V = W^⊥."""
        return np.asarray(theta, dtype=float) - self.w_part(theta)

    def trace_objective(self, direction):
        """
        The matrix C with tr(C X) = ⟨w, X⟩ for all X, where w is the
        W-component of `direction`.
        """
        direction = self.w_part(direction)
        weights = self._weights
        return weights[:, None] * direction * weights[None, :]


@functools.lru_cache(maxsize=None)
def make_context(n, d):  # pylint: disable=invalid-name
    """
    Builds the (cached, immutable) Gram context for forms of degree 2d in n
    variables.

    Raises
    ------
    ValueError
        For more than 3 variables or degree above 6.
    """
    LOGGER.debug('Building Gram context for n=%d, d=%d', n, d)
    return GramContext(n, d)


def pr_W(theta, ctx):  # pylint: disable=invalid-name
    """
    The coefficients of the W-component of θ over ``ctx.kernel_basis``;
    Σ pr_W(θ)_i R_i is the orthogonal projection of θ onto W.
    """
    return ctx.expansion(theta)


@dataclass
class FaceReport:
    """
    The face of a Gram spectrahedron exposed by a direction, and the normal
    cone at its relative interior.

    Attributes
    ----------
    optimizer : numpy.ndarray
        The maximal rank optimizer.
    rank : int
    face_dim : int
        dim Sym²U − dim U², U the image of the optimizer.
    nc_dim_ambient : int
        Normal cone dimension in Sym²R[x]_d.
    nc_dim_w : int
        Normal cone dimension within W.
    u_basis : list[polyalg.Form]
    """
    optimizer: np.ndarray
    rank: int
    face_dim: int
    nc_dim_ambient: int
    nc_dim_w: int
    u_basis: list

    def as_dict(self):
        return {'optimizer': self.optimizer.tolist(), 'rank': self.rank,
                'face_dim': self.face_dim, 'nc_dim_ambient': self.nc_dim_ambient,
                'nc_dim_w': self.nc_dim_w,
                'u_basis': [form.coeffs.tolist() for form in self.u_basis]}


def image_basis(matrix, ctx, tol=OPTIMIZER_RANK_TOLERANCE):
    """
    The image of a psd Gram matrix as forms: one form per eigenvector with an
    eigenvalue above `tol` times the largest one.
    """
    values, vectors = eigh(matrix)
    biggest = np.max(np.abs(values))
    if biggest == 0:
        return []
    rank = int(np.sum(values > tol * biggest))
    return [Form(ctx.basis, vectors[:, idx]) for idx in range(rank)]


def face(form, direction, ctx, settings=DEFAULT_SETTINGS, tol=OPTIMIZER_RANK_TOLERANCE):
    """
    The face of the Gram spectrahedron of `form` minimizing ⟨direction, ·⟩.
    Only the W-component of `direction` matters.

    Parameters
    ----------
    form : polyalg.Form
        A sum of squares of degree 2d.
    direction : numpy.ndarray
        A nonzero N×N symmetric matrix.
    ctx : GramContext
    settings : sdp.SolverSettings
    tol : float
        Relative eigenvalue threshold for the rank of the optimizer.

    Returns
    -------
    FaceReport

    Raises
    ------
    ValueError
        If `form` is not a sum of squares, or the W-component of `direction`
        vanishes.
    sdp.SolverError
        If the solver breaks down.
    """
    w_direction = ctx.w_part(direction)
    if not np.any(np.abs(w_direction) > 1e-14 * max(1, np.abs(direction).max())):
        raise ValueError('The direction has no component in W')
    problem = SliceProblem.from_context(ctx, form, w_direction, settings)
    solution = solve(problem)
    if solution.status == SdpStatus.INFEASIBLE:
        raise ValueError('The form {} is not a sum of squares'.format(form))
    u_basis = image_basis(solution.X, ctx, tol=tol)
    rank = len(u_basis)
    dim_u2, _, _ = prod_space_dims(u_basis, tol=tol)
    face_dim = rank * (rank + 1) // 2 - dim_u2
    ambient, in_w = nc_dim(u_basis, ctx, tol=tol)
    LOGGER.debug('Face of rank %d, dimension %d, normal cone dimension %d',
                 rank, face_dim, in_w)
    return FaceReport(solution.X, rank, face_dim, ambient, in_w, u_basis)


def nc_dim(u_basis, ctx, tol=RANK_TOLERANCE):
    """
    The dimension of the normal cone of the Gram spectrahedra at a Gram
    matrix with image U, from the multiplication map:
    dim Sym²R[x]_d − nullity(dφ(U)) + binom(r, 2).

    Returns
    -------
    tuple[int, int]
        The dimension in Sym²R[x]_d and within W.
    """
    _, _, nullity = prod_space_dims(u_basis, tol=tol)
    size = len(u_basis)
    ambient = ctx.dim_sym2 - nullity + math.comb(size, 2)
    return ambient, ambient - ctx.M


def nc_dim_oracle(u_basis, ctx, tol=RANK_TOLERANCE):
    """
    The ambient normal cone dimension computed directly as
    dim Sym²R[x]_d − dim(ker μ ∩ Sym(U⊗R[x]_d)).
    """
    matrix = check_independent(u_basis, tol=tol)
    spanning = []
    for vector in matrix:
        for idx in range(ctx.N):
            unit = np.zeros(ctx.N)
            unit[idx] = 1
            spanning.append(svec(np.outer(vector, unit) + np.outer(unit, vector)))
    spanning = np.array(spanning).T
    dim_s = numeric_rank(spanning, tol=tol)
    dim_image = numeric_rank(ctx.mu @ spanning, tol=tol)
    return ctx.dim_sym2 - (dim_s - dim_image)


def face_subspace(u_basis, ctx, tol=RANK_TOLERANCE):
    """
    A basis of {K ∈ W : im K ⊆ U}, the directions in which a Gram matrix
    with image U can move within its Gram spectrahedron.

    Returns
    -------
    list[numpy.ndarray]
    """
    check_independent(u_basis, tol=tol)
    frame = orthonormal_columns(np.array([form.coeffs for form in u_basis], dtype=float).T,
                                tol=tol)
    size = frame.shape[1]
    pairs = _svec_pairs(size)
    images = []
    for idx, jdx in pairs:
        small = np.zeros((size, size))
        small[idx, jdx] = small[jdx, idx] = 1
        images.append(ctx.mu @ svec(frame @ small @ frame.T))
    kernel = null_space(np.array(images).T, tol=tol)
    out = []
    for vector in kernel.T:
        small = np.zeros((size, size))
        for value, (idx, jdx) in zip(vector, pairs):
            small[idx, jdx] = small[jdx, idx] = value
        out.append(frame @ small @ frame.T)
    return out


def context_dump(ctx):
    """A JSON serializable description of `ctx`."""
    return {
        'n': ctx.n, 'd': ctx.d, 'N': ctx.N, 'M': ctx.M,
        'dim_sym2': ctx.dim_sym2, 'dim_w': ctx.dim_w,
        'pairing': ctx.pairing,
        'monomials': [list(exponent) for exponent in ctx.basis.exponents],
        'mu': ctx.mu.tolist(),
        'kernel': [matrix.tolist() for matrix in ctx.kernel_basis],
        'kernel_norms': [float(ctx.kernel_gram[idx, idx]) for idx in range(ctx.dim_w)],
        'coordinate_norms': [float(ctx.coordinate_gram[idx, idx]) for idx in range(ctx.dim_w)],
    }
