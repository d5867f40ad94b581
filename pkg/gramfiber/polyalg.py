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
Homogeneous polynomial arithmetic on dense coefficient vectors: monomial
orders, the apolarity pairing, products and the rank computations on products
of subspaces.
"""

from dataclasses import dataclass
from fractions import Fraction
import functools
import logging
import math

import numpy as np

from .linalg import RANK_TOLERANCE, numeric_rank, null_space, rational_solve

LOGGER = logging.getLogger(__name__)


class DependentBasisError(ValueError):
    """
    Raised when a sequence of forms that should be linearly independent is
    not. The numerical rank that was found is available as `rank`.
    """
    def __init__(self, rank, size):
        self.rank = rank
        self.size = size
        super().__init__('The {} forms given span a space of dimension {} only'
                         .format(size, rank))


def _compositions(n, d):
    """
    Yields all exponent vectors of length `n` summing to `d` in
    lexicographically descending order.
    """
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(n - 1, d - first):
            yield (first,) + rest


@dataclass(frozen=True)
class MonomialOrder:
    """
    An ordered monomial basis of the forms of degree `d` in `n` variables.
    """
    n: int
    d: int
    exponents: tuple

    def __len__(self):
        return len(self.exponents)

    @functools.cached_property
    def positions(self):
        """dict mapping an exponent tuple to its index in this order."""
        return {exponent: idx for idx, exponent in enumerate(self.exponents)}

    def index(self, exponent):
        """
        Returns the position of `exponent` in this order.

        Raises
        ------
        KeyError
            If `exponent` is not a monomial of this order.
        """
        return self.positions[tuple(exponent)]

    def __str__(self):
        return ', '.join(format_monomial(exponent) for exponent in self.exponents)


@functools.lru_cache(maxsize=None)
def monomial_basis(n, d):
    """
    Creates the monomial order used for forms of degree `d` in `n` variables.

    The order is graded lexicographic, with one exception: ternary quadrics
    are ordered as pure squares first, then mixed terms,
    i.e. x², y², z², xy, xz, yz.

    Parameters
    ----------
    n : int
        The number of variables. Must be at least 1.
    d : int
        The degree. Must be at least 0.

    Returns
    -------
    MonomialOrder
    """
    if n < 1 or d < 0:
        raise ValueError('Can not make a monomial basis for {} variables in '
                         'degree {}'.format(n, d))
    exponents = tuple(_compositions(n, d))
    if (n, d) == (3, 2):
        exponents = ((2, 0, 0), (0, 2, 0), (0, 0, 2),
                     (1, 1, 0), (1, 0, 1), (0, 1, 1))
    return MonomialOrder(n, d, exponents)


_VARIABLES = 'xyzw'
_SUPERSCRIPTS = str.maketrans('0123456789', '⁰¹²³⁴⁵⁶⁷⁸⁹')


def format_monomial(exponent):
    """
    Formats an exponent vector as a human readable monomial, e.g. x²y.
    """
    out = ''
    for var, power in zip(_VARIABLES, exponent):
        if power == 1:
            out += var
        elif power:
            out += var + str(power).translate(_SUPERSCRIPTS)
    return out or '1'


@dataclass(frozen=True)
class Form:
    """
    A homogeneous polynomial given by its coefficients in a `MonomialOrder`.

    The coefficients are a numpy array; it has dtype float for numerical
    work and dtype object, holding :class:`fractions.Fraction`, for exact
    work.
    """
    order: MonomialOrder
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = self.coeffs
        if not isinstance(coeffs, np.ndarray) or coeffs.dtype != object:
            coeffs = np.asarray(coeffs)
            if coeffs.dtype.kind not in 'fO':
                coeffs = coeffs.astype(float)
        if coeffs.shape != (len(self.order),):
            raise ValueError('A form in this order needs {} coefficients, not {}'
                             .format(len(self.order), coeffs.shape))
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def n(self):  # pylint: disable=invalid-name
        return self.order.n

    @property
    def degree(self):
        return self.order.d

    @property
    def exact(self):
        """True if the coefficients are exact rationals."""
        return self.coeffs.dtype == object

    def __add__(self, other):
        _check_same_order(self, other)
        return Form(self.order, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same_order(self, other)
        return Form(self.order, self.coeffs - other.coeffs)

    def __neg__(self):
        return Form(self.order, -self.coeffs)

    def scale(self, factor):
        return Form(self.order, self.coeffs * factor)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.order == other.order and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __str__(self):
        terms = []
        for exponent, coeff in zip(self.order.exponents, self.coeffs):
            if coeff != 0:
                terms.append('{}*{}'.format(coeff, format_monomial(exponent)))
        return ' + '.join(terms) or '0'


def _check_same_order(first, second):
    if first.order != second.order:
        raise ValueError('The forms are written in different monomial orders: '
                         '{} and {}'.format(first.order, second.order))


def as_fractions(values):
    """
    Converts a sequence (or nested sequence) of numbers or "p/q" strings to a
    numpy object array of :class:`fractions.Fraction`.
    """
    array = np.array(values, dtype=object)
    out = np.empty(array.shape, dtype=object)
    for idx, value in np.ndenumerate(array):
        out[idx] = Fraction(value)
    return out


def form_from_json(data):
    """
    Creates a Form from its JSON representation::

        {"n": 3, "d": 4, "coeffs": {"400": 1.0, "220": 2.5}}

    Keys of "coeffs" are exponent strings; one digit per variable, or comma
    separated for exponents above 9. Missing keys are 0. Values that are
    strings are read as exact rationals, and make the whole form exact.

    Parameters
    ----------
    data : dict

    Returns
    -------
    Form
    """
    try:
        order = monomial_basis(int(data['n']), int(data['d']))
        coeffs_in = data.get('coeffs', {})
    except (KeyError, TypeError, AttributeError) as error:
        raise ValueError('The form {} is malformatted'.format(data)) from error
    if not isinstance(coeffs_in, dict):
        raise ValueError('The coefficients of {} are not a mapping of exponents'
                         .format(data))
    exact = any(isinstance(value, str) for value in coeffs_in.values())
    if exact:
        coeffs = np.array([Fraction(0)] * len(order), dtype=object)
    else:
        coeffs = np.zeros(len(order))
    for key, value in coeffs_in.items():
        exponent = tuple(int(part) for part in (key.split(',') if ',' in key else key))
        try:
            idx = order.index(exponent)
        except KeyError as error:
            raise ValueError('{} is not a monomial of degree {} in {} variables'
                             .format(key, order.d, order.n)) from error
        coeffs[idx] = Fraction(value) if exact else float(value)
    return Form(order, coeffs)


def form_to_json(form):
    """
    The inverse of :func:`form_from_json`. Zero coefficients are left out;
    exact coefficients are written as "p/q" strings.
    """
    coeffs = {}
    wide = any(power > 9 for exponent in form.order.exponents for power in exponent)
    for exponent, coeff in zip(form.order.exponents, form.coeffs):
        if coeff == 0:
            continue
        key = ','.join(map(str, exponent)) if wide else ''.join(map(str, exponent))
        coeffs[key] = str(coeff) if form.exact else float(coeff)
    return {'n': form.n, 'd': form.degree, 'coeffs': coeffs}


def apolarity_weights(order, exact=False):
    """
    The diagonal of the Gram matrix of the apolarity pairing in `order`:
    ⟨x^α, x^β⟩ = δ_αβ α!/d!.

    Parameters
    ----------
    order : MonomialOrder
    exact : bool
        Whether to return :class:`fractions.Fraction` instead of floats.

    Returns
    -------
    numpy.ndarray
    """
    d_fact = math.factorial(order.d)
    weights = [Fraction(math.prod(math.factorial(power) for power in exponent), d_fact)
               for exponent in order.exponents]
    if exact:
        return np.array(weights, dtype=object)
    return np.array([float(weight) for weight in weights])


def apolarity_matrix(order, exact=False):
    """The (diagonal) Gram matrix of the apolarity pairing in `order`."""
    weights = apolarity_weights(order, exact=exact)
    if exact:
        out = np.array([[Fraction(0)] * len(order) for _ in order.exponents], dtype=object)
        for idx, weight in enumerate(weights):
            out[idx, idx] = weight
        return out
    return np.diag(weights)


def apolarity(f, g):
    """
    The apolarity pairing ⟨f, g⟩ = (1/d!) f(∂)g of two forms of equal degree.

    Parameters
    ----------
    f : Form
    g : Form

    Returns
    -------
    float or fractions.Fraction

    Raises
    ------
    ValueError
        If the forms are written in different orders.
    """
    _check_same_order(f, g)
    exact = f.exact or g.exact
    weights = apolarity_weights(f.order, exact=exact)
    total = Fraction(0) if exact else 0.0
    # Elementwise products commute, so the sum is the same for (g, f).
    for c_f, c_g, weight in zip(f.coeffs, g.coeffs, weights):
        total += c_f * c_g * weight
    return total


def sym2_pair(tensor_a, tensor_b, order):
    """
    The scalar product on Sym² of forms of degree d induced by apolarity,
    ⟨p⊗p, q⊗q⟩ = ⟨p, q⟩². A symmetric matrix G stands for Σ G_ij m_i⊗m_j, so
    the pairing is tr(M A M B) with M the apolarity Gram matrix of `order`.

    Parameters
    ----------
    tensor_a : numpy.ndarray
    tensor_b : numpy.ndarray
    order : MonomialOrder
        The monomial order of the degree d forms.

    Returns
    -------
    float or fractions.Fraction
    """
    tensor_a = np.asarray(tensor_a)
    tensor_b = np.asarray(tensor_b)
    size = len(order)
    if tensor_a.shape != (size, size) or tensor_b.shape != (size, size):
        raise ValueError('Both tensors must be {0}x{0}, got {1} and {2}'
                         .format(size, tensor_a.shape, tensor_b.shape))
    exact = object in (tensor_a.dtype, tensor_b.dtype)
    weights = apolarity_weights(order, exact=exact)
    scaled = weights[:, None] * tensor_a * weights[None, :]
    return (scaled * tensor_b.T).sum()


def tensor_square(form):
    """The matrix c·cᵀ of q⊗q, for q with coefficient vector c."""
    return np.outer(form.coeffs, form.coeffs)


def multiply(f, g):
    """
    The product of two forms in the same number of variables.

    Returns
    -------
    Form
        Written in ``monomial_basis(n, deg f + deg g)``.
    """
    if f.n != g.n:
        raise ValueError('Can not multiply forms in {} and {} variables'
                         .format(f.n, g.n))
    order = monomial_basis(f.n, f.degree + g.degree)
    if f.exact or g.exact:
        coeffs = np.array([Fraction(0)] * len(order), dtype=object)
    else:
        coeffs = np.zeros(len(order))
    for exp_f, c_f in zip(f.order.exponents, f.coeffs):
        if c_f == 0:
            continue
        for exp_g, c_g in zip(g.order.exponents, g.coeffs):
            if c_g == 0:
                continue
            exponent = tuple(a + b for a, b in zip(exp_f, exp_g))
            coeffs[order.index(exponent)] += c_f * c_g
    return Form(order, coeffs)


def monomial_form(order, exponent, coeff=1.0):
    """The form `coeff`·x^exponent in `order`."""
    coeffs = np.zeros(len(order))
    coeffs[order.index(exponent)] = coeff
    return Form(order, coeffs)


def evaluate(form, points):
    """
    Evaluates `form` at each row of `points`.

    Parameters
    ----------
    form : Form
    points : numpy.ndarray
        Shape (k, n).

    Returns
    -------
    numpy.ndarray
        Shape (k,).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exponents = np.array(form.order.exponents)
    monomials = np.prod(points[:, None, :] ** exponents[None, :, :], axis=2)
    return monomials @ np.asarray(form.coeffs, dtype=float)


def quadric_matrix(form):
    """
    The symmetric n×n matrix Q of a quadratic form q, so that q(x) = xᵀQx.
    Exact forms give an exact matrix.
    """
    if form.degree != 2:
        raise ValueError('Only quadratic forms have an associated matrix, '
                         'this form has degree {}'.format(form.degree))
    half = Fraction(1, 2) if form.exact else 0.5
    size = form.n
    out = np.empty((size, size), dtype=object if form.exact else float)
    for exponent, coeff in zip(form.order.exponents, form.coeffs):
        idxs = [idx for idx, power in enumerate(exponent) for _ in range(power)]
        idx, jdx = idxs
        if idx == jdx:
            out[idx, idx] = coeff
        else:
            out[idx, jdx] = out[jdx, idx] = coeff * half
    return out


def quadric_from_matrix(matrix, order=None):
    """
    The quadratic form xᵀQx of a symmetric matrix. The inverse of
    :func:`quadric_matrix`.
    """
    matrix = np.asarray(matrix)
    size = matrix.shape[0]
    if order is None:
        order = monomial_basis(size, 2)
    coeffs = np.empty(len(order), dtype=matrix.dtype if matrix.dtype == object else float)
    for pos, exponent in enumerate(order.exponents):
        idxs = [idx for idx, power in enumerate(exponent) for _ in range(power)]
        idx, jdx = idxs
        coeffs[pos] = matrix[idx, jdx] if idx == jdx else 2 * matrix[idx, jdx]
    return Form(order, coeffs)


def coefficient_matrix(forms):
    """Stacks the coefficient vectors of `forms` as rows."""
    forms = list(forms)
    if not forms:
        raise ValueError('Need at least one form')
    for form in forms[1:]:
        _check_same_order(forms[0], form)
    dtype = object if any(form.exact for form in forms) else float
    return np.array([form.coeffs for form in forms], dtype=dtype)


def apolar_complement(forms, exact=False):
    """
    A basis of span(`forms`)^⊥ with respect to the apolarity pairing.

    Parameters
    ----------
    forms : collections.abc.Sequence[Form]
    exact : bool
        If True, the basis is computed with exact rational elimination and
        the forms must have rational coefficients. Otherwise the basis is
        orthonormal in coefficient space.

    Returns
    -------
    list[Form]
    """
    forms = list(forms)
    order = forms[0].order
    rows = coefficient_matrix(forms)
    if exact:
        rows = rows * apolarity_weights(order, exact=True)[None, :]
        rhs = np.array([[Fraction(0)] for _ in forms], dtype=object)
        solution = rational_solve(rows, rhs)
        return [Form(order, vector) for vector in solution.nullspace]
    rows = rows.astype(float) * apolarity_weights(order)[None, :]
    kernel = null_space(rows)
    return [Form(order, vector) for vector in kernel.T]


def check_independent(forms, tol=RANK_TOLERANCE):
    """
    Raises :class:`DependentBasisError` if `forms` are linearly dependent.

    Returns
    -------
    numpy.ndarray
        The coefficient matrix of `forms`, one row per form.
    """
    matrix = coefficient_matrix(forms).astype(float)
    rank = numeric_rank(matrix, tol=tol)
    if rank < len(matrix):
        raise DependentBasisError(rank, len(matrix))
    return matrix


def prod_space_dims(u_basis, tol=RANK_TOLERANCE):
    """
    Dimensions of the product spaces of a subspace U of forms of degree d.

    With q_1, ..., q_r a basis of U, this computes the dimension of
    U² = span{q_i q_j}, and the rank and nullity of the multiplication map
    dφ(U): (p_1, ..., p_r) ↦ 2 Σ p_i q_i from r copies of all forms of
    degree d to the forms of degree 2d.

    Parameters
    ----------
    u_basis : collections.abc.Sequence[Form]
        A linearly independent set of forms of the same degree.
    tol : float
        Relative singular value threshold for the rank decisions.

    Returns
    -------
    tuple[int, int, int]
        dim U², dim UV (the rank of dφ(U)) and the nullity of dφ(U).

    Raises
    ------
    DependentBasisError
        If `u_basis` is linearly dependent.
    """
    u_basis = [Form(form.order, np.asarray(form.coeffs, dtype=float)) for form in u_basis]
    check_independent(u_basis, tol=tol)
    order = u_basis[0].order
    products = []
    for idx, form_i in enumerate(u_basis):
        for form_j in u_basis[idx:]:
            products.append(multiply(form_i, form_j).coeffs)
    dim_u2 = numeric_rank(np.array(products), tol=tol)

    images = []
    for form in u_basis:
        for exponent in order.exponents:
            images.append(2 * multiply(monomial_form(order, exponent), form).coeffs)
    dim_uv = numeric_rank(np.array(images), tol=tol)
    nullity = len(u_basis) * len(order) - dim_uv
    LOGGER.debug('Product space dimensions for r=%d: dim U²=%d, dim UV=%d',
                 len(u_basis), dim_u2, dim_uv)
    return dim_u2, dim_uv, nullity
