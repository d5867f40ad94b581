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
Assertion helpers for matrices, forms and subspaces, used by the tests.
"""

import numpy as np

from .linalg import numeric_rank
from .polyalg import Form, monomial_basis


def make_form(n, d, coeffs):  # pylint: disable=invalid-name
    """A float Form of degree `d` in `n` variables."""
    return Form(monomial_basis(n, d), np.asarray(coeffs, dtype=float))


def assertEqualMatrices(first, second, atol=1e-10, rtol=0):  # pylint: disable=invalid-name
    """
    Asserts that two matrices are equal entrywise up to `atol` + `rtol`·max|second|.
    """
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    assert first.shape == second.shape, 'Shapes {} and {} differ'.format(first.shape,
                                                                         second.shape)
    tolerance = atol + rtol * (np.max(np.abs(second)) if second.size else 0)
    diff = np.abs(first - second)
    if np.all(diff <= tolerance):
        return
    worst = np.unravel_index(np.argmax(diff), diff.shape)
    raise AssertionError('Matrices differ by {} at {}: {} is not {}'
                         .format(diff[worst], worst, first[worst], second[worst]))


def assertEqualForms(first, second, atol=1e-10):  # pylint: disable=invalid-name
    """Asserts two forms are in the same order with (nearly) equal coefficients."""
    assert first.order == second.order, 'Forms in orders {} and {}'.format(first.order,
                                                                           second.order)
    assertEqualMatrices(first.coeffs, second.coeffs, atol=atol)


def assertPositiveMultiple(first, second, rtol=1e-8):  # pylint: disable=invalid-name
    """
    Asserts that `first` = c·`second` for some c > 0, and returns c.
    """
    first = np.asarray(first, dtype=float).ravel()
    second = np.asarray(second, dtype=float).ravel()
    scale = first @ second / (second @ second)
    assert scale > 0, 'Not a positive multiple, the best factor is {}'.format(scale)
    residual = np.max(np.abs(first - scale * second))
    assert residual <= rtol * np.max(np.abs(first)), \
        'Not parallel: residual {} for factor {}'.format(residual, scale)
    return scale


def assertSameSpan(first, second, tol=1e-6):  # pylint: disable=invalid-name
    """
    Asserts that two lists of matrices (or vectors) span the same space.
    """
    first = np.array([np.ravel(item) for item in first], dtype=float)
    second = np.array([np.ravel(item) for item in second], dtype=float)
    rank_first = numeric_rank(first, tol=tol)
    rank_second = numeric_rank(second, tol=tol)
    rank_both = numeric_rank(np.vstack([first, second]), tol=tol)
    assert rank_first == rank_second == rank_both, \
        'Spans differ: ranks {}, {} and {} together'.format(rank_first, rank_second,
                                                            rank_both)


def assertPsd(matrix, tol=1e-8):  # pylint: disable=invalid-name
    """Asserts the symmetric `matrix` is positive semidefinite up to tol·‖matrix‖."""
    matrix = np.asarray(matrix, dtype=float)
    values = np.linalg.eigvalsh(matrix)
    assert values[0] >= -tol * max(1, np.max(np.abs(values))), \
        'Smallest eigenvalue is {}'.format(values[0])
