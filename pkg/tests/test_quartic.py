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

from fractions import Fraction

import numpy as np
import pytest

from gramfiber import quartic
from gramfiber.linalg import adjugate, determinant3, numeric_rank
from gramfiber.gram import svec
from gramfiber.polyalg import (
    Form, apolar_complement, as_fractions, monomial_basis, multiply,
    quadric_from_matrix, quadric_matrix, tensor_square,
)
from gramfiber.quartic import DirectionTag
from gramfiber.testhelper import (
    assertEqualMatrices, assertPositiveMultiple, assertSameSpan, make_form,
)


def _rotation(seed):
    rng = np.random.default_rng(seed)
    matrix, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    return matrix


def test_q_of_lambda():
    matrix = quartic.q_of_lambda(np.arange(1, 7, dtype=float))
    assertEqualMatrices(matrix, [[3, -6, -5], [-6, 2, -4], [-5, -4, 1]])
    assertEqualMatrices(quartic.lambda_of_q(matrix), np.arange(1, 7))
    exact = quartic.q_of_lambda(as_fractions(['1/2', 0, 0, 0, 0, 1]))
    assert exact[2, 2] == Fraction(1, 2)
    assert exact[0, 1] == -1
    with pytest.raises(ValueError):
        quartic.q_of_lambda(np.zeros(3))


@pytest.mark.parametrize('seed', range(5))
def test_q_of_rank1_tensor_is_adjugate(seed):
    rng = np.random.default_rng(seed)
    form = Form(monomial_basis(3, 2), rng.standard_normal(6))
    found = quartic.q_of_w(tensor_square(form))
    assertEqualMatrices(found, adjugate(quadric_matrix(form)), atol=1e-12, rtol=1e-12)


def test_q_of_rank1_tensor_exact(quartic_ctx):
    form = Form(monomial_basis(3, 2), as_fractions([1, '2/3', -3, '1/2', 0, 5]))
    found = quartic.q_of_lambda(quartic_ctx.coordinates(tensor_square(form)))
    expected = adjugate(quadric_matrix(form))
    assert all(found[idx, jdx] == expected[idx, jdx]
               for idx in range(3) for jdx in range(3))


def test_w_of_q_roundtrip(quartic_ctx):
    matrix = np.array([[2, 1, 0], [1, -1, 3], [0, 3, 0.5]])
    direction = quartic.w_of_q(matrix)
    assert not np.any(np.abs(quartic_ctx.mu @ svec(direction)) > 1e-12)
    assertEqualMatrices(quartic.q_of_w(direction), matrix, atol=1e-12)


@pytest.mark.parametrize('matrix, tag, rank', (
    (np.diag([0.0, 0, 1]), DirectionTag.THREE_DIM_FACE, 1),
    (-np.outer([1, 2, 3], [1, 2, 3]), DirectionTag.THREE_DIM_FACE, 1),
    (np.eye(3), DirectionTag.EXTREME_BY_RANK1, 3),
    (np.diag([-1.0, -2, 3]), DirectionTag.EXTREME_BY_RANK1, 3),
    (-np.eye(3), DirectionTag.EXTREME_BY_SPLIT, 3),
    (np.diag([1.0, 2, -3]), DirectionTag.EXTREME_BY_SPLIT, 3),
    (np.diag([1.0, 2, 0]), DirectionTag.EXTREME_BY_SPLIT, 2),
    (np.diag([1.0, -2, 0]), DirectionTag.EXTREME_BY_SPLIT, 2),
    (np.diag([1.0, 1, 3e-9]), DirectionTag.EXTREME_BORDERLINE, 2),
))
def test_classify(matrix, tag, rank):
    result = quartic.classify(quartic.w_of_q(matrix))
    assert result.tag == tag
    assert result.rank_q == rank
    assertEqualMatrices(result.Q, matrix, atol=1e-12)
    if rank == 3:
        assert result.det_q == pytest.approx(np.linalg.det(matrix))
    else:
        assert result.det_q == 0


def test_classify_r1(quartic_ctx):
    result = quartic.classify(quartic_ctx.kernel_array[0])
    assert result.tag == DirectionTag.THREE_DIM_FACE
    assert result.rank_q == 1


@pytest.mark.parametrize('matrix', (
    np.eye(3),
    np.diag([3.0, -1, -2]),
    [[2, 1, 0], [1, 2, 1], [0, 1, 2]],
))
def test_rank1_complete(quartic_ctx, matrix):
    matrix = np.asarray(matrix, dtype=float)
    direction = quartic.w_of_q(matrix)
    form = quartic.rank1_complete(direction)
    det = np.linalg.det(matrix)
    assertEqualMatrices(quartic_ctx.coordinates(tensor_square(form)),
                        det * quartic_ctx.coordinates(direction), atol=1e-10, rtol=1e-10)
    assertEqualMatrices(quadric_matrix(form), adjugate(matrix), atol=1e-12)


@pytest.mark.parametrize('matrix', (-np.eye(3), np.diag([1.0, 1, 0]), np.diag([0.0, 0, 1])))
def test_rank1_complete_wrong_class(matrix):
    with pytest.raises(quartic.WrongClassError):
        quartic.rank1_complete(quartic.w_of_q(matrix))


@pytest.mark.parametrize('values', (
    [1, 2, -3],
    [-1, -2, -3],
    [-0.5, -0.5, -4],
    [1, 2, 0],
    [1, -2, 0],
    [-1, -2, 0],
    [3, 3, 0],
))
@pytest.mark.parametrize('seed', (0, 1))
def test_split_psd_pair(values, seed):
    rotation = _rotation(seed)
    matrix = rotation @ np.diag(values) @ rotation.T
    first, second = quartic.split_psd_pair(matrix)
    assertEqualMatrices(first + second, matrix, atol=1e-12)
    assertEqualMatrices(first, first.T, atol=1e-12)
    assert np.linalg.det(first) > 0
    assert np.linalg.det(second) > 0


@pytest.mark.parametrize('values', ([1, 2, 3], [1, -2, -3], [0, 0, 1], [0, 0, 0]))
def test_split_psd_pair_wrong_class(values):
    with pytest.raises(quartic.WrongClassError):
        quartic.split_psd_pair(np.diag(np.array(values, dtype=float)))


@pytest.mark.parametrize('matrix', (
    -np.eye(3),
    np.diag([1.0, 2, 0]),
    [[1, 2, 0], [2, 1, 1], [0, 1, 1]],
))
def test_split_tensor(quartic_ctx, matrix):
    matrix = np.asarray(matrix, dtype=float)
    direction = quartic.w_of_q(matrix)
    theta, forms = quartic.split_tensor(direction)
    assert len(forms) == 2
    assertEqualMatrices(quartic_ctx.coordinates(theta),
                        quartic_ctx.coordinates(direction), atol=1e-9, rtol=1e-9)
    assert numeric_rank(theta) == 2


def _conditioned_symmetric(rng, sign):
    """
    A random symmetric 3×3 matrix with determinant of sign `sign` and all
    eigenvalues at least a tenth of the largest in magnitude.
    """
    while True:
        matrix = rng.standard_normal((3, 3))
        matrix = (matrix + matrix.T) / 2
        magnitudes = np.abs(np.linalg.eigvalsh(matrix))
        if magnitudes.min() >= 0.1 * magnitudes.max():
            return matrix if np.linalg.det(matrix) * sign > 0 else -matrix


def test_split_tensor_random(quartic_ctx):
    rng = np.random.default_rng(23)
    for _ in range(1000):
        matrix = _conditioned_symmetric(rng, -1)
        first, second = quartic.split_psd_pair(matrix)
        assertEqualMatrices(first + second, matrix, atol=1e-12, rtol=1e-12)
        assert np.linalg.det(first) > 0
        assert np.linalg.det(second) > 0
        direction = quartic.w_of_q(matrix)
        theta, _ = quartic.split_tensor(direction)
        assertEqualMatrices(quartic_ctx.coordinates(theta),
                            quartic_ctx.coordinates(direction), atol=1e-9, rtol=1e-8)
        assert numeric_rank(theta) == 2


def test_rank1_complete_random(quartic_ctx):
    rng = np.random.default_rng(29)
    for _ in range(1000):
        matrix = _conditioned_symmetric(rng, 1)
        direction = quartic.w_of_q(matrix)
        form = quartic.rank1_complete(direction)
        assertEqualMatrices(quartic_ctx.coordinates(tensor_square(form)),
                            np.linalg.det(matrix) * quartic_ctx.coordinates(direction),
                            atol=1e-8, rtol=1e-8)


def test_substitution_matrix():
    assertEqualMatrices(quartic.substitution_matrix(np.eye(3)), np.eye(6))
    # (x, y, z) ↦ (y, x, z) swaps x² with y² and xz with yz.
    swap = quartic.substitution_matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    expected = np.eye(6)[:, [1, 0, 2, 3, 5, 4]]
    assertEqualMatrices(swap, expected)


def test_face_direction_subspace_r1(quartic_ctx):
    directions = quartic.face_direction_subspace(quartic_ctx.kernel_array[0])
    assert len(directions) == 3
    assertSameSpan(directions, quartic_ctx.kernel_array[[1, 2, 5]])


@pytest.mark.parametrize('idx', (0, 1, 2))
def test_face_direction_subspace_axes(quartic_ctx, idx):
    direction = quartic_ctx.kernel_array[idx]
    directions = quartic.face_direction_subspace(direction)
    assert numeric_rank(np.array([matrix.ravel() for matrix in directions])) == 3
    for matrix in directions:
        assert not np.any(np.abs(quartic_ctx.mu @ svec(matrix)) > 1e-10)
        assert abs(quartic_ctx.pair(matrix, direction)) <= 1e-10


@pytest.mark.parametrize('vector', ([1, 2, 3], [0, 1, -1], [2, 0, 0.5]))
@pytest.mark.parametrize('sign', (1, -1))
def test_face_direction_subspace_general(quartic_ctx, vector, sign):
    direction = quartic.w_of_q(sign * np.outer(vector, vector))
    directions = quartic.face_direction_subspace(direction)
    assert numeric_rank(np.array([matrix.ravel() for matrix in directions])) == 3
    for matrix in directions:
        assert not np.any(np.abs(quartic_ctx.mu @ svec(matrix)) > 1e-9)


def test_face_direction_subspace_wrong_class():
    with pytest.raises(quartic.WrongClassError):
        quartic.face_direction_subspace(quartic.w_of_q(np.eye(3)))


@pytest.mark.parametrize('coeffs', ([1, 1, 1, 0, 0, 0], [2, 1, 3, 1, 0, -1], [1, -1, 2, 0, 1, 0]))
def test_spanning_direction(coeffs):
    form = make_form(3, 2, coeffs)
    direction = quartic.spanning_direction(form)
    assert quartic.classify(direction).tag == DirectionTag.EXTREME_BY_RANK1
    completion = quartic.rank1_complete(direction)
    assertSameSpan([completion.coeffs], [form.coeffs])


@pytest.mark.parametrize('a, b, c', ((1, 0, 1), (1, 3, 1), (2, -1, 0.5), (0, 1, 0)))
def test_binary_disc_coordinate(a, b, c):
    binary = make_form(2, 2, [a, b, c])
    value = quartic.binary_disc_coordinate(binary)
    assert value == pytest.approx(-(b ** 2 - 4 * a * c) / 4)
    ternary = make_form(3, 2, [a, c, 0, b, 0, 0])
    assert quartic.binary_disc_coordinate(ternary) == pytest.approx(value)


def test_example_vanishing():
    q1, q2, matrix = quartic.example_vanishing()  # pylint: disable=invalid-name
    assert q1.exact and q2.exact
    expected = [[-5, 3, 0], [3, -2, 0], [0, 0, 0]]
    assert [[matrix[idx, jdx] for jdx in range(3)] for idx in range(3)] == expected
    assert numeric_rank(matrix.astype(float)) == 2


def _certificate_input():
    order = monomial_basis(3, 2)
    u_basis = apolar_complement([Form(order, as_fractions([1, 1, 1, 0, 0, 0]))], exact=True)
    total = None
    for form in u_basis:
        square = multiply(form, form)
        total = square if total is None else total + square
    return u_basis, total


def test_rational_certificate():
    u_basis, form = _certificate_input()
    certificate = quartic.rational_certificate(form, [1, 1, 1, 0, 0, 0])
    assert certificate.violation is None
    assert certificate.f_check
    assert len(certificate.sos) == len(u_basis) == 5
    assert all(weight > 0 for weight, _ in certificate.sos)
    total = None
    for weight, square in certificate.sos:
        assert square.exact
        term = multiply(square, square).scale(weight)
        total = term if total is None else total + term
    assert total == form
    assertPositiveMultiple(certificate.q.coeffs.astype(float), [1, 1, 1, 0, 0, 0])
    assert certificate.theta.dtype == object


def _random_certificate_input(rng):
    """
    A rational quadric q of full rank, λ with adj(Q(λ)) a multiple of the
    matrix of q, and f = Σ c_i u_i² over a basis of span(q)^⊥ with random
    positive rational c_i.
    """
    order = monomial_basis(3, 2)
    while True:
        entries = rng.integers(-3, 4, size=(3, 3))
        matrix = as_fractions(entries + entries.T)
        if determinant3(matrix) != 0:
            break
    quadric = quadric_from_matrix(matrix, order)
    lam = quartic.lambda_of_q(adjugate(matrix))
    u_basis = apolar_complement([quadric], exact=True)
    total = None
    for form in u_basis:
        weight = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 6)))
        square = multiply(form, form).scale(weight)
        total = square if total is None else total + square
    return quadric, lam, total


def test_rational_certificate_random():
    rng = np.random.default_rng(31)
    for _ in range(20):
        quadric, lam, form = _random_certificate_input(rng)
        certificate = quartic.rational_certificate(form, lam)
        assert certificate.violation is None
        assert certificate.f_check
        assert len(certificate.sos) == 5
        assert all(weight > 0 for weight, _ in certificate.sos)
        total = None
        for weight, square in certificate.sos:
            term = multiply(square, square).scale(weight)
            total = term if total is None else total + term
        assert total == form
        assertSameSpan([certificate.q.coeffs.astype(float)], [quadric.coeffs.astype(float)])


def test_rational_certificate_violations():
    _, form = _certificate_input()
    certificate = quartic.rational_certificate(form, [-1, -1, -1, 0, 0, 0])
    assert certificate.violation is not None
    assert not certificate.f_check

    certificate = quartic.rational_certificate(-form, [1, 1, 1, 0, 0, 0])
    assert certificate.violation is not None
    assert not certificate.f_check

    with pytest.raises(ValueError):
        quartic.rational_certificate(make_form(3, 2, [1] * 6), [1, 1, 1, 0, 0, 0])


def test_split_psd_pair_recipe():
    first, second = quartic.split_psd_pair(np.diag([1.0, 2, -1]))
    assertEqualMatrices(first, np.diag([0.5, 4, 1]), atol=1e-12)
    assertEqualMatrices(second, np.diag([0.5, -2, -2]), atol=1e-12)


def test_rank1_complete_diagonal(quartic_ctx):
    direction = quartic.w_of_q(np.diag([1.0, 2, 3]))
    form = quartic.rank1_complete(direction)
    assertEqualMatrices(quadric_matrix(form), np.diag([6, 3, 2]), atol=1e-12)
    assertEqualMatrices(quartic_ctx.coordinates(tensor_square(form)),
                        6 * quartic_ctx.coordinates(direction), atol=1e-10)
