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

import numpy as np
import pytest

from gramfiber.sdp import (
    SdpStatus, SliceProblem, SolverError, SolverSettings, feasible, phase_one,
    solve, support, with_objective,
)
from gramfiber.testhelper import assertEqualMatrices, assertPsd

OFF_DIAGONAL = np.array([[[0, 1], [1, 0]]], dtype=float)


def test_solve_two_by_two():
    problem = SliceProblem(np.eye(2), OFF_DIAGONAL, OFF_DIAGONAL[0])
    solution = solve(problem)
    assert solution.status == SdpStatus.OPTIMAL
    assert solution.lam[0] == pytest.approx(-1, abs=1e-7)
    assert solution.objective_value == pytest.approx(-2, abs=1e-7)
    assert solution.min_eigenvalue == pytest.approx(0, abs=1e-7)
    assertPsd(solution.X)
    assert support(problem) == pytest.approx(-2, abs=1e-7)


def test_solve_three_by_three():
    basis = np.zeros((2, 3, 3))
    basis[0, 0, 1] = basis[0, 1, 0] = 1
    basis[1, 1, 2] = basis[1, 2, 1] = 1
    objective = -basis[0] - basis[1]
    solution = solve(SliceProblem(np.eye(3), basis, objective))
    assert solution.status == SdpStatus.OPTIMAL
    # max 2(a + b) subject to [[1, a, 0], [a, 1, b], [0, b, 1]] ⪰ 0 is at a = b = √½.
    assertEqualMatrices(solution.lam, [2 ** -0.5, 2 ** -0.5], atol=1e-6)
    assert solution.objective_value == pytest.approx(-2 * 2 ** 0.5, abs=1e-7)


def test_infeasible():
    problem = SliceProblem(np.diag([-1.0, 1.0]), OFF_DIAGONAL, OFF_DIAGONAL[0])
    solution = solve(problem)
    assert solution.status == SdpStatus.INFEASIBLE
    assert solution.phase_one_value > 0
    assert not feasible(problem.G0, problem.basis)
    with pytest.raises(ValueError):
        support(problem)


def test_phase_one():
    result = phase_one(np.diag([-1.0, 2.0]), OFF_DIAGONAL)
    assert not result.feasible
    assert result.value >= 1 - 1e-9
    result = phase_one(np.diag([1.0, 2.0]), OFF_DIAGONAL)
    assert result.feasible
    assert result.strictly_feasible
    assert result.value < 0


def test_phase_one_undecided():
    settings = SolverSettings(max_outer=2)
    result = phase_one(np.eye(2), OFF_DIAGONAL, settings)
    assert not result.decided
    assert not result.feasible
    assert result.value > 0
    with pytest.raises(SolverError):
        feasible(np.eye(2), OFF_DIAGONAL, settings)
    assert phase_one(np.eye(2), OFF_DIAGONAL).decided


def test_analytic_center():
    problem = SliceProblem(np.eye(2), OFF_DIAGONAL)
    solution = solve(problem)
    assert solution.status == SdpStatus.OPTIMAL
    assert solution.lam[0] == pytest.approx(0, abs=1e-8)
    assert solution.objective_value == 0


def test_empty_basis():
    problem = SliceProblem(np.diag([1.0, 2.0]), np.zeros((0, 2, 2)), np.eye(2))
    solution = solve(problem)
    assert solution.status == SdpStatus.OPTIMAL
    assert solution.lam.shape == (0,)
    assertEqualMatrices(solution.X, np.diag([1.0, 2.0]))
    assert solution.objective_value == pytest.approx(3)


def test_no_interior():
    problem = SliceProblem(np.diag([1.0, 0.0]), np.zeros((0, 2, 2)), np.eye(2))
    with pytest.raises(SolverError) as error:
        solve(problem)
    assert error.value.solution.status == SdpStatus.NUMERICAL_FAILURE


@pytest.mark.parametrize('kwargs', (
    {'G0': np.eye(2), 'basis': np.concatenate([OFF_DIAGONAL, 2 * OFF_DIAGONAL])},
    {'G0': np.ones((2, 3)), 'basis': OFF_DIAGONAL},
    {'G0': np.eye(2), 'basis': OFF_DIAGONAL, 'objective': np.eye(3)},
))
def test_bad_problems(kwargs):
    with pytest.raises(ValueError):
        SliceProblem(**kwargs)


def test_with_objective():
    problem = SliceProblem(np.eye(2), OFF_DIAGONAL, OFF_DIAGONAL[0])
    flipped = with_objective(problem, -OFF_DIAGONAL[0])
    assert support(flipped) == pytest.approx(-2, abs=1e-7)
    assert solve(flipped).lam[0] == pytest.approx(1, abs=1e-7)
    assert problem.objective[0, 1] == 1


def test_outer_iteration_cap():
    settings = SolverSettings(max_outer=2)
    problem = SliceProblem(np.eye(2), OFF_DIAGONAL, OFF_DIAGONAL[0], settings)
    with pytest.raises(SolverError) as error:
        solve(problem)
    assert error.value.solution.status == SdpStatus.NUMERICAL_FAILURE
    assertPsd(error.value.solution.X)
