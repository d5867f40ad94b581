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

from hypothesis import strategies as st
from hypothesis.stateful import (RuleBasedStateMachine, rule, invariant,
                                 initialize)
from hypothesis import note, settings, assume

import numpy as np

from gramfiber.gram import make_context
from gramfiber.linalg import adjugate, determinant3
from gramfiber.polyalg import (Form, as_fractions, monomial_basis, multiply, quadric_matrix,
                               tensor_square)
from gramfiber import quartic

COEFFS = st.lists(st.integers(min_value=-3, max_value=3), min_size=6, max_size=6)
FACTORS = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def _zero(size):
    return np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)


@settings(max_examples=100, stateful_step_count=20, deadline=None)
class QuadricTensorTest(RuleBasedStateMachine):
    """
    Builds Gram side tensors θ = Σ c_k q_k⊗q_k of ternary quadrics in exact
    arithmetic, and tracks Q(θ) = Σ c_k adj(A_k) and μ(θ) = Σ c_k q_k²
    alongside.
    """
    @initialize(coeffs=COEFFS)
    def setup(self, coeffs):
        self.ctx = make_context(3, 2)
        self.order = monomial_basis(3, 2)
        self.theta = _zero(6)
        self.q_sum = _zero(3)
        self.form = Form(self.ctx.target, as_fractions([0] * len(self.ctx.target)))
        self.add_square(coeffs, Fraction(1))

    @rule(coeffs=COEFFS, factor=FACTORS)
    def add_square(self, coeffs, factor):
        quadric = Form(self.order, as_fractions(coeffs))
        note((coeffs, factor))
        self.theta = self.theta + factor * tensor_square(quadric)
        self.q_sum = self.q_sum + factor * adjugate(quadric_matrix(quadric))
        self.form = self.form + multiply(quadric, quadric).scale(factor)

    @rule(factor=FACTORS)
    def scale(self, factor):
        assume(factor != 0)
        self.theta = self.theta * factor
        self.q_sum = self.q_sum * factor
        self.form = self.form.scale(factor)

    @rule()
    def drop_kernel(self):
        # Replaces θ by its representative orthogonal to the kernel.
        self.theta = self.ctx.v_rep(self.form, exact=True)
        self.q_sum = quartic.q_of_lambda(self.ctx.coordinates(self.theta))

    @invariant()
    def q_is_linear(self):
        found = quartic.q_of_lambda(self.ctx.coordinates(self.theta))
        assert all(found[idx, jdx] == self.q_sum[idx, jdx]
                   for idx in range(3) for jdx in range(3))

    @invariant()
    def gram_map(self):
        assert self.ctx.mu_apply(self.theta) == self.form

    @invariant()
    def kernel_part(self):
        difference = self.theta - self.ctx.v_rep(self.form, exact=True)
        assert not any(value != 0 for value in self.ctx.mu_apply(difference).coeffs)

    @invariant()
    def classify_agrees(self):
        if not any(value != 0 for value in self.q_sum.ravel()):
            return
        det = determinant3(self.q_sum)
        result = quartic.classify(self.theta.astype(float))
        if result.tag == quartic.DirectionTag.EXTREME_BY_RANK1:
            assert det > 0
        elif result.tag == quartic.DirectionTag.EXTREME_BY_SPLIT and result.rank_q == 3:
            assert det < 0


Tester = QuadricTensorTest.TestCase
