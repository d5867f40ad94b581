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

import pytest
pytest.register_assert_rewrite("gramfiber.testhelper")

# pylint: disable=wrong-import-position
from gramfiber.gram import make_context
from gramfiber import sextic


@pytest.fixture(scope='session')
def sextic_ctx():
    return make_context(2, 3)


@pytest.fixture(scope='session')
def quartic_ctx():
    return make_context(3, 2)


@pytest.fixture(scope='session')
def lemma_forms():
    return sextic.lemma_sextics()
