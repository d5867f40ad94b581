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
gramfiber: faces, normal cones and Monte-Carlo fiber bodies of Gram
spectrahedra of binary sextics and ternary quartics.
"""

from json import load


try:
    from importlib.resources import files, as_file
    import atexit
    from contextlib import ExitStack
except ImportError:  # pragma: no cover
    from pathlib import Path
    KERNEL_FILE_NAME = Path(__file__).parent / "kernels.json"
    del Path
else:
    ref = files('gramfiber') / "kernels.json"
    file_manager = ExitStack()
    atexit.register(file_manager.close)
    KERNEL_FILE_NAME = file_manager.enter_context(as_file(ref))
    del files, as_file, atexit, ExitStack


def _read_kernels(kernel_file_name):
    """
    Reads the integer kernel matrices of the Gram map for the contexts with a
    fixed, canonical basis of W.

    Returns
    -------
    dict[tuple[int, int], list[list[list[int]]]]
        Maps (n, d) to the list of kernel matrices.
    """
    kernels = {}
    with open(kernel_file_name) as kernel_file:
        data = load(kernel_file)

    for row in data['Rows']:
        entry = dict(zip(data['Columns'], row))
        kernels[(entry['n'], entry['d'])] = entry['kernel']
    return kernels


KERNELS = _read_kernels(KERNEL_FILE_NAME)

# pylint: disable=wrong-import-position
from .polyalg import Form, MonomialOrder, monomial_basis, apolarity, sym2_pair
from .gram import GramContext, make_context, face, nc_dim, nc_dim_oracle
from .sdp import SliceProblem, SdpStatus, solve, feasible
from .fiberbody import SampleSet, sample_forms, support_estimate
