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

import io
import json

import numpy as np
import pytest

from gramfiber import cli
from gramfiber.polyalg import (
    Form, apolar_complement, as_fractions, form_from_json, form_to_json,
    monomial_basis, multiply, tensor_square,
)
from gramfiber.testhelper import assertEqualMatrices, make_form


def _run(*argv):
    stdout = io.StringIO()
    code = cli.run(list(argv), stdout=stdout, environ={})
    return code, stdout.getvalue()


def _run_json(*argv):
    code, output = _run(*argv)
    return code, json.loads(output)


def test_context_dump():
    code, result = _run_json('context-dump', '--context', 'quartic')
    assert code == cli.EXIT_OK
    assert result['pairing'] == 'apolar'
    code, result = _run_json('context-dump')
    assert code == cli.EXIT_OK
    assert result['pairing'] == 'trace'


@pytest.mark.parametrize('lam, tag, rank', (
    ('1,0,0,0,0,0', 'ThreeDimFace', 1),
    ('1,1,1,0,0,0', 'ExtremeByRank1', 3),
    ('-1,-1,-1,0,0,0', 'ExtremeBySplit', 3),
))
def test_quartic_classify(lam, tag, rank):
    code, result = _run_json('quartic', 'classify', '--lambda={}'.format(lam))
    assert code == cli.EXIT_OK
    assert result['tag'] == tag
    assert result['rank_q'] == rank
    assert sorted(result) == ['Q', 'det_q', 'rank_q', 'tag']


def test_quartic_split():
    code, result = _run_json('quartic', 'split', '--lambda=-1,-1,-1,0,0,0')
    assert code == cli.EXIT_OK
    first, second = np.array(result['Q1']), np.array(result['Q2'])
    assertEqualMatrices(first + second, -np.eye(3), atol=1e-12)
    assert np.linalg.det(first) > 0
    assert np.linalg.det(second) > 0


def test_quartic_complete():
    code, result = _run_json('quartic', 'complete', '--lambda=1,1,1,0,0,0')
    assert code == cli.EXIT_OK
    form = form_from_json(result['q'])
    assertEqualMatrices(form.coeffs, [1, 1, 1, 0, 0, 0], atol=1e-12)


def test_quartic_certificate():
    order = monomial_basis(3, 2)
    squares = apolar_complement([Form(order, as_fractions([1, 1, 1, 0, 0, 0]))], exact=True)
    total = multiply(squares[0], squares[0])
    for square in squares[1:]:
        total = total + multiply(square, square)
    code, result = _run_json('quartic', 'certificate',
                             '--form', json.dumps(form_to_json(total)),
                             '--lambda=1,1,1,0,0,0')
    assert code == cli.EXIT_OK
    assert result['f_check'] is True
    assert result['violation'] is None
    assert len(result['sos']) == 5


def test_sextic_in_s():
    assert _run_json('sextic', 'in-s', '--lambda=1,0,1') == (cli.EXIT_OK, {'in_s': True})
    assert _run_json('sextic', 'in-s', '--lambda=-1,0,1') == (cli.EXIT_OK, {'in_s': False})


def test_sextic_complete(sextic_ctx):
    assert _run_json('sextic', 'complete', '--lambda=1,0,1') == (cli.EXIT_OK, {'q': None})
    code, result = _run_json('sextic', 'complete', '--lambda=-1,0.5,2')
    assert code == cli.EXIT_OK
    cubic = form_from_json(result['q'])
    assertEqualMatrices(sextic_ctx.coordinates(tensor_square(cubic)), [-1, 0.5, 2],
                        atol=1e-8, rtol=1e-8)


def test_sextic_rank2():
    code, result = _run_json('sextic', 'rank2', '--zeros', '1+6i,2+5i,3+4i')
    assert code == cli.EXIT_OK
    assert len(result['points']) == 4
    assert len(result['groupings']) == 4
    assert 0 <= result['distinguished'] < 4
    assert all(zero[1] > 0 for zero in result['groupings'][result['distinguished']])


def test_nc_dim():
    basis = [form_to_json(make_form(2, 3, [1, 0, 0, 1])),
             form_to_json(make_form(2, 3, [0, 1, 0, 0]))]
    code, result = _run_json('nc-dim', '--basis', json.dumps(basis))
    assert code == cli.EXIT_OK
    assert result == {'ambient': 10, 'in_w': 3, 'oracle': 10}


def test_face():
    form = make_form(2, 6, [1, 0, 0, 0, 0, 0, 1])
    code, result = _run_json('face', '--form', json.dumps(form_to_json(form)),
                             '--lambda=1,0,1')
    assert code == cli.EXIT_OK
    assert result['rank'] == 2


def test_form_from_file(tmp_path):
    path = tmp_path / 'form.json'
    path.write_text(json.dumps(form_to_json(make_form(2, 6, [1, 0, 0, 0, 0, 0, 1]))))
    code, result = _run_json('sextic', 'rank2', '--form', '@{}'.format(path))
    assert code == cli.EXIT_OK
    assert len(result['points']) == 4


@pytest.mark.parametrize('argv', (
    ['nope'],
    ['quartic', 'classify'],
    ['context-dump', '--context', 'cubic'],
    ['--samples', 'many', 'context-dump'],
    [],
))
def test_usage_errors(argv):
    code, output = _run(*argv)
    assert code == cli.EXIT_USAGE
    assert output == ''


@pytest.mark.parametrize('argv, error', (
    (['quartic', 'complete', '--lambda=-1,-1,-1,0,0,0'], 'WrongClassError'),
    (['quartic', 'classify', '--lambda=1,2'], 'ValueError'),
    (['sextic', 'rank2'], 'ValueError'),
    (['sextic', 'rank2', '--form', '{"n": 2}'], 'ValueError'),
    (['sextic', 'rank2', '--zeros', '1+1i,1+1i,2+1i'], 'DegenerateFormError'),
))
def test_errors(argv, error):
    code, result = _run_json(*argv)
    assert code == cli.EXIT_ERROR
    assert result['error'] == error
    assert result['message']


def test_run_config():
    parser = cli.build_parser()
    args = parser.parse_args(['--tol-rank', '1e-5', 'fiberbody', 'sample', '--context',
                              'quartic'])
    config = cli.RunConfig.from_args(args, environ={'GRAMFIBER_THREADS': '3'})
    assert config.workers == 3
    assert config.context == 'quartic'
    assert config.ctx.n == 3
    assert config.rank_tolerance(1e-6) == 1e-5
    assert config.settings.gap_tolerance == cli.RunConfig.tol_gap

    args = parser.parse_args(['--workers', '0', 'sextic', 'in-s', '--lambda=1,0,1'])
    config = cli.RunConfig.from_args(args, environ={'GRAMFIBER_THREADS': '3'})
    assert config.workers == 1
    assert config.context == 'sextic'
    assert config.rank_tolerance(1e-6) == 1e-6


def test_fiberbody_cloud(tmp_path):
    argv = ['--samples', '3', '--seed', '1', '--workers', '1',
            'fiberbody', 'cloud', '--directions', '2']
    code, output = _run(*argv)
    assert code == cli.EXIT_OK
    lines = output.splitlines()
    assert lines[0] == 'dir_1,dir_2,dir_3,pt_1,pt_2,pt_3,n_samples,stderr'
    assert len(lines) == 3

    path = tmp_path / 'cloud.csv'
    code, output = _run('--output', str(path), *argv)
    assert code == cli.EXIT_OK
    assert output == ''
    assert path.read_text().splitlines() == lines


def test_fiberbody_sample():
    code, result = _run_json('--samples', '2', '--workers', '1', 'fiberbody', 'sample')
    assert code == cli.EXIT_OK
    assert len(result['forms']) == 2
    assert result['trials'] >= 2
    assert 0 < result['acceptance_rate'] <= 1


def test_run_options_after_verb():
    argv = ['fiberbody', 'cloud', '--context', 'sextic', '--samples', '2',
            '--directions', '1', '--seed', '42', '--workers', '1']
    code, output = _run(*argv)
    assert code == cli.EXIT_OK
    lines = output.splitlines()
    assert lines[0] == 'dir_1,dir_2,dir_3,pt_1,pt_2,pt_3,n_samples,stderr'
    assert len(lines) == 2
    assert float(lines[1].split(',')[6]) == 2

    code, before = _run('--samples', '2', '--seed', '42', '--workers', '1',
                        'fiberbody', 'cloud', '--context', 'sextic', '--directions', '1')
    assert code == cli.EXIT_OK
    assert before == output


def test_run_options_placement():
    parser = cli.build_parser()
    args = parser.parse_args(['--seed', '7', '--samples', '9', 'fiberbody', 'sample'])
    assert (args.seed, args.samples) == (7, 9)
    args = parser.parse_args(['fiberbody', 'sample', '--seed', '7', '--tol-rank', '1e-4'])
    assert (args.seed, args.samples, args.tol_rank) == (7, cli.RunConfig.samples, 1e-4)
    args = parser.parse_args(['--seed', '7', 'sextic', 'in-s', '--lambda=1,0,1', '--seed', '8'])
    assert args.seed == 8
    config = cli.RunConfig.from_args(
        parser.parse_args(['quartic', 'classify', '--lambda=1,1,1,0,0,0', '--workers', '2']),
        environ={})
    assert config.workers == 2
    assert config.tol_gap == cli.RunConfig.tol_gap


def test_nc_probe_tolerance_option():
    argv = ['fiberbody', 'nc-probe', '--lambda=1,0.5,-2', '--lambda2=-1,-0.5,2',
            '--samples', '3', '--workers', '1']
    assert _run_json(*argv) == (cli.EXIT_OK, {'membership': 'NotInCone'})
    assert _run_json(*argv, '--tol-rank', '1e3') == (cli.EXIT_OK, {'membership': 'InCone'})


def test_fiberbody_support():
    argv = ['fiberbody', 'support', '--lambda=1,0.5,-2', '--samples', '3', '--workers', '1']
    code, result = _run_json(*argv)
    assert code == cli.EXIT_OK
    assert sorted(result) == ['h', 'stderr']
    assert result['stderr'] >= 0
    code, doubled = _run_json('fiberbody', 'support', '--lambda=2,1,-4', '--samples', '3',
                              '--workers', '1')
    assert code == cli.EXIT_OK
    assert doubled['h'] == pytest.approx(2 * result['h'])
