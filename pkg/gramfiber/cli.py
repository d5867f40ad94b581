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
The gramfiber command line. Every verb writes JSON to stdout, except
``fiberbody cloud`` which writes CSV.
"""

import argparse
from dataclasses import dataclass
import enum
from fractions import Fraction
import json
import logging
import os
import sys

import numpy as np

from . import fiberbody, quartic, sextic
from .gram import context_dump, face, make_context, nc_dim, nc_dim_oracle
from .linalg import OPTIMIZER_RANK_TOLERANCE, RANK_TOLERANCE
from .polyalg import form_from_json, form_to_json
from .sdp import SolverSettings

LOGGER = logging.getLogger(__name__)

CONTEXTS = {'sextic': (2, 3), 'quartic': (3, 2)}
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ERROR = 3


@dataclass
class RunConfig:
    """Run level settings shared by all verbs."""
    context: str = 'sextic'
    seed: int = 42
    samples: int = 50
    workers: int = 1
    tol_rank: float = None
    tol_gap: float = 1e-10
    output: str = None
    verbosity: int = 0

    @classmethod
    def from_args(cls, args, environ=None):
        """
        Builds the configuration from parsed arguments. Without --workers,
        the worker count is GRAMFIBER_THREADS, or the number of CPUs.
        """
        environ = os.environ if environ is None else environ
        workers = args.workers
        if workers is None:
            workers = int(environ.get('GRAMFIBER_THREADS', os.cpu_count() or 1))
        return cls(context=getattr(args, 'context', 'sextic'), seed=args.seed,
                   samples=args.samples, workers=max(1, workers),
                   tol_rank=args.tol_rank, tol_gap=args.tol_gap,
                   output=args.output, verbosity=args.verbose)

    @property
    def ctx(self):
        return make_context(*CONTEXTS[self.context])

    @property
    def settings(self):
        return SolverSettings(gap_tolerance=self.tol_gap)

    def rank_tolerance(self, default):
        return default if self.tol_rank is None else self.tol_rank


def _to_json(value):
    """json.dumps fallback for numpy values, rationals, enums and forms."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, 'order') and hasattr(value, 'coeffs'):
        return form_to_json(value)
    raise TypeError('Can not write {!r} as JSON'.format(value))


def _read_json(text):
    """JSON from the argument itself, or from a file if it starts with @."""
    if text.startswith('@'):
        with open(text[1:]) as json_file:
            return json.load(json_file)
    return json.loads(text)


def _read_form(text):
    return form_from_json(_read_json(text))


def _read_numbers(text, exact=False):
    """A comma separated list of numbers; exact reads "p/q" rationals."""
    parts = [part.strip() for part in text.split(',') if part.strip()]
    if exact:
        return [Fraction(part) for part in parts]
    return np.array([float(Fraction(part)) for part in parts])


def _read_zeros(text):
    return [complex(part.strip().replace('i', 'j')) for part in text.split(',')]


def _sextic_form(args):
    if args.zeros:
        return sextic.form_from_zeros(_read_zeros(args.zeros))
    if args.form:
        return _read_form(args.form)
    raise ValueError('Give a sextic with --form or --zeros')


def _direction(config, args, name='lam'):
    coords = _read_numbers(getattr(args, name))
    return config.ctx.from_coordinates(coords)


def cmd_context_dump(config, args):  # pylint: disable=unused-argument
    return context_dump(config.ctx)


def cmd_face(config, args):
    report = face(_read_form(args.form), _direction(config, args), config.ctx,
                  settings=config.settings,
                  tol=config.rank_tolerance(OPTIMIZER_RANK_TOLERANCE))
    return report.as_dict()


def cmd_nc_dim(config, args):
    u_basis = [form_from_json(data) for data in _read_json(args.basis)]
    tol = config.rank_tolerance(RANK_TOLERANCE)
    ambient, in_w = nc_dim(u_basis, config.ctx, tol=tol)
    return {'ambient': ambient, 'in_w': in_w,
            'oracle': nc_dim_oracle(u_basis, config.ctx, tol=tol)}


def cmd_sextic_rank2(config, args):  # pylint: disable=unused-argument
    points = sextic.rank2_points(_sextic_form(args))
    return {'points': points.points, 'distinguished': points.distinguished,
            'groupings': [list(group) for group in points.groupings]}


def cmd_sextic_in_s(config, args):  # pylint: disable=unused-argument
    return {'in_s': sextic.in_S(_read_numbers(args.lam))}


def cmd_sextic_complete(config, args):  # pylint: disable=unused-argument
    return {'q': sextic.rank1_complete(_read_numbers(args.lam))}


def cmd_sextic_nc_quadric(config, args):  # pylint: disable=unused-argument
    form = _sextic_form(args)
    point = sextic.rank2_points(form).points[args.index]
    quadric = sextic.nc_quadric(form, point)
    return {'taylor2': quadric.taylor2, 'dual_form': quadric.dual_form}


def cmd_sextic_lemma_check(config, args):
    return {'sextics': sextic.lemma_check(samples=args.pair_samples, seed=config.seed)}


def cmd_quartic_classify(config, args):  # pylint: disable=unused-argument
    result = quartic.classify(quartic.w_of_q(quartic.q_of_lambda(_read_numbers(args.lam))))
    return {'tag': result.tag, 'Q': result.Q, 'det_q': result.det_q, 'rank_q': result.rank_q}


def cmd_quartic_complete(config, args):  # pylint: disable=unused-argument
    direction = quartic.w_of_q(quartic.q_of_lambda(_read_numbers(args.lam)))
    return {'q': quartic.rank1_complete(direction)}


def cmd_quartic_split(config, args):  # pylint: disable=unused-argument
    first, second = quartic.split_psd_pair(quartic.q_of_lambda(_read_numbers(args.lam)))
    return {'Q1': first, 'Q2': second}


def cmd_quartic_certificate(config, args):  # pylint: disable=unused-argument
    certificate = quartic.rational_certificate(_read_form(args.form),
                                               _read_numbers(args.lam, exact=True))
    return {'theta': certificate.theta,
            'sos': [{'weight': weight, 'form': square} for weight, square in certificate.sos],
            'f_check': certificate.f_check, 'q': certificate.q,
            'violation': certificate.violation}


def _samples(config):
    return fiberbody.sample_forms(config.ctx, config.samples, config.seed,
                                  workers=config.workers, settings=config.settings)


def cmd_fiberbody_sample(config, args):  # pylint: disable=unused-argument
    samples = _samples(config)
    return {'forms': list(samples.forms), 'trials': samples.trials,
            'acceptance_rate': samples.acceptance_rate, 'measure': samples.measure}


def cmd_fiberbody_support(config, args):
    estimate, stderr = fiberbody.support_estimate(
        _direction(config, args), _samples(config), workers=config.workers,
        settings=config.settings)
    return {'h': estimate, 'stderr': stderr}


def cmd_fiberbody_cloud(config, args):
    samples = _samples(config)
    directions = fiberbody.default_directions(config.ctx, args.directions, config.seed)
    if config.output:
        with open(config.output, 'w', newline='') as sink:
            count = fiberbody.export_cloud(directions, samples, sink,
                                           workers=config.workers, settings=config.settings)
    else:
        count = fiberbody.export_cloud(directions, samples, args.stream,
                                       workers=config.workers, settings=config.settings)
    LOGGER.info('Wrote %d rows', count)


def cmd_fiberbody_face_dim(config, args):
    dim, basis = fiberbody.face_dim_estimate(
        _direction(config, args), _samples(config),
        tol=config.rank_tolerance(OPTIMIZER_RANK_TOLERANCE), settings=config.settings)
    return {'dim': dim, 'basis': basis}


def cmd_fiberbody_nc_probe(config, args):
    membership = fiberbody.nc_probe(_direction(config, args), _direction(config, args, 'lam2'),
                                    _samples(config), workers=config.workers,
                                    tol=config.rank_tolerance(fiberbody.DIFFERENT_FACE),
                                    settings=config.settings)
    return {'membership': membership}


def _add_context(parser):
    parser.add_argument('--context', choices=sorted(CONTEXTS), default='sextic')


def _add_sextic_input(parser):
    parser.add_argument('--form', help='Form JSON, or @file')
    parser.add_argument('--zeros', help='upper half plane zeros, e.g. 1+6i,2+5i,3+4i')


def _run_options(defaults=True):
    """
    The options shared by all verbs. The copy attached to each verb has
    suppressed defaults, so it only overrides values given after the verb.
    """
    def default(value):
        return value if defaults else argparse.SUPPRESS

    options = argparse.ArgumentParser(add_help=False)
    options.add_argument('-v', '--verbose', action='count', default=default(0))
    options.add_argument('--seed', type=int, default=default(RunConfig.seed))
    options.add_argument('--samples', type=int, default=default(RunConfig.samples))
    options.add_argument('--workers', type=int, default=default(None))
    options.add_argument('--tol-rank', dest='tol_rank', type=float, default=default(None))
    options.add_argument('--tol-gap', dest='tol_gap', type=float,
                         default=default(RunConfig.tol_gap))
    options.add_argument('--output', default=default(None))
    return options


def build_parser():
    """The argument parser of the gramfiber command."""
    parser = argparse.ArgumentParser(
        prog='gramfiber', description='Faces, normal cones and fiber bodies of '
        'Gram spectrahedra of binary sextics and ternary quartics.',
        parents=[_run_options()])
    leaf_options = [_run_options(defaults=False)]
    verbs = parser.add_subparsers(dest='verb', required=True)

    sub = verbs.add_parser('context-dump', parents=leaf_options)
    _add_context(sub)
    sub.set_defaults(func=cmd_context_dump)

    sub = verbs.add_parser('face', parents=leaf_options)
    _add_context(sub)
    sub.add_argument('--form', required=True)
    sub.add_argument('--lambda', dest='lam', required=True)
    sub.set_defaults(func=cmd_face)

    sub = verbs.add_parser('nc-dim', parents=leaf_options)
    _add_context(sub)
    sub.add_argument('--basis', required=True, help='JSON list of forms, or @file')
    sub.set_defaults(func=cmd_nc_dim)

    sextic_verbs = verbs.add_parser('sextic').add_subparsers(dest='action', required=True)
    sub = sextic_verbs.add_parser('rank2', parents=leaf_options)
    _add_sextic_input(sub)
    sub.set_defaults(func=cmd_sextic_rank2)
    sub = sextic_verbs.add_parser('in-s', parents=leaf_options)
    sub.add_argument('--lambda', dest='lam', required=True)
    sub.set_defaults(func=cmd_sextic_in_s)
    sub = sextic_verbs.add_parser('complete', parents=leaf_options)
    sub.add_argument('--lambda', dest='lam', required=True)
    sub.set_defaults(func=cmd_sextic_complete)
    sub = sextic_verbs.add_parser('nc-quadric', parents=leaf_options)
    _add_sextic_input(sub)
    sub.add_argument('--index', type=int, default=1, choices=range(4))
    sub.set_defaults(func=cmd_sextic_nc_quadric)
    sub = sextic_verbs.add_parser('lemma-check', parents=leaf_options)
    sub.add_argument('--pair-samples', dest='pair_samples', type=int,
                     default=sextic.DISJOINT_SAMPLES)
    sub.set_defaults(func=cmd_sextic_lemma_check)

    quartic_verbs = verbs.add_parser('quartic').add_subparsers(dest='action', required=True)
    for name, func in (('classify', cmd_quartic_classify),
                       ('complete', cmd_quartic_complete),
                       ('split', cmd_quartic_split)):
        sub = quartic_verbs.add_parser(name, parents=leaf_options)
        sub.add_argument('--lambda', dest='lam', required=True)
        sub.set_defaults(func=func)
    sub = quartic_verbs.add_parser('certificate', parents=leaf_options)
    sub.add_argument('--form', required=True)
    sub.add_argument('--lambda', dest='lam', required=True, help='rationals, p/q')
    sub.set_defaults(func=cmd_quartic_certificate)

    fiber_verbs = verbs.add_parser('fiberbody').add_subparsers(dest='action', required=True)
    sub = fiber_verbs.add_parser('sample', parents=leaf_options)
    _add_context(sub)
    sub.set_defaults(func=cmd_fiberbody_sample)
    for name, func in (('support', cmd_fiberbody_support),
                       ('face-dim', cmd_fiberbody_face_dim)):
        sub = fiber_verbs.add_parser(name, parents=leaf_options)
        _add_context(sub)
        sub.add_argument('--lambda', dest='lam', required=True)
        sub.set_defaults(func=func)
    sub = fiber_verbs.add_parser('nc-probe', parents=leaf_options)
    _add_context(sub)
    sub.add_argument('--lambda', dest='lam', required=True)
    sub.add_argument('--lambda2', dest='lam2', required=True)
    sub.set_defaults(func=cmd_fiberbody_nc_probe)
    sub = fiber_verbs.add_parser('cloud', parents=leaf_options)
    _add_context(sub)
    sub.add_argument('--directions', type=int, default=100)
    sub.set_defaults(func=cmd_fiberbody_cloud)
    return parser


def run(argv=None, stdout=None, environ=None):
    """
    Runs the gramfiber command.

    Returns
    -------
    int
        0 on success, 2 on usage errors, 3 if the computation failed.
    """
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_OK if exit_.code in (0, None) else EXIT_USAGE
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr)
    config = RunConfig.from_args(args, environ)
    args.stream = stdout
    try:
        result = args.func(config, args)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as error:
        LOGGER.debug('Command failed', exc_info=True)
        json.dump({'error': type(error).__name__, 'message': str(error)}, stdout)
        stdout.write('\n')
        return EXIT_ERROR
    if result is not None:
        json.dump(result, stdout, default=_to_json, sort_keys=True)
        stdout.write('\n')
    return EXIT_OK


def main():
    sys.exit(run())
