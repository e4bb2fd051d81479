# Copyright 2026 The sandwich Authors. All Rights Reserved.
#
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
# ==============================================================================
import argparse
import json
import logging
import sys

import numpy as np

from .bodies import (
    Ball,
    BodyError,
    Ellipsoid,
    EllipsoidBody,
    HRep,
    Projected,
    Sectioned,
    VRep,
    as_hrep,
    certify_sandwich,
    make_cross,
    make_cube,
    make_cut_body,
    make_lpball,
    make_simplex,
    make_tsp,
    origin_interior_vrep,
)
from .ellipsoid import john_inner_polytope, john_inner_symmetric
from .experiments import (
    ExperimentConfig,
    emit_report,
    list_suites,
    parse_param,
    run_experiment,
)
from .lp import FEASTOL, LpError
from .numerics import NumericalError
from .polyapprox import NetError, greedy_net
from .polynorm import (
    dual_vertices,
    exterior_angle,
    moment_norm,
    power_sum_norm,
    surrogate_to_json,
    tensor_lift,
)
from .sdprelax import q_containment_report, q_member, witness_to_json
from .socone import ball_bn, outer_factor
from .softapprox import accept_test, build_soft, default_degree


EXIT_FAILED_ROWS = 1
EXIT_ERROR = 2

ZOO = ('cube', 'cross', 'simplex', 'ball', 'lpball', 'tsp', 'cut')


def _field(document, name, kind=None):
    if name not in document:
        raise BodyError(f'Body description is missing the field {name!r}.')
    value = document[name]
    if kind == 'array':
        try:
            return np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise BodyError(f'Field {name!r} must be a numeric array.') \
                from None
    if kind == 'int':
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise BodyError(f'Field {name!r} must be a positive integer: '
                            f'{value=}')
    return value


def _optional(document, name):
    if document.get(name) is None:
        return None
    return _field(document, name, 'array')


def _zoo_body(document):
    name = document['zoo']
    if name not in ZOO:
        raise BodyError(f'Unknown zoo body {name!r}; available: '
                        f'{", ".join(ZOO)}')

    if name in ('tsp', 'cut'):
        n = _field(document, 'n', 'int')
        return make_tsp(n).body if name == 'tsp' else make_cut_body(n)

    d = _field(document, 'd', 'int')
    if name == 'cube':
        return make_cube(d)
    if name == 'cross':
        return make_cross(d)
    if name == 'simplex':
        return make_simplex(d)
    if name == 'ball':
        return Ball(d, document.get('radius', 1.0))
    return make_lpball(d, _field(document, 'p'), document.get('radius', 1.0))


def _hrep_of(document, normals='normals'):
    A = _field(document, normals, 'array')
    if A.ndim != 2:
        raise BodyError(f'Field {normals!r} must be a matrix: {A.shape=}')

    rhs = _optional(document, 'rhs')
    A_eq = _optional(document, 'eq_normals')
    b_eq = _optional(document, 'eq_rhs')
    if (A_eq is None) != (b_eq is None):
        raise BodyError('Fields eq_normals and eq_rhs come together.')
    if A_eq is not None and A_eq.shape[-1] != A.shape[1]:
        raise BodyError(f'Equality rows disagree with the dimension: '
                        f'{A_eq.shape=}, {A.shape=}')

    return HRep(A, rhs, A_eq, b_eq)


def parse_body(json_text):
    """Builds a body from its JSON description.

    Explicit bodies name a 'type' (vrep, hrep, ball, ellipsoid, projected,
     sectioned); {"zoo": name, ...} builds one of the standard bodies.
    """
    try:
        document = json.loads(json_text)
    except json.JSONDecodeError as error:
        raise BodyError(f'Body description is not valid JSON: {error}') \
            from None
    if not isinstance(document, dict):
        raise BodyError('Body description must be a JSON object.')

    if 'zoo' in document:
        return _zoo_body(document)

    kind = _field(document, 'type')

    if kind == 'vrep':
        points = _field(document, 'points', 'array')
        if points.ndim != 2 or points.shape[0] == 0:
            raise BodyError(f'Field "points" must be a nonempty matrix: '
                            f'{points.shape=}')
        if not origin_interior_vrep(points):
            raise BodyError('Field "points": the origin is not interior to '
                            'their hull.')
        return VRep(points)

    if kind == 'hrep':
        body = _hrep_of(document)
        if body.A_eq.shape[0] == 0 and np.any(body.b <= 0):
            raise BodyError('Field "rhs": the origin is not interior.')
        return body

    if kind == 'ball':
        return Ball(_field(document, 'd', 'int'), document.get('radius', 1.0))

    if kind == 'ellipsoid':
        center = _field(document, 'center', 'array')
        form = _field(document, 'form', 'array')
        if form.shape != (center.shape[0], center.shape[0]):
            raise BodyError(f'Fields "center" and "form" disagree: '
                            f'{center.shape=}, {form.shape=}')
        return EllipsoidBody(Ellipsoid(center, form))

    if kind == 'projected':
        T = _field(document, 'map', 'array')
        return Projected(_hrep_of(document), np.atleast_2d(T),
                         bool(document.get('symmetric', False)))

    if kind == 'sectioned':
        return Sectioned(_field(document, 'points', 'array'),
                         _field(document, 'basis', 'array'),
                         bool(document.get('symmetric', False)))

    raise BodyError(f'Field "type" is unknown: {kind=}')


def _read_body(text):
    """A JSON body, or '@path' naming a file holding one."""
    if text.startswith('@'):
        with open(text[1:]) as handle:
            text = handle.read()
    return parse_body(text)


def _to_builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f'Not serializable: {type(value)}')


def _print_json(document):
    print(json.dumps(document, indent=2, default=_to_builtin))


def _describe(args):
    _print_json(_read_body(args.body).describe())


def _approx_ellipsoid(args):
    body = _read_body(args.body)
    if isinstance(body, VRep) and body.symmetric:
        E = john_inner_symmetric(body)
    else:
        E = john_inner_polytope(body)

    cert = certify_sandwich(EllipsoidBody(E), body, args.dirs, args.seed,
                            args.tol)
    _print_json({'center': E.center, 'form': E.form,
                 'certificate': cert.as_dict()})


def _approx_net(args):
    body = _read_body(args.body)
    net = greedy_net(body, args.eps, seed=args.seed, n_dirs=args.dirs,
                     tol=args.tol)
    _print_json({'size': net.size, 'eps': net.eps, 'points': net.points,
                 'certificate': net.cert.as_dict()})


def _approx_bn(args):
    body = ball_bn(args.d, args.m)
    _print_json({'d': args.d, 'm': args.m, 'facets': body.n_facets,
                 'rows': body.n_rows, 'lifted_dim': body.polytope.dim,
                 'sampled lower bound outer factor':
                     outer_factor(body, args.dirs, args.seed)})


def _approx_tensor(args):
    body = _read_body(args.body)
    _print_json(surrogate_to_json(tensor_lift(dual_vertices(body), args.k)))


def _approx_power(args):
    _print_json(surrogate_to_json(power_sum_norm(args.d, args.k)))


def _approx_moment(args):
    polar = VRep(dual_vertices(_read_body(args.body)))
    measure = exterior_angle(polar, args.samples, args.seed)
    _print_json(surrogate_to_json(moment_norm(measure, args.k)))


def _approx_soft(args):
    body = _read_body(args.body)
    ell = np.asarray(json.loads(args.ell), dtype=float)
    if ell.shape != (body.dim,):
        raise BodyError(f'Functional and body disagree: {ell.shape=}, '
                        f'{body.dim=}')

    k = default_degree(body.dim) if args.k is None else args.k
    soft = build_soft(as_hrep(body), np.eye(body.dim), k, seed=args.seed)
    decision = accept_test(soft, ell, args.eps, body, args.samples, args.seed)
    _print_json({'generators': soft.n_generators, 'k': k,
                 'verdict': decision.verdict, 'distance': decision.distance,
                 'threshold': decision.threshold,
                 'iterations': decision.iterations})


def _approx_sdp(args):
    if args.matrix is None:
        _print_json(q_containment_report(args.n, args.samples, args.seed))
        return

    X = np.asarray(json.loads(args.matrix), dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise BodyError(f'Matrix must be square: {X.shape=}')
    _print_json(witness_to_json(q_member(X)))


def _certify(args):
    inner, outer = _read_body(args.inner), _read_body(args.outer)
    cert = certify_sandwich(inner, outer, args.dirs, args.seed, args.tol)
    _print_json(cert.as_dict())
    return 0 if cert.valid else EXIT_FAILED_ROWS


def _experiment_run(args):
    params = dict(parse_param(text) for text in args.param)
    cfg = ExperimentConfig(args.name, params, args.out, args.seed, args.tol,
                           args.feastol, timing=not args.no_timing)
    report = run_experiment(cfg)
    if args.out is None:
        sys.stdout.write(emit_report(report, args.format))
    return 0 if report.ok else EXIT_FAILED_ROWS


def _experiment_list(args):
    for name in list_suites():
        print(name)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0,
                        help='base seed of every random stream (default 0)')
    common.add_argument('--tol', type=float, default=1e-9,
                        help='certification tolerance (default 1e-9)')
    common.add_argument('--feastol', type=float, default=FEASTOL,
                        help=f'LP feasibility tolerance (default {FEASTOL})')
    common.add_argument('--dirs', type=int, default=1000,
                        help='sampled directions (default 1000)')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='log progress at INFO level')

    parser = argparse.ArgumentParser(
        prog='sandwich',
        description='Approximate convex bodies and certify the sandwich '
                    'factors.')
    commands = parser.add_subparsers(dest='command', required=True)

    body = commands.add_parser('body', help='inspect a body')
    body_commands = body.add_subparsers(dest='action', required=True)
    describe = body_commands.add_parser('describe', parents=[common],
                                        help='print a summary of a body')
    describe.add_argument('body', help='JSON body or @file')
    describe.set_defaults(handler=_describe)

    approx = commands.add_parser('approx', help='build an approximation')
    methods = approx.add_subparsers(dest='method', required=True)

    method = methods.add_parser('ellipsoid', parents=[common],
                                help='inscribed John ellipsoid')
    method.add_argument('body', help='JSON body or @file')
    method.set_defaults(handler=_approx_ellipsoid)

    method = methods.add_parser('net', parents=[common],
                                help='greedy eps-net polytope')
    method.add_argument('body', help='JSON body or @file')
    method.add_argument('--eps', type=float, default=0.25)
    method.set_defaults(handler=_approx_net)

    method = methods.add_parser('bn', parents=[common],
                                help='polyhedral approximation of the ball')
    method.add_argument('--d', type=int, required=True)
    method.add_argument('--m', type=int, default=6)
    method.set_defaults(handler=_approx_bn)

    method = methods.add_parser('tensor', parents=[common],
                                help='tensor-lift polynomial norm')
    method.add_argument('body', help='JSON body or @file')
    method.add_argument('--k', type=int, default=2)
    method.set_defaults(handler=_approx_tensor)

    method = methods.add_parser('power', parents=[common],
                                help='power-sum norm of the cube')
    method.add_argument('--d', type=int, required=True)
    method.add_argument('--k', type=int, default=2)
    method.set_defaults(handler=_approx_power)

    method = methods.add_parser('moment', parents=[common],
                                help='exterior-angle moment norm')
    method.add_argument('body', help='JSON body or @file')
    method.add_argument('--k', type=int, default=2)
    method.add_argument('--samples', type=int, default=10000)
    method.set_defaults(handler=_approx_moment)

    method = methods.add_parser('soft', parents=[common],
                                help='soft approximation acceptance test')
    method.add_argument('body', help='JSON body or @file')
    method.add_argument('--ell', required=True,
                        help='functional as a JSON list')
    method.add_argument('--eps', type=float, default=0.25)
    method.add_argument('--k', type=int, default=None,
                        help='degree cap (default floor(2√d) + 1)')
    method.add_argument('--samples', type=int, default=1000)
    method.set_defaults(handler=_approx_soft)

    method = methods.add_parser('sdp', parents=[common],
                                help='corner-completion membership')
    method.add_argument('--n', type=int, default=3)
    method.add_argument('--matrix', default=None,
                        help='n×n matrix as JSON; reports containment '
                             'when omitted')
    method.add_argument('--samples', type=int, default=50)
    method.set_defaults(handler=_approx_sdp)

    certify = commands.add_parser('certify', parents=[common],
                                  help='certify inner ⊂ outer ⊂ α·inner')
    certify.add_argument('inner', help='JSON body or @file')
    certify.add_argument('outer', help='JSON body or @file')
    certify.set_defaults(handler=_certify)

    experiment = commands.add_parser('experiment', help='experiment suites')
    suites = experiment.add_subparsers(dest='action', required=True)

    run = suites.add_parser('run', parents=[common], help='run a suite')
    run.add_argument('name', help='suite name, see "experiment list"')
    run.add_argument('--param', action='append', default=[],
                     metavar='KEY=VALUE',
                     help='suite parameter; JSON value or range a..b')
    run.add_argument('--out', default=None,
                     help='report path (.json writes JSON, else CSV)')
    run.add_argument('--format', choices=['csv', 'json'], default='csv',
                     help='format printed when --out is omitted')
    run.add_argument('--no-timing', action='store_true',
                     help='write runtime_ms as 0 for byte-identical reports')
    run.set_defaults(handler=_experiment_run)

    listing = suites.add_parser('list', help='list registered suites')
    listing.set_defaults(handler=_experiment_list, verbose=False)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    logging.basicConfig(level=logging.INFO if args.verbose
                        else logging.WARNING)

    try:
        status = args.handler(args)
    except (ValueError, NumericalError, LpError, NetError, OSError) as error:
        print(f'sandwich: error: {error}', file=sys.stderr)
        return EXIT_ERROR

    return status or 0


if __name__ == '__main__':
    sys.exit(main())
