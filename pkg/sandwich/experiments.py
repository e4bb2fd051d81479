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
import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.special import comb

from .bodies import (
    Ball,
    EllipsoidBody,
    VRep,
    as_hrep,
    certify_sandwich,
    make_cross,
    make_cube,
    make_cut,
    tsp_alpha,
)
from .ellipsoid import john_inner_symmetric, tsp_inscribed_ellipsoid
from .lp import FEASTOL, member_vrep
from .numerics import PSD_TOL, is_psd, make_rng, sample_unit_sphere
from .polyapprox import ball_net_lower_bound, greedy_net, type2_lower
from .polynorm import (
    EmpiricalMeasure,
    alpha_bound,
    dual_vertices,
    exterior_angle,
    moment_norm,
    power_sum_norm,
    sandwich_ratios,
    tensor_lift,
)
from .sdprelax import (
    GROTHENDIECK_BOUND,
    acut_brute_member,
    acut_gauge,
    cut_ratio,
    cut_relax_member,
    q_member,
    qv_certify,
    qv_region,
    sample_q_point,
)
from .socone import (
    ball_bn,
    bn_facet_count,
    outer_factor,
    quarter_gadget,
    quarter_outer_factor,
)
from .softapprox import accept_test, approximant, build_soft


COLUMNS = ['experiment', 'instance', 'metric', 'value', 'bound', 'pass',
           'seed', 'tol', 'runtime_ms']


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    params: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    seed: int = 0
    tol: float = 1e-9
    feastol: float = FEASTOL
    timing: bool = True


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    instance: str
    metric: str
    value: str
    bound: str
    passed: str
    seed: int
    tol: float
    runtime_ms: int

    def as_record(self):
        record = asdict(self)
        record['pass'] = record.pop('passed')
        return {column: record[column] for column in COLUMNS}


@dataclass
class Report:
    rows: list = field(default_factory=list)

    @property
    def failed(self):
        return [row for row in self.rows if row.passed == 'false']

    @property
    def ok(self):
        return not self.failed


def _format(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f'{float(value):.10g}'


class _Recorder:
    """Collects the rows of one suite; each instance is timed separately."""

    def __init__(self, cfg, experiment):
        self.cfg = cfg
        self.experiment = experiment
        self.rows = []
        self.started = time.perf_counter()

    def start(self):
        self.started = time.perf_counter()

    def row(self, instance, metric, value, bound=None, passed=None):
        elapsed = time.perf_counter() - self.started
        runtime = int(round(1000 * elapsed)) if self.cfg.timing else 0
        verdict = 'info' if passed is None else _format(bool(passed))
        self.rows.append(ReportRow(self.experiment, str(instance), metric,
                                   _format(value), _format(bound), verdict,
                                   self.cfg.seed, self.cfg.tol, runtime))


SUITES = {}


def suite(name, **defaults):
    def register(function):
        SUITES[name] = (function, defaults)
        return function
    return register


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


@suite('john-cube', d=[2, 3, 4, 5, 6])
def _john_cube(rec, p):
    for d in _as_list(p['d']):
        rec.start()
        cube = make_cube(d)
        cert = certify_sandwich(EllipsoidBody(john_inner_symmetric(cube)),
                                cube, seed=rec.cfg.seed)
        rec.row(f'd={d}', 'certified factor', cert.alpha, np.sqrt(d),
                cert.valid and abs(cert.alpha - np.sqrt(d)) <= 1e-3)


@suite('tsp-ellipsoid', n=[5, 6])
def _tsp_ellipsoid(rec, p):
    for n in _as_list(p['n']):
        rec.start()
        ellipsoid, tsp = tsp_inscribed_ellipsoid(n)
        cert = certify_sandwich(EllipsoidBody(ellipsoid), tsp.body,
                                n_dirs=300, seed=rec.cfg.seed)
        rec.row(f'n={n}', 'certified factor', cert.alpha, tsp_alpha(n),
                cert.valid and cert.alpha <= tsp_alpha(n) + 1e-3)


@suite('eps-net', d=[2, 3], eps=[0.5, 0.25])
def _eps_net(rec, p):
    for d in _as_list(p['d']):
        for eps in _as_list(p['eps']):
            rec.start()
            instance = f'd={d},eps={eps}'
            net = greedy_net(Ball(d), eps, seed=rec.cfg.seed)
            size_bound = (1 + 2 / eps) ** d
            rec.row(instance, 'net size', net.size, size_bound,
                    net.size <= size_bound)
            rec.row(instance, 'certified factor', net.cert.alpha,
                    1 / (1 - eps), net.cert.alpha <= 1 / (1 - eps) + 1e-3)
            lower = ball_net_lower_bound(d, net.cert.alpha)
            rec.row(instance, 'size lower bound', lower, net.size,
                    net.size >= lower)


@suite('bn-decay', d=2, m=list(range(4, 11)))
def _bn_decay(rec, p):
    if p['d'] != 2:
        raise ValueError(f'bn-decay traces the planar gadget only: {p["d"]=}')

    previous = None
    for m in _as_list(p['m']):
        rec.start()
        excess = quarter_outer_factor(quarter_gadget(m)) - 1.0
        passed = None if previous is None else excess <= previous / 2
        rec.row(f'm={m}', 'certified outer error', excess,
                None if previous is None else previous / 2, passed)
        if m == 6:
            rec.row(f'm={m}', 'certified outer error at m=6', excess, 2e-3,
                    excess <= 2e-3)
        previous = excess


@suite('bn-ball', d=4, m=6, samples=1000)
def _bn_ball(rec, p):
    d, m = p['d'], p['m']
    instance = f'd={d},m={m}'

    rec.start()
    body = ball_bn(d, m)
    rec.row(instance, 'facet count', body.n_facets, 3 * d * m,
            body.n_facets <= 3 * d * m and
            body.n_facets == bn_facet_count(d, m))

    rec.start()
    points = sample_unit_sphere(d, p['samples'], rec.cfg.seed)
    inside = body.contains(points, rec.cfg.feastol)
    rec.row(instance, 'inner containment', float(np.mean(inside)), 1.0,
            bool(np.all(inside)))

    rec.start()
    rec.row(instance, 'sampled lower bound outer factor',
            outer_factor(body, n_dirs=100, seed=rec.cfg.seed))


@suite('tensor-lift', d=3, k=2, dirs=10000)
def _tensor_lift(rec, p):
    d, k = p['d'], p['k']
    cross = make_cross(d)

    rec.start()
    surrogate = tensor_lift(dual_vertices(cross), k)
    ratios = sandwich_ratios(surrogate, cross,
                             sample_unit_sphere(d, p['dirs'], rec.cfg.seed))
    bound = alpha_bound(d, k)
    instance = f'cross,d={d},k={k}'
    rec.row(instance, 'sampled lower bound factor', np.max(ratios),
            bound * 1.01, np.max(ratios) <= bound * 1.01)
    rec.row(instance, 'sampled min ratio', np.min(ratios), 1.0,
            np.min(ratios) >= 1 - 1e-9)
    rec.row(instance, 'certified factor', surrogate.bound, bound,
            surrogate.bound <= bound * (1 + 1e-6))

    interval = np.array([[1.0], [-1.0]])
    for power in (1, 2, 3):
        rec.start()
        lifted = tensor_lift(interval, power)
        rec.row(f'interval,k={power}', 'certified factor', lifted.bound, 1.0,
                abs(lifted.bound - 1.0) <= 1e-12)


@suite('power-norm', d=4, k=2, samples=10000)
def _power_norm(rec, p):
    d, k = p['d'], p['k']
    instance = f'd={d},k={k}'

    rec.start()
    cube = make_cube(d)
    surrogate = power_sum_norm(d, k)
    points = make_rng(rec.cfg.seed, 8).uniform(-1, 1, size=(p['samples'], d))
    ratios = surrogate.norm(points) / cube.gauge(points)
    bound = d ** (1 / (2 * k))

    rec.row(instance, 'sampled max ratio', np.max(ratios), bound,
            np.max(ratios) <= bound + 1e-9)
    rec.row(instance, 'sampled min ratio', np.min(ratios), 1.0,
            np.min(ratios) >= 1 - 1e-9)

    ones = np.ones(d)
    worst = surrogate.norm(ones) / cube.gauge(ones)
    rec.row(instance, 'all-ones ratio', worst, bound,
            abs(worst - bound) <= 1e-9)


@suite('exterior-angle', samples=20000)
def _exterior_angle(rec, p):
    n = p['samples']
    cases = {
        'triangle': (np.array([[1.0, 0.0], [-0.5, np.sqrt(3) / 2],
                               [-0.5, -np.sqrt(3) / 2]]), np.full(3, 1 / 3)),
        'square': (make_cube(2).points, np.full(4, 0.25)),
        'right-triangle': (np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
                           np.array([0.25, 0.375, 0.375])),
    }
    for name, (points, expected) in cases.items():
        rec.start()
        measure = exterior_angle(VRep(points), n, rec.cfg.seed)
        deviation = float(np.max(np.abs(measure.weights - expected)))
        rec.row(name, 'sampled weight deviation', deviation, 3 / np.sqrt(n),
                deviation <= 3 / np.sqrt(n))


@suite('moment-norm', d=3, k=2, samples=4000, pairs=10000)
def _moment_norm(rec, p):
    d, k = p['d'], p['k']
    cross = make_cross(d)

    rec.start()
    polar = VRep(dual_vertices(cross))
    surrogate = moment_norm(exterior_angle(polar, p['samples'], rec.cfg.seed),
                            k)
    directions = sample_unit_sphere(d, 2000, rec.cfg.seed)
    ratios = sandwich_ratios(surrogate, cross, directions)
    instance = f'cross,d={d},k={k}'
    rec.row(instance, 'sampled sandwich factor',
            np.max(ratios) / np.min(ratios), alpha_bound(d, k))

    rng = make_rng(rec.cfg.seed, 9)
    u, v = rng.standard_normal((2, p['pairs'], d))
    slack = surrogate.norm(u + v) - surrogate.norm(u) - surrogate.norm(v)
    rec.row(instance, 'triangle inequality excess', np.max(slack), 1e-9,
            np.max(slack) <= 1e-9)


@suite('cut-ratio', n=[2, 3, 4, 5], samples=50)
def _cut_ratio(rec, p):
    for n in _as_list(p['n']):
        rec.start()
        vertices_ok = all(cut_relax_member(V) for V in make_cut(n))
        rec.row(f'n={n}', 'cut vertices in relaxation', vertices_ok, True,
                vertices_ok)

        rec.start()
        ratio = cut_ratio(n, p['samples'], rec.cfg.seed, rec.cfg.feastol)
        if n == 2:
            rec.row(f'n={n}', 'sampled lower bound dilation', ratio, 1.0,
                    abs(ratio - 1.0) <= 1e-6)
        else:
            rec.row(f'n={n}', 'sampled lower bound dilation', ratio, 1.0,
                    np.isfinite(ratio) and ratio >= 1.0)


@suite('grothendieck', n=[2, 3], samples=30)
def _grothendieck(rec, p):
    for n in _as_list(p['n']):
        rec.start()
        vertices = make_cut(n, asymmetric=True)
        completed = np.mean([q_member(V).feasible for V in vertices])
        rec.row(f'n={n}', 'acut vertices completed', completed, 1.0,
                completed == 1.0)

        rec.start()
        corners = [sample_q_point(n, seed=rec.cfg.seed, index=i)
                   for i in range(p['samples'])]
        scaled_in = all(acut_brute_member(X / GROTHENDIECK_BOUND,
                                          rec.cfg.feastol) for X in corners)
        rec.row(f'n={n}', 'scaled corners in acut', scaled_in, True,
                scaled_in)
        gauge = max(acut_gauge(X) for X in corners)
        rec.row(f'n={n}', 'sampled lower bound q/acut dilation', gauge,
                GROTHENDIECK_BOUND)


@suite('soft-approx', d=3, k=4, eps=[0.5, 0.25, 0.1], functionals=100,
       samples=1000)
def _soft_approx(rec, p):
    d, k = p['d'], p['k']
    cube = make_cube(d)

    rec.start()
    soft = build_soft(as_hrep(cube), np.eye(d), k, n_check=p['samples'],
                      seed=rec.cfg.seed)
    count = int(comb(2 * d + k, k, exact=True))
    rec.row(f'd={d},k={k}', 'generator count', soft.n_generators, count,
            soft.n_generators == count)

    X = np.asarray(sample_unit_sphere(d, p['samples'], rec.cfg.seed))
    X = X / cube.gauge(X)[:, None]
    top = float(np.max(soft.generator_values(X)))
    rec.row(f'd={d},k={k}', 'generator maximum', top, 1.0, top <= 1 + 1e-9)

    for eps in _as_list(p['eps']):
        rec.start()
        directions = sample_unit_sphere(d, p['functionals'], rec.cfg.seed)
        radii = make_rng(rec.cfg.seed, 10).random(p['functionals'])
        functionals = eps * directions * (
            radii / np.abs(directions).sum(axis=1))[:, None]

        worst = max(approximant(soft, ell, cube, p['samples'],
                                rec.cfg.seed).sup_error
                    for ell in functionals)
        rec.row(f'eps={eps}', 'sampled sup error', worst, eps ** 2,
                worst <= eps ** 2 + 1e-9)

        rec.start()
        accepted = np.mean([accept_test(soft, ell, eps, cube, 300,
                                        rec.cfg.seed).accepted
                            for ell in functionals])
        rec.row(f'eps={eps}', 'acceptance rate', accepted, 1.0,
                accepted == 1.0)


@suite('type2', d=[2, 4, 6, 8, 10])
def _type2(rec, p):
    for d in _as_list(p['d']):
        rec.start()
        value = type2_lower(Ball(d), np.eye(d))
        rec.row(f'ball,d={d}', 'certified type-2 lower bound', value, 1.0,
                abs(value - 1.0) <= 1e-12)

        rec.start()
        value = type2_lower(make_cross(d), np.eye(d))
        rec.row(f'cross,d={d}', 'certified type-2 lower bound', value,
                np.sqrt(d), abs(value - np.sqrt(d)) <= 1e-12)


@suite('qv-construction', k=[1, 2], grid=41, samples=200)
def _qv_construction(rec, p):
    atoms = EmpiricalMeasure.uniform(dual_vertices(make_cube(2)))
    ticks = np.linspace(-2, 2, p['grid'])
    grid = np.array([[a, b] for a in ticks for b in ticks])

    regions = {}
    for k in _as_list(p['k']):
        rec.start()
        points = make_rng(rec.cfg.seed, 11).uniform(-1, 1, (p['samples'], 2))
        inside = bool(np.all(qv_region(atoms, k, points)))
        rec.row(f'square,k={k}', 'sampled points of B accepted', inside, True,
                inside)
        regions[k] = qv_region(atoms, k, grid)

    ks = sorted(regions)
    for low, high in zip(ks, ks[1:]):
        nested = not np.any(regions[high] & ~regions[low])
        rec.row(f'square,k={low}..{high}', 'grid nesting', nested, True,
                nested)

    rec.start()
    rejected = not qv_certify(atoms, 1, np.array([3.0, 0.0]))
    rec.row('square,k=1,v=(3,0)', 'rejected', rejected, True, rejected)


@suite('oracles', grid=41, matrices=1000)
def _oracles(rec, p):
    angles = 2 * np.pi * np.arange(6) / 6 + 0.3
    hexagon = np.column_stack([np.cos(angles), np.sin(angles)])
    ticks = np.linspace(-1.2, 1.2, p['grid'])

    rec.start()
    agree = True
    for x in (np.array([a, b]) for a in ticks for b in ticks):
        edges = np.roll(hexagon, -1, axis=0) - hexagon
        cross = edges[:, 0] * (x[1] - hexagon[:, 1]) - \
            edges[:, 1] * (x[0] - hexagon[:, 0])
        brute = bool(np.all(cross >= -rec.cfg.feastol))
        if abs(np.min(cross)) <= 1e-6:
            continue
        agree &= member_vrep(x, hexagon, rec.cfg.feastol) == brute
    rec.row('hexagon', 'member_vrep agrees with barycentric oracle', agree,
            True, agree)

    rec.start()
    rng = make_rng(rec.cfg.seed, 12)
    matches = 0
    for _ in range(p['matrices']):
        M = rng.standard_normal((4, 4))
        M = M @ M.T - rng.uniform(0, 2) * np.eye(4)
        oracle = np.min(np.linalg.eigvalsh(M)) >= -PSD_TOL * (
            1 + np.max(np.abs(M)))
        matches += is_psd(M) == oracle
    rec.row('random 4x4', 'is_psd agrees with eigenvalue oracle',
            matches / p['matrices'], 1.0, matches == p['matrices'])


def list_suites():
    return sorted(SUITES)


def parse_param(text):
    """'key=value' with a JSON value; 'a..b' expands to the integers a to b."""
    key, sep, raw = text.partition('=')
    key = key.strip()
    if not sep or not key:
        raise ValueError(f'Parameters are written key=value: {text=}')

    raw = raw.strip()
    low, dots, high = raw.partition('..')
    if dots:
        try:
            return key, list(range(int(low), int(high) + 1))
        except ValueError:
            raise ValueError(f'Ranges are written a..b with integers: '
                             f'{raw=}') from None

    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def run_experiment(cfg):
    """Runs a registered suite and writes its report when output_path is
    set."""
    if cfg.name not in SUITES:
        raise ValueError(f'Unknown experiment {cfg.name!r}; available: '
                         f'{", ".join(list_suites())}')

    function, defaults = SUITES[cfg.name]
    unknown = set(cfg.params) - set(defaults)
    if unknown:
        raise ValueError(f'Unknown parameters for {cfg.name}: '
                         f'{sorted(unknown)}; accepted: {sorted(defaults)}')

    params = {**defaults, **cfg.params}
    logging.info(f'Running {cfg.name} with {params}.')

    rec = _Recorder(cfg, cfg.name)
    function(rec, params)
    report = Report(rec.rows)

    if cfg.output_path:
        fmt = 'json' if cfg.output_path.endswith('.json') else 'csv'
        with open(cfg.output_path, 'w', newline='') as handle:
            handle.write(emit_report(report, fmt))

    if report.failed:
        logging.warning(f'{cfg.name}: {len(report.failed)} of '
                        f'{len(report.rows)} rows failed.')

    return report


def emit_report(report, format='csv'):
    records = [row.as_record() for row in report.rows]

    if format == 'json':
        return json.dumps(records, indent=2) + '\n'

    if format == 'csv':
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=COLUMNS,
                                lineterminator='\n')
        writer.writeheader()
        writer.writerows(records)
        return buffer.getvalue()

    raise ValueError(f'Unknown report format: {format=}')


def parse_report(text, format='csv'):
    if format == 'json':
        records = json.loads(text)
    elif format == 'csv':
        records = list(csv.DictReader(io.StringIO(text)))
    else:
        raise ValueError(f'Unknown report format: {format=}')

    rows = []
    for record in records:
        rows.append(ReportRow(record['experiment'], record['instance'],
                              record['metric'], record['value'],
                              record['bound'], record['pass'],
                              int(record['seed']), float(record['tol']),
                              int(record['runtime_ms'])))
    return Report(rows)
