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
import numpy as np
import pytest

import sandwich.experiments as experiments

from sandwich.experiments import ExperimentConfig, run_experiment


def _values(report, metric):
    return [float(row.value) for row in report.rows if row.metric == metric]


def test_bn_decay_suite():
    report = run_experiment(ExperimentConfig('bn-decay'))

    assert report.ok
    errors = _values(report, 'certified outer error')
    assert len(errors) == 7
    assert np.all(np.diff(errors) < 0)


def test_exterior_angle_suite():
    report = run_experiment(ExperimentConfig('exterior-angle'))

    assert report.ok
    assert [row.instance for row in report.rows] == \
        ['triangle', 'square', 'right-triangle']


def test_qv_construction_suite():
    report = run_experiment(ExperimentConfig('qv-construction',
                                             {'grid': 21}))

    assert report.ok
    assert report.rows[-1].instance == 'square,k=1,v=(3,0)'


def test_oracles_suite():
    report = run_experiment(ExperimentConfig('oracles',
                                             {'grid': 21, 'matrices': 200}))

    assert report.ok


@pytest.mark.parametrize('name, params', [
    ('tensor-lift', {}),
    ('moment-norm', {'samples': 2000, 'pairs': 2000}),
    ('grothendieck', {'n': [2], 'samples': 10}),
    ('eps-net', {'d': [2], 'eps': [0.5]}),
])
def test_suites_pass(name, params):
    report = run_experiment(ExperimentConfig(name, params))

    assert report.ok
    assert all(row.experiment == name for row in report.rows)
    assert any(row.passed == 'true' for row in report.rows)


def test_soft_approx_suite_tests_every_functional(monkeypatch):
    tested = []
    original = experiments.accept_test

    def counting(soft, ell, *args):
        tested.append(ell)
        return original(soft, ell, *args)

    monkeypatch.setattr(experiments, 'accept_test', counting)
    report = run_experiment(ExperimentConfig(
        'soft-approx', {'eps': [0.25], 'functionals': 40, 'samples': 300}))

    assert report.ok
    assert len(tested) == 40
    assert _values(report, 'acceptance rate') == [1.0]
