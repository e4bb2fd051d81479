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
import json

import numpy as np
import pytest

from sandwich.socone import (
    ball_bn,
    bn_facet_count,
    gadget_to_json,
    quarter_cone,
    quarter_gadget
)


@pytest.mark.parametrize('m', [2, 5, 10])
def test_gadget_row_count(m):
    gadget = quarter_gadget(m)

    assert gadget.n_rows == 3 * (m - 1) + 4
    assert gadget.A_eq.shape == (m - 1, 2 * m)
    assert gadget.projection.shape == (2, 2 * m)
    assert len(gadget.variables) == 2 * m


@pytest.mark.parametrize('m', [1, 31])
def test_gadget_stage_range(m):
    with pytest.raises(ValueError):
        quarter_gadget(m)


@pytest.mark.parametrize('m', [2, 3, 6, 8])
def test_axis_point_is_member(m):
    assert quarter_gadget(m).contains(np.array([1.0, 0.0]))


def test_quarter_circle_is_inside():
    gadget = quarter_gadget(8)

    for degrees in range(0, 91, 15):
        t = np.radians(degrees)
        assert gadget.contains(np.array([np.cos(t), np.sin(t)]))


def test_points_away_from_gadget():
    gadget = quarter_gadget(6)

    assert not gadget.contains(np.array([1.2, 0.0]))
    assert not gadget.contains(np.array([0.8, 0.8]))
    assert not gadget.contains(np.array([-0.1, 0.5]))


def test_quarter_cone_is_homogeneous():
    cone = quarter_cone(6)

    assert cone.contains(np.array([0.6, 0.8, 1.0]))
    assert cone.contains(np.array([1.2, 1.6, 2.0]))
    assert not cone.contains(np.array([1.2, 1.6, 1.5]))
    assert cone.n_facets == 2 * 6


def test_interval_ball():
    interval = ball_bn(1, 4)

    assert interval.n_facets == bn_facet_count(1, 4) == 2
    assert interval.contains(np.array([1.0]))
    assert interval.contains(np.array([-0.5]))
    assert not interval.contains(np.array([1.01]))


@pytest.mark.parametrize('d, m', [(2, 3), (3, 4), (4, 6)])
def test_facet_count(d, m):
    body = ball_bn(d, m)

    assert body.n_facets == bn_facet_count(d, m)
    assert body.n_facets <= 3 * d * m
    assert body.dim == d
    assert body.symmetric


def test_disc_contains_unit_vectors():
    disc = ball_bn(2, 5)

    for degrees in range(0, 360, 30):
        t = np.radians(degrees)
        assert disc.contains(np.array([np.cos(t), np.sin(t)]))

    assert not disc.contains(np.array([1.05, 0.0]))
    assert not disc.contains(np.array([-0.8, -0.8]))


def test_gadget_to_json():
    gadget = quarter_gadget(3)
    document = json.loads(json.dumps(gadget_to_json(gadget)))

    assert document['type'] == 'projected'
    assert document['m'] == 3
    assert document['variables'][:2] == ['xi_1', 'eta_1']
    assert np.array(document['normals']).shape == (3 * 2 + 4 - 2, 6)
    assert np.array(document['eq_normals']).shape == (2, 6)
    assert np.array(document['map']).shape == (2, 6)
