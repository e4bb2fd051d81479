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
from .bodies import (
    Ball,
    EllipsoidBody,
    HRep,
    LpBall,
    Projected,
    Sectioned,
    VRep,
    certify_sandwich
)
from .ellipsoid import john_inner_symmetric, loewner_mvee
from .experiments import ExperimentConfig, run_experiment
from .polyapprox import greedy_net
from .polynorm import moment_norm, power_sum_norm, tensor_lift
from .sdprelax import cut_relax_member, q_member
from .socone import ball_bn, quarter_gadget
from .softapprox import accept_test, build_soft
