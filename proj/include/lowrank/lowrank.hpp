// Copyright 2026 The lowrank Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#pragma once

#include "lowrank/applications.hpp"
#include "lowrank/baselines.hpp"
#include "lowrank/feasibility.hpp"
#include "lowrank/functionals.hpp"
#include "lowrank/heuristics.hpp"
#include "lowrank/instance_io.hpp"
#include "lowrank/linalg.hpp"
#include "lowrank/problem.hpp"
#include "lowrank/random.hpp"
#include "lowrank/report.hpp"
#include "lowrank/sdp.hpp"
