// Copyright 2026 The fdisac Authors
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

#pragma once

#include "fdisac/beams.hpp"
#include "fdisac/channels.hpp"
#include "fdisac/error.hpp"
#include "fdisac/format.hpp"
#include "fdisac/metrics.hpp"
#include "fdisac/milp/coefficients.hpp"
#include "fdisac/milp/lp_writer.hpp"
#include "fdisac/milp/model.hpp"
#include "fdisac/runner/config.hpp"
#include "fdisac/runner/csv.hpp"
#include "fdisac/runner/sweep.hpp"
#include "fdisac/solver/branch_bound.hpp"
#include "fdisac/solver/brute_force.hpp"
#include "fdisac/solver/solution.hpp"
#include "fdisac/solver/structured.hpp"
