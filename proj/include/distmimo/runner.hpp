// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "distmimo/results.hpp"
#include "distmimo/scenario.hpp"

namespace distmimo {

/// Runs indexed tasks on a worker pool. Each task owns its random substream
/// and writes to its own slot, so the result is independent of the worker
/// count; the first exception thrown by a task is rethrown after the join.
void parallel_for(int n_tasks, int workers, const std::function<void(int)>& fn);

std::string version_string();

/// Executes the configured experiment and returns the table described by
/// the mode documentation in scenario.hpp. Deterministic given the seed.
ResultTable run_scenario(const ScenarioConfig& cfg, int workers = 1);

}  // namespace distmimo
