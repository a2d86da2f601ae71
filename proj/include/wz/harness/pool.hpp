#pragma once

#include <functional>

namespace wz {

/// Runs task(i) for i in [0, count) on up to `workers` threads (0 selects the
/// hardware concurrency). Tasks write their own result slots, so callers fold
/// the results in index order whatever the completion order was. The first
/// exception escaping a task is rethrown after all workers join.
void parallel_for(int count, int workers, const std::function<void(int)>& task);

int resolve_workers(int requested);

}  // namespace wz
