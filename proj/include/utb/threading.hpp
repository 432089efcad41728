#pragma once
#include <functional>

namespace utb {

// 0 means "use hardware concurrency".
int resolve_threads(int requested);

// Runs fn(task) for task in [0, num_tasks). Tasks are distributed over workers
// in fixed contiguous blocks and every task touches only its own outputs, so
// results do not depend on the number of workers.
void parallel_for(int num_tasks, int num_threads, const std::function<void(int)>& fn);

}  // namespace utb
