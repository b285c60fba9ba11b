#pragma once

#include <cstddef>
#include <functional>

namespace her2 {

// Runs body(i) for i in [0, count) on `workers` threads. Work is claimed
// dynamically, so bodies must only write to index-private state. If any body
// throws, the exception from the lowest failing index is rethrown after all
// threads join; this keeps error reporting independent of scheduling.
void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& body);

}  // namespace her2
