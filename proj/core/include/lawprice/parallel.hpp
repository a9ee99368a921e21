#pragma once

#include <cstddef>
#include <functional>

namespace lawprice {

/// Worker count: LAWPRICE_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks over
/// worker_count() threads; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lawprice
