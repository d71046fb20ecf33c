#pragma once

#include <functional>

namespace phasereg {

// Run body(0..n_items-1), possibly across threads (n_threads = 0 picks the
// hardware count). Bodies must only write state owned by their own index;
// callers aggregate in index order afterwards, keeping results independent
// of the execution schedule.
void parallel_for(int n_items, int n_threads, const std::function<void(int)>& body);

}  // namespace phasereg
