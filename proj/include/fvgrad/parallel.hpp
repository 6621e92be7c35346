#pragma once

#include <cstddef>
#include <functional>

namespace fvgrad {

/// Maximum number of worker threads used by the per-cell loops.
/// 0 (the initial value resolves to hardware concurrency) is replaced by the
/// detected hardware parallelism. Results are independent of this setting:
/// parallel loops only ever write disjoint slots and reductions run serially.
unsigned max_threads();
void set_max_threads(unsigned n);

/// Chunked parallel loop over [0, n). fn(i) must only touch state owned by
/// index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace fvgrad
