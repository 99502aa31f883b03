#pragma once

#include <cstddef>
#include <functional>

namespace nambu_em {

/// Worker cap. Reads NAMBU_EM_THREADS on each call; falls back to the
/// hardware concurrency. Throws InvalidArgument on a malformed value.
std::size_t worker_limit();

/// Overrides the worker cap for the current process (0 restores the default).
void set_worker_limit(std::size_t n);

/// Parses a NAMBU_EM_THREADS value; returns 0 when it is not a positive integer.
std::size_t parse_thread_count(const char* text);

/// Runs body(i) for i in [0, n). Each index is visited exactly once; bodies
/// must only write to index-owned storage. Small ranges run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nambu_em
