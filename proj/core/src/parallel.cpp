#include "nambu_em/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "nambu_em/errors.hpp"

namespace nambu_em {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t default_limit() {
  const char* env = std::getenv("NAMBU_EM_THREADS");
  if (env != nullptr) {
    const std::size_t n = parse_thread_count(env);
    if (n == 0) {
      throw InvalidArgument(std::string("NAMBU_EM_THREADS must be a positive integer, got '") +
                            env + "'");
    }
    return n;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Below this many items the thread start-up cost dominates.
constexpr std::size_t kMinParallelItems = 2048;

}  // namespace

std::size_t parse_thread_count(const char* text) {
  if (text == nullptr || *text == '\0') return 0;
  std::size_t value = 0;
  for (const char* p = text; *p != '\0'; ++p) {
    if (*p < '0' || *p > '9') return 0;
    value = value * 10 + static_cast<std::size_t>(*p - '0');
    if (value > 4096) return 0;
  }
  return value;
}

std::size_t worker_limit() {
  if (const std::size_t n = g_override.load(); n != 0) return n;
  return default_limit();
}

void set_worker_limit(std::size_t n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_limit(), n / (kMinParallelItems / 2) + 1);
  if (workers <= 1 || n < kMinParallelItems) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t lo = w * chunk;
          const std::size_t hi = std::min(n, lo + chunk);
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace nambu_em
