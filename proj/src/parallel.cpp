#include "stein/parallel.hpp"

#include <algorithm>

namespace stein::parallel {

namespace {

int g_threads = 0;  // 0 = uninitialized

int initial_thread_count() {
  if (const char* env = std::getenv("STEINPAIRS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int thread_count() {
  if (g_threads == 0) g_threads = initial_thread_count();
  return g_threads;
}

void set_thread_count(int n) { g_threads = std::max(1, n); }

std::vector<Range> chunk_grid(std::uint64_t total) {
  // 256 chunks max keeps scheduling overhead low; grids of small jobs are a
  // single chunk. Grid geometry is a pure function of `total`.
  constexpr std::uint64_t kTargetChunks = 256;
  constexpr std::uint64_t kMinChunk = 16;
  std::vector<Range> grid;
  if (total == 0) return grid;
  std::uint64_t chunk = std::max(kMinChunk, (total + kTargetChunks - 1) / kTargetChunks);
  for (std::uint64_t b = 0; b < total; b += chunk)
    grid.push_back({b, std::min(total, b + chunk)});
  return grid;
}

void run_chunks(std::uint64_t total,
                const std::function<void(std::size_t, Range)>& body) {
  const auto grid = chunk_grid(total);
  if (grid.empty()) return;
  const int workers = std::min<int>(thread_count(), static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < grid.size(); ++c) body(c, grid[c]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= grid.size() || failed.load()) return;
      try {
        body(c, grid[c]);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace stein::parallel
