#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace stein::parallel {

// Worker count. Controlled by the environment (STEINPAIRS_THREADS) or
// set_thread_count(); never influences results, only wall time.
int thread_count();
void set_thread_count(int n);

struct Range {
  std::uint64_t begin;
  std::uint64_t end;
};

// Chunk grid depends only on `total`, never on the worker count, so any
// reduction done per chunk and combined in chunk order is bit-identical
// across thread counts.
std::vector<Range> chunk_grid(std::uint64_t total);

// Runs body(chunk_index, range) over the fixed grid on the worker pool.
// Bodies must only write to state owned by their chunk index.
void run_chunks(std::uint64_t total,
                const std::function<void(std::size_t, Range)>& body);

// Deterministic sum of f(i) for i in [0,total): per-chunk partials are
// accumulated in index order and combined in chunk order.
template <typename F>
double sum_indexed(std::uint64_t total, F&& f) {
  const auto grid = chunk_grid(total);
  std::vector<double> partial(grid.size(), 0.0);
  run_chunks(total, [&](std::size_t c, Range r) {
    double acc = 0.0;
    for (std::uint64_t i = r.begin; i < r.end; ++i) acc += f(i);
    partial[c] = acc;
  });
  double out = 0.0;
  for (double p : partial) out += p;
  return out;
}

}  // namespace stein::parallel
