#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "phimix/rng.hpp"

namespace phimix {

/// How a Monte-Carlo run is cut up. Block `b` always draws from
/// `Rng(seed).split(b)`, so the output is a function of (samples, seed,
/// block_size) only; `workers` changes wall time, never results.
struct McPlan {
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::size_t block_size = 4096;
};

namespace detail {

template <class BlockFn>
void for_each_block(const McPlan& plan, BlockFn&& fn) {
  const std::size_t block = std::max<std::size_t>(plan.block_size, 1);
  const std::size_t blocks = (plan.samples + block - 1) / block;
  const Rng root(plan.seed);
  auto run_block = [&](std::size_t b) {
    Rng rng = root.split(b);
    const std::size_t begin = b * block;
    const std::size_t end = std::min(plan.samples, begin + block);
    fn(b, begin, end, rng);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(plan.workers, static_cast<unsigned>(blocks)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Draws `plan.samples` scalars with `draw(Rng&) -> double`.
template <class Draw>
std::vector<double> draw_scalars(const McPlan& plan, Draw&& draw) {
  std::vector<double> out(plan.samples);
  detail::for_each_block(plan, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t i = begin; i < end; ++i) out[i] = draw(rng);
  });
  return out;
}

/// Draws `plan.samples` points of dimension `dim`, row-major, with
/// `draw(Rng&, std::span<double>)`.
template <class Draw>
std::vector<double> draw_vectors(const McPlan& plan, std::size_t dim, Draw&& draw) {
  std::vector<double> out(plan.samples * dim);
  detail::for_each_block(plan, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t i = begin; i < end; ++i) draw(rng, std::span<double>(out.data() + i * dim, dim));
  });
  return out;
}

}  // namespace phimix
