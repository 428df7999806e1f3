#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ldcforge::util {

/// Uniform draw from [0, bound) by rejection; identical output on every
/// platform for a given engine state (std::uniform_int_distribution is not
/// portable across standard library implementations).
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

/// Worker count: LDCFORGE_THREADS if set and positive, else
/// hardware_concurrency, else 1.
unsigned worker_count();

/// Splits [begin, end) into contiguous chunks and runs fn(lo, hi) on each,
/// using up to worker_count() threads. Chunk boundaries depend only on the
/// range and the thread count, so writers that partition output by index
/// stay deterministic. Runs inline when a single worker suffices.
void parallel_for(uint64_t begin, uint64_t end, uint64_t min_chunk,
                  const std::function<void(uint64_t, uint64_t)>& fn);

/// Monotonic deadline helper for wall-clock budgets.
class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget) {}
  bool expired() const { return std::chrono::steady_clock::now() >= end_; }

 private:
  std::chrono::steady_clock::time_point end_;
};

/// Lowercase hex for a little-endian bit vector, low word first, exactly
/// `digits` hex digits total. Each word contributes up to 16 digits in
/// standard within-word notation before the next word begins.
std::string words_to_hex(const std::vector<uint64_t>& w, size_t bits);

/// Inverse of words_to_hex; validates length and digit set.
std::vector<uint64_t> hex_to_words(const std::string& s, size_t bits);

inline size_t hex_digits_for_bits(size_t bits) { return (bits + 3) / 4; }

}  // namespace ldcforge::util
