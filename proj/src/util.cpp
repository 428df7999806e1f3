#include "ldcforge/util.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ldcforge/errors.hpp"

namespace ldcforge::util {

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound == 0) throw InternalError("uniform_below with zero bound");
  // Largest multiple of bound representable in 64 bits; reject above it.
  const uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % bound);
  for (;;) {
    const uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

unsigned worker_count() {
  if (const char* env = std::getenv("LDCFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

void parallel_for(uint64_t begin, uint64_t end, uint64_t min_chunk,
                  const std::function<void(uint64_t, uint64_t)>& fn) {
  if (begin >= end) return;
  const uint64_t span = end - begin;
  unsigned workers = worker_count();
  if (min_chunk == 0) min_chunk = 1;
  const uint64_t max_workers = (span + min_chunk - 1) / min_chunk;
  if (max_workers < workers) workers = static_cast<unsigned>(max_workers);
  if (workers <= 1) {
    fn(begin, end);
    return;
  }
  const uint64_t chunk = span / workers;
  const uint64_t rem = span % workers;
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex err_mu;
  uint64_t lo = begin;
  for (unsigned w = 0; w < workers; ++w) {
    const uint64_t hi = lo + chunk + (w < rem ? 1 : 0);
    threads.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
    lo = hi;
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {
constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}
}  // namespace

std::string words_to_hex(const std::vector<uint64_t>& w, size_t bits) {
  const size_t total = hex_digits_for_bits(bits);
  std::string out;
  out.reserve(total);
  size_t remaining = total;
  for (size_t i = 0; i < w.size() && remaining > 0; ++i) {
    const size_t digits = std::min<size_t>(16, remaining);
    char buf[16];
    uint64_t v = w[i];
    for (size_t d = 0; d < digits; ++d) {
      buf[digits - 1 - d] = kHex[v & 0xf];
      v >>= 4;
    }
    out.append(buf, digits);
    remaining -= digits;
  }
  return out;
}

std::vector<uint64_t> hex_to_words(const std::string& s, size_t bits) {
  const size_t total = hex_digits_for_bits(bits);
  if (s.size() != total)
    throw Error("hex string has " + std::to_string(s.size()) + " digits, expected " +
                std::to_string(total));
  const size_t nw = (bits + 63) / 64;
  std::vector<uint64_t> w(nw, 0);
  size_t pos = 0;
  for (size_t i = 0; i < nw && pos < total; ++i) {
    const size_t digits = std::min<size_t>(16, total - pos);
    uint64_t v = 0;
    for (size_t d = 0; d < digits; ++d) {
      const int hv = hex_value(s[pos + d]);
      if (hv < 0) throw Error("invalid hex digit in element string");
      v = (v << 4) | static_cast<uint64_t>(hv);
    }
    w[i] = v;
    pos += digits;
  }
  const unsigned tm = bits % 64;
  if (tm && (w[nw - 1] >> tm)) throw Error("hex value exceeds bit width");
  return w;
}

}  // namespace ldcforge::util
