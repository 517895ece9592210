#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace medfilter {

// splitmix64 finalizer; used to turn (seed, index) pairs into well-spread
// stream seeds so per-start / per-replicate streams are independent of
// scheduling order.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);
// Two-level derivation for nested scopes (e.g. replicate -> purpose slot).
std::uint64_t derive2(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Deterministic random stream: mt19937_64 engine (sequence fixed by the
// standard) with hand-rolled distributions, so draws are identical across
// compilers and standard libraries. Not thread-safe; use one per task.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}
  static RngStream derived(std::uint64_t seed, std::uint64_t index) {
    return RngStream(derive_stream_seed(seed, index));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  // Uniform integer on [0, bound), Lemire's unbiased method. bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Uniform integer on [lo, hi] inclusive.
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Standard normal via Box-Muller; second variate cached.
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Partial Fisher-Yates: after the call, idx[0..k) is a uniform random
  // k-subset of the original entries, in uniform random order.
  void partial_shuffle(std::vector<int>& idx, std::size_t k);

private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace medfilter
