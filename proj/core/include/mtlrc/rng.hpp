#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mtlrc {

// Counter-based substream RNG. A stream is fully determined by (seed, stream
// index), so Monte Carlo draws can be evaluated in any order or thread layout
// and still produce identical results. Core generator is splitmix64.
class DrawRng {
 public:
  DrawRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull));
    have_spare_ = false;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform on (0,1), never returns 0 or 1
  double uniform() {
    const std::uint64_t u = next_u64() >> 11;  // 53 bits
    return (static_cast<double>(u) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  // +1 or -1 with equal probability
  double rademacher() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_;
};

// Number of worker threads: MTLRC_THREADS caps hardware concurrency.
int thread_budget();

// Static chunked parallel loop over [0, n). fn(i) must only write to
// index-i slots so the result is independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and standard error of per-draw values, accumulated in index order.
MeanStdErr summarize(const std::vector<double>& values);

}  // namespace mtlrc
