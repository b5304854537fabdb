#pragma once

#include <cstdint>
#include <string_view>

namespace hive {

// Named reproducible random substream. The state is a pure function of
// (master seed, stream name), so adding or reordering draws on one stream
// never perturbs another. Distributions are implemented by hand rather
// than through <random> so sequences are identical across standard
// library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view name);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p);
  double exponential(double mean);
  // Box-Muller; one draw consumes two uniforms, no cached second sample.
  double normal(double mean, double stddev);
  double lognormal(double mu, double sigma);

 private:
  std::uint64_t state_;
};

// Lognormal pinned by its mean and 99th percentile (heavy-tailed task
// latencies are specified that way throughout the configs).
struct LognormalSpec {
  double mu = 0.0;
  double sigma = 0.0;

  static LognormalSpec from_mean_p99(double mean, double p99);
  double sample(RngStream& rng) const;
  double mean() const;
};

}  // namespace hive
