#include "hivemind/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hive {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// z-score of the 99th percentile of the standard normal.
constexpr double kZ99 = 2.3263478740408408;

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view name)
    : state_(mix64(master_seed ^ mix64(fnv1a(name)))) {}

std::uint64_t RngStream::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

double RngStream::exponential(double mean) {
  double u = uniform();
  return -mean * std::log1p(-u);
}

double RngStream::normal(double mean, double stddev) {
  double u1 = uniform();
  double u2 = uniform();
  // guard against log(0)
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::lognormal(double mu, double sigma) {
  return std::exp(normal(mu, sigma));
}

LognormalSpec LognormalSpec::from_mean_p99(double mean, double p99) {
  if (mean <= 0.0 || p99 < mean) {
    throw std::invalid_argument("LognormalSpec: need p99 >= mean > 0");
  }
  // mean = exp(mu + sigma^2/2), p99 = exp(mu + z99*sigma)
  // => sigma^2/2 - z99*sigma + log(p99/mean) = 0, take the smaller root.
  double c = std::log(p99 / mean);
  double disc = kZ99 * kZ99 - 2.0 * c;
  if (disc < 0.0) throw std::invalid_argument("LognormalSpec: p99/mean ratio too large");
  double sigma = kZ99 - std::sqrt(disc);
  double mu = std::log(mean) - sigma * sigma / 2.0;
  return {mu, sigma};
}

double LognormalSpec::sample(RngStream& rng) const { return rng.lognormal(mu, sigma); }

double LognormalSpec::mean() const { return std::exp(mu + sigma * sigma / 2.0); }

}  // namespace hive
