#include "evidenza/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evidenza/error.hpp"
#include "evidenza/special.hpp"

namespace evidenza {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mix the stream id through its own SplitMix64 round before combining so that
  // neighbouring (seed, stream_id) pairs land on unrelated states.
  std::uint64_t s = seed;
  std::uint64_t key = splitmix64(s);
  std::uint64_t t = stream_id ^ 0x6a09e667f3bcc909ULL;
  key ^= splitmix64(t);
  for (auto& word : state_) {
    word = splitmix64(key);
  }
  if (std::all_of(state_.begin(), state_.end(), [](auto w) { return w == 0; })) {
    state_[0] = 1;
  }
}

SeededStream::result_type SeededStream::operator()() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double uniform01(SeededStream& stream) {
  // Midpoint of one of 2^53 equal cells: in (0,1) and symmetric about 1/2.
  constexpr double scale = 0x1.0p-53;
  return (static_cast<double>(stream() >> 11) + 0.5) * scale;
}

std::vector<double> sorted_uniforms(SeededStream& stream, std::size_t n) {
  std::vector<double> u(n);
  for (auto& x : u) x = uniform01(stream);
  std::sort(u.begin(), u.end());
  for (;;) {
    auto dup = std::adjacent_find(u.begin(), u.end());
    if (dup == u.end()) break;
    *dup = uniform01(stream);
    std::sort(u.begin(), u.end());
  }
  return u;
}

double std_normal(SeededStream& stream) { return std_normal_quantile(uniform01(stream)); }

double exponential1(SeededStream& stream) { return -std::log(uniform01(stream)); }

double truncated_exponential(SeededStream& stream, double upper) {
  if (!(upper > 0.0)) throw DomainError("truncated_exponential: upper bound must be positive");
  const double u = uniform01(stream);
  if (std::isinf(upper)) return -std::log(u);
  // P(X <= upper) = 1 - e^{-upper}
  const double mass = -std::expm1(-upper);
  const double x = -std::log1p(-u * mass);
  return std::clamp(x, 0.0, upper);
}

double truncated_normal(SeededStream& stream, double mu, double sigma, double lo, double hi) {
  if (!(sigma > 0.0)) throw DomainError("truncated_normal: sigma must be positive");
  if (!(lo < hi)) throw DomainError("truncated_normal: empty interval");

  double a = (lo - mu) / sigma;
  double b = (hi - mu) / sigma;
  // Work in the lower tail, where Phi carries full relative precision.
  const bool mirrored = a > 0.0;
  if (mirrored) {
    const double tmp = a;
    a = -b;
    b = -tmp;
  }
  const double pa = std_normal_cdf(a);
  const double pb = std_normal_cdf(b);
  const double mass = pb - pa;
  if (!(mass > 0.0)) {
    throw UnderflowError("truncated_normal: interval probability underflows");
  }
  const double u = uniform01(stream);
  double p = pa + u * mass;
  p = std::clamp(p, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
  double z = std_normal_quantile(p);
  z = std::clamp(z, a, b);
  if (mirrored) z = -z;
  return std::clamp(mu + sigma * z, lo, hi);
}

std::vector<double> gaussian_in_ball(SeededStream& stream, std::size_t d, double tau,
                                     double r2_max) {
  if (d == 0) throw DomainError("gaussian_in_ball: dimension must be positive");
  if (!(tau > 0.0)) throw DomainError("gaussian_in_ball: tau must be positive");
  if (!(r2_max > 0.0)) throw DomainError("gaussian_in_ball: r2_max must be positive");

  std::vector<double> x(d);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& xi : x) {
      xi = std_normal(stream);
      norm2 += xi * xi;
    }
  } while (norm2 == 0.0);

  const double shape = 0.5 * static_cast<double>(d);
  double cap = 1.0;
  if (!std::isinf(r2_max)) {
    cap = reg_lower_gamma(shape, 0.5 * tau * r2_max);
    if (!(cap > 0.0)) throw UnderflowError("gaussian_in_ball: ball probability underflows");
  }
  const double p = uniform01(stream) * cap;
  // chi-square(d) = 2 * Gamma(d/2, 1)
  double r2 = 2.0 * reg_lower_gamma_inv(shape, p) / tau;
  if (!std::isinf(r2_max)) r2 = std::min(r2, r2_max);

  const double scale = std::sqrt(r2 / norm2);
  for (auto& xi : x) xi *= scale;
  return x;
}

}  // namespace evidenza
