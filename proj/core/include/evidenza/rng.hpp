#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace evidenza {

/// Seedable, splittable pseudo-random stream.
///
/// The engine is xoshiro256** (period 2^256 - 1). The 256-bit state is derived from the
/// pair (seed, stream_id) by two rounds of SplitMix64 mixing, so every replicate of an
/// experiment gets its own stream from a single master seed and a replicate index.
/// Output depends only on (seed, stream_id) and the number of draws taken, on every platform.
///
/// A stream has a single owner: it can be moved between threads but not copied.
class SeededStream {
 public:
  using result_type = std::uint64_t;

  explicit SeededStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  SeededStream(const SeededStream&) = delete;
  SeededStream& operator=(const SeededStream&) = delete;
  SeededStream(SeededStream&&) noexcept = default;
  SeededStream& operator=(SeededStream&&) noexcept = default;

  result_type operator()();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// Uniform draw strictly inside (0,1); 53 bits of resolution, never 0 or 1.
double uniform01(SeededStream& stream);

/// n uniforms sorted strictly ascending. Tied values are redrawn. The endpoints 0 and 1 are
/// not included; callers that need U(0) = 0 and U(n+1) = 1 add them.
std::vector<double> sorted_uniforms(SeededStream& stream, std::size_t n);

/// Standard normal by inversion of one uniform draw.
double std_normal(SeededStream& stream);

/// Standard exponential as -log(U).
double exponential1(SeededStream& stream);

/// Exp(1) conditioned on [0, upper]; upper may be +inf.
double truncated_exponential(SeededStream& stream, double upper);

/// N(mu, sigma^2) conditioned on [lo, hi] by inversion. Infinite bounds are allowed.
///
/// Intervals lying entirely above mu are sampled as the mirror image of the lower tail so the
/// CDF differences stay accurate far from the mean. Throws UnderflowError when the interval
/// carries no representable probability, DomainError on lo >= hi or sigma <= 0.
double truncated_normal(SeededStream& stream, double mu, double sigma, double lo, double hi);

/// X ~ N(0, tau^{-1} I_d) conditioned on |X|^2 <= r2_max (r2_max may be +inf).
///
/// Direction: a normalized vector of d standard normals. Squared radius: a chi-square(d)
/// variate truncated to [0, tau * r2_max] by inverting the regularized lower incomplete gamma.
/// Throws UnderflowError if the ball's chi-square mass underflows.
std::vector<double> gaussian_in_ball(SeededStream& stream, std::size_t d, double tau,
                                     double r2_max);

}  // namespace evidenza
