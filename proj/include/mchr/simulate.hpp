#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mchr/model.hpp"
#include "mchr/subset.hpp"

namespace mchr {

/// xoshiro256** keyed by (seed, stream). Every sample index gets its own
/// stream, so results do not depend on how samples are split across workers.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard exponential.
  double exponential();

 private:
  std::uint64_t s_[4];
};

/// The complete ordered failure sequence (X_{1:n}, J_1), ..., (X_{n:n}, J_n).
struct FailureSequence {
  std::vector<FailureEvent> events;
};

/// Exact sampler of failure sequences. Holds scratch buffers, so one
/// instance per thread.
class SequenceSampler {
 public:
  explicit SequenceSampler(const ModelSpec& model);

  /// Fills `out` with all n events in time order.
  void sample(RandomStream& rng, std::vector<FailureEvent>& out);
  /// The first failure among the members of A (stops as soon as it occurs).
  FailureEvent first_in(RandomStream& rng, SubsetMask a);

 private:
  const ModelSpec& model_;
  int n_;
  std::vector<double> times_;
  std::vector<int> order_;
};

FailureSequence sample_sequence(const ModelSpec& model, RandomStream& rng);

/// A proportion estimate with a 95% Wilson score interval. `value` is the
/// raw proportion; lower/upper are the interval ends and half_width_95 is
/// half their distance.
struct Estimate {
  double value = 0.0;
  double half_width_95 = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;

  bool covers(double x) const { return lower <= x && x <= upper; }
};

Estimate wilson_estimate(std::int64_t hits, std::int64_t n, std::uint64_t seed);

/// Worker cap: MCHR_THREADS if set to a positive integer, else the OpenMP default.
int worker_count();

/// P(X_{1:A} = X_j) for every j in A (increasing j), from one set of samples.
std::vector<Estimate> estimate_alpha_vector(const ModelSpec& model, SubsetMask a, std::int64_t n_samples,
                                            std::uint64_t seed);
Estimate estimate_alpha_subset(const ModelSpec& model, SubsetMask a, int j, std::int64_t n_samples,
                               std::uint64_t seed);
/// Raw pointwise estimates of P(X_{1:A} > t) on the grid.
std::vector<Estimate> estimate_survival(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                        std::int64_t n_samples, std::uint64_t seed);

/// Single-threaded reference implementations; bit-identical to the above.
namespace serial {
std::vector<Estimate> estimate_alpha_vector(const ModelSpec& model, SubsetMask a, std::int64_t n_samples,
                                            std::uint64_t seed);
std::vector<Estimate> estimate_survival(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                        std::int64_t n_samples, std::uint64_t seed);
}  // namespace serial

}  // namespace mchr
