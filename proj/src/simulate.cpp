#include "mchr/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "mchr/errors.hpp"

namespace mchr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWilsonZ = 1.959963984540054;

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double sample_law(const LifetimeLaw& law, RandomStream& rng) {
  const auto& form = law.form();
  if (const auto* h = std::get_if<HazardCurve>(&form)) return h->inverse_cumulative(0.0, rng.exponential());
  if (const auto* u = std::get_if<UniformLaw>(&form)) return u->a + rng.uniform() * (u->b - u->a);
  if (const auto* d = std::get_if<DiracLaw>(&form)) return d->c;
  const auto& m = std::get<UniformMixture>(form);
  double pick = rng.uniform();
  std::size_t k = 0;
  for (; k + 1 < m.weights.size(); ++k) {
    if (pick < m.weights[k]) break;
    pick -= m.weights[k];
  }
  const auto& c = m.components[k];
  return c.a + rng.uniform() * (c.b - c.a);
}

double sample_theta(const FrailtyLaw& law, RandomStream& rng) {
  if (const auto* g = std::get_if<GammaLaw>(&law)) {
    std::gamma_distribution<double> dist(g->shape, 1.0 / g->rate);
    return dist(rng);
  }
  const auto& d = std::get<DiscreteLaw>(law);
  double pick = rng.uniform();
  std::size_t k = 0;
  for (; k + 1 < d.probs.size(); ++k) {
    if (pick < d.probs[k]) break;
    pick -= d.probs[k];
  }
  return d.values[k];
}

void check_estimator_args(const ModelSpec& model, SubsetMask a, std::int64_t n_samples) {
  if (a.empty() || !a.is_subset_of(SubsetMask::full(model.n()))) throw ModelError("subset must be a non-empty subset of 1..n");
  if (n_samples < 1) throw ModelError("n_samples must be >= 1");
}

std::vector<Estimate> to_estimates(const std::vector<std::int64_t>& hits, std::int64_t n, std::uint64_t seed) {
  std::vector<Estimate> out;
  out.reserve(hits.size());
  for (auto h : hits) out.push_back(wilson_estimate(h, n, seed));
  return out;
}

// Counts, per member of A, how often it fails first; sample i uses stream i.
template <bool Parallel>
std::vector<std::int64_t> count_first(const ModelSpec& model, SubsetMask a, std::int64_t n_samples,
                                      std::uint64_t seed) {
  const int n = model.n();
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  const auto members = a.members();
  for (std::size_t k = 0; k < members.size(); ++k) slot[static_cast<std::size_t>(members[k])] = static_cast<int>(k);
  std::vector<std::int64_t> hits(members.size(), 0);
  const int workers = Parallel ? worker_count() : 1;
#pragma omp parallel num_threads(workers) if (Parallel)
  {
    SequenceSampler sampler(model);
    std::vector<std::int64_t> local(members.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n_samples; ++i) {
      RandomStream rng(seed, static_cast<std::uint64_t>(i));
      ++local[static_cast<std::size_t>(slot[static_cast<std::size_t>(sampler.first_in(rng, a).index)])];
    }
#pragma omp critical
    for (std::size_t k = 0; k < local.size(); ++k) hits[k] += local[k];
  }
  return hits;
}

template <bool Parallel>
std::vector<std::int64_t> count_survivors(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                          std::int64_t n_samples, std::uint64_t seed) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw ModelError("time grid must be strictly increasing");
  std::vector<std::int64_t> alive(grid.size(), 0);
  const int workers = Parallel ? worker_count() : 1;
#pragma omp parallel num_threads(workers) if (Parallel)
  {
    SequenceSampler sampler(model);
    std::vector<std::int64_t> local(grid.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n_samples; ++i) {
      RandomStream rng(seed, static_cast<std::uint64_t>(i));
      const double t = sampler.first_in(rng, a).time;
      // grid is increasing: count every grid point strictly below t
      const auto below = std::lower_bound(grid.begin(), grid.end(), t) - grid.begin();
      for (std::ptrdiff_t k = 0; k < below; ++k) ++local[static_cast<std::size_t>(k)];
    }
#pragma omp critical
    for (std::size_t k = 0; k < local.size(); ++k) alive[k] += local[k];
  }
  return alive;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed;
  std::uint64_t key = splitmix64(x) ^ (stream * 0xd1342543de82ef95ull);
  for (auto& s : s_) s = splitmix64(key);
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::exponential() { return -std::log(uniform()); }

SequenceSampler::SequenceSampler(const ModelSpec& model)
    : model_(model), n_(model.n()), times_(static_cast<std::size_t>(model.n())), order_(static_cast<std::size_t>(model.n())) {}

void SequenceSampler::sample(RandomStream& rng, std::vector<FailureEvent>& out) {
  out.clear();
  if (const auto* tm = model_.as<ThlsModel>()) {
    SubsetMask failed;
    double t = 0.0;
    for (int step = 0; step < n_; ++step) {
      const double total = tm->total_rate(failed);
      t += rng.exponential() / total;
      double pick = rng.uniform() * total;
      int chosen = -1;
      for (int l = 0; l < n_; ++l) {
        if (failed.contains(l)) continue;
        chosen = l;
        pick -= tm->rate(failed, l);
        if (pick < 0.0) break;
      }
      out.push_back({chosen, t});
      failed = failed.with(chosen);
    }
    return;
  }
  if (const auto* sm = model_.as<SetDependentModel>()) {
    SubsetMask failed;
    double t = 0.0;
    for (int step = 0; step < n_; ++step) {
      double best = kInf;
      int chosen = -1;
      for (int l = 0; l < n_; ++l) {
        if (failed.contains(l)) continue;
        const double tau = sm->curve(failed, l).inverse_cumulative(t, rng.exponential());
        if (chosen < 0 || tau < best) {
          best = tau;
          chosen = l;
        }
      }
      t = best;
      out.push_back({chosen, t});
      failed = failed.with(chosen);
    }
    return;
  }
  // independent and frailty: all lifetimes drawn at once, then sorted
  if (const auto* im = model_.as<IndependentModel>()) {
    for (int j = 0; j < n_; ++j) times_[static_cast<std::size_t>(j)] = sample_law(im->laws[static_cast<std::size_t>(j)], rng);
  } else {
    const auto& fm = *model_.as<FrailtyExpModel>();
    const double theta = sample_theta(fm.theta, rng);
    for (int j = 0; j < n_; ++j)
      times_[static_cast<std::size_t>(j)] = rng.exponential() / (fm.c[static_cast<std::size_t>(j)] * theta);
  }
  for (int j = 0; j < n_; ++j) order_[static_cast<std::size_t>(j)] = j;
  std::sort(order_.begin(), order_.end(), [this](int x, int y) {
    return times_[static_cast<std::size_t>(x)] < times_[static_cast<std::size_t>(y)];
  });
  for (int j : order_) out.push_back({j, times_[static_cast<std::size_t>(j)]});
}

FailureEvent SequenceSampler::first_in(RandomStream& rng, SubsetMask a) {
  if (const auto* tm = model_.as<ThlsModel>()) {
    SubsetMask failed;
    double t = 0.0;
    for (;;) {
      const double total = tm->total_rate(failed);
      t += rng.exponential() / total;
      double pick = rng.uniform() * total;
      int chosen = -1;
      for (int l = 0; l < n_; ++l) {
        if (failed.contains(l)) continue;
        chosen = l;
        pick -= tm->rate(failed, l);
        if (pick < 0.0) break;
      }
      if (a.contains(chosen)) return {chosen, t};
      failed = failed.with(chosen);
    }
  }
  if (const auto* sm = model_.as<SetDependentModel>()) {
    SubsetMask failed;
    double t = 0.0;
    for (;;) {
      double best = kInf;
      int chosen = -1;
      for (int l = 0; l < n_; ++l) {
        if (failed.contains(l)) continue;
        const double tau = sm->curve(failed, l).inverse_cumulative(t, rng.exponential());
        if (chosen < 0 || tau < best) {
          best = tau;
          chosen = l;
        }
      }
      t = best;
      if (a.contains(chosen)) return {chosen, t};
      failed = failed.with(chosen);
    }
  }
  // independent and frailty: only the members of A matter
  FailureEvent first{-1, kInf};
  if (const auto* im = model_.as<IndependentModel>()) {
    for (int j = 0; j < n_; ++j) {
      if (!a.contains(j)) continue;
      const double x = sample_law(im->laws[static_cast<std::size_t>(j)], rng);
      if (first.index < 0 || x < first.time) first = {j, x};
    }
    return first;
  }
  const auto& fm = *model_.as<FrailtyExpModel>();
  const double theta = sample_theta(fm.theta, rng);
  for (int j = 0; j < n_; ++j) {
    if (!a.contains(j)) continue;
    const double x = rng.exponential() / (fm.c[static_cast<std::size_t>(j)] * theta);
    if (first.index < 0 || x < first.time) first = {j, x};
  }
  return first;
}

FailureSequence sample_sequence(const ModelSpec& model, RandomStream& rng) {
  SequenceSampler sampler(model);
  FailureSequence seq;
  sampler.sample(rng, seq.events);
  return seq;
}

Estimate wilson_estimate(std::int64_t hits, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ModelError("an estimate needs at least one sample");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double spread = kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  Estimate e;
  e.value = p;
  // the interval ends are exact at the boundary counts
  e.lower = hits == 0 ? 0.0 : std::max(0.0, centre - spread);
  e.upper = hits == n ? 1.0 : std::min(1.0, centre + spread);
  e.half_width_95 = 0.5 * (e.upper - e.lower);
  e.n_samples = n;
  e.seed = seed;
  return e;
}

int worker_count() {
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("MCHR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) workers = static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1, workers);
}

std::vector<Estimate> estimate_alpha_vector(const ModelSpec& model, SubsetMask a, std::int64_t n_samples,
                                            std::uint64_t seed) {
  check_estimator_args(model, a, n_samples);
  return to_estimates(count_first<true>(model, a, n_samples, seed), n_samples, seed);
}

Estimate estimate_alpha_subset(const ModelSpec& model, SubsetMask a, int j, std::int64_t n_samples,
                               std::uint64_t seed) {
  if (!a.contains(j)) throw ModelError("j must belong to A");
  if (a.size() < 2) throw ModelError("A must have at least two members");
  const auto all = estimate_alpha_vector(model, a, n_samples, seed);
  const auto members = a.members();
  return all[static_cast<std::size_t>(std::find(members.begin(), members.end(), j) - members.begin())];
}

std::vector<Estimate> estimate_survival(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                        std::int64_t n_samples, std::uint64_t seed) {
  check_estimator_args(model, a, n_samples);
  return to_estimates(count_survivors<true>(model, a, grid, n_samples, seed), n_samples, seed);
}

namespace serial {

std::vector<Estimate> estimate_alpha_vector(const ModelSpec& model, SubsetMask a, std::int64_t n_samples,
                                            std::uint64_t seed) {
  check_estimator_args(model, a, n_samples);
  return to_estimates(count_first<false>(model, a, n_samples, seed), n_samples, seed);
}

std::vector<Estimate> estimate_survival(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                        std::int64_t n_samples, std::uint64_t seed) {
  check_estimator_args(model, a, n_samples);
  return to_estimates(count_survivors<false>(model, a, grid, n_samples, seed), n_samples, seed);
}

}  // namespace serial

}  // namespace mchr
