#pragma once

// Shared fixtures and random model generators for the test suites.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mchr/analytic.hpp"
#include "mchr/model.hpp"

#ifndef MCHR_FIXTURE_DIR
#define MCHR_FIXTURE_DIR "fixtures"
#endif

namespace mchr::testing {

inline std::string fixture(const std::string& name) { return std::string(MCHR_FIXTURE_DIR) + "/" + name; }

inline ModelSpec exponentials(const std::vector<double>& rates) {
  IndependentModel m;
  for (double r : rates) m.laws.emplace_back(HazardCurve::constant(r));
  return ModelSpec(std::move(m));
}

/// r(empty) = (1,2,3), r_1({3}) = 4, r_2({3}) = 1, every other rate 1.
inline ModelSpec thls3() {
  ThlsModel m(3);
  for_each_submask(SubsetMask::full(3), [&](SubsetMask failed) {
    for (int j = 0; j < 3; ++j)
      if (!failed.contains(j)) m.set_rate(failed, j, 1.0);
  });
  m.set_rate({}, 0, 1.0);
  m.set_rate({}, 1, 2.0);
  m.set_rate({}, 2, 3.0);
  m.set_rate(SubsetMask::single(2), 0, 4.0);
  m.set_rate(SubsetMask::single(2), 1, 1.0);
  return ModelSpec(std::move(m));
}

/// r_1 = 1, r_2 = 2 initially; r_2({1}) = 5, r_1({2}) = 3.
inline ModelSpec thls2() {
  ThlsModel m(2);
  m.set_rate({}, 0, 1.0);
  m.set_rate({}, 1, 2.0);
  m.set_rate(SubsetMask::single(0), 1, 5.0);
  m.set_rate(SubsetMask::single(1), 0, 3.0);
  return ModelSpec(std::move(m));
}

inline ModelSpec frailty_gamma() { return ModelSpec(FrailtyExpModel{{1.0, 2.0}, GammaLaw{2.0, 1.0}}); }

/// X_1 = 1/2 - eps, X_2, X_3 uniform on (0, 1).
inline ModelSpec atom_uniforms(double eps = 0.05) {
  IndependentModel m;
  m.laws.emplace_back(DiracLaw{0.5 - eps});
  m.laws.emplace_back(UniformLaw{0.0, 1.0});
  m.laws.emplace_back(UniformLaw{0.0, 1.0});
  return ModelSpec(std::move(m));
}

/// Efron-style dice mapped by v -> 10 - v and smoothed by uniforms of width 0.1.
inline const std::vector<std::vector<int>>& dice_faces() {
  static const std::vector<std::vector<int>> faces{{2, 2, 4, 4, 9, 9}, {1, 1, 6, 6, 8, 8}, {3, 3, 5, 5, 7, 7}};
  return faces;
}

inline ModelSpec dice() {
  IndependentModel m;
  for (const auto& die : dice_faces()) {
    UniformMixture mix;
    for (std::size_t k = 0; k < die.size(); k += 2) {
      const double centre = 10.0 - die[k];
      mix.weights.push_back(1.0 / 3.0);
      mix.components.push_back({centre - 0.05, centre + 0.05});
    }
    m.laws.emplace_back(std::move(mix));
  }
  return ModelSpec(std::move(m));
}

/// Exchangeable thls: every rate depends only on |I|.
inline ModelSpec exchangeable_thls(int n) {
  ThlsModel m(n);
  for_each_submask(SubsetMask::full(n), [&](SubsetMask failed) {
    for (int j = 0; j < n; ++j)
      if (!failed.contains(j)) m.set_rate(failed, j, 1.0 + 0.5 * failed.size());
  });
  return ModelSpec(std::move(m));
}

/// Thls with rows proportional to w: r_j(I) = w_j * (1 + |I|).
inline ModelSpec proportional_thls(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  ThlsModel m(n);
  for_each_submask(SubsetMask::full(n), [&](SubsetMask failed) {
    for (int j = 0; j < n; ++j)
      if (!failed.contains(j)) m.set_rate(failed, j, w[static_cast<std::size_t>(j)] * (1.0 + failed.size()));
  });
  return ModelSpec(std::move(m));
}

/// Four-variable thls whose importance order flips between paths {1,2,3} and {1,2,4}.
inline ModelSpec reversal_thls() {
  ThlsModel m(4);
  for_each_submask(SubsetMask::full(4), [&](SubsetMask failed) {
    for (int j = 0; j < 4; ++j)
      if (!failed.contains(j)) m.set_rate(failed, j, 1.0);
  });
  m.set_rate(SubsetMask::single(3), 1, 3.0);
  m.set_rate(SubsetMask::single(2), 0, 3.0);
  return ModelSpec(std::move(m));
}

// ---- random generators ----

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  std::vector<double> simplex(int k) {
    std::vector<double> w;
    for (int i = 0; i < k; ++i) w.push_back(uniform(0.2, 1.0));
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
    return w;
  }

  PiecewiseHazard piecewise(double lo, double hi) {
    PiecewiseHazard p;
    const int pieces = integer(1, 3);
    double t = 0.0;
    for (int k = 0; k < pieces; ++k) {
      t += uniform(0.2, 1.0);
      p.knots.push_back(t);
      p.rates.push_back(uniform(lo, hi));
    }
    p.tail_rate = uniform(lo, hi);
    return p;
  }

  /// A proper hazard curve with a positive tail rate.
  HazardCurve hazard() {
    switch (integer(0, 3)) {
      case 0: return HazardCurve::constant(uniform(0.3, 3.0));
      case 1: return HazardCurve(WeibullHazard{uniform(0.7, 2.5), uniform(0.4, 2.0), 0.0});
      case 2: return HazardCurve(LomaxHazard{uniform(1.0, 4.0), uniform(0.5, 2.0)});
      default: return HazardCurve(piecewise(0.2, 3.0));
    }
  }

  UniformLaw uniform_law() {
    const double a = uniform(0.0, 2.0);
    return {a, a + uniform(0.2, 2.0)};
  }

  LifetimeLaw law(bool allow_atom) {
    const int pick = integer(0, allow_atom ? 3 : 2);
    if (pick == 0) return LifetimeLaw(hazard());
    if (pick == 1) return LifetimeLaw(uniform_law());
    if (pick == 2) {
      UniformMixture m;
      const int k = integer(2, 3);
      m.weights = simplex(k);
      for (int i = 0; i < k; ++i) m.components.push_back(uniform_law());
      return LifetimeLaw(std::move(m));
    }
    return LifetimeLaw(DiracLaw{uniform(0.1, 2.5)});
  }

  ModelSpec independent(int n) {
    IndependentModel m;
    bool atom_used = false;
    for (int j = 0; j < n; ++j) {
      m.laws.push_back(law(!atom_used));
      atom_used = atom_used || m.laws.back().has_atom();
    }
    return ModelSpec(std::move(m));
  }

  ModelSpec thls(int n) {
    ThlsModel m(n);
    for_each_submask(SubsetMask::full(n), [&](SubsetMask failed) {
      for (int j = 0; j < n; ++j)
        if (!failed.contains(j)) m.set_rate(failed, j, uniform(0.2, 3.0));
    });
    return ModelSpec(std::move(m));
  }

  ModelSpec frailty(int n) {
    FrailtyExpModel m;
    for (int j = 0; j < n; ++j) m.c.push_back(uniform(0.2, 3.0));
    if (integer(0, 1) == 0) {
      m.theta = GammaLaw{uniform(0.5, 4.0), uniform(0.5, 3.0)};
    } else {
      DiscreteLaw d;
      const int k = integer(2, 4);
      d.probs = simplex(k);
      for (int i = 0; i < k; ++i) d.values.push_back(uniform(0.2, 3.0));
      m.theta = d;
    }
    return ModelSpec(std::move(m));
  }

  ModelSpec set_dependent(int n) {
    SetDependentModel m(n);
    for_each_submask(SubsetMask::full(n), [&](SubsetMask failed) {
      for (int j = 0; j < n; ++j)
        if (!failed.contains(j)) m.set_curve(failed, j, hazard());
    });
    return ModelSpec(std::move(m));
  }

  ModelSpec of_kind(ModelKind kind, int n) {
    switch (kind) {
      case ModelKind::independent: return independent(n);
      case ModelKind::thls: return thls(n);
      case ModelKind::frailty_exp: return frailty(n);
      default: return set_dependent(n);
    }
  }

 private:
  std::mt19937_64 rng_;
};

/// X_k = s_k * Y for one random base law Y and increasing scales: X_1 <=st X_2 <=st ...
inline ModelSpec st_ordered_independent(Gen& g, int n) {
  std::vector<double> scales;
  for (int k = 0; k < n; ++k) scales.push_back(g.uniform(0.5, 3.0));
  std::sort(scales.begin(), scales.end());
  for (std::size_t k = 1; k < scales.size(); ++k) scales[k] = std::max(scales[k], scales[k - 1] * 1.05);
  const int family = g.integer(0, 4);
  const double shape = g.uniform(0.7, 2.5);
  const double base = g.uniform(0.5, 1.5);
  const PiecewiseHazard pw = g.piecewise(0.3, 2.0);
  IndependentModel m;
  for (double s : scales) {
    switch (family) {
      case 0: m.laws.emplace_back(HazardCurve::constant(base / s)); break;
      case 1: m.laws.emplace_back(HazardCurve(WeibullHazard{shape, base * s, 0.0})); break;
      case 2: m.laws.emplace_back(HazardCurve(LomaxHazard{shape + 0.5, base * s})); break;
      case 3: m.laws.emplace_back(UniformLaw{0.2 * s, (0.2 + base) * s}); break;
      default: {
        PiecewiseHazard p = pw;
        for (double& k : p.knots) k *= s;
        for (double& r : p.rates) r /= s;
        p.tail_rate /= s;
        m.laws.emplace_back(HazardCurve(p));
      }
    }
  }
  return ModelSpec(std::move(m));
}

/// Thls whose rates, after any set of failures, keep the order of the initial rates.
inline ModelSpec monotone_thls(Gen& g, int n) {
  std::vector<int> rank(static_cast<std::size_t>(n));
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), g.engine());
  ThlsModel m(n);
  for_each_submask(SubsetMask::full(n), [&](SubsetMask failed) {
    std::vector<int> alive;
    for (int j = 0; j < n; ++j)
      if (!failed.contains(j)) alive.push_back(j);
    std::sort(alive.begin(), alive.end(), [&](int a, int b) { return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]; });
    std::vector<double> rates;
    for (std::size_t k = 0; k < alive.size(); ++k) rates.push_back(g.uniform(0.2, 3.0));
    std::sort(rates.begin(), rates.end());
    for (std::size_t k = 1; k < rates.size(); ++k) rates[k] = std::max(rates[k], rates[k - 1] + 0.05);
    for (std::size_t k = 0; k < alive.size(); ++k) m.set_rate(failed, alive[k], rates[k]);
  });
  return ModelSpec(std::move(m));
}

/// Sets MCHR_THREADS for the lifetime of the object.
class ThreadCap {
 public:
  explicit ThreadCap(const char* value) {
    if (const char* old = std::getenv("MCHR_THREADS")) saved_ = old;
    setenv("MCHR_THREADS", value, 1);
  }
  ~ThreadCap() {
    if (saved_.empty()) unsetenv("MCHR_THREADS");
    else setenv("MCHR_THREADS", saved_.c_str(), 1);
  }
  ThreadCap(const ThreadCap&) = delete;
  ThreadCap& operator=(const ThreadCap&) = delete;

 private:
  std::string saved_;
};

}  // namespace mchr::testing
