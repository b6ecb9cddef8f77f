#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "common.hpp"
#include "mchr/errors.hpp"

using namespace mchr;
using namespace mchr::testing;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

/// alpha_j^[A] of a thls model by summing over every complete failure order.
std::vector<double> alpha_by_permutations(const ThlsModel& m, SubsetMask a) {
  const int n = m.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  do {
    double p = 1.0;
    SubsetMask failed;
    for (int k : order) {
      p *= m.rate(failed, k) / m.total_rate(failed);
      failed = failed.with(k);
    }
    for (int k : order)
      if (a.contains(k)) {
        alpha[static_cast<std::size_t>(k)] += p;
        break;
      }
  } while (std::next_permutation(order.begin(), order.end()));
  return alpha;
}

/// P(no member of A failed by t) from the matrix exponential of the
/// generator restricted to the failed sets that avoid A.
double survival_by_expm(const ThlsModel& m, SubsetMask a, double t) {
  const int n = m.n();
  std::vector<SubsetMask> states;
  for_each_submask(a.complement(n), [&](SubsetMask s) {
    if (s != SubsetMask::full(n)) states.push_back(s);
  });
  const auto k = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const SubsetMask s = states[static_cast<std::size_t>(r)];
    q(r, r) = -m.total_rate(s);
    for (Eigen::Index c = 0; c < k; ++c) {
      const SubsetMask to = states[static_cast<std::size_t>(c)];
      if (to.size() == s.size() + 1 && s.is_subset_of(to)) q(r, c) = m.rate(s, std::countr_zero(to.bits() & ~s.bits()));
    }
  }
  const Eigen::MatrixXd p = (q * t).exp();
  return p.row(0).sum();
}

/// Density of one continuous law of an independent model (hazard or uniform forms).
double law_density(const LifetimeLaw& l, double t) { return l.density(t); }

/// alpha_j^[A] for an independent model without atoms: integral of f_j times the other survivals.
double independent_alpha_oracle(const IndependentModel& m, SubsetMask a, int j) {
  // [0, 1] goes to tanh-sinh, which handles rate singularities at the origin
  std::vector<double> cuts{0.0, 1.0};
  for (int k : a.members())
    for (double b : m.laws[static_cast<std::size_t>(k)].breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&](double t) {
    double v = law_density(m.laws[static_cast<std::size_t>(j)], t);
    for (int k : a.members())
      if (k != j) v *= m.laws[static_cast<std::size_t>(k)].survival(t);
    return v;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += ts.integrate(f, cuts[k], cuts[k + 1]);
  total += gk(f, cuts.back(), kInf);
  return total;
}

bool continuous_hazards(const ModelSpec& m) {
  const auto* im = m.as<IndependentModel>();
  if (!im) return true;
  for (const auto& l : im->laws)
    if (!std::holds_alternative<HazardCurve>(l.form())) return false;
  return true;
}

double gamma_pdf(double x, double shape, double rate) {
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape));
}

}  // namespace

TEST_SUITE("closed forms") {
  TEST_CASE("exponential identities") {
    const ModelSpec m = exponentials({1.0, 2.0, 3.0});
    CHECK(cumulative_hazard_min(m, 0.5).value == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(cumulative_hazard_min(m, 0.0).value == 0.0);
    CHECK(std::abs(survival_min(m, SubsetMask::full(3), 0.5).value - std::exp(-3.0)) < 1e-15);
    const double expect[] = {1.0 / 6, 1.0 / 3, 0.5};
    for (int j = 0; j < 3; ++j) CHECK(std::abs(alpha_full(m, j).value - expect[j]) < 1e-12);
    const double p_min = std::exp(-6.0 * 0.2) - std::exp(-6.0 * 0.7);
    CHECK(min_joint(m, 1, IntervalB{0.2, 0.7}).value == doctest::Approx(p_min / 3.0).epsilon(1e-12));
    const auto pair = alpha_vector(m, SubsetMask::of({0, 2}));
    CHECK(pair.of(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pair.of(2) == doctest::Approx(0.75).epsilon(1e-12));
  }

  TEST_CASE("frailty closed forms") {
    const ModelSpec m = frailty_gamma();
    CHECK(cumulative_hazard_min(m, 1.0).value == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
    CHECK(survival_min(m, SubsetMask::full(2), 1.0).value == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(alpha_full(m, 0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(alpha_full(m, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("load-sharing baseline quantities") {
    const ModelSpec m = thls3();
    CHECK(min_joint(m, 1, IntervalB{0.1, kInf}).value == doctest::Approx(std::exp(-0.6) / 3.0).epsilon(1e-12));
    CHECK(survival_min(m, SubsetMask::full(3), 0.3).value == doctest::Approx(std::exp(-1.8)).epsilon(1e-12));
  }

  TEST_CASE("any quantity at time zero") {
    Gen g(3);
    for (int rep = 0; rep < 8; ++rep) {
      const ModelSpec m = g.of_kind(static_cast<ModelKind>(rep % 4), 3);
      CHECK(survival_min(m, SubsetMask::of({0, 2}), 0.0).value == 1.0);
    }
  }
}

TEST_SUITE("subset hits") {
  TEST_CASE("hand-run subset DP example") {
    const auto a = alpha_vector(thls3(), SubsetMask::of({0, 1}));
    CHECK(a.method == Method::subset_dp);
    CHECK(a.of(0) == doctest::Approx(17.0 / 30.0).epsilon(1e-14));
    CHECK(a.of(1) == doctest::Approx(13.0 / 30.0).epsilon(1e-14));
  }

  TEST_CASE("subset DP agrees with enumeration of failure orders") {
    Gen g(5);
    for (int rep = 0; rep < 30; ++rep) {
      const int n = g.integer(2, 5);
      const ModelSpec m = g.thls(n);
      for (SubsetMask a : {SubsetMask::full(n), SubsetMask::of({0, n - 1}), SubsetMask::full(n).without(0)}) {
        if (a.size() < 2) continue;
        const auto oracle = alpha_by_permutations(*m.as<ThlsModel>(), a);
        const auto got = alpha_vector(m, a);
        for (int j : a.members()) CHECK(got.of(j) == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("point-mass model alphas") {
    const auto a = alpha_vector(atom_uniforms(), SubsetMask::full(3));
    CHECK(std::abs(a.of(0) - 0.3025) < 1e-10);
    CHECK(std::abs(a.of(1) - 0.34875) < 1e-10);
    CHECK(std::abs(a.of(2) - 0.34875) < 1e-10);
    const auto p = alpha_vector(atom_uniforms(), SubsetMask::of({0, 1}));
    CHECK(std::abs(p.of(0) - 0.55) < 1e-10);
  }

  TEST_CASE("independent alphas agree with direct integration") {
    Gen g(7);
    for (int rep = 0; rep < 25; ++rep) {
      IndependentModel im;
      for (int k = 0; k < 4; ++k) im.laws.push_back(g.law(false));
      const ModelSpec m(im);
      for (SubsetMask a : {SubsetMask::full(4), SubsetMask::of({1, 3}), SubsetMask::of({0, 1, 2})}) {
        const auto got = alpha_vector(m, a);
        for (int j : a.members()) {
          const double oracle = independent_alpha_oracle(im, a, j);
          CHECK(got.of(j) == doctest::Approx(oracle).epsilon(1e-8));
        }
      }
    }
  }

  TEST_CASE("pairs embedded in a larger exponential model") {
    const ModelSpec m = exponentials({0.5, 1.5, 4.0, 2.0});
    CHECK(alpha_subset(m, SubsetMask::of({1, 3}), 1).value == doctest::Approx(1.5 / 3.5).epsilon(1e-12));
    CHECK_THROWS_AS(alpha_subset(m, SubsetMask::of({1}), 1), ModelError);
    CHECK_THROWS_AS(alpha_subset(m, SubsetMask::of({1, 2}), 0), ModelError);
  }

  TEST_CASE("exchangeable models give 1/n") {
    for (int n : {2, 3, 5}) {
      const ModelSpec m = exchangeable_thls(n);
      for (int j = 0; j < n; ++j) CHECK(alpha_full(m, j).value == doctest::Approx(1.0 / n).epsilon(1e-12));
      const auto sub = alpha_vector(m, SubsetMask::of({0, n - 1}));
      CHECK(sub.of(0) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_SUITE("subset survival") {
  TEST_CASE("uniformization agrees with the matrix exponential") {
    Gen g(9);
    for (int rep = 0; rep < 20; ++rep) {
      const int n = g.integer(2, 5);
      const ModelSpec m = g.thls(n);
      const SubsetMask a = SubsetMask::of({0, n - 1});
      for (double t : {0.05, 0.6, 2.0, 7.5}) {
        const double oracle = survival_by_expm(*m.as<ThlsModel>(), a, t);
        const auto got = survival_min(m, a, t);
        CHECK(got.value == doctest::Approx(oracle).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("frailty subset survival against a mixture integral") {
    const FrailtyExpModel f{{0.7, 1.3, 2.2}, GammaLaw{1.7, 0.8}};
    const ModelSpec m(f);
    const SubsetMask a = SubsetMask::of({0, 2});
    for (double t : {0.1, 1.0, 4.0}) {
      const double oracle = gk([&](double th) { return gamma_pdf(th, 1.7, 0.8) * std::exp(-th * 2.9 * t); }, 0.0, kInf);
      CHECK(survival_min(m, a, t).value == doctest::Approx(oracle).epsilon(1e-10));
    }
    const ModelSpec d(FrailtyExpModel{{1.0, 2.0}, DiscreteLaw{{0.5, 3.0}, {0.4, 0.6}}});
    CHECK(survival_min(d, SubsetMask::single(1), 0.5).value ==
          doctest::Approx(0.4 * std::exp(-0.5) + 0.6 * std::exp(-3.0)).epsilon(1e-13));
  }

  TEST_CASE("frailty min_joint against a mixture integral") {
    const ModelSpec m = frailty_gamma();
    const double oracle = gk(
        [](double th) { return gamma_pdf(th, 2.0, 1.0) * (2.0 / 3.0) * (std::exp(-3.0 * th * 0.3) - std::exp(-3.0 * th * 1.2)); },
        0.0, kInf);
    CHECK(min_joint(m, 1, IntervalB{0.3, 1.2}).value == doctest::Approx(oracle).epsilon(1e-10));
  }

  TEST_CASE("subset survival of independent laws is a product") {
    const ModelSpec m = atom_uniforms();
    CHECK(survival_min(m, SubsetMask::of({0, 1}), 0.3).value == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(survival_min(m, SubsetMask::of({0, 1}), 0.5).value == 0.0);
  }
}

TEST_SUITE("joint density") {
  TEST_CASE("product formula") {
    CHECK(std::abs(joint_density(thls2(), {0.2, 0.5}) - 5.0 * std::exp(-2.1)) < 1e-12);
    const ModelSpec e = exponentials({1.0, 2.0, 0.5});
    const std::vector<double> x{0.9, 0.1, 0.4};
    CHECK(joint_density(e, x) == doctest::Approx(1.0 * std::exp(-0.9) * 2.0 * std::exp(-0.2) * 0.5 * std::exp(-0.2)).epsilon(1e-13));
    CHECK_THROWS_AS(joint_density(thls2(), {0.3, 0.3}), ModelError);
  }

  TEST_CASE("integrates to one") {
    const ModelSpec m2 = thls2();
    auto inner2 = [&](double x1) {
      auto f = [&](double x2) { return joint_density(m2, {x1, x2}); };
      return gk(f, 0.0, x1, 1e-11) + gk(f, x1, kInf, 1e-11);
    };
    CHECK(gk(inner2, 0.0, kInf, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));

    const ModelSpec m3 = thls3();
    auto inner3 = [&](double x1, double x2) {
      const double lo = std::min(x1, x2), hi = std::max(x1, x2);
      auto f = [&](double x3) { return joint_density(m3, {x1, x2, x3}); };
      return gauss_kronrod<double, 15>::integrate(f, 0.0, lo, 5, 1e-9) +
             gauss_kronrod<double, 15>::integrate(f, lo, hi, 5, 1e-9) +
             gauss_kronrod<double, 15>::integrate(f, hi, kInf, 5, 1e-9);
    };
    auto middle = [&](double x1) {
      auto f = [&](double x2) { return inner3(x1, x2); };
      return gauss_kronrod<double, 15>::integrate(f, 0.0, x1, 5, 1e-9) +
             gauss_kronrod<double, 15>::integrate(f, x1, kInf, 5, 1e-9);
    };
    CHECK(gauss_kronrod<double, 15>::integrate(middle, 0.0, kInf, 5, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_SUITE("properties") {
  TEST_CASE("normalization and consistency for every kind") {
    Gen g(13);
    KernelConfig cfg;
    cfg.mc_samples = 20000;
    for (int rep = 0; rep < 24; ++rep) {
      const auto kind = static_cast<ModelKind>(rep % 4);
      const int n = kind == ModelKind::set_dependent ? 3 : g.integer(2, 4);
      const ModelSpec m = g.of_kind(kind, n);
      CAPTURE(to_string(kind));
      double full = 0.0, joint = 0.0;
      for (int j = 0; j < n; ++j) {
        const auto af = alpha_full(m, j, cfg);
        full += af.value;
        CHECK(alpha_subset(m, SubsetMask::full(n), j, cfg).value == doctest::Approx(af.value).epsilon(1e-9));
        const double mj = min_joint(m, j, IntervalB{0.0, kInf}, cfg).value;
        CHECK(std::abs(mj - af.value) < 1e-8);
        joint += mj;
      }
      CHECK(std::abs(full - 1.0) < 1e-8);
      CHECK(std::abs(joint - 1.0) < 1e-8);
      const auto pair = alpha_vector(m, SubsetMask::of({0, n - 1}), cfg);
      CHECK(std::abs(pair.values[0] + pair.values[1] - 1.0) < 1e-8);
      if (continuous_hazards(m))
        for (double t : {0.2, 1.0, 3.0})
          CHECK(survival_min(m, SubsetMask::full(n), t, cfg).value ==
                doctest::Approx(std::exp(-cumulative_hazard_min(m, t, cfg).value)).epsilon(1e-13));
    }
  }

  TEST_CASE("constant-ratio factorization") {
    Gen g(17);
    for (int rep = 0; rep < 10; ++rep) {
      const ModelSpec m = rep % 2 ? g.frailty(3) : proportional_thls({g.uniform(0.2, 2), g.uniform(0.2, 2), g.uniform(0.2, 2)});
      for (double t : {0.3, 1.7})
        for (int j = 0; j < 3; ++j)
          CHECK(min_joint(m, j, IntervalB{t, kInf}).value ==
                doctest::Approx(alpha_full(m, j).value * survival_min(m, SubsetMask::full(3), t).value).epsilon(1e-9));
    }
  }

  TEST_CASE("independence reduction preserves the minimum") {
    Gen g(19);
    std::vector<ModelSpec> models{thls3(), frailty_gamma()};
    for (int rep = 0; rep < 9; ++rep) models.push_back(g.of_kind(static_cast<ModelKind>(1 + rep % 3), 3));
    for (const auto& m : models) {
      const ModelSpec red(independent_reduction(m));
      CAPTURE(std::string(to_string(m.kind())));
      for (int j = 0; j < m.n(); ++j) CHECK(std::abs(alpha_full(red, j).value - alpha_full(m, j).value) < 1e-8);
      for (double t : {0.1, 0.8, 2.5})
        CHECK(std::abs(survival_min(red, SubsetMask::full(m.n()), t).value - survival_min(m, SubsetMask::full(m.n()), t).value) < 1e-8);
    }
  }

  TEST_CASE("reduction examples") {
    const auto e = independent_reduction(thls3());
    for (int j = 0; j < 3; ++j) CHECK(e.laws[static_cast<std::size_t>(j)].hazard(0.7) == doctest::Approx(j + 1.0));
    const auto f = independent_reduction(frailty_gamma());
    for (double t : {0.0, 0.5, 3.0}) {
      CHECK(f.laws[0].hazard(t) == doctest::Approx(2.0 / (1.0 + 3.0 * t)).epsilon(1e-12));
      CHECK(f.laws[1].hazard(t) == doctest::Approx(4.0 / (1.0 + 3.0 * t)).epsilon(1e-12));
    }
  }
}

TEST_SUITE("dominance") {
  TEST_CASE("hazard order implies interval order") {
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 5.0};
    const std::vector<IntervalB> intervals{{0.0, 0.3}, {0.3, 1.0}, {1.0, kInf}};
    const auto ok = dominance_check(exponentials({1.0, 2.0}), 0, 1, grid, intervals);
    CHECK(ok.dominates);
    CHECK(ok.grid_violations.empty());
    CHECK(ok.interval_violations.empty());
    const auto bad = dominance_check(exponentials({2.0, 1.0}), 0, 1, grid, intervals);
    CHECK_FALSE(bad.dominates);
    CHECK(bad.grid_violations.size() == grid.size());

    const ModelSpec sym = exchangeable_thls(3);
    CHECK(dominance_check(sym, 0, 1, grid, intervals).dominates);
    CHECK(dominance_check(sym, 1, 0, grid, intervals).dominates);
    for (const auto& b : intervals)
      CHECK(std::abs(min_joint(sym, 0, b).value - min_joint(sym, 1, b).value) < 1e-9);
  }
}

TEST_SUITE("marginal hazards") {
  TEST_CASE("limits and identities") {
    const ModelSpec m = thls3();
    CHECK(marginal_baseline_mchr(m, SubsetMask::full(3), 0, 1.3).value == doctest::Approx(1.0));
    const SubsetMask a = SubsetMask::of({0, 1});
    CHECK(marginal_baseline_mchr(m, a, 0, 0.0).value == doctest::Approx(1.0));
    CHECK(marginal_baseline_mchr(m, a, 0, 30.0).value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(marginal_baseline_mchr(m, a, 1, 30.0).value == doctest::Approx(1.0).epsilon(1e-9));
    for (double t : {0.2, 0.9, 2.4}) {
      const double h = 1e-5;
      const double slope = -(std::log(survival_min(m, a, t + h).value) - std::log(survival_min(m, a, t - h).value)) / (2 * h);
      const double sum = marginal_baseline_mchr(m, a, 0, t).value + marginal_baseline_mchr(m, a, 1, t).value;
      CHECK(sum == doctest::Approx(slope).epsilon(1e-7));
    }
  }
}

TEST_SUITE("reports") {
  TEST_CASE("min report") {
    const auto r = make_min_report(exponentials({1.0, 2.0, 3.0}), SubsetMask::full(3), {0.0, 0.5});
    REQUIRE(r.survival.size() == 2);
    CHECK(r.survival[0].second == 1.0);
    CHECK(r.survival[1].second == doctest::Approx(std::exp(-3.0)));
    CHECK(r.alphas.values.size() == 3);
  }
}
