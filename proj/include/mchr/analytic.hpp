#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mchr/model.hpp"
#include "mchr/quadrature.hpp"
#include "mchr/subset.hpp"

namespace mchr {

enum class Method { closed_form, quadrature, subset_dp, uniformization, monte_carlo };
const char* to_string(Method m);

struct KernelConfig {
  QuadratureConfig quad;
  /// Used only where no exact route exists (set-dependent subsets).
  std::int64_t mc_samples = 400000;
  std::uint64_t mc_seed = 0x6d636872u;

  /// Tolerances divided by `factor`, Monte Carlo samples doubled and reseeded.
  KernelConfig tightened(double factor) const;
};

struct Quantity {
  double value = 0.0;
  Method method = Method::closed_form;
  double abs_error_bound = 0.0;
};

/// The half-open interval (lo, hi]; hi may be +inf.
struct IntervalB {
  double lo = 0.0;
  double hi = 0.0;
};

/// alpha_j^[A] for every j in A.
struct AlphaVector {
  SubsetMask subset;
  std::vector<int> members;  // zero-based, increasing
  std::vector<double> values;
  Method method = Method::closed_form;
  double abs_error_bound = 0.0;

  double of(int j) const;
};

struct MinReport {
  AlphaVector alphas;
  std::vector<std::pair<double, double>> survival;  // (t, P(X_{1:A} > t))
  Method survival_method = Method::closed_form;
  double abs_error_bound = 0.0;
};

/// lambda_j(t | empty set), the baseline m.c.h.r. Throws for point masses.
double baseline_mchr(const ModelSpec& model, int j, double t);

/// H_(1)(t) = sum_i of the integral of lambda_i(s | empty) over [0, t].
Quantity cumulative_hazard_min(const ModelSpec& model, double t, const KernelConfig& cfg = {});

/// P(X_{1:A} > t).
Quantity survival_min(const ModelSpec& model, SubsetMask a, double t, const KernelConfig& cfg = {});

/// alpha_j = P(X_j = X_{1:n}).
Quantity alpha_full(const ModelSpec& model, int j, const KernelConfig& cfg = {});

/// P(X_j = X_{1:n}, X_{1:n} in B).
Quantity min_joint(const ModelSpec& model, int j, IntervalB b, const KernelConfig& cfg = {});
/// As above for a finite union of disjoint intervals.
Quantity min_joint(const ModelSpec& model, int j, const std::vector<IntervalB>& b, const KernelConfig& cfg = {});

/// alpha_j^[A] for all j in A. |A| >= 1.
AlphaVector alpha_vector(const ModelSpec& model, SubsetMask a, const KernelConfig& cfg = {});

/// alpha_j^[A] = P(X_{1:A} = X_j). Requires |A| >= 2 and j in A.
Quantity alpha_subset(const ModelSpec& model, SubsetMask a, int j, const KernelConfig& cfg = {});

/// Joint density at n distinct positive times, by the stagewise product of
/// m.c.h.r. values and exponentials of stage cumulative hazards.
double joint_density(const ModelSpec& model, const std::vector<double>& x);

struct GridWitness {
  double t;
  double mu_i;
  double mu_j;
};
struct IntervalWitness {
  IntervalB interval;
  double p_i;
  double p_j;
};
struct DominanceReport {
  bool dominates = true;
  std::vector<GridWitness> grid_violations;
  std::vector<IntervalWitness> interval_violations;
};

/// Checks lambda_i(t|empty) <= lambda_j(t|empty) on the grid and
/// min_joint(i, B) <= min_joint(j, B) on each interval, both up to a margin
/// of 10 * abs_tol plus the reported error bounds.
DominanceReport dominance_check(const ModelSpec& model, int i, int j, const std::vector<double>& grid,
                                const std::vector<IntervalB>& intervals, const KernelConfig& cfg = {});

/// Independent variables whose hazards are the baseline m.c.h.r. functions.
/// Exact for every kind; a discrete frailty maps to exponential-mixture hazards.
IndependentModel independent_reduction(const ModelSpec& model);

/// lambda_i^[A](t | empty) of a thls model: the hazard of X_i at t given
/// that no member of A has failed yet.
Quantity marginal_baseline_mchr(const ModelSpec& model, SubsetMask a, int i, double t, const KernelConfig& cfg = {});

MinReport make_min_report(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                          const KernelConfig& cfg = {});

}  // namespace mchr
