#include "mchr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mchr/errors.hpp"
#include "mchr/simulate.hpp"

namespace mchr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int method_rank(Method m) {
  switch (m) {
    case Method::closed_form: return 0;
    case Method::subset_dp: return 1;
    case Method::quadrature: return 2;
    case Method::uniformization: return 3;
    case Method::monte_carlo: return 4;
  }
  return 0;
}

Method coarser(Method a, Method b) { return method_rank(a) >= method_rank(b) ? a : b; }

void check_index(const ModelSpec& model, int j) {
  if (j < 0 || j >= model.n()) throw ModelError("variable index " + std::to_string(j + 1) + " out of range");
}

void check_subset(const ModelSpec& model, SubsetMask a) {
  if (a.empty()) throw ModelError("subset A must not be empty");
  if (!a.is_subset_of(SubsetMask::full(model.n()))) throw ModelError("subset A has indices outside 1..n");
}

void check_time(double t) {
  if (!(t >= 0.0)) throw ModelError("time must be >= 0");
}

bool is_full(const ModelSpec& model, SubsetMask a) { return a == SubsetMask::full(model.n()); }

double support_max(const LifetimeLaw& law) {
  const auto& f = law.form();
  if (std::holds_alternative<HazardCurve>(f)) return kInf;
  if (const auto* u = std::get_if<UniformLaw>(&f)) return u->b;
  if (const auto* d = std::get_if<DiracLaw>(&f)) return d->c;
  double hi = 0.0;
  for (const auto& c : std::get<UniformMixture>(f).components) hi = std::max(hi, c.b);
  return hi;
}

double hazard_rate_of(const LifetimeLaw& law) {
  return std::get<ConstantHazard>(std::get<HazardCurve>(law.form()).form()).rate;
}

bool all_exponential(const IndependentModel& m, SubsetMask a) {
  for (int k : a.members())
    if (!m.laws[static_cast<std::size_t>(k)].is_exponential()) return false;
  return true;
}

double rate_of_constant(const HazardCurve& c) { return c.rate(0.0); }

bool baseline_constant(const SetDependentModel& m) {
  for (int l = 0; l < m.n(); ++l)
    if (!m.curve(SubsetMask{}, l).is_constant()) return false;
  return true;
}

// P(X_j = X_{1:A}, X_{1:A} in (lo, hi]) for independent variables:
// integral of f_j * prod S_k over (lo, hi] plus the atom of X_j, if any.
Quantity independent_first(const IndependentModel& m, SubsetMask a, int j, double lo, double hi,
                           const QuadratureConfig& cfg) {
  const auto& law_j = m.laws[static_cast<std::size_t>(j)];
  const auto others = a.without(j).members();
  auto rest_survival = [&](double t) {
    double s = 1.0;
    for (int k : others) {
      s *= m.laws[static_cast<std::size_t>(k)].survival(t);
      if (s == 0.0) break;
    }
    return s;
  };
  Quantity q{0.0, Method::quadrature, 0.0};
  if (auto c = law_j.atom()) {
    if (*c > lo && *c <= hi) q.value = rest_survival(*c);
    q.method = Method::closed_form;
    return q;
  }
  double upper = std::min(hi, support_max(law_j));
  for (int k : others) upper = std::min(upper, support_max(m.laws[static_cast<std::size_t>(k)]));
  if (upper <= lo) return q;
  std::vector<double> cuts;
  for (int k : a.members()) {
    auto b = m.laws[static_cast<std::size_t>(k)].breakpoints();
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  const auto r = integrate_piecewise(
      [&](double t) {
        const double f = law_j.density(t);
        return f == 0.0 ? 0.0 : f * rest_survival(t);
      },
      lo, upper, cuts, cfg);
  q.value = r.value;
  q.abs_error_bound = r.abs_error;
  return q;
}

// Quadrature of beta_j(s | empty) exp(-sum_l B_l(s)) over (lo, hi].
Quantity set_dependent_first(const SetDependentModel& m, int j, double lo, double hi, const QuadratureConfig& cfg) {
  const SubsetMask none;
  std::vector<double> cuts;
  for (int l = 0; l < m.n(); ++l) {
    auto b = m.curve(none, l).breakpoints();
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  const auto r = integrate_piecewise(
      [&](double s) {
        double h = 0.0;
        for (int l = 0; l < m.n(); ++l) h += m.curve(none, l).cumulative(s);
        const double surv = std::exp(-h);
        return surv == 0.0 ? 0.0 : m.curve(none, j).rate(s) * surv;
      },
      lo, hi, cuts, cfg);
  return {r.value, Method::quadrature, r.abs_error};
}

double frailty_laplace(const FrailtyExpModel& m, double x) {
  if (x == 0.0) return 1.0;
  if (const auto* g = std::get_if<GammaLaw>(&m.theta)) return std::exp(-g->shape * std::log1p(x / g->rate));
  const auto& d = std::get<DiscreteLaw>(m.theta);
  double s = 0.0;
  for (std::size_t k = 0; k < d.values.size(); ++k) s += d.probs[k] * std::exp(-d.values[k] * x);
  return s;
}

// Transient law of the failed set of a thls model restricted to the event
// that no member of A has failed, by uniformization in chunks of at most
// 20 expected jumps with renormalisation after each chunk.
struct Transient {
  double log_survival = 0.0;
  double rel_error = 0.0;
  std::vector<double> conditional;
  CompactSubsets states;
};

Transient thls_transient(const ThlsModel& m, SubsetMask a, double t) {
  const SubsetMask ground = a.complement(m.n());
  Transient out{0.0, 0.0, {}, CompactSubsets(ground)};
  const auto& states = out.states;
  const std::uint32_t count = states.count();
  const int g = states.ground_size();
  out.conditional.assign(count, 0.0);
  out.conditional[0] = 1.0;
  if (t == 0.0) return out;

  std::vector<double> exit(count);
  std::vector<double> jump(static_cast<std::size_t>(count) * static_cast<std::size_t>(g), 0.0);
  double lambda = 0.0;
  for (std::uint32_t s = 0; s < count; ++s) {
    const SubsetMask failed = states.expand(s);
    exit[s] = m.total_rate(failed);
    lambda = std::max(lambda, exit[s]);
    for (int k = 0; k < g; ++k)
      if (!((s >> k) & 1u)) jump[s * static_cast<std::size_t>(g) + static_cast<std::size_t>(k)] = m.rate(failed, states.members()[static_cast<std::size_t>(k)]);
  }
  const double total_mu = lambda * t;
  const auto chunks = static_cast<std::int64_t>(std::ceil(total_mu / 20.0));
  const double mu = total_mu / static_cast<double>(chunks);
  std::vector<double> v(count), next(count), acc(count);
  auto& p = out.conditional;
  for (std::int64_t c = 0; c < chunks; ++c) {
    v = p;
    double w = std::exp(-mu);
    double cum = w;
    double v_mass = 1.0, acc_mass = w;
    for (std::uint32_t s = 0; s < count; ++s) acc[s] = w * v[s];
    // the neglected Poisson tail is at most (1 - cum) * |v_k|, as |v_k| is non-increasing in k
    for (int k = 1; (1.0 - cum) * v_mass > 1e-15 * acc_mass && k < 2000; ++k) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::uint32_t s = 0; s < count; ++s) {
        if (v[s] == 0.0) continue;
        next[s] += v[s] * (1.0 - exit[s] / lambda);
        for (int b = 0; b < g; ++b) {
          const double r = jump[s * static_cast<std::size_t>(g) + static_cast<std::size_t>(b)];
          if (r > 0.0) next[s | (1u << b)] += v[s] * r / lambda;
        }
      }
      v.swap(next);
      w *= mu / k;
      cum += w;
      v_mass = std::accumulate(v.begin(), v.end(), 0.0);
      acc_mass += w * v_mass;
      for (std::uint32_t s = 0; s < count; ++s) acc[s] += w * v[s];
    }
    const double mass = std::accumulate(acc.begin(), acc.end(), 0.0);
    out.log_survival += std::log(mass);
    out.rel_error += std::max(0.0, 1.0 - cum) * v_mass / mass + 1e-15;
    for (std::uint32_t s = 0; s < count; ++s) p[s] = acc[s] / mass;
  }
  return out;
}

// Embedded jump chain over failed sets I within the complement of A.
AlphaVector thls_subset_dp(const ThlsModel& m, SubsetMask a) {
  const SubsetMask ground = a.complement(m.n());
  const CompactSubsets states(ground);
  AlphaVector out;
  out.subset = a;
  out.members = a.members();
  out.values.assign(out.members.size(), 0.0);
  std::vector<double> reach(states.count(), 0.0);
  reach[0] = 1.0;
  for (std::uint32_t s = 0; s < states.count(); ++s) {
    if (reach[s] == 0.0) continue;
    const SubsetMask failed = states.expand(s);
    const double share = reach[s] / m.total_rate(failed);
    for (std::size_t k = 0; k < out.members.size(); ++k) out.values[k] += share * m.rate(failed, out.members[k]);
    for (int b = 0; b < states.ground_size(); ++b)
      if (!((s >> b) & 1u)) reach[s | (1u << b)] += share * m.rate(failed, states.members()[static_cast<std::size_t>(b)]);
  }
  out.method = a == SubsetMask::full(m.n()) ? Method::closed_form : Method::subset_dp;
  out.abs_error_bound = 1e-14 * static_cast<double>(states.count());
  return out;
}

std::vector<Quantity> survival_curve(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                                     const KernelConfig& cfg) {
  if (model.kind() == ModelKind::set_dependent && !is_full(model, a)) {
    std::vector<double> positive;
    for (double t : grid) {
      check_time(t);
      if (t > 0.0) positive.push_back(t);
    }
    std::vector<Quantity> out;
    std::vector<Estimate> est;
    if (!positive.empty()) est = estimate_survival(model, a, positive, cfg.mc_samples, cfg.mc_seed);
    std::size_t k = 0;
    for (double t : grid) {
      if (t == 0.0) {
        out.push_back({1.0, Method::closed_form, 0.0});
      } else {
        out.push_back({est[k].value, Method::monte_carlo, est[k].half_width_95});
        ++k;
      }
    }
    return out;
  }
  std::vector<Quantity> out;
  for (double t : grid) out.push_back(survival_min(model, a, t, cfg));
  return out;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::quadrature: return "quadrature";
    case Method::subset_dp: return "subset-DP";
    case Method::uniformization: return "uniformization";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "?";
}

KernelConfig KernelConfig::tightened(double factor) const {
  KernelConfig out = *this;
  out.quad = quad.tightened(factor);
  out.mc_samples = mc_samples * 2;
  out.mc_seed = mc_seed ^ 0x5bd1e9955bd1e995ull;
  return out;
}

double AlphaVector::of(int j) const {
  for (std::size_t k = 0; k < members.size(); ++k)
    if (members[k] == j) return values[k];
  throw ModelError("variable " + std::to_string(j + 1) + " is not in the subset");
}

double baseline_mchr(const ModelSpec& model, int j, double t) { return mchr(model, j, t, FailureHistory{}); }

Quantity cumulative_hazard_min(const ModelSpec& model, double t, const KernelConfig&) {
  check_time(t);
  if (const auto* im = model.as<IndependentModel>()) {
    if (im->has_atoms())
      throw ModelError("the model has point-mass laws and no hazard representation; use survival_min instead");
    double h = 0.0;
    for (const auto& law : im->laws) h += law.cumulative_hazard(t);
    return {h, Method::closed_form, 0.0};
  }
  return {stage_cumulative_hazard(model, FailureHistory{}, 0.0, t), Method::closed_form, 0.0};
}

Quantity survival_min(const ModelSpec& model, SubsetMask a, double t, const KernelConfig& cfg) {
  check_subset(model, a);
  check_time(t);
  if (t == 0.0) return {1.0, Method::closed_form, 0.0};
  return std::visit(
      overloaded{
          [&](const IndependentModel& m) -> Quantity {
            double s = 1.0;
            for (int k : a.members()) s *= m.laws[static_cast<std::size_t>(k)].survival(t);
            return {s, Method::closed_form, 0.0};
          },
          [&](const ThlsModel& m) -> Quantity {
            if (is_full(model, a)) return {std::exp(-m.total_rate(SubsetMask{}) * t), Method::closed_form, 0.0};
            const auto tr = thls_transient(m, a, t);
            const double s = std::exp(tr.log_survival);
            return {s, Method::uniformization, s * tr.rel_error};
          },
          [&](const FrailtyExpModel& m) -> Quantity {
            return {frailty_laplace(m, t * m.c_sum(a)), Method::closed_form, 0.0};
          },
          [&](const SetDependentModel&) -> Quantity {
            if (is_full(model, a))
              return {std::exp(-cumulative_hazard_min(model, t, cfg).value), Method::closed_form, 0.0};
            return survival_curve(model, a, {t}, cfg).front();
          },
      },
      model.body());
}

Quantity alpha_full(const ModelSpec& model, int j, const KernelConfig& cfg) {
  check_index(model, j);
  const SubsetMask all = SubsetMask::full(model.n());
  return std::visit(
      overloaded{
          [&](const IndependentModel& m) -> Quantity {
            if (all_exponential(m, all)) {
              double total = 0.0;
              for (const auto& law : m.laws) total += hazard_rate_of(law);
              return {hazard_rate_of(m.laws[static_cast<std::size_t>(j)]) / total, Method::closed_form, 0.0};
            }
            return independent_first(m, all, j, 0.0, kInf, cfg.quad);
          },
          [&](const ThlsModel& m) -> Quantity {
            return {m.rate(SubsetMask{}, j) / m.total_rate(SubsetMask{}), Method::closed_form, 0.0};
          },
          [&](const FrailtyExpModel& m) -> Quantity {
            return {m.c[static_cast<std::size_t>(j)] / m.c_sum(all), Method::closed_form, 0.0};
          },
          [&](const SetDependentModel& m) -> Quantity {
            if (baseline_constant(m)) {
              double total = 0.0;
              for (int l = 0; l < m.n(); ++l) total += rate_of_constant(m.curve(SubsetMask{}, l));
              return {rate_of_constant(m.curve(SubsetMask{}, j)) / total, Method::closed_form, 0.0};
            }
            return set_dependent_first(m, j, 0.0, kInf, cfg.quad);
          },
      },
      model.body());
}

Quantity min_joint(const ModelSpec& model, int j, IntervalB b, const KernelConfig& cfg) {
  check_index(model, j);
  if (!(b.lo >= 0.0 && b.lo < b.hi)) throw ModelError("interval must satisfy 0 <= lo < hi");
  const SubsetMask all = SubsetMask::full(model.n());
  // constant-ratio kinds: alpha_j * P(X_{1:n} in (lo, hi])
  auto factorised = [&]() -> Quantity {
    const double a = alpha_full(model, j, cfg).value;
    const double s_lo = survival_min(model, all, b.lo, cfg).value;
    const double s_hi = std::isinf(b.hi) ? 0.0 : survival_min(model, all, b.hi, cfg).value;
    return {a * (s_lo - s_hi), Method::closed_form, 0.0};
  };
  return std::visit(overloaded{
                        [&](const IndependentModel& m) -> Quantity {
                          if (all_exponential(m, all)) return factorised();
                          return independent_first(m, all, j, b.lo, b.hi, cfg.quad);
                        },
                        [&](const ThlsModel&) -> Quantity { return factorised(); },
                        [&](const FrailtyExpModel&) -> Quantity { return factorised(); },
                        [&](const SetDependentModel& m) -> Quantity {
                          if (baseline_constant(m)) return factorised();
                          return set_dependent_first(m, j, b.lo, b.hi, cfg.quad);
                        },
                    },
                    model.body());
}

Quantity min_joint(const ModelSpec& model, int j, const std::vector<IntervalB>& b, const KernelConfig& cfg) {
  std::vector<IntervalB> sorted = b;
  std::sort(sorted.begin(), sorted.end(), [](const IntervalB& x, const IntervalB& y) { return x.lo < y.lo; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k].lo < sorted[k - 1].hi) throw ModelError("intervals of a union must be disjoint");
  Quantity total{0.0, Method::closed_form, 0.0};
  for (const auto& piece : sorted) {
    const auto q = min_joint(model, j, piece, cfg);
    total.value += q.value;
    total.abs_error_bound += q.abs_error_bound;
    total.method = coarser(total.method, q.method);
  }
  return total;
}

AlphaVector alpha_vector(const ModelSpec& model, SubsetMask a, const KernelConfig& cfg) {
  check_subset(model, a);
  AlphaVector out;
  out.subset = a;
  out.members = a.members();
  if (a.size() == 1) {
    out.values = {1.0};
    return out;
  }
  auto per_member = [&](auto&& one) {
    for (int j : out.members) {
      const Quantity q = one(j);
      out.values.push_back(q.value);
      out.method = coarser(out.method, q.method);
      out.abs_error_bound = std::max(out.abs_error_bound, q.abs_error_bound);
    }
  };
  std::visit(overloaded{
                 [&](const IndependentModel& m) {
                   if (all_exponential(m, a)) {
                     double total = 0.0;
                     for (int k : out.members) total += hazard_rate_of(m.laws[static_cast<std::size_t>(k)]);
                     per_member([&](int j) {
                       return Quantity{hazard_rate_of(m.laws[static_cast<std::size_t>(j)]) / total,
                                       Method::closed_form, 0.0};
                     });
                     return;
                   }
                   per_member([&](int j) { return independent_first(m, a, j, 0.0, kInf, cfg.quad); });
                 },
                 [&](const ThlsModel& m) { out = thls_subset_dp(m, a); },
                 [&](const FrailtyExpModel& m) {
                   // given Theta the members of A are independent exponentials with rates c_k * Theta,
                   // so the conditional hit probability does not depend on Theta
                   const double total = m.c_sum(a);
                   per_member([&](int j) {
                     return Quantity{m.c[static_cast<std::size_t>(j)] / total, Method::closed_form, 0.0};
                   });
                 },
                 [&](const SetDependentModel&) {
                   if (is_full(model, a)) {
                     per_member([&](int j) { return alpha_full(model, j, cfg); });
                     return;
                   }
                   const auto est = estimate_alpha_vector(model, a, cfg.mc_samples, cfg.mc_seed);
                   out.method = Method::monte_carlo;
                   for (const auto& e : est) {
                     out.values.push_back(e.value);
                     out.abs_error_bound = std::max(out.abs_error_bound, e.half_width_95);
                   }
                 },
             },
             model.body());
  return out;
}

Quantity alpha_subset(const ModelSpec& model, SubsetMask a, int j, const KernelConfig& cfg) {
  check_subset(model, a);
  if (a.size() < 2) throw ModelError("alpha_subset needs |A| >= 2");
  if (!a.contains(j)) throw ModelError("variable " + std::to_string(j + 1) + " is not in A");
  // only the requested member needs a quadrature
  if (const auto* im = model.as<IndependentModel>(); im && !all_exponential(*im, a))
    return independent_first(*im, a, j, 0.0, kInf, cfg.quad);
  const auto v = alpha_vector(model, a, cfg);
  return {v.of(j), v.method, v.abs_error_bound};
}

double joint_density(const ModelSpec& model, const std::vector<double>& x) {
  const int n = model.n();
  if (static_cast<int>(x.size()) != n) throw ModelError("joint_density needs exactly n coordinates");
  if (const auto* im = model.as<IndependentModel>(); im && im->has_atoms())
    throw ModelError("the model has point-mass laws and no joint density");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (double v : x)
    if (!(v > 0.0) || !std::isfinite(v)) throw ModelError("coordinates must be finite and > 0");
  std::sort(order.begin(), order.end(),
            [&](int p, int q) { return x[static_cast<std::size_t>(p)] < x[static_cast<std::size_t>(q)]; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (x[static_cast<std::size_t>(order[k])] == x[static_cast<std::size_t>(order[k - 1])])
      throw ModelError("coordinates must be pairwise distinct");
  FailureHistory h;
  double density = 1.0;
  for (int idx : order) {
    const double t = x[static_cast<std::size_t>(idx)];
    const double stage = stage_cumulative_hazard(model, h, h.now, t);
    const double keep = std::exp(-stage);
    if (keep == 0.0) return 0.0;
    const double rate = mchr(model, idx, t, h);
    if (rate == 0.0) return 0.0;
    density *= rate * keep;
    h.failed.push_back({idx, t});
    h.now = t;
  }
  return density;
}

DominanceReport dominance_check(const ModelSpec& model, int i, int j, const std::vector<double>& grid,
                                const std::vector<IntervalB>& intervals, const KernelConfig& cfg) {
  check_index(model, i);
  check_index(model, j);
  const double margin = 10.0 * cfg.quad.abs_tol;
  DominanceReport report;
  for (double t : grid) {
    check_time(t);
    const double mi = baseline_mchr(model, i, t);
    const double mj = baseline_mchr(model, j, t);
    if (mi > mj + margin) report.grid_violations.push_back({t, mi, mj});
  }
  for (const auto& b : intervals) {
    const auto pi = min_joint(model, i, b, cfg);
    const auto pj = min_joint(model, j, b, cfg);
    if (pi.value > pj.value + margin + pi.abs_error_bound + pj.abs_error_bound)
      report.interval_violations.push_back({b, pi.value, pj.value});
  }
  report.dominates = report.grid_violations.empty() && report.interval_violations.empty();
  return report;
}

IndependentModel independent_reduction(const ModelSpec& model) {
  IndependentModel out;
  const int n = model.n();
  const SubsetMask none;
  std::visit(
      overloaded{
          [&](const IndependentModel& m) {
            if (m.has_atoms()) throw ModelError("point-mass laws have no hazard representation");
            out = m;
          },
          [&](const ThlsModel& m) {
            for (int j = 0; j < n; ++j) out.laws.emplace_back(HazardCurve::constant(m.rate(none, j)));
          },
          [&](const SetDependentModel& m) {
            for (int j = 0; j < n; ++j) out.laws.emplace_back(m.curve(none, j));
          },
          [&](const FrailtyExpModel& m) {
            const double total = m.c_sum(SubsetMask::full(n));
            if (const auto* g = std::get_if<GammaLaw>(&m.theta)) {
              for (int j = 0; j < n; ++j)
                out.laws.emplace_back(
                    HazardCurve(LomaxHazard{m.c[static_cast<std::size_t>(j)] * g->shape / total, g->rate / total}));
              return;
            }
            // the minimum is a mixture of Exp(Theta C); X_j carries the share c_j / C of its hazard
            const auto& d = std::get<DiscreteLaw>(m.theta);
            std::vector<double> rates;
            for (double v : d.values) rates.push_back(v * total);
            for (int j = 0; j < n; ++j)
              out.laws.emplace_back(HazardCurve(ExpMixtureHazard{m.c[static_cast<std::size_t>(j)] / total, rates, d.probs}));
          },
      },
      model.body());
  return out;
}

Quantity marginal_baseline_mchr(const ModelSpec& model, SubsetMask a, int i, double t, const KernelConfig&) {
  const auto* m = model.as<ThlsModel>();
  if (!m) throw ModelError("marginal_baseline_mchr is defined for thls models only");
  check_subset(model, a);
  check_time(t);
  if (!a.contains(i)) throw ModelError("variable " + std::to_string(i + 1) + " is not in A");
  if (t == 0.0 || is_full(model, a)) return {m->rate(SubsetMask{}, i), Method::closed_form, 0.0};
  const auto tr = thls_transient(*m, a, t);
  double rate = 0.0, rmax = 0.0;
  for (std::uint32_t s = 0; s < tr.states.count(); ++s) {
    const double r = m->rate(tr.states.expand(s), i);
    rate += tr.conditional[s] * r;
    rmax = std::max(rmax, r);
  }
  return {rate, Method::uniformization, 2.0 * rmax * tr.rel_error};
}

MinReport make_min_report(const ModelSpec& model, SubsetMask a, const std::vector<double>& grid,
                          const KernelConfig& cfg) {
  MinReport r;
  r.alphas = alpha_vector(model, a, cfg);
  r.abs_error_bound = r.alphas.abs_error_bound;
  const auto curve = survival_curve(model, a, grid, cfg);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    r.survival.emplace_back(grid[k], curve[k].value);
    r.survival_method = coarser(r.survival_method, curve[k].method);
    r.abs_error_bound = std::max(r.abs_error_bound, curve[k].abs_error_bound);
  }
  return r;
}

}  // namespace mchr
