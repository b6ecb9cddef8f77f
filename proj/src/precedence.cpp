#include "mchr/precedence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <tuple>

#include "mchr/errors.hpp"
#include "mchr/simulate.hpp"

namespace mchr {

namespace {

constexpr std::size_t kScanBudget = std::size_t{1} << 16;

template <bool Parallel>
AlphaTable build_table(const ModelSpec& model, const std::vector<SubsetMask>& masks, const KernelConfig& cfg) {
  std::vector<AlphaVector> values(masks.size());
  std::vector<std::exception_ptr> errors(masks.size());
  const auto count = static_cast<std::int64_t>(masks.size());
  const int workers = Parallel ? worker_count() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (Parallel)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      values[static_cast<std::size_t>(k)] = alpha_vector(model, masks[static_cast<std::size_t>(k)], cfg);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return AlphaTable(masks, std::move(values));
}

SpMatrix sp_from_table(int n, const AlphaTable& table) {
  SpMatrix sp;
  sp.n = n;
  sp.p.assign(static_cast<std::size_t>(n * n), std::numeric_limits<double>::quiet_NaN());
  sp.err.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& av = table.at(SubsetMask::of({i, j}));
      sp.p[static_cast<std::size_t>(i * n + j)] = av.of(i);
      sp.p[static_cast<std::size_t>(j * n + i)] = av.of(j);
      sp.err[static_cast<std::size_t>(i * n + j)] = av.abs_error_bound;
      sp.err[static_cast<std::size_t>(j * n + i)] = av.abs_error_bound;
      if (av.method == Method::monte_carlo || sp.method == Method::closed_form) sp.method = av.method;
    }
  return sp;
}

// X_i precedes X_j (weakly / strictly) under the comparison margin.
bool weak_sp(const SpMatrix& sp, int i, int j, const KernelConfig& cfg) {
  return sp.at(i, j) >= sp.at(j, i) - comparison_margin(cfg, sp.error(i, j), sp.error(j, i));
}
bool strict_sp(const SpMatrix& sp, int i, int j, const KernelConfig& cfg) {
  return sp.at(i, j) > sp.at(j, i) + comparison_margin(cfg, sp.error(i, j), sp.error(j, i));
}

bool weak_alpha(const AlphaVector& av, int i, int j, const KernelConfig& cfg) {
  return av.of(i) >= av.of(j) - comparison_margin(cfg, av.abs_error_bound, av.abs_error_bound);
}
bool strict_alpha(const AlphaVector& av, int i, int j, const KernelConfig& cfg) {
  return av.of(i) > av.of(j) + comparison_margin(cfg, av.abs_error_bound, av.abs_error_bound);
}

bool weakly_small_in(const AlphaVector& av, int i, const KernelConfig& cfg) {
  for (int k : av.members)
    if (k != i && !weak_alpha(av, i, k, cfg)) return false;
  return true;
}

std::vector<SpCycle> cycles_from(const SpMatrix& sp, const KernelConfig& cfg) {
  std::vector<SpCycle> out;
  const int n = sp.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (strict_sp(sp, i, j, cfg) && strict_sp(sp, j, k, cfg) && strict_sp(sp, k, i, cfg)) out.push_back({i, j, k});
        if (strict_sp(sp, i, k, cfg) && strict_sp(sp, k, j, cfg) && strict_sp(sp, j, i, cfg)) out.push_back({i, k, j});
      }
  return out;
}

bool cycle_holds(const ModelSpec& model, const SpCycle& c, const KernelConfig& cfg) {
  auto strict = [&](int x, int y) {
    const auto av = alpha_vector(model, SubsetMask::of({x, y}), cfg);
    return strict_alpha(av, x, y, cfg);
  };
  return strict(c.a, c.b) && strict(c.b, c.c) && strict(c.c, c.a);
}

std::size_t binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::size_t>(std::llround(r));
}

// -- grids for the hypothesis checks ----------------------------------------

bool has_atoms(const ModelSpec& model) {
  const auto* im = model.as<IndependentModel>();
  return im && im->has_atoms();
}

double law_horizon(const LifetimeLaw& law) {
  const auto& f = law.form();
  if (const auto* h = std::get_if<HazardCurve>(&f)) return h->inverse_cumulative(0.0, 36.0);
  if (const auto* u = std::get_if<UniformLaw>(&f)) return u->b;
  if (const auto* d = std::get_if<DiracLaw>(&f)) return d->c;
  double hi = 0.0;
  for (const auto& c : std::get<UniformMixture>(f).components) hi = std::max(hi, c.b);
  return hi;
}

std::vector<double> dense_grid(double horizon, const std::vector<double>& breaks) {
  constexpr int kPoints = 1000;
  std::vector<double> g;
  for (int k = 0; k <= kPoints; ++k) g.push_back(horizon * k / kPoints);
  for (double b : breaks) {
    if (!(b >= 0.0) || b > horizon) continue;
    const double d = 1e-9 * std::max(1.0, b);
    g.push_back(b);
    if (b - d >= 0.0) g.push_back(b - d);
    g.push_back(b + d);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<double> independent_grid(const IndependentModel& m) {
  double horizon = 0.0;
  std::vector<double> breaks;
  for (const auto& law : m.laws) {
    horizon = std::max(horizon, law_horizon(law));
    auto b = law.breakpoints();
    breaks.insert(breaks.end(), b.begin(), b.end());
    if (auto c = law.atom()) breaks.push_back(*c);
  }
  return dense_grid(horizon, breaks);
}

// Times until the minimum has survived with probability 1e-15 (times 4 for the later stages).
std::vector<double> hazard_grid(const ModelSpec& model) {
  double horizon = 1e-3;
  while (cumulative_hazard_min(model, horizon).value < 34.5 && horizon < 1e12) horizon *= 2.0;
  std::vector<double> breaks;
  if (const auto* im = model.as<IndependentModel>()) {
    for (const auto& law : im->laws) {
      auto b = law.breakpoints();
      breaks.insert(breaks.end(), b.begin(), b.end());
    }
  } else if (const auto* sm = model.as<SetDependentModel>()) {
    for (std::uint32_t s = 0; s + 1 < (std::uint32_t{1} << sm->n()); ++s)
      for (int j = 0; j < sm->n(); ++j)
        if (!SubsetMask(s).contains(j)) {
          auto b = sm->curve(SubsetMask(s), j).breakpoints();
          breaks.insert(breaks.end(), b.begin(), b.end());
        }
  }
  return dense_grid(4.0 * horizon, breaks);
}

bool st_le(const IndependentModel& m, int i, int k, const std::vector<double>& grid) {
  // X_i <=_st X_k: S_i(t) <= S_k(t) for all t
  for (double t : grid)
    if (m.laws[static_cast<std::size_t>(i)].survival(t) > m.laws[static_cast<std::size_t>(k)].survival(t) + 1e-12)
      return false;
  return true;
}

bool same_law(const IndependentModel& m, int i, int k, const std::vector<double>& grid) {
  for (double t : grid)
    if (std::abs(m.laws[static_cast<std::size_t>(i)].survival(t) - m.laws[static_cast<std::size_t>(k)].survival(t)) >
        1e-9)
      return false;
  return true;
}

std::string var(int i) { return "X_" + std::to_string(i + 1); }

// Constant baseline rates beta_j, if the model is initially time homogeneous on the grid.
std::optional<std::vector<double>> initial_rates(const ModelSpec& model, const std::vector<double>& grid,
                                                 double margin) {
  std::vector<double> beta;
  for (int j = 0; j < model.n(); ++j) {
    const double b0 = baseline_mchr(model, j, 0.0);
    for (double t : grid)
      if (std::abs(baseline_mchr(model, j, t) - b0) > margin) return std::nullopt;
    beta.push_back(b0);
  }
  return beta;
}

// beta_l > beta_j implies lambda_l(t|I) >= lambda_j(t|I) for all failed sets I.
bool monotone_rows(const ModelSpec& model, const std::vector<double>& beta, const std::vector<double>& grid,
                   double margin, std::string& witness) {
  const int n = model.n();
  auto check = [&](SubsetMask failed, auto&& rate) {
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) {
        if (l == j || failed.contains(l) || failed.contains(j) || !(beta[static_cast<std::size_t>(l)] > beta[static_cast<std::size_t>(j)]))
          continue;
        if (!rate(failed, l, j)) {
          witness = "rate of " + var(l) + " below " + var(j) + " after failures {" + failed.key() + "}";
          return false;
        }
      }
    return true;
  };
  if (const auto* tm = model.as<ThlsModel>()) {
    for (std::uint32_t s = 0; s + 1 < (std::uint32_t{1} << n); ++s)
      if (!check(SubsetMask(s), [&](SubsetMask f, int l, int j) { return tm->rate(f, l) >= tm->rate(f, j) - margin; }))
        return false;
    return true;
  }
  if (const auto* sm = model.as<SetDependentModel>()) {
    for (std::uint32_t s = 0; s + 1 < (std::uint32_t{1} << n); ++s)
      if (!check(SubsetMask(s), [&](SubsetMask f, int l, int j) {
            for (double t : grid)
              if (sm->curve(f, l).rate(t) < sm->curve(f, j).rate(t) - margin) return false;
            return true;
          }))
        return false;
    return true;
  }
  // independent: lambda_j(t|I) = beta_j; frailty: the ratio lambda_l / lambda_j is always c_l / c_j
  return true;
}

}  // namespace

double comparison_margin(const KernelConfig& cfg, double err_a, double err_b) {
  return 10.0 * cfg.quad.abs_tol + err_a + err_b;
}

Quantity sp_pair(const ModelSpec& model, int i, int j, const KernelConfig& cfg) {
  if (i == j) throw ModelError("sp_pair needs two distinct variables");
  return alpha_subset(model, SubsetMask::of({i, j}), i, cfg);
}

SpMatrix sp_matrix(const ModelSpec& model, const KernelConfig& cfg) {
  return sp_from_table(model.n(), AlphaTable::build(model, subsets_by_size(model.n(), 2, 2), cfg));
}

SubsetMask v_set(const SpMatrix& sp, int i, const KernelConfig& cfg) {
  SubsetMask v;
  for (int j = 0; j < sp.n; ++j)
    if (j != i && weak_sp(sp, i, j, cfg)) v = v.with(j);
  return v;
}

SubsetMask v_set(const ModelSpec& model, int i, const KernelConfig& cfg) {
  if (i < 0 || i >= model.n()) throw ModelError("variable index out of range");
  return v_set(sp_matrix(model, cfg), i, cfg);
}

std::vector<SubsetMask> subsets_by_size(int n, int min_size, int max_size) {
  std::vector<SubsetMask> out;
  for (int size = std::max(min_size, 0); size <= std::min(max_size, n); ++size) {
    if (size == 0) {
      out.emplace_back();
      continue;
    }
    // Gosper's hack: successive masks with the same popcount in increasing order
    std::uint64_t m = (std::uint64_t{1} << size) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (m < limit) {
      out.emplace_back(static_cast<std::uint32_t>(m));
      const std::uint64_t c = m & (~m + 1);
      const std::uint64_t r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  return out;
}

AlphaTable::AlphaTable(std::vector<SubsetMask> masks, std::vector<AlphaVector> values)
    : masks_(std::move(masks)), values_(std::move(values)) {
  for (std::size_t k = 0; k < masks_.size(); ++k) index_.emplace(masks_[k].bits(), k);
}

AlphaTable AlphaTable::build(const ModelSpec& model, const std::vector<SubsetMask>& masks, const KernelConfig& cfg) {
  return build_table<true>(model, masks, cfg);
}

const AlphaVector& AlphaTable::at(SubsetMask a) const {
  auto it = index_.find(a.bits());
  if (it == index_.end()) throw ModelError("subset {" + a.key() + "} is not in the table");
  return values_[it->second];
}

namespace serial {
AlphaTable build_alpha_table(const ModelSpec& model, const std::vector<SubsetMask>& masks, const KernelConfig& cfg) {
  return build_table<false>(model, masks, cfg);
}
}  // namespace serial

ClassificationReport classify(const ModelSpec& model, const KernelConfig& cfg, int max_n_for_subsets) {
  const int n = model.n();
  ClassificationReport report;
  const auto full = alpha_vector(model, SubsetMask::full(n), cfg);
  report.alpha = full.values;
  report.exhaustive = n <= max_n_for_subsets;
  const AlphaTable table =
      AlphaTable::build(model, subsets_by_size(n, 2, report.exhaustive ? n : 2), cfg);
  const SpMatrix sp = sp_from_table(n, table);

  for (int i = 0; i < n; ++i) {
    VariableFlags f;
    f.weakly_small = n == 1 || weakly_small_in(full, i, cfg);
    if (f.weakly_small)
      for (int k = 0; k < n; ++k)
        if (k != i && strict_alpha(full, i, k, cfg)) f.small = true;
    f.v_set = v_set(sp, i, cfg);
    if (report.exhaustive) {
      bool ok = true;
      for_each_submask(f.v_set, [&](SubsetMask a) {
        if (!ok || a.empty()) return;
        const SubsetMask b = a.with(i);
        ok = weakly_small_in(table.at(b), i, cfg);
      });
      f.pair_determined = ok;
    }
    report.variables.push_back(f);
  }

  if (report.exhaustive) {
    report.ordered_by_pairs = true;
    for (SubsetMask a : table.masks()) {
      const auto& av = table.at(a);
      for (int i : av.members)
        for (int j : av.members)
          if (i != j && weak_sp(sp, i, j, cfg) && !weak_alpha(av, i, j, cfg)) {
            report.ordered_by_pairs = false;
            report.ordered_by_pairs_witness = PairWitness{i, j, a};
            return report;
          }
    }
  }
  return report;
}

std::vector<SpCycle> find_sp_cycles(const ModelSpec& model, const KernelConfig& cfg) {
  const auto candidates = cycles_from(sp_matrix(model, cfg), cfg);
  const KernelConfig tight = cfg.tightened(10.0);
  std::vector<SpCycle> out;
  for (const auto& c : candidates)
    if (cycle_holds(model, c, tight)) out.push_back(c);
  return out;
}

ParadoxReport find_aggregation_paradoxes(const ModelSpec& model, int max_subset_size, const KernelConfig& cfg) {
  const int n = model.n();
  ParadoxReport report;
  int cap = (max_subset_size <= 0 || max_subset_size > n) ? n : max_subset_size;
  if (n > kExhaustiveLimit) {
    std::size_t total = 0;
    int fit = 1;
    for (int k = 2; k <= cap; ++k) {
      total += binomial(n, k);
      if (total > kScanBudget) break;
      fit = k;
    }
    cap = std::max(2, fit);
  }
  report.max_subset_size = cap;
  report.exhaustive = cap == n;

  const AlphaTable table = AlphaTable::build(model, subsets_by_size(n, 2, cap), cfg);
  const SpMatrix sp = sp_from_table(n, table);
  const KernelConfig tight = cfg.tightened(10.0);
  std::map<std::uint32_t, AlphaVector> recheck;
  auto tight_alpha = [&](SubsetMask a) -> const AlphaVector& {
    auto it = recheck.find(a.bits());
    if (it == recheck.end()) it = recheck.emplace(a.bits(), alpha_vector(model, a, tight)).first;
    return it->second;
  };

  for (const auto& c : cycles_from(sp, cfg))
    if (cycle_holds(model, c, tight)) report.cycles.push_back(c);

  for (SubsetMask a : table.masks()) {
    if (a.size() >= cap) break;
    const auto& av = table.at(a);
    for (int l = 0; l < n; ++l) {
      if (a.contains(l)) continue;
      const SubsetMask b = a.with(l);
      const auto& bv = table.at(b);
      for (int i : av.members)
        for (int j : av.members) {
          if (i == j || !strict_alpha(av, i, j, cfg) || !strict_alpha(bv, j, i, cfg)) continue;
          if (strict_alpha(tight_alpha(a), i, j, tight) && strict_alpha(tight_alpha(b), j, i, tight))
            report.reversals.push_back({i, j, a, l});
        }
    }
  }
  std::stable_sort(report.reversals.begin(), report.reversals.end(), [](const Reversal& x, const Reversal& y) {
    return std::make_tuple(x.subset.size(), x.subset.bits(), x.i, x.j, x.l) <
           std::make_tuple(y.subset.size(), y.subset.bits(), y.i, y.j, y.l);
  });

  for (SubsetMask a : table.masks()) {
    if (a.size() < 3) continue;
    const auto& av = table.at(a);
    for (int i : av.members)
      for (int j : av.members) {
        if (i == j || !strict_sp(sp, i, j, cfg) || !strict_alpha(av, j, i, cfg)) continue;
        if (strict_alpha(tight_alpha(SubsetMask::of({i, j})), i, j, tight) && strict_alpha(tight_alpha(a), j, i, tight))
          report.sp_vs_subset.push_back({i, j, a});
      }
  }
  return report;
}

std::vector<ConditionVerdict> sufficient_conditions(const ModelSpec& model, const KernelConfig& cfg) {
  const int n = model.n();
  const double margin = comparison_margin(cfg);
  std::vector<ConditionVerdict> out;
  std::optional<ClassificationReport> cls;
  auto classification = [&]() -> const ClassificationReport& {
    if (!cls) cls = classify(model, cfg);
    return *cls;
  };
  auto finish = [&](ConditionVerdict& v, std::optional<bool> verified, const std::string& what) {
    v.conclusion_verified = verified;
    if (!verified) v.detail += "; conclusion not scanned (more than " + std::to_string(kExhaustiveLimit) + " variables)";
    else if (*verified) v.detail += "; verified: " + what;
    else {
      v.defect = true;
      v.detail += "; DEFECT: expected " + what + " but the scan disagrees";
    }
  };

  // independent variables with an st-smallest member
  {
    ConditionVerdict v{"independent-st-minimum", false, false, std::nullopt, false, ""};
    if (const auto* im = model.as<IndependentModel>()) {
      v.applicable = true;
      const auto grid = independent_grid(*im);
      for (int i = 0; i < n && !v.hypothesis_holds; ++i) {
        bool minimum = true;
        for (int k = 0; k < n && minimum; ++k)
          if (k != i && !st_le(*im, i, k, grid)) minimum = false;
        if (!minimum) continue;
        v.hypothesis_holds = true;
        bool identical = true;
        for (int k = 0; k < n; ++k)
          if (k != i && !same_law(*im, i, k, grid)) identical = false;
        v.detail = var(i) + " is stochastically smallest";
        const auto& f = classification().variables[static_cast<std::size_t>(i)];
        std::optional<bool> verified;
        if (f.pair_determined) verified = *f.pair_determined && f.weakly_small && (identical || f.small);
        finish(v, verified,
               var(i) + " pair-determined and " + (identical ? "weakly small" : "small"));
      }
      if (!v.hypothesis_holds) v.detail = "no variable is stochastically smaller than all others";
    } else {
      v.detail = "requires independent variables";
    }
    out.push_back(v);
  }

  // independent variables forming a chain in the usual stochastic order
  {
    ConditionVerdict v{"independent-st-chain", false, false, std::nullopt, false, ""};
    if (const auto* im = model.as<IndependentModel>()) {
      v.applicable = true;
      const auto grid = independent_grid(*im);
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      // a chain, if one exists, sorts by the area under the survival function
      std::vector<double> area(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j < n; ++j)
        for (std::size_t k = 1; k < grid.size(); ++k)
          area[static_cast<std::size_t>(j)] += (grid[k] - grid[k - 1]) * im->laws[static_cast<std::size_t>(j)].survival(grid[k]);
      std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return area[static_cast<std::size_t>(x)] < area[static_cast<std::size_t>(y)]; });
      v.hypothesis_holds = true;
      for (std::size_t k = 1; k < order.size() && v.hypothesis_holds; ++k)
        v.hypothesis_holds = st_le(*im, order[k - 1], order[k], grid);
      if (v.hypothesis_holds) {
        v.detail = "chain";
        for (std::size_t k = 0; k < order.size(); ++k) v.detail += (k ? " <=st " : " ") + var(order[k]);
        finish(v, classification().ordered_by_pairs, "ordered by pairs");
      } else {
        v.detail = "the variables are not totally ordered in the usual stochastic order";
      }
    } else {
      v.detail = "requires independent variables";
    }
    out.push_back(v);
  }

  const bool hazards = !has_atoms(model);
  const std::vector<double> grid = hazards ? hazard_grid(model) : std::vector<double>{};

  // a variable whose baseline m.c.h.r. dominates all others
  {
    ConditionVerdict v{"baseline-dominance", hazards, false, std::nullopt, false, ""};
    if (hazards) {
      std::vector<std::vector<double>> rates(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        for (double t : grid) rates[static_cast<std::size_t>(j)].push_back(baseline_mchr(model, j, t));
      for (int i = 0; i < n && !v.hypothesis_holds; ++i) {
        bool top = true;
        for (int k = 0; k < n && top; ++k)
          for (std::size_t g = 0; g < grid.size() && top; ++g)
            if (rates[static_cast<std::size_t>(i)][g] < rates[static_cast<std::size_t>(k)][g] - margin) top = false;
        if (!top) continue;
        v.hypothesis_holds = true;
        v.detail = "lambda_" + std::to_string(i + 1) + "(t|{}) dominates every other baseline rate";
        finish(v, classification().variables[static_cast<std::size_t>(i)].weakly_small, var(i) + " weakly small");
      }
      if (!v.hypothesis_holds) v.detail = "no baseline m.c.h.r. dominates all others on the grid";
    } else {
      v.detail = "point-mass laws have no hazard rate";
    }
    out.push_back(v);
  }

  const auto beta = hazards ? initial_rates(model, grid, margin) : std::nullopt;

  // initially time homogeneous: weakly small exactly for the largest beta
  {
    ConditionVerdict v{"initially-time-homogeneous", hazards, beta.has_value(), std::nullopt, false, ""};
    if (!hazards) {
      v.detail = "point-mass laws have no hazard rate";
    } else if (!beta) {
      v.detail = "some baseline m.c.h.r. is not constant in t";
    } else {
      const double top = *std::max_element(beta->begin(), beta->end());
      bool ok = true;
      v.detail = "beta = (";
      for (int j = 0; j < n; ++j) {
        v.detail += (j ? ", " : "") + std::to_string((*beta)[static_cast<std::size_t>(j)]);
        const bool is_max = (*beta)[static_cast<std::size_t>(j)] >= top - margin;
        if (classification().variables[static_cast<std::size_t>(j)].weakly_small != is_max) ok = false;
      }
      v.detail += ")";
      finish(v, ok, "weakly small exactly where beta_j is maximal");
    }
    out.push_back(v);
  }

  // distinct initial rates whose order is kept after every set of failures
  {
    ConditionVerdict v{"monotone-load-sharing", hazards, false, std::nullopt, false, ""};
    if (!hazards) {
      v.detail = "point-mass laws have no hazard rate";
    } else if (!beta) {
      v.detail = "not initially time homogeneous";
    } else {
      bool distinct = true;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (std::abs((*beta)[static_cast<std::size_t>(i)] - (*beta)[static_cast<std::size_t>(j)]) <= margin) distinct = false;
      std::string witness;
      if (!distinct) {
        v.detail = "initial rates beta_j are not pairwise distinct";
      } else if (!monotone_rows(model, *beta, grid, margin, witness)) {
        v.detail = "rate order not preserved: " + witness;
      } else {
        v.hypothesis_holds = true;
        v.detail = "beta order preserved after every set of failures";
        finish(v, classification().ordered_by_pairs, "ordered by pairs");
      }
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace mchr
