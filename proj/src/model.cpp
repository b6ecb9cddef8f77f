#include "mchr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mchr/errors.hpp"

namespace mchr {

namespace {

std::string set_label(SubsetMask s) { return "{" + s.key() + "}"; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int body_size(const ModelSpec::Body& body) {
  return std::visit(overloaded{
                        [](const IndependentModel& m) { return static_cast<int>(m.laws.size()); },
                        [](const ThlsModel& m) { return m.n(); },
                        [](const FrailtyExpModel& m) { return static_cast<int>(m.c.size()); },
                        [](const SetDependentModel& m) { return m.n(); },
                    },
                    body);
}

// Posterior of Theta given the history h, observed up to time t.
// Exposure is sum_{i in I} c_i t_i + t * sum_{l not in I} c_l.
double frailty_exposure(const FrailtyExpModel& m, const FailureHistory& h, double t) {
  double s = 0.0;
  SubsetMask failed;
  for (const auto& e : h.failed) {
    s += m.c[static_cast<std::size_t>(e.index)] * e.time;
    failed = failed.with(e.index);
  }
  return s + t * m.c_sum(failed.complement(static_cast<int>(m.c.size())));
}

// Normalised posterior weights of a discrete Theta after k failures and the given exposure.
std::vector<double> discrete_posterior(const DiscreteLaw& d, int k, double exposure) {
  std::vector<double> logw(d.values.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    logw[i] = std::log(d.probs[i]) + k * std::log(d.values[i]) - d.values[i] * exposure;
    mx = std::max(mx, logw[i]);
  }
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - mx);
    total += w;
  }
  for (double& w : logw) w /= total;
  return logw;
}

FrailtyLaw frailty_posterior(const FrailtyExpModel& m, const FailureHistory& h, double t) {
  const int k = static_cast<int>(h.failed.size());
  const double exposure = frailty_exposure(m, h, t);
  return std::visit(overloaded{
                        [&](const GammaLaw& g) -> FrailtyLaw { return GammaLaw{g.shape + k, g.rate + exposure}; },
                        [&](const DiscreteLaw& d) -> FrailtyLaw {
                          return DiscreteLaw{d.values, discrete_posterior(d, k, exposure)};
                        },
                    },
                    m.theta);
}

void check_query(const ModelSpec& model, int j, double t, const FailureHistory& h) {
  if (j < 0 || j >= model.n()) throw ModelError("variable index " + std::to_string(j + 1) + " out of range");
  if (auto v = history_violations(h, model.n()); !v.empty()) throw ModelError("invalid history: " + v.front());
  if (h.failed_set().contains(j))
    throw ModelError("variable " + std::to_string(j + 1) + " has already failed in the history");
  if (!(t >= h.now)) throw ModelError("time t precedes the history's observation time");
}

}  // namespace

bool IndependentModel::has_atoms() const {
  return std::any_of(laws.begin(), laws.end(), [](const LifetimeLaw& l) { return l.has_atom(); });
}

ThlsModel::ThlsModel(int n)
    : n_(n),
      rates_((std::size_t{1} << n) * static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN()) {
  if (n < 1 || n > kMaxVariables) throw ModelError("n must be in 1.." + std::to_string(kMaxVariables));
}

double ThlsModel::total_rate(SubsetMask failed) const {
  double r = 0.0;
  for (int m = 0; m < n_; ++m)
    if (!failed.contains(m)) r += rate(failed, m);
  return r;
}

double FrailtyExpModel::c_sum(SubsetMask within) const {
  double s = 0.0;
  for (int j : within.members()) s += c[static_cast<std::size_t>(j)];
  return s;
}

SetDependentModel::SetDependentModel(int n) : n_(n), curves_((std::size_t{1} << n) * static_cast<std::size_t>(n)) {
  if (n < 1 || n > kMaxVariables) throw ModelError("n must be in 1.." + std::to_string(kMaxVariables));
}

ModelSpec::ModelSpec(Body body) : body_(std::move(body)), n_(body_size(body_)) {}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::independent: return "independent";
    case ModelKind::thls: return "thls";
    case ModelKind::frailty_exp: return "frailty-exp";
    case ModelKind::set_dependent: return "set-dependent";
  }
  return "?";
}

SubsetMask FailureHistory::failed_set() const {
  SubsetMask s;
  for (const auto& e : failed) s = s.with(e.index);
  return s;
}

std::vector<std::string> history_violations(const FailureHistory& h, int n) {
  std::vector<std::string> out;
  if (!(std::isfinite(h.now) && h.now >= 0.0)) out.emplace_back("now must be finite and >= 0");
  SubsetMask seen;
  double prev = -1.0;
  for (const auto& e : h.failed) {
    if (e.index < 0 || e.index >= n) {
      out.emplace_back("failed index " + std::to_string(e.index + 1) + " out of range");
      continue;
    }
    if (seen.contains(e.index)) out.emplace_back("index " + std::to_string(e.index + 1) + " fails twice");
    seen = seen.with(e.index);
    if (!(e.time >= 0.0)) out.emplace_back("failure times must be >= 0");
    if (!(e.time > prev)) out.emplace_back("failure times must be strictly increasing");
    if (e.time > h.now) out.emplace_back("failure time after the observation time now");
    prev = e.time;
  }
  return out;
}

ValidationReport validate_model(const ModelSpec& model) {
  ValidationReport report;
  const int n = model.n();
  if (n < 1 || n > kMaxVariables) {
    report.push_back({"/n", "n must be in 1.." + std::to_string(kMaxVariables)});
    return report;
  }
  std::visit(
      overloaded{
          [&](const IndependentModel& m) {
            for (std::size_t j = 0; j < m.laws.size(); ++j)
              for (auto& msg : m.laws[j].violations()) report.push_back({"/laws/" + std::to_string(j), msg});
            for (std::size_t i = 0; i < m.laws.size(); ++i)
              for (std::size_t j = i + 1; j < m.laws.size(); ++j) {
                auto ai = m.laws[i].atom(), aj = m.laws[j].atom();
                if (ai && aj && *ai == *aj) {
                  std::ostringstream msg;
                  msg << "tie probability positive: X_" << i + 1 << " and X_" << j + 1
                      << " share a point mass at " << *ai;
                  report.push_back({"/laws/" + std::to_string(j), msg.str()});
                }
              }
          },
          [&](const ThlsModel& m) {
            const SubsetMask all = SubsetMask::full(n);
            for_each_submask(all, [&](SubsetMask failed) {
              if (failed == all) return;
              for (int j = 0; j < n; ++j) {
                if (failed.contains(j)) continue;
                const double r = m.rate(failed, j);
                const std::string path = "/rates/" + failed.key() + "/" + std::to_string(j + 1);
                const std::string where = "(I=" + set_label(failed) + ", j=" + std::to_string(j + 1) + ")";
                if (std::isnan(r)) report.push_back({path, "missing rate " + where});
                else if (!(std::isfinite(r) && r > 0.0)) report.push_back({path, "rate must be finite and > 0 " + where});
              }
            });
          },
          [&](const FrailtyExpModel& m) {
            for (std::size_t j = 0; j < m.c.size(); ++j)
              if (!(std::isfinite(m.c[j]) && m.c[j] > 0.0))
                report.push_back({"/c/" + std::to_string(j), "c must be finite and > 0"});
            std::visit(overloaded{
                           [&](const GammaLaw& g) {
                             if (!(std::isfinite(g.shape) && g.shape > 0.0))
                               report.push_back({"/theta/shape", "shape must be > 0"});
                             if (!(std::isfinite(g.rate) && g.rate > 0.0))
                               report.push_back({"/theta/rate", "rate must be > 0"});
                           },
                           [&](const DiscreteLaw& d) {
                             if (d.values.empty() || d.values.size() != d.probs.size())
                               report.push_back({"/theta", "values and probs must be non-empty and of equal length"});
                             for (double v : d.values)
                               if (!(std::isfinite(v) && v > 0.0))
                                 report.push_back({"/theta/values", "values must be finite and > 0"});
                             double sum = 0.0;
                             for (double p : d.probs) {
                               if (!(std::isfinite(p) && p > 0.0))
                                 report.push_back({"/theta/probs", "probs must be > 0"});
                               sum += p;
                             }
                             if (std::abs(sum - 1.0) > 1e-9) report.push_back({"/theta/probs", "probs must sum to 1"});
                           },
                       },
                       m.theta);
          },
          [&](const SetDependentModel& m) {
            const SubsetMask all = SubsetMask::full(n);
            for_each_submask(all, [&](SubsetMask failed) {
              if (failed == all) return;
              for (int j = 0; j < n; ++j) {
                if (failed.contains(j)) continue;
                const std::string path = "/curves/" + failed.key() + "/" + std::to_string(j + 1);
                const std::string where = "(I=" + set_label(failed) + ", j=" + std::to_string(j + 1) + ")";
                if (!m.has_curve(failed, j)) {
                  report.push_back({path, "missing curve " + where});
                  continue;
                }
                const auto& c = m.curve(failed, j);
                auto v = c.violations();
                for (auto& msg : v) report.push_back({path, msg + " " + where});
                if (v.empty() && !c.proper()) report.push_back({path, "zero tail rate rejected " + where});
              }
            });
          },
      },
      model.body());
  return report;
}

void require_valid(const ModelSpec& model) {
  auto report = validate_model(model);
  if (!report.empty()) throw ModelError("invalid model at " + report.front().path + ": " + report.front().message);
}

double mchr(const ModelSpec& model, int j, double t, const FailureHistory& h) {
  check_query(model, j, t, h);
  const SubsetMask failed = h.failed_set();
  return std::visit(overloaded{
                        [&](const IndependentModel& m) { return m.laws[static_cast<std::size_t>(j)].hazard(t); },
                        [&](const ThlsModel& m) { return m.rate(failed, j); },
                        [&](const FrailtyExpModel& m) {
                          const double cj = m.c[static_cast<std::size_t>(j)];
                          return std::visit(overloaded{
                                                [&](const GammaLaw& g) { return cj * g.shape / g.rate; },
                                                [&](const DiscreteLaw& d) {
                                                  double mean = 0.0;
                                                  for (std::size_t i = 0; i < d.values.size(); ++i)
                                                    mean += d.values[i] * d.probs[i];
                                                  return cj * mean;
                                                },
                                            },
                                            frailty_posterior(m, h, t));
                        },
                        [&](const SetDependentModel& m) { return m.curve(failed, j).rate(t); },
                    },
                    model.body());
}

double stage_cumulative_hazard(const ModelSpec& model, const FailureHistory& h, double from, double to) {
  if (auto v = history_violations(h, model.n()); !v.empty()) throw ModelError("invalid history: " + v.front());
  if (!(from >= h.now)) throw ModelError("stage must start at or after the history's observation time");
  if (to <= from) return 0.0;
  const SubsetMask failed = h.failed_set();
  const SubsetMask alive = failed.complement(model.n());
  return std::visit(
      overloaded{
          [&](const IndependentModel& m) {
            double acc = 0.0;
            for (int l : alive.members()) {
              const auto& law = m.laws[static_cast<std::size_t>(l)];
              acc += law.cumulative_hazard(to) - law.cumulative_hazard(from);
            }
            return acc;
          },
          [&](const ThlsModel& m) { return m.total_rate(failed) * (to - from); },
          [&](const FrailtyExpModel& m) {
            const double c_alive = m.c_sum(alive);
            return std::visit(overloaded{
                                  [&](const GammaLaw&) {
                                    // posterior at `from`, then the Laplace transform over [from, to]
                                    const auto post = std::get<GammaLaw>(frailty_posterior(m, h, from));
                                    return post.shape * std::log1p((to - from) * c_alive / post.rate);
                                  },
                                  [&](const DiscreteLaw&) {
                                    const auto post = std::get<DiscreteLaw>(frailty_posterior(m, h, from));
                                    double mx = -std::numeric_limits<double>::infinity();
                                    std::vector<double> lw(post.values.size());
                                    for (std::size_t i = 0; i < lw.size(); ++i) {
                                      lw[i] = std::log(post.probs[i]) - post.values[i] * c_alive * (to - from);
                                      mx = std::max(mx, lw[i]);
                                    }
                                    double s = 0.0;
                                    for (double x : lw) s += std::exp(x - mx);
                                    return -(mx + std::log(s));
                                  },
                              },
                              m.theta);
          },
          [&](const SetDependentModel& m) {
            double acc = 0.0;
            for (int l : alive.members()) acc += m.curve(failed, l).cumulative(from, to);
            return acc;
          },
      },
      model.body());
}

ResidualModel residual_model(const ModelSpec& model, const FailureHistory& h) {
  if (auto v = history_violations(h, model.n()); !v.empty()) throw ModelError("invalid history: " + v.front());
  const SubsetMask failed = h.failed_set();
  const SubsetMask alive = failed.complement(model.n());
  if (alive.empty()) throw ModelError("all variables have failed; no residual model");
  const CompactSubsets survivors(alive);
  const int m = survivors.ground_size();
  std::vector<int> original = survivors.members();

  ModelSpec::Body body = std::visit(
      overloaded{
          [&](const IndependentModel& im) -> ModelSpec::Body {
            IndependentModel out;
            for (int j : original) out.laws.push_back(im.laws[static_cast<std::size_t>(j)].truncated(h.now));
            return out;
          },
          [&](const ThlsModel& tm) -> ModelSpec::Body {
            ThlsModel out(m);
            for (std::uint32_t s = 0; s + 1 < survivors.count(); ++s) {
              const SubsetMask local(s);
              const SubsetMask now_failed = failed | survivors.expand(s);
              for (int k = 0; k < m; ++k)
                if (!local.contains(k)) out.set_rate(local, k, tm.rate(now_failed, original[static_cast<std::size_t>(k)]));
            }
            return out;
          },
          [&](const FrailtyExpModel& fm) -> ModelSpec::Body {
            FrailtyExpModel out;
            for (int j : original) out.c.push_back(fm.c[static_cast<std::size_t>(j)]);
            out.theta = frailty_posterior(fm, h, h.now);
            return out;
          },
          [&](const SetDependentModel& sm) -> ModelSpec::Body {
            SetDependentModel out(m);
            for (std::uint32_t s = 0; s + 1 < survivors.count(); ++s) {
              const SubsetMask local(s);
              const SubsetMask now_failed = failed | survivors.expand(s);
              for (int k = 0; k < m; ++k)
                if (!local.contains(k))
                  out.set_curve(local, k, sm.curve(now_failed, original[static_cast<std::size_t>(k)]).shifted(h.now));
            }
            return out;
          },
      },
      model.body());
  return ResidualModel{ModelSpec(std::move(body)), std::move(original)};
}

}  // namespace mchr
