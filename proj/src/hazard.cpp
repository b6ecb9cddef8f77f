#include "mchr/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mchr/errors.hpp"

namespace mchr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t segment_of(const PiecewiseHazard& p, double t) {
  return static_cast<std::size_t>(std::upper_bound(p.knots.begin(), p.knots.end(), t) - p.knots.begin());
}

double segment_rate(const PiecewiseHazard& p, std::size_t seg) {
  return seg < p.rates.size() ? p.rates[seg] : p.tail_rate;
}

double piecewise_cumulative(const PiecewiseHazard& p, double t) {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < p.knots.size(); ++i) {
    if (t <= p.knots[i]) return acc + p.rates[i] * (t - left);
    acc += p.rates[i] * (p.knots[i] - left);
    left = p.knots[i];
  }
  return acc + p.tail_rate * (t - left);
}

double weibull_h(const WeibullHazard& w, double t) { return std::pow((t + w.offset) / w.scale, w.shape); }

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

double min_rate(const ExpMixtureHazard& e) { return *std::min_element(e.rates.begin(), e.rates.end()); }

// -log sum_k p_k e^{-r_k t}, factoring out the slowest rate.
double mixture_log_survival(const ExpMixtureHazard& e, double t) {
  const double r0 = min_rate(e);
  double s = 0.0;
  for (std::size_t k = 0; k < e.rates.size(); ++k) s += e.probs[k] * std::exp(-(e.rates[k] - r0) * t);
  return r0 * t - std::log(s);
}

double mixture_rate(const ExpMixtureHazard& e, double t) {
  const double r0 = min_rate(e);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < e.rates.size(); ++k) {
    const double w = e.probs[k] * std::exp(-(e.rates[k] - r0) * t);
    num += w * e.rates[k];
    den += w;
  }
  return num / den;
}

// The log-survival is concave, so Newton steps from the left never overshoot.
double mixture_inverse(const ExpMixtureHazard& e, double from, double amount) {
  const double target = mixture_log_survival(e, from) + amount / e.scale;
  double s = from;
  for (int it = 0; it < 200; ++it) {
    const double step = (target - mixture_log_survival(e, s)) / mixture_rate(e, s);
    if (!(step > 0.0)) break;
    s += step;
    if (step <= 1e-15 * std::max(1.0, s)) break;
  }
  return s;
}

}  // namespace

double HazardCurve::rate(double t) const {
  return std::visit(
      overloaded{
          [](const ConstantHazard& c) { return c.rate; },
          [t](const WeibullHazard& w) {
            const double x = (t + w.offset) / w.scale;
            if (x <= 0.0) return w.shape < 1.0 ? kInf : (w.shape == 1.0 ? 1.0 / w.scale : 0.0);
            return w.shape / w.scale * std::pow(x, w.shape - 1.0);
          },
          [t](const LomaxHazard& l) { return l.shape / (l.scale + t); },
          [t](const PiecewiseHazard& p) { return segment_rate(p, segment_of(p, t)); },
          [t](const ExpMixtureHazard& e) { return e.scale * mixture_rate(e, t); },
      },
      form_);
}

double HazardCurve::cumulative(double t) const { return cumulative(0.0, t); }

double HazardCurve::cumulative(double from, double to) const {
  if (to <= from) return 0.0;
  return std::visit(
      overloaded{
          [&](const ConstantHazard& c) { return c.rate * (to - from); },
          [&](const WeibullHazard& w) {
            if (std::isinf(to)) return kInf;
            return weibull_h(w, to) - weibull_h(w, from);
          },
          [&](const LomaxHazard& l) {
            if (std::isinf(to)) return kInf;
            return l.shape * std::log1p((to - from) / (l.scale + from));
          },
          [&](const PiecewiseHazard& p) {
            if (std::isinf(to)) return p.tail_rate > 0.0 ? kInf : piecewise_cumulative(p, p.knots.empty() ? 0.0 : p.knots.back()) - piecewise_cumulative(p, from);
            return piecewise_cumulative(p, to) - piecewise_cumulative(p, from);
          },
          [&](const ExpMixtureHazard& e) {
            if (std::isinf(to)) return e.scale > 0.0 ? kInf : 0.0;
            return e.scale * (mixture_log_survival(e, to) - mixture_log_survival(e, from));
          },
      },
      form_);
}

double HazardCurve::inverse_cumulative(double from, double amount) const {
  if (amount <= 0.0) return from;
  return std::visit(
      overloaded{
          [&](const ConstantHazard& c) { return c.rate > 0.0 ? from + amount / c.rate : kInf; },
          [&](const WeibullHazard& w) {
            const double base = weibull_h(w, from);
            return w.scale * std::pow(base + amount, 1.0 / w.shape) - w.offset;
          },
          [&](const LomaxHazard& l) { return from + (l.scale + from) * std::expm1(amount / l.shape); },
          [&](const PiecewiseHazard& p) {
            double remaining = amount;
            double pos = from;
            for (std::size_t seg = segment_of(p, from); seg < p.knots.size(); ++seg) {
              const double r = p.rates[seg];
              const double cap = r * (p.knots[seg] - pos);
              if (cap >= remaining) return pos + remaining / r;
              remaining -= cap;
              pos = p.knots[seg];
            }
            return p.tail_rate > 0.0 ? pos + remaining / p.tail_rate : kInf;
          },
          [&](const ExpMixtureHazard& e) { return e.scale > 0.0 ? mixture_inverse(e, from, amount) : kInf; },
      },
      form_);
}

HazardCurve HazardCurve::shifted(double delta) const {
  if (delta <= 0.0) return *this;
  return std::visit(
      overloaded{
          [](const ConstantHazard& c) { return HazardCurve(c); },
          [delta](WeibullHazard w) {
            w.offset += delta;
            return HazardCurve(w);
          },
          [delta](LomaxHazard l) {
            l.scale += delta;
            return HazardCurve(l);
          },
          [delta](const PiecewiseHazard& p) {
            PiecewiseHazard out;
            out.tail_rate = p.tail_rate;
            for (std::size_t seg = segment_of(p, delta); seg < p.knots.size(); ++seg) {
              out.knots.push_back(p.knots[seg] - delta);
              out.rates.push_back(p.rates[seg]);
            }
            return HazardCurve(out);
          },
          [delta](ExpMixtureHazard e) {
            // conditioning on survival to delta reweights the components
            const double r0 = min_rate(e);
            double total = 0.0;
            for (std::size_t k = 0; k < e.rates.size(); ++k) {
              e.probs[k] *= std::exp(-(e.rates[k] - r0) * delta);
              total += e.probs[k];
            }
            for (double& p : e.probs) p /= total;
            return HazardCurve(e);
          },
      },
      form_);
}

std::vector<double> HazardCurve::breakpoints() const {
  if (const auto* p = std::get_if<PiecewiseHazard>(&form_)) return p->knots;
  return {};
}

bool HazardCurve::is_constant() const {
  return std::visit(overloaded{
                        [](const ConstantHazard&) { return true; },
                        [](const WeibullHazard& w) { return w.shape == 1.0; },
                        [](const LomaxHazard&) { return false; },
                        [](const PiecewiseHazard& p) {
                          return std::all_of(p.rates.begin(), p.rates.end(),
                                             [&](double r) { return r == p.tail_rate; });
                        },
                        [](const ExpMixtureHazard& e) {
                          return std::all_of(e.rates.begin(), e.rates.end(), [&](double r) { return r == e.rates[0]; });
                        },
                    },
                    form_);
}

bool HazardCurve::proper() const {
  return std::visit(overloaded{
                        [](const ConstantHazard& c) { return c.rate > 0.0; },
                        [](const WeibullHazard&) { return true; },
                        [](const LomaxHazard&) { return true; },
                        [](const PiecewiseHazard& p) { return p.tail_rate > 0.0; },
                        [](const ExpMixtureHazard& e) { return e.scale > 0.0; },
                    },
                    form_);
}

std::vector<std::string> HazardCurve::violations() const {
  std::vector<std::string> out;
  std::visit(overloaded{
                 [&](const ConstantHazard& c) {
                   if (!finite_nonneg(c.rate)) out.emplace_back("rate must be finite and >= 0");
                 },
                 [&](const WeibullHazard& w) {
                   if (!(std::isfinite(w.shape) && w.shape > 0.0)) out.emplace_back("shape must be > 0");
                   if (!(std::isfinite(w.scale) && w.scale > 0.0)) out.emplace_back("scale must be > 0");
                   if (!finite_nonneg(w.offset)) out.emplace_back("offset must be >= 0");
                 },
                 [&](const LomaxHazard& l) {
                   if (!(std::isfinite(l.shape) && l.shape > 0.0)) out.emplace_back("shape must be > 0");
                   if (!(std::isfinite(l.scale) && l.scale > 0.0)) out.emplace_back("scale must be > 0");
                 },
                 [&](const PiecewiseHazard& p) {
                   if (p.knots.size() != p.rates.size())
                     out.emplace_back("knots and rates must have the same length");
                   for (std::size_t i = 0; i < p.knots.size(); ++i) {
                     if (!(std::isfinite(p.knots[i]) && p.knots[i] > 0.0)) out.emplace_back("knots must be finite and > 0");
                     if (i > 0 && !(p.knots[i] > p.knots[i - 1])) out.emplace_back("knots must be strictly increasing");
                   }
                   for (double r : p.rates)
                     if (!finite_nonneg(r)) out.emplace_back("rates must be finite and >= 0");
                   if (!finite_nonneg(p.tail_rate)) out.emplace_back("tail_rate must be finite and >= 0");
                 },
                 [&](const ExpMixtureHazard& e) {
                   if (!finite_nonneg(e.scale)) out.emplace_back("scale must be finite and >= 0");
                   if (e.rates.empty() || e.rates.size() != e.probs.size())
                     out.emplace_back("rates and probs must be non-empty and of the same length");
                   for (double r : e.rates)
                     if (!(std::isfinite(r) && r > 0.0)) out.emplace_back("rates must be finite and > 0");
                   double total = 0.0;
                   for (double p : e.probs) {
                     if (!finite_nonneg(p)) out.emplace_back("probs must be finite and >= 0");
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-9) out.emplace_back("probs must sum to 1");
                 },
             },
             form_);
  return out;
}

// ---------------------------------------------------------------------------

double LifetimeLaw::survival(double t) const {
  return std::visit(
      overloaded{
          [t](const HazardCurve& h) { return t <= 0.0 ? 1.0 : std::exp(-h.cumulative(t)); },
          [t](const UniformLaw& u) {
            if (t < u.a) return 1.0;
            if (t >= u.b) return 0.0;
            return (u.b - t) / (u.b - u.a);
          },
          [t](const DiracLaw& d) { return t < d.c ? 1.0 : 0.0; },
          [t](const UniformMixture& m) {
            double s = 0.0;
            for (std::size_t k = 0; k < m.components.size(); ++k)
              s += m.weights[k] * LifetimeLaw(m.components[k]).survival(t);
            return s;
          },
      },
      form_);
}

double LifetimeLaw::density(double t) const {
  if (t < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [t](const HazardCurve& h) {
            const double s = std::exp(-h.cumulative(t));
            return s == 0.0 ? 0.0 : h.rate(t) * s;
          },
          [t](const UniformLaw& u) { return (t >= u.a && t < u.b) ? 1.0 / (u.b - u.a) : 0.0; },
          [](const DiracLaw&) { return 0.0; },
          [t](const UniformMixture& m) {
            double f = 0.0;
            for (std::size_t k = 0; k < m.components.size(); ++k)
              f += m.weights[k] * LifetimeLaw(m.components[k]).density(t);
            return f;
          },
      },
      form_);
}

double LifetimeLaw::hazard(double t) const {
  if (const auto* h = std::get_if<HazardCurve>(&form_)) return h->rate(t);
  if (has_atom()) throw ModelError("point-mass law has no hazard rate");
  const double s = survival(t);
  return s > 0.0 ? density(t) / s : kInf;
}

double LifetimeLaw::cumulative_hazard(double t) const {
  if (const auto* h = std::get_if<HazardCurve>(&form_)) return h->cumulative(t);
  if (has_atom()) throw ModelError("point-mass law has no cumulative hazard");
  const double s = survival(t);
  return s > 0.0 ? -std::log(s) : kInf;
}

std::optional<double> LifetimeLaw::atom() const {
  if (const auto* d = std::get_if<DiracLaw>(&form_)) return d->c;
  return std::nullopt;
}

double LifetimeLaw::quantile(double u) const {
  return std::visit(overloaded{
                        [u](const HazardCurve& h) { return h.inverse_cumulative(0.0, -std::log1p(-u)); },
                        [u](const UniformLaw& l) { return l.a + u * (l.b - l.a); },
                        [](const DiracLaw& d) { return d.c; },
                        [this, u](const UniformMixture& m) {
                          double lo = kInf, hi = 0.0;
                          for (const auto& c : m.components) {
                            lo = std::min(lo, c.a);
                            hi = std::max(hi, c.b);
                          }
                          for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                            const double mid = 0.5 * (lo + hi);
                            if (1.0 - survival(mid) < u) lo = mid;
                            else hi = mid;
                          }
                          return 0.5 * (lo + hi);
                        },
                    },
                    form_);
}

LifetimeLaw LifetimeLaw::truncated(double now) const {
  if (now <= 0.0) return *this;
  if (survival(now) <= 0.0) throw ModelError("history has probability zero: P(X > now) = 0");
  return std::visit(overloaded{
                        [now](const HazardCurve& h) { return LifetimeLaw(h.shifted(now)); },
                        [now](const UniformLaw& u) {
                          return LifetimeLaw(UniformLaw{std::max(u.a, now) - now, u.b - now});
                        },
                        [now](const DiracLaw& d) { return LifetimeLaw(DiracLaw{d.c - now}); },
                        [now](const UniformMixture& m) {
                          UniformMixture out;
                          double total = 0.0;
                          for (std::size_t k = 0; k < m.components.size(); ++k) {
                            const double w = m.weights[k] * LifetimeLaw(m.components[k]).survival(now);
                            if (w <= 0.0) continue;
                            out.weights.push_back(w);
                            out.components.push_back(
                                UniformLaw{std::max(m.components[k].a, now) - now, m.components[k].b - now});
                            total += w;
                          }
                          for (double& w : out.weights) w /= total;
                          return LifetimeLaw(out);
                        },
                    },
                    form_);
}

std::vector<double> LifetimeLaw::breakpoints() const {
  std::vector<double> out = std::visit(overloaded{
                                           [](const HazardCurve& h) { return h.breakpoints(); },
                                           [](const UniformLaw& u) { return std::vector<double>{u.a, u.b}; },
                                           [](const DiracLaw& d) { return std::vector<double>{d.c}; },
                                           [](const UniformMixture& m) {
                                             std::vector<double> v;
                                             for (const auto& c : m.components) {
                                               v.push_back(c.a);
                                               v.push_back(c.b);
                                             }
                                             return v;
                                           },
                                       },
                                       form_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool LifetimeLaw::is_exponential() const {
  const auto* h = std::get_if<HazardCurve>(&form_);
  return h != nullptr && h->is_constant();
}

std::vector<std::string> LifetimeLaw::violations() const {
  std::vector<std::string> out;
  auto check_uniform = [&](const UniformLaw& u, const std::string& where) {
    if (!(finite_nonneg(u.a) && std::isfinite(u.b) && u.a < u.b))
      out.push_back(where + "uniform requires 0 <= a < b < inf");
  };
  std::visit(overloaded{
                 [&](const HazardCurve& h) {
                   out = h.violations();
                   if (out.empty() && !h.proper())
                     out.emplace_back("hazard must have infinite total mass (zero tail rate makes the lifetime defective)");
                 },
                 [&](const UniformLaw& u) { check_uniform(u, ""); },
                 [&](const DiracLaw& d) {
                   if (!finite_nonneg(d.c)) out.emplace_back("point mass location must be finite and >= 0");
                 },
                 [&](const UniformMixture& m) {
                   if (m.components.empty()) out.emplace_back("mixture needs at least one component");
                   if (m.weights.size() != m.components.size())
                     out.emplace_back("mixture weights and components differ in length");
                   double sum = 0.0;
                   for (double w : m.weights) {
                     if (!(std::isfinite(w) && w > 0.0)) out.emplace_back("mixture weights must be > 0");
                     sum += w;
                   }
                   if (std::abs(sum - 1.0) > 1e-9) out.emplace_back("mixture weights must sum to 1");
                   for (std::size_t k = 0; k < m.components.size(); ++k)
                     check_uniform(m.components[k], "component " + std::to_string(k + 1) + ": ");
                 },
             },
             form_);
  return out;
}

}  // namespace mchr
