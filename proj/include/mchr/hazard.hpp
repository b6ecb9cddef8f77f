#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mchr {

struct ConstantHazard {
  double rate = 1.0;
};

/// h(t) = (shape/scale) * ((t + offset)/scale)^(shape-1). A non-zero offset
/// arises when a Weibull curve is left-truncated.
struct WeibullHazard {
  double shape = 1.0;
  double scale = 1.0;
  double offset = 0.0;
};

/// h(t) = shape / (scale + t); the marginal hazard of an exponential
/// variable whose rate is Gamma distributed.
struct LomaxHazard {
  double shape = 1.0;
  double scale = 1.0;
};

/// rates[0] on [0, knots[0]), rates[i] on [knots[i-1], knots[i]),
/// tail_rate on [knots.back(), inf).
struct PiecewiseHazard {
  std::vector<double> knots;
  std::vector<double> rates;
  double tail_rate = 0.0;
};

/// h(t) = scale * sum_k p_k r_k e^{-r_k t} / sum_k p_k e^{-r_k t}: `scale` times
/// the hazard of a finite mixture of exponentials.
struct ExpMixtureHazard {
  double scale = 1.0;
  std::vector<double> rates;
  std::vector<double> probs;
};

/// An ordinary hazard rate function with closed-form cumulative hazard and inverse.
class HazardCurve {
 public:
  using Form = std::variant<ConstantHazard, WeibullHazard, LomaxHazard, PiecewiseHazard, ExpMixtureHazard>;

  HazardCurve() = default;
  HazardCurve(Form form) : form_(std::move(form)) {}  // NOLINT(google-explicit-constructor)

  static HazardCurve constant(double rate) { return HazardCurve(ConstantHazard{rate}); }

  const Form& form() const { return form_; }

  double rate(double t) const;
  /// Integral of the rate over [0, t].
  double cumulative(double t) const;
  double cumulative(double from, double to) const;
  /// Smallest s >= from with cumulative(from, s) == amount; +inf if never reached.
  double inverse_cumulative(double from, double amount) const;
  /// The curve s -> rate(delta + s).
  HazardCurve shifted(double delta) const;
  /// Points where the rate is not smooth.
  std::vector<double> breakpoints() const;

  bool is_constant() const;
  /// cumulative(t) -> inf as t -> inf (the lifetime is almost surely finite).
  bool proper() const;

  /// Invariant violations as human readable messages; empty when valid.
  std::vector<std::string> violations() const;

 private:
  Form form_ = ConstantHazard{};
};

struct UniformLaw {
  double a = 0.0;
  double b = 1.0;
};

/// Degenerate lifetime X = c.
struct DiracLaw {
  double c = 0.0;
};

struct UniformMixture {
  std::vector<double> weights;
  std::vector<UniformLaw> components;
};

/// Marginal law of one variable of an independent model.
class LifetimeLaw {
 public:
  using Form = std::variant<HazardCurve, UniformLaw, DiracLaw, UniformMixture>;

  LifetimeLaw() = default;
  LifetimeLaw(Form form) : form_(std::move(form)) {}  // NOLINT(google-explicit-constructor)

  const Form& form() const { return form_; }

  /// P(X > t).
  double survival(double t) const;
  /// Density of the absolutely continuous part.
  double density(double t) const;
  /// Hazard rate; throws ModelError for a point mass.
  double hazard(double t) const;
  /// -log P(X > t); throws ModelError for a point mass.
  double cumulative_hazard(double t) const;
  /// Location of the point mass, if the law is degenerate.
  std::optional<double> atom() const;
  bool has_atom() const { return atom().has_value(); }
  /// Inverse of the distribution function, u in (0, 1).
  double quantile(double u) const;
  /// Law of X - now given X > now. Throws ModelError if P(X > now) == 0.
  LifetimeLaw truncated(double now) const;
  std::vector<double> breakpoints() const;
  /// Whether the hazard is a constant rate.
  bool is_exponential() const;

  std::vector<std::string> violations() const;

 private:
  Form form_ = HazardCurve{};
};

}  // namespace mchr
