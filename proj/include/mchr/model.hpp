#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mchr/hazard.hpp"
#include "mchr/subset.hpp"

namespace mchr {

/// Independent variables, each with its own marginal law.
struct IndependentModel {
  std::vector<LifetimeLaw> laws;

  bool has_atoms() const;
};

/// Time-homogeneous load sharing: every m.c.h.r. is a constant r_j(I)
/// depending only on the set I of already failed variables.
class ThlsModel {
 public:
  ThlsModel() = default;
  /// All rates start out missing (NaN).
  explicit ThlsModel(int n);

  int n() const { return n_; }
  double rate(SubsetMask failed, int j) const { return rates_[index(failed, j)]; }
  void set_rate(SubsetMask failed, int j, double r) { rates_[index(failed, j)] = r; }
  /// Sum of r_m(I) over surviving m.
  double total_rate(SubsetMask failed) const;

 private:
  std::size_t index(SubsetMask failed, int j) const {
    return static_cast<std::size_t>(failed.bits()) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> rates_;
};

struct GammaLaw {
  double shape = 1.0;
  double rate = 1.0;
};

struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

using FrailtyLaw = std::variant<GammaLaw, DiscreteLaw>;

/// X_1..X_n conditionally independent given Theta, X_j | Theta ~ Exp(c_j * Theta).
struct FrailtyExpModel {
  std::vector<double> c;
  FrailtyLaw theta = GammaLaw{};

  double c_sum(SubsetMask within) const;
};

/// Hazards beta_j(t | I) that depend on the current time and on the failed set,
/// but not on the individual failure times.
class SetDependentModel {
 public:
  SetDependentModel() = default;
  explicit SetDependentModel(int n);

  int n() const { return n_; }
  bool has_curve(SubsetMask failed, int j) const { return curves_[index(failed, j)].has_value(); }
  const HazardCurve& curve(SubsetMask failed, int j) const { return *curves_[index(failed, j)]; }
  void set_curve(SubsetMask failed, int j, HazardCurve c) { curves_[index(failed, j)] = std::move(c); }

 private:
  std::size_t index(SubsetMask failed, int j) const {
    return static_cast<std::size_t>(failed.bits()) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<std::optional<HazardCurve>> curves_;
};

enum class ModelKind { independent, thls, frailty_exp, set_dependent };

/// The joint law of (X_1, ..., X_n), fully determined by its m.c.h.r. data.
class ModelSpec {
 public:
  using Body = std::variant<IndependentModel, ThlsModel, FrailtyExpModel, SetDependentModel>;

  ModelSpec(Body body);  // NOLINT(google-explicit-constructor)

  int n() const { return n_; }
  ModelKind kind() const { return static_cast<ModelKind>(body_.index()); }
  const Body& body() const { return body_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&body_);
  }

 private:
  Body body_;
  int n_ = 0;
};

const char* to_string(ModelKind kind);

struct FailureEvent {
  int index = 0;  // zero-based
  double time = 0.0;
};

/// Observed dynamic history: which variables failed and when, up to time `now`.
struct FailureHistory {
  std::vector<FailureEvent> failed;
  double now = 0.0;

  SubsetMask failed_set() const;
};

struct Violation {
  std::string path;
  std::string message;
};
using ValidationReport = std::vector<Violation>;

/// Every invariant violation of the model; empty means valid.
ValidationReport validate_model(const ModelSpec& model);

/// Throws ModelError describing the first violation, if any.
void require_valid(const ModelSpec& model);

/// Violations of the history invariants relative to an n-variable model.
std::vector<std::string> history_violations(const FailureHistory& h, int n);

/// lambda_j(t | I; t_1..t_k) for the history h. Requires j not failed in h and t >= h.now.
double mchr(const ModelSpec& model, int j, double t, const FailureHistory& h);

/// Sum over survivors l of the integral of lambda_l(u | h) over [from, to],
/// with from >= h.now. Throws for independent models containing point masses.
double stage_cumulative_hazard(const ModelSpec& model, const FailureHistory& h, double from, double to);

/// The model of the residual lifetimes X_j - h.now of the survivors, given h.
struct ResidualModel {
  ModelSpec model;
  /// original_index[k] is the zero-based index, in the parent model, of residual variable k.
  std::vector<int> original_index;
};

ResidualModel residual_model(const ModelSpec& model, const FailureHistory& h);

}  // namespace mchr
