#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mchr/analytic.hpp"

namespace mchr {

/// Scans over all subsets are exhaustive only up to this many variables.
inline constexpr int kExhaustiveLimit = 12;

/// Tolerance used when comparing two computed probabilities: 10 * abs_tol
/// plus both error bounds. Weak comparisons pass when a >= b - margin,
/// strict ones need a > b + margin.
double comparison_margin(const KernelConfig& cfg, double err_a = 0.0, double err_b = 0.0);

/// p[i][j] = P(X_i < X_j); the diagonal is NaN.
struct SpMatrix {
  int n = 0;
  std::vector<double> p;
  std::vector<double> err;
  Method method = Method::closed_form;

  double at(int i, int j) const { return p[static_cast<std::size_t>(i * n + j)]; }
  double error(int i, int j) const { return err[static_cast<std::size_t>(i * n + j)]; }
};

Quantity sp_pair(const ModelSpec& model, int i, int j, const KernelConfig& cfg = {});
SpMatrix sp_matrix(const ModelSpec& model, const KernelConfig& cfg = {});

/// V_[i] = { j != i : P(X_i < X_j) >= 1/2 }.
SubsetMask v_set(const SpMatrix& sp, int i, const KernelConfig& cfg = {});
SubsetMask v_set(const ModelSpec& model, int i, const KernelConfig& cfg = {});

/// Subsets of {0..n-1} with min_size <= |A| <= max_size, ordered by (|A|, mask).
std::vector<SubsetMask> subsets_by_size(int n, int min_size, int max_size);

/// alpha^[A] for a fixed list of subsets, computed in parallel over subsets.
class AlphaTable {
 public:
  AlphaTable() = default;
  AlphaTable(std::vector<SubsetMask> masks, std::vector<AlphaVector> values);

  static AlphaTable build(const ModelSpec& model, const std::vector<SubsetMask>& masks, const KernelConfig& cfg = {});

  bool has(SubsetMask a) const { return index_.count(a.bits()) > 0; }
  const AlphaVector& at(SubsetMask a) const;
  const std::vector<SubsetMask>& masks() const { return masks_; }

 private:
  std::vector<SubsetMask> masks_;
  std::vector<AlphaVector> values_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

namespace serial {
AlphaTable build_alpha_table(const ModelSpec& model, const std::vector<SubsetMask>& masks, const KernelConfig& cfg = {});
}  // namespace serial

struct PairWitness {
  int i = 0;
  int j = 0;
  SubsetMask subset;
};

struct VariableFlags {
  bool weakly_small = false;
  bool small = false;
  /// Unset when the exhaustive subset scan was skipped (n too large).
  std::optional<bool> pair_determined;
  SubsetMask v_set;
};

struct ClassificationReport {
  std::vector<double> alpha;
  std::vector<VariableFlags> variables;
  std::optional<bool> ordered_by_pairs;
  /// First (|A|, mask, i, j) where X_i precedes X_j pairwise but not within A.
  std::optional<PairWitness> ordered_by_pairs_witness;
  bool exhaustive = true;
};

ClassificationReport classify(const ModelSpec& model, const KernelConfig& cfg = {},
                              int max_n_for_subsets = kExhaustiveLimit);

/// (a, b, c) with P(X_a < X_b), P(X_b < X_c), P(X_c < X_a) all > 1/2.
struct SpCycle {
  int a = 0;
  int b = 0;
  int c = 0;
};

std::vector<SpCycle> find_sp_cycles(const ModelSpec& model, const KernelConfig& cfg = {});

/// alpha_i^[A] > alpha_j^[A] but alpha_i^[A + l] < alpha_j^[A + l].
struct Reversal {
  int i = 0;
  int j = 0;
  SubsetMask subset;
  int l = 0;
};

/// X_i strictly precedes X_j pairwise, yet alpha_j^[A] > alpha_i^[A].
struct SpVsSubset {
  int i = 0;
  int j = 0;
  SubsetMask subset;
};

struct ParadoxReport {
  std::vector<SpCycle> cycles;
  std::vector<Reversal> reversals;
  std::vector<SpVsSubset> sp_vs_subset;
  int max_subset_size = 0;
  bool exhaustive = true;
};

/// Scans subsets up to max_subset_size (0 means n). Beyond kExhaustiveLimit
/// variables the size cap is lowered and the report is marked partial.
/// Every hit is recomputed at 10x tighter tolerance before it is reported.
ParadoxReport find_aggregation_paradoxes(const ModelSpec& model, int max_subset_size = 0,
                                         const KernelConfig& cfg = {});

struct ConditionVerdict {
  std::string name;
  bool applicable = false;
  bool hypothesis_holds = false;
  /// Unset when the hypothesis fails or the conclusion cannot be scanned.
  std::optional<bool> conclusion_verified;
  bool defect = false;
  std::string detail;
};

/// Checks the known sufficient conditions for weak smallness,
/// pair-determination and the ordered-by-pairs property, and verifies each
/// conclusion independently whenever its hypothesis holds.
std::vector<ConditionVerdict> sufficient_conditions(const ModelSpec& model, const KernelConfig& cfg = {});

}  // namespace mchr
