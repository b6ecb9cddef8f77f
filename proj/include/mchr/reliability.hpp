#pragma once

#include <string>
#include <vector>

#include "mchr/analytic.hpp"

namespace mchr {

/// A coherent system given by its minimal path sets: T = max_k min_{h in P_k} X_h.
struct PathSetSystem {
  int n = 0;
  std::vector<SubsetMask> paths;
};

struct SystemValidation {
  std::vector<std::string> errors;
  /// Non-minimal paths; the quantities stay well defined, so these only warn.
  std::vector<std::string> warnings;
};

SystemValidation validate_system(const PathSetSystem& system);
/// Throws ModelError on the first error.
void require_valid(const PathSetSystem& system, int model_n);

/// Barlow-Proschan importance in a series system: alpha_j for every j.
std::vector<Quantity> series_importance(const ModelSpec& model, const KernelConfig& cfg = {});

/// alpha_h^[P_k] for every path (rows in path order). Singleton paths get 1.
std::vector<AlphaVector> path_importance(const ModelSpec& model, const PathSetSystem& system,
                                         const KernelConfig& cfg = {});

/// Components i, j in both paths k1 < k2 whose importance order flips:
/// alpha_i < alpha_j within P_k1 and alpha_i > alpha_j within P_k2 (either way round).
struct CrossPathReversal {
  int i = 0;
  int j = 0;
  int path_a = 0;
  int path_b = 0;
};

/// Exhaustive scan over path pairs and shared component pairs; each hit is
/// recomputed at 10x tighter tolerance before it is reported.
std::vector<CrossPathReversal> cross_path_reversals(const ModelSpec& model, const PathSetSystem& system,
                                                    const KernelConfig& cfg = {});

}  // namespace mchr
