#include "mchr/reliability.hpp"

#include "mchr/errors.hpp"
#include "mchr/precedence.hpp"

namespace mchr {

namespace {

std::string path_label(std::size_t k, SubsetMask p) { return "path " + std::to_string(k + 1) + " {" + p.key() + "}"; }

bool flips(const AlphaVector& a, const AlphaVector& b, int i, int j, const KernelConfig& cfg) {
  const double ma = comparison_margin(cfg, a.abs_error_bound, a.abs_error_bound);
  const double mb = comparison_margin(cfg, b.abs_error_bound, b.abs_error_bound);
  return a.of(i) < a.of(j) - ma && b.of(i) > b.of(j) + mb;
}

}  // namespace

SystemValidation validate_system(const PathSetSystem& system) {
  SystemValidation v;
  if (system.n < 1 || system.n > kMaxVariables)
    v.errors.push_back("n must be in 1.." + std::to_string(kMaxVariables));
  if (system.paths.empty()) v.errors.emplace_back("a system needs at least one path");
  const SubsetMask all = SubsetMask::full(system.n);
  for (std::size_t k = 0; k < system.paths.size(); ++k) {
    const SubsetMask p = system.paths[k];
    if (p.empty()) v.errors.push_back(path_label(k, p) + " is empty");
    if (!p.is_subset_of(all)) v.errors.push_back(path_label(k, p) + " has components outside 1..n");
    for (std::size_t m = 0; m < system.paths.size(); ++m) {
      if (m == k) continue;
      const SubsetMask q = system.paths[m];
      if (q == p && m < k) v.warnings.push_back(path_label(k, p) + " repeats " + path_label(m, q));
      else if (q != p && q.is_subset_of(p))
        v.warnings.push_back(path_label(k, p) + " is not minimal: it contains " + path_label(m, q));
    }
  }
  return v;
}

void require_valid(const PathSetSystem& system, int model_n) {
  const auto v = validate_system(system);
  if (!v.errors.empty()) throw ModelError("invalid system: " + v.errors.front());
  if (system.n != model_n)
    throw ModelError("system has " + std::to_string(system.n) + " components but the model has " +
                     std::to_string(model_n) + " variables");
}

std::vector<Quantity> series_importance(const ModelSpec& model, const KernelConfig& cfg) {
  std::vector<Quantity> out;
  for (int j = 0; j < model.n(); ++j) out.push_back(alpha_full(model, j, cfg));
  return out;
}

std::vector<AlphaVector> path_importance(const ModelSpec& model, const PathSetSystem& system,
                                         const KernelConfig& cfg) {
  require_valid(system, model.n());
  const AlphaTable table = AlphaTable::build(model, system.paths, cfg);
  std::vector<AlphaVector> out;
  for (SubsetMask p : system.paths) out.push_back(table.at(p));
  return out;
}

std::vector<CrossPathReversal> cross_path_reversals(const ModelSpec& model, const PathSetSystem& system,
                                                    const KernelConfig& cfg) {
  const auto rows = path_importance(model, system, cfg);
  const KernelConfig tight = cfg.tightened(10.0);
  std::vector<CrossPathReversal> out;
  const auto k_count = static_cast<int>(system.paths.size());
  for (int ka = 0; ka < k_count; ++ka)
    for (int kb = ka + 1; kb < k_count; ++kb) {
      const auto& ra = rows[static_cast<std::size_t>(ka)];
      const auto& rb = rows[static_cast<std::size_t>(kb)];
      const SubsetMask shared = ra.subset & rb.subset;
      if (shared.size() < 2) continue;
      std::optional<AlphaVector> ta, tb;
      for (int i : shared.members())
        for (int j : shared.members()) {
          if (i == j || !flips(ra, rb, i, j, cfg)) continue;
          if (!ta) ta = alpha_vector(model, ra.subset, tight);
          if (!tb) tb = alpha_vector(model, rb.subset, tight);
          if (flips(*ta, *tb, i, j, tight)) out.push_back({i, j, ka, kb});
        }
    }
  return out;
}

}  // namespace mchr
