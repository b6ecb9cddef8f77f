#include "mchr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

#include "mchr/errors.hpp"
#include "mchr/io.hpp"

namespace mchr {

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNonConvergence = 3;
constexpr int kUsage = 64;

constexpr std::array<const char*, 6> kCommands{"validate", "min", "precedence", "paradox", "simulate", "importance"};

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string system_path;
  std::string subset;
  std::string grid = "0:5:11";
  std::int64_t n_samples = 100000;
  std::optional<std::uint64_t> seed;
  std::optional<double> abs_tol;
  int max_subset_size = 0;
  std::string format = "json";
  std::string out_path;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  Json doc;
  std::string csv;  // empty when the command has no tabular form
};

KernelConfig kernel_config(const RunConfig& rc) {
  KernelConfig cfg;
  if (rc.abs_tol) {
    if (!(*rc.abs_tol > 0.0)) throw UsageError("--abs-tol must be positive");
    cfg.quad.abs_tol = *rc.abs_tol;
    cfg.quad.rel_tol = std::min(cfg.quad.rel_tol, *rc.abs_tol);
  }
  return cfg;
}

SubsetMask subset_arg(const RunConfig& rc, int n) {
  try {
    return parse_subset_list(rc.subset, n);
  } catch (const ModelError& e) {
    throw UsageError(std::string("--subset: ") + e.what());
  }
}

std::vector<double> grid_arg(const RunConfig& rc) {
  try {
    return parse_grid(rc.grid);
  } catch (const ModelError& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

Json header(const RunConfig& rc, const ModelSpec& model) {
  return {{"schema", kSchema}, {"command", rc.command}, {"kind", to_string(model.kind())}, {"n", model.n()}};
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Output cmd_min(const RunConfig& rc, const ModelSpec& model) {
  const KernelConfig cfg = kernel_config(rc);
  const SubsetMask a = subset_arg(rc, model.n());
  const MinReport r = make_min_report(model, a, grid_arg(rc), cfg);
  Output o{header(rc, model), "t,survival\n"};
  merge(o.doc, to_json(r));
  for (const auto& [t, s] : r.survival) o.csv += fmt(t) + "," + fmt(s) + "\n";
  return o;
}

Output cmd_precedence(const RunConfig& rc, const ModelSpec& model) {
  const KernelConfig cfg = kernel_config(rc);
  const SpMatrix sp = sp_matrix(model, cfg);
  Output o{header(rc, model), "i,j,p\n"};
  o.doc["sp_matrix"] = to_json(sp);
  o.doc["classification"] = to_json(classify(model, cfg));
  Json conds = Json::array();
  for (const auto& v : sufficient_conditions(model, cfg)) conds.push_back(to_json(v));
  o.doc["sufficient_conditions"] = conds;
  for (int i = 0; i < sp.n; ++i)
    for (int j = 0; j < sp.n; ++j)
      if (i != j) o.csv += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + fmt(sp.at(i, j)) + "\n";
  return o;
}

Output cmd_paradox(const RunConfig& rc, const ModelSpec& model) {
  const KernelConfig cfg = kernel_config(rc);
  if (rc.max_subset_size < 0 || rc.max_subset_size > model.n())
    throw UsageError("--max-subset-size must be in 0..n");
  Output o{header(rc, model), {}};
  merge(o.doc, to_json(find_aggregation_paradoxes(model, rc.max_subset_size, cfg)));
  return o;
}

Output cmd_simulate(const RunConfig& rc, const ModelSpec& model) {
  if (!rc.seed) throw UsageError("simulate needs --seed");
  if (rc.n_samples < 1) throw UsageError("--n-samples must be positive");
  const SubsetMask a = subset_arg(rc, model.n());
  const auto alphas = estimate_alpha_vector(model, a, rc.n_samples, *rc.seed);
  const auto grid = grid_arg(rc);
  const auto surv = estimate_survival(model, a, grid, rc.n_samples, *rc.seed);
  Output o{header(rc, model), "quantity,key,value,lower,upper\n"};
  o.doc["subset"] = subset_json(a);
  o.doc["n_samples"] = rc.n_samples;
  o.doc["seed"] = *rc.seed;
  Json aj = Json::object();
  const auto members = a.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    aj[std::to_string(members[k] + 1)] = to_json(alphas[k]);
    o.csv += "alpha," + std::to_string(members[k] + 1) + "," + fmt(alphas[k].value) + "," + fmt(alphas[k].lower) +
             "," + fmt(alphas[k].upper) + "\n";
  }
  o.doc["alphas"] = aj;
  Json sj = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Json e = to_json(surv[k]);
    e["t"] = grid[k];
    sj.push_back(e);
    o.csv += "survival," + fmt(grid[k]) + "," + fmt(surv[k].value) + "," + fmt(surv[k].lower) + "," +
             fmt(surv[k].upper) + "\n";
  }
  o.doc["survival"] = sj;
  return o;
}

Output cmd_importance(const RunConfig& rc, const ModelSpec& model) {
  if (rc.system_path.empty()) throw UsageError("importance needs --system");
  const KernelConfig cfg = kernel_config(rc);
  const PathSetSystem system = load_system(rc.system_path);
  const SystemValidation sv = validate_system(system);
  if (!sv.errors.empty()) throw ModelError("invalid system: " + sv.errors.front());
  require_valid(system, model.n());

  Output o{header(rc, model), "path,component,alpha\n"};
  Json series = Json::array();
  for (const auto& q : series_importance(model, cfg)) series.push_back(to_json(q));
  o.doc["series_importance"] = series;
  Json rows = Json::array();
  const auto table = path_importance(model, system, cfg);
  for (std::size_t k = 0; k < table.size(); ++k) {
    Json row = to_json(table[k]);
    row["path"] = k + 1;
    rows.push_back(row);
    for (std::size_t m = 0; m < table[k].members.size(); ++m)
      o.csv += std::to_string(k + 1) + "," + std::to_string(table[k].members[m] + 1) + "," + fmt(table[k].values[m]) +
               "\n";
  }
  o.doc["path_importance"] = rows;
  Json revs = Json::array();
  for (const auto& r : cross_path_reversals(model, system, cfg)) revs.push_back(to_json(r));
  o.doc["reversals"] = revs;
  Json warnings = Json::array();
  for (const auto& w : sv.warnings) warnings.push_back(w);
  o.doc["warnings"] = warnings;
  return o;
}

void emit(const RunConfig& rc, const Output& o, std::ostream& out) {
  std::string text;
  if (rc.format == "csv") {
    if (o.csv.empty()) throw UsageError("csv output is not available for " + rc.command);
    text = o.csv;
  } else {
    text = round_numbers(o.doc).dump(2) + "\n";
  }
  if (rc.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.out_path, std::ios::binary);
  if (!f || !(f << text)) throw UsageError("cannot write " + rc.out_path);
}

int dispatch(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Json raw = read_json_file(rc.model_path);
  const ModelSpec model = parse_model(raw);
  const ValidationReport report = validate_model(model);

  if (rc.command == "validate") {
    Output o{header(rc, model), {}};
    merge(o.doc, to_json(report));
    emit(rc, o, out);
    return report.empty() ? kOk : kInvalid;
  }
  if (!report.empty()) {
    for (const auto& v : report) err << "mchr: " << v.path << ": " << v.message << "\n";
    return kInvalid;
  }
  err << "mchr " << rc.command << ": " << to_string(model.kind()) << " model, n=" << model.n()
      << ", workers=" << worker_count() << "\n";

  Output o;
  if (rc.command == "min") o = cmd_min(rc, model);
  else if (rc.command == "precedence") o = cmd_precedence(rc, model);
  else if (rc.command == "paradox") o = cmd_paradox(rc, model);
  else if (rc.command == "simulate") o = cmd_simulate(rc, model);
  else o = cmd_importance(rc, model);
  emit(rc, o, out);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || std::find(kCommands.begin(), kCommands.end(), args.front()) == kCommands.end()) {
    if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
      out << "usage: mchr <validate|min|precedence|paradox|simulate|importance> --model FILE [options]\n";
      return kOk;
    }
    err << "mchr: unknown command" << (args.empty() ? "" : " '" + args.front() + "'")
        << "; expected one of validate, min, precedence, paradox, simulate, importance\n";
    return kUsage;
  }

  RunConfig rc;
  rc.command = args.front();
  CLI::App app{"Dependent lifetimes through multivariate conditional hazard rates", "mchr " + rc.command};
  app.add_option("--model", rc.model_path, "model JSON file")->required();
  app.add_option("--system", rc.system_path, "path-set system JSON file");
  app.add_option("--subset", rc.subset, "one-based indices, e.g. 1,2,3 (default: all)");
  app.add_option("--grid", rc.grid, "time grid: a,b,c or start:stop:count");
  app.add_option("--n-samples", rc.n_samples, "Monte Carlo sample count");
  app.add_option("--seed", rc.seed, "Monte Carlo seed");
  app.add_option("--abs-tol", rc.abs_tol, "absolute quadrature tolerance");
  app.add_option("--max-subset-size", rc.max_subset_size, "largest subset scanned by paradox (0 = n)");
  app.add_option("--format", rc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", rc.out_path, "write the report here instead of stdout");

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mchr " << rc.command << ": " << e.what() << "\n";
    return kUsage;
  }

  try {
    return dispatch(rc, out, err);
  } catch (const UsageError& e) {
    err << "mchr " << rc.command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "mchr " << rc.command << ": " << e.what() << "\n";
    return kInvalid;
  } catch (const ModelError& e) {
    err << "mchr " << rc.command << ": " << e.what() << "\n";
    return kInvalid;
  } catch (const NonConvergence& e) {
    err << "mchr " << rc.command << ": " << e.what() << "\n";
    return kNonConvergence;
  }
}

}  // namespace mchr
