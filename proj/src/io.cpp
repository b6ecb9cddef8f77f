#include "mchr/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mchr/errors.hpp"

namespace mchr {

namespace {

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "/" + key, "missing field");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

double number_field(const Json& obj, const std::string& key, const std::string& where) {
  return number(field(obj, key, where), where + "/" + key);
}

std::vector<double> numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], where + "/" + std::to_string(k)));
  return out;
}

std::string type_of(const Json& obj, const std::string& where) {
  const Json& t = field(obj, "type", where);
  if (!t.is_string()) throw ParseError(where + "/type", "expected a string");
  return t.get<std::string>();
}

int variable_key(const std::string& key, int n, const std::string& where) {
  char* end = nullptr;
  const long j = std::strtol(key.c_str(), &end, 10);
  if (key.empty() || *end != '\0' || j < 1 || j > n) throw ParseError(where, "variable key must be an integer in 1..n");
  return static_cast<int>(j) - 1;
}

HazardCurve parse_hazard(const Json& obj, const std::string& where) {
  const std::string type = type_of(obj, where);
  if (type == "exponential" || type == "constant") return HazardCurve::constant(number_field(obj, "rate", where));
  if (type == "weibull") {
    WeibullHazard w{number_field(obj, "shape", where), number_field(obj, "scale", where), 0.0};
    if (obj.contains("offset")) w.offset = number_field(obj, "offset", where);
    return HazardCurve(w);
  }
  if (type == "lomax") return HazardCurve(LomaxHazard{number_field(obj, "shape", where), number_field(obj, "scale", where)});
  if (type == "piecewise")
    return HazardCurve(PiecewiseHazard{numbers(field(obj, "knots", where), where + "/knots"),
                                       numbers(field(obj, "rates", where), where + "/rates"),
                                       number_field(obj, "tail_rate", where)});
  if (type == "exp-mixture")
    return HazardCurve(ExpMixtureHazard{number_field(obj, "scale", where), numbers(field(obj, "rates", where), where + "/rates"),
                                        numbers(field(obj, "probs", where), where + "/probs")});
  throw ParseError(where + "/type", "unknown hazard type '" + type + "'");
}

UniformLaw parse_uniform(const Json& obj, const std::string& where) {
  return UniformLaw{number_field(obj, "a", where), number_field(obj, "b", where)};
}

LifetimeLaw parse_law(const Json& obj, const std::string& where) {
  const std::string type = type_of(obj, where);
  if (type == "uniform") return LifetimeLaw(parse_uniform(obj, where));
  if (type == "dirac") return LifetimeLaw(DiracLaw{number_field(obj, "c", where)});
  if (type == "mixture") {
    UniformMixture m;
    m.weights = numbers(field(obj, "weights", where), where + "/weights");
    const Json& comps = field(obj, "components", where);
    if (!comps.is_array()) throw ParseError(where + "/components", "expected an array");
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::string w = where + "/components/" + std::to_string(k);
      if (comps[k].contains("type") && type_of(comps[k], w) != "uniform")
        throw ParseError(w + "/type", "mixture components must be uniform");
      m.components.push_back(parse_uniform(comps[k], w));
    }
    return LifetimeLaw(std::move(m));
  }
  return LifetimeLaw(parse_hazard(obj, where));
}

Json hazard_json(const HazardCurve& h) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantHazard>) return {{"type", "exponential"}, {"rate", f.rate}};
        else if constexpr (std::is_same_v<T, WeibullHazard>) {
          Json j{{"type", "weibull"}, {"shape", f.shape}, {"scale", f.scale}};
          if (f.offset != 0.0) j["offset"] = f.offset;
          return j;
        } else if constexpr (std::is_same_v<T, LomaxHazard>)
          return {{"type", "lomax"}, {"shape", f.shape}, {"scale", f.scale}};
        else if constexpr (std::is_same_v<T, PiecewiseHazard>)
          return {{"type", "piecewise"}, {"knots", f.knots}, {"rates", f.rates}, {"tail_rate", f.tail_rate}};
        else
          return {{"type", "exp-mixture"}, {"scale", f.scale}, {"rates", f.rates}, {"probs", f.probs}};
      },
      h.form());
}

Json law_json(const LifetimeLaw& law) {
  const auto& f = law.form();
  if (const auto* h = std::get_if<HazardCurve>(&f)) return hazard_json(*h);
  if (const auto* u = std::get_if<UniformLaw>(&f)) return {{"type", "uniform"}, {"a", u->a}, {"b", u->b}};
  if (const auto* d = std::get_if<DiracLaw>(&f)) return {{"type", "dirac"}, {"c", d->c}};
  const auto& m = std::get<UniformMixture>(f);
  Json comps = Json::array();
  for (const auto& c : m.components) comps.push_back({{"type", "uniform"}, {"a", c.a}, {"b", c.b}});
  return {{"type", "mixture"}, {"weights", m.weights}, {"components", comps}};
}

Json optional_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + " (byte " + std::to_string(e.byte) + ")", "malformed JSON");
  }
}

ModelSpec parse_model(const Json& doc) {
  if (!doc.is_object()) throw ParseError("/", "a model must be a JSON object");
  const Json& nj = field(doc, "n", "");
  if (!nj.is_number_integer()) throw ParseError("/n", "expected an integer");
  const int n = nj.get<int>();
  if (n < 1 || n > kMaxVariables) throw ParseError("/n", "n must be in 1.." + std::to_string(kMaxVariables));
  const Json& kj = field(doc, "kind", "");
  if (!kj.is_string()) throw ParseError("/kind", "expected a string");
  const std::string kind = kj.get<std::string>();

  if (kind == "independent") {
    const Json& laws = field(doc, "laws", "");
    if (!laws.is_array() || static_cast<int>(laws.size()) != n)
      throw ParseError("/laws", "expected an array of n laws");
    IndependentModel m;
    for (std::size_t j = 0; j < laws.size(); ++j) m.laws.push_back(parse_law(laws[j], "/laws/" + std::to_string(j)));
    return ModelSpec(std::move(m));
  }
  if (kind == "frailty-exp") {
    FrailtyExpModel m;
    m.c = numbers(field(doc, "c", ""), "/c");
    if (static_cast<int>(m.c.size()) != n) throw ParseError("/c", "expected n values");
    const Json& th = field(doc, "theta", "");
    const std::string type = type_of(th, "/theta");
    if (type == "gamma") {
      m.theta = GammaLaw{number_field(th, "shape", "/theta"), number_field(th, "rate", "/theta")};
    } else if (type == "discrete") {
      m.theta = DiscreteLaw{numbers(field(th, "values", "/theta"), "/theta/values"),
                            numbers(field(th, "probs", "/theta"), "/theta/probs")};
    } else {
      throw ParseError("/theta/type", "unknown frailty law '" + type + "'");
    }
    return ModelSpec(std::move(m));
  }
  if (kind == "thls" || kind == "set-dependent") {
    const bool thls = kind == "thls";
    const std::string top = thls ? "rates" : "curves";
    const Json& table = field(doc, top, "");
    if (!table.is_object()) throw ParseError("/" + top, "expected an object keyed by failed sets");
    ThlsModel tm(thls ? n : 1);
    SetDependentModel sm(thls ? 1 : n);
    for (const auto& [key, row] : table.items()) {
      const std::string where = "/" + top + "/" + key;
      SubsetMask failed;
      try {
        failed = SubsetMask::parse_key(key, n);
      } catch (const ModelError& e) {
        throw ParseError(where, e.what());
      }
      if (!row.is_object()) throw ParseError(where, "expected an object keyed by variable");
      for (const auto& [jk, value] : row.items()) {
        const std::string w = where + "/" + jk;
        const int j = variable_key(jk, n, w);
        if (failed.contains(j)) throw ParseError(w, "variable already belongs to the failed set");
        if (thls) tm.set_rate(failed, j, number(value, w));
        else sm.set_curve(failed, j, parse_hazard(value, w));
      }
    }
    if (thls) return ModelSpec(std::move(tm));
    return ModelSpec(std::move(sm));
  }
  throw ParseError("/kind", "unknown model kind '" + kind + "'");
}

ModelSpec load_model(const std::string& path) { return parse_model(read_json_file(path)); }

Json model_to_json(const ModelSpec& model) {
  const int n = model.n();
  Json doc{{"n", n}, {"kind", to_string(model.kind())}};
  const SubsetMask all = SubsetMask::full(n);
  if (const auto* im = model.as<IndependentModel>()) {
    Json laws = Json::array();
    for (const auto& l : im->laws) laws.push_back(law_json(l));
    doc["laws"] = laws;
  } else if (const auto* fm = model.as<FrailtyExpModel>()) {
    doc["c"] = fm->c;
    if (const auto* g = std::get_if<GammaLaw>(&fm->theta))
      doc["theta"] = {{"type", "gamma"}, {"shape", g->shape}, {"rate", g->rate}};
    else {
      const auto& d = std::get<DiscreteLaw>(fm->theta);
      doc["theta"] = {{"type", "discrete"}, {"values", d.values}, {"probs", d.probs}};
    }
  } else {
    const auto* tm = model.as<ThlsModel>();
    const auto* sm = model.as<SetDependentModel>();
    Json table = Json::object();
    for_each_submask(all, [&](SubsetMask failed) {
      if (failed == all) return;
      Json row = Json::object();
      for (int j = 0; j < n; ++j) {
        if (failed.contains(j)) continue;
        if (tm) row[std::to_string(j + 1)] = tm->rate(failed, j);
        else if (sm->has_curve(failed, j)) row[std::to_string(j + 1)] = hazard_json(sm->curve(failed, j));
      }
      table[failed.key()] = row;
    });
    doc[tm ? "rates" : "curves"] = table;
  }
  return doc;
}

PathSetSystem parse_system(const Json& doc) {
  if (!doc.is_object()) throw ParseError("/", "a system must be a JSON object");
  const Json& nj = field(doc, "n", "");
  if (!nj.is_number_integer()) throw ParseError("/n", "expected an integer");
  PathSetSystem s;
  s.n = nj.get<int>();
  if (s.n < 1 || s.n > kMaxVariables) throw ParseError("/n", "n must be in 1.." + std::to_string(kMaxVariables));
  const Json& paths = field(doc, "paths", "");
  if (!paths.is_array()) throw ParseError("/paths", "expected an array of paths");
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const std::string where = "/paths/" + std::to_string(k);
    if (!paths[k].is_array()) throw ParseError(where, "expected an array of component indices");
    SubsetMask p;
    for (std::size_t m = 0; m < paths[k].size(); ++m) {
      const Json& v = paths[k][m];
      const std::string w = where + "/" + std::to_string(m);
      if (!v.is_number_integer()) throw ParseError(w, "expected an integer");
      const int c = v.get<int>();
      if (c < 1 || c > s.n) throw ParseError(w, "component index must be in 1..n");
      if (p.contains(c - 1)) throw ParseError(w, "component listed twice");
      p = p.with(c - 1);
    }
    s.paths.push_back(p);
  }
  return s;
}

PathSetSystem load_system(const std::string& path) { return parse_system(read_json_file(path)); }

SubsetMask parse_subset_list(const std::string& text, int n) {
  std::string trimmed;
  for (char ch : text)
    if (ch != ' ') trimmed += ch;
  if (trimmed.empty()) return SubsetMask::full(n);
  return SubsetMask::parse_key(trimmed, n);
}

std::vector<double> parse_grid(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) throw ModelError("malformed grid value '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
  std::vector<double> grid;
  if (sep == ':') {
    if (parts.size() != 3) throw ModelError("grid ranges look like start:stop:count");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    char* end = nullptr;
    const long count = std::strtol(parts[2].c_str(), &end, 10);
    if (*end != '\0' || count < 1 || count > 1000000) throw ModelError("grid count must be in 1..1000000");
    for (long k = 0; k < count; ++k) grid.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  } else {
    for (const auto& p : parts) grid.push_back(to_double(p));
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 0.0) throw ModelError("grid times must be >= 0");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw ModelError("grid must be strictly increasing");
  }
  return grid;
}

Json round_numbers(const Json& doc) {
  if (doc.is_number_float()) {
    const double v = doc.get<double>();
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
  }
  if (doc.is_array()) {
    Json out = Json::array();
    for (const auto& x : doc) out.push_back(round_numbers(x));
    return out;
  }
  if (doc.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : doc.items()) out[k] = round_numbers(v);
    return out;
  }
  return doc;
}

Json subset_json(SubsetMask a) {
  Json out = Json::array();
  for (int j : a.members()) out.push_back(j + 1);
  return out;
}

Json to_json(const ValidationReport& report) {
  Json v = Json::array();
  for (const auto& x : report) v.push_back({{"path", x.path}, {"message", x.message}});
  return {{"valid", report.empty()}, {"violations", v}};
}

Json to_json(const Quantity& q) {
  return {{"value", q.value}, {"method", to_string(q.method)}, {"abs_error_bound", q.abs_error_bound}};
}

Json to_json(const AlphaVector& a) {
  Json alphas = Json::object();
  for (std::size_t k = 0; k < a.members.size(); ++k) alphas[std::to_string(a.members[k] + 1)] = a.values[k];
  return {{"subset", subset_json(a.subset)},
          {"alphas", alphas},
          {"method", to_string(a.method)},
          {"abs_error_bound", a.abs_error_bound}};
}

Json to_json(const MinReport& r) {
  Json surv = Json::array();
  for (const auto& [t, s] : r.survival) surv.push_back({{"t", t}, {"survival", s}});
  Json out = to_json(r.alphas);
  out["abs_error_bound"] = r.abs_error_bound;
  out["survival_method"] = to_string(r.survival_method);
  out["survival"] = surv;
  return out;
}

Json to_json(const Estimate& e) {
  return {{"value", e.value},         {"half_width_95", e.half_width_95}, {"lower", e.lower},
          {"upper", e.upper},         {"n_samples", e.n_samples},         {"seed", e.seed}};
}

Json to_json(const SpMatrix& sp) {
  Json rows = Json::array();
  for (int i = 0; i < sp.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < sp.n; ++j) row.push_back(i == j ? Json(nullptr) : Json(sp.at(i, j)));
    rows.push_back(row);
  }
  return {{"n", sp.n}, {"p", rows}, {"method", to_string(sp.method)}};
}

Json to_json(const ClassificationReport& c) {
  Json vars = Json::array();
  for (std::size_t i = 0; i < c.variables.size(); ++i) {
    const auto& f = c.variables[i];
    vars.push_back({{"index", i + 1},
                    {"alpha", c.alpha[i]},
                    {"weakly_small", f.weakly_small},
                    {"small", f.small},
                    {"pair_determined", optional_bool(f.pair_determined)},
                    {"v_set", subset_json(f.v_set)}});
  }
  Json witness = nullptr;
  if (c.ordered_by_pairs_witness) {
    const auto& w = *c.ordered_by_pairs_witness;
    witness = {{"i", w.i + 1}, {"j", w.j + 1}, {"subset", subset_json(w.subset)}};
  }
  return {{"variables", vars},
          {"ordered_by_pairs", optional_bool(c.ordered_by_pairs)},
          {"ordered_by_pairs_witness", witness},
          {"exhaustive", c.exhaustive}};
}

Json to_json(const ParadoxReport& p) {
  Json cycles = Json::array();
  for (const auto& c : p.cycles) cycles.push_back({c.a + 1, c.b + 1, c.c + 1});
  Json reversals = Json::array();
  for (const auto& r : p.reversals)
    reversals.push_back({{"i", r.i + 1}, {"j", r.j + 1}, {"subset", subset_json(r.subset)}, {"l", r.l + 1}});
  Json svs = Json::array();
  for (const auto& s : p.sp_vs_subset) svs.push_back({{"i", s.i + 1}, {"j", s.j + 1}, {"subset", subset_json(s.subset)}});
  return {{"cycles", cycles},
          {"reversals", reversals},
          {"sp_vs_subset", svs},
          {"max_subset_size", p.max_subset_size},
          {"exhaustive", p.exhaustive}};
}

Json to_json(const ConditionVerdict& v) {
  return {{"name", v.name},
          {"applicable", v.applicable},
          {"hypothesis_holds", v.hypothesis_holds},
          {"conclusion_verified", optional_bool(v.conclusion_verified)},
          {"defect", v.defect},
          {"detail", v.detail}};
}

Json to_json(const CrossPathReversal& r) {
  return {{"i", r.i + 1}, {"j", r.j + 1}, {"paths", {r.path_a + 1, r.path_b + 1}}};
}

}  // namespace mchr
