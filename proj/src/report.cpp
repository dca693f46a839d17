#include "opnorm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace opnorm {
namespace {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json complex_json(Complex z) { return Json::array({real12(z.real()), real12(z.imag())}); }

void reject_unknown(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

double get_real(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

int get_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return v.get<int>();
}

std::vector<double> get_reals(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_real(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

RunConfig load_config(const Json& doc) {
  reject_unknown(doc, "", {"symbol", "bindings", "space", "quad", "t", "K", "t_probe", "sweep", "out"});
  RunConfig cfg;
  if (!doc.contains("symbol") || !doc["symbol"].is_string()) throw ConfigError("symbol: required string");
  cfg.symbol = doc["symbol"].get<std::string>();

  if (doc.contains("bindings")) {
    const Json& b = doc["bindings"];
    if (!b.is_object()) throw ConfigError("bindings: expected an object");
    for (const auto& [name, value] : b.items()) cfg.bindings[name] = get_real(value, "bindings." + name);
  }

  if (doc.contains("space")) {
    const Json& s = doc["space"];
    reject_unknown(s, "space", {"kind", "p", "alpha"});
    if (s.contains("kind")) {
      if (!s["kind"].is_string()) throw ConfigError("space.kind: expected \"hardy\" or \"bergman\"");
      const std::string kind = s["kind"].get<std::string>();
      if (kind == "hardy") cfg.space.kind = SpaceKind::Hardy;
      else if (kind == "bergman") cfg.space.kind = SpaceKind::Bergman;
      else throw ConfigError("space.kind: expected \"hardy\" or \"bergman\"");
    }
    if (s.contains("p")) cfg.space.p = get_real(s["p"], "space.p");
    if (s.contains("alpha")) cfg.space.alpha = get_real(s["alpha"], "space.alpha");
  }

  if (doc.contains("quad")) {
    const Json& qd = doc["quad"];
    reject_unknown(qd, "quad", {"n_theta", "n_radial", "hardy_radii", "n_t", "sup_refine_iters", "tol"});
    if (qd.contains("n_theta")) cfg.quad.n_theta = get_int(qd["n_theta"], "quad.n_theta");
    if (qd.contains("n_radial")) cfg.quad.n_radial = get_int(qd["n_radial"], "quad.n_radial");
    if (qd.contains("hardy_radii")) cfg.quad.hardy_radii = get_reals(qd["hardy_radii"], "quad.hardy_radii");
    if (qd.contains("n_t")) cfg.quad.n_t = get_int(qd["n_t"], "quad.n_t");
    if (qd.contains("sup_refine_iters"))
      cfg.quad.sup_refine_iters = get_int(qd["sup_refine_iters"], "quad.sup_refine_iters");
    if (qd.contains("tol")) cfg.quad.tol = get_real(qd["tol"], "quad.tol");
  }

  if (doc.contains("t")) cfg.t = get_real(doc["t"], "t");
  if (doc.contains("K")) cfg.K = get_int(doc["K"], "K");
  if (doc.contains("t_probe")) cfg.t_probe = get_reals(doc["t_probe"], "t_probe");
  if (doc.contains("sweep")) {
    const Json& sw = doc["sweep"];
    reject_unknown(sw, "sweep", {"binding", "values"});
    if (!sw.contains("binding") || !sw["binding"].is_string()) throw ConfigError("sweep.binding: required string");
    SweepSpec spec;
    spec.binding = sw["binding"].get<std::string>();
    if (!sw.contains("values")) throw ConfigError("sweep.values: required array");
    spec.values = get_reals(sw["values"], "sweep.values");
    cfg.sweep = spec;
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError("out: expected a string path");
    cfg.out = doc["out"].get<std::string>();
  }

  try {
    cfg.space.validate();
    cfg.quad.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw ConfigError("t: must lie in (0,1)");
  if (cfg.K < 1) throw ConfigError("K: must be positive");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return load_config(doc);
}

Json real12(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt12(x));
}

Json to_json(const SpaceSpec& space) {
  Json j;
  j["kind"] = space.name();
  j["p"] = real12(space.p);
  if (space.kind == SpaceKind::Bergman) j["alpha"] = real12(space.alpha);
  return j;
}

Json to_json(const SupNormResult& sup) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "supnorm";
  j["value"] = real12(sup.value);
  j["maximizer"] = complex_json(sup.maximizer);
  j["residual"] = real12(sup.residual);
  j["grid_max"] = real12(sup.grid_max);
  j["plateau"] = sup.plateau;
  return j;
}

Json to_json(const ApproxEvalMap& map) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "opnorm";
  j["space"] = to_json(map.space);
  j["norm"] = real12(map.target);
  j["xi"] = complex_json(map.xi);
  Json seq = Json::array();
  for (std::size_t k = 0; k < map.points.size(); ++k) {
    Json row;
    row["k"] = k + 1;
    row["z"] = complex_json(map.points[k]);
    row["modulus"] = real12(map.moduli[k]);
    seq.push_back(row);
  }
  j["sequence"] = seq;
  j["converged"] = map.converged;
  return j;
}

Json to_json(const GapReport& report) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "gap";
  j["space"] = to_json(report.space);
  j["lhs"] = real12(report.lhs);
  j["rhs"] = real12(report.rhs);
  j["gap"] = real12(report.gap);
  Json per_t = Json::array();
  for (const PerTSample& s : report.per_t) {
    Json row;
    row["t"] = real12(s.t);
    row["sup"] = real12(s.sup);
    row["maximizer"] = complex_json(s.maximizer);
    per_t.push_back(row);
  }
  j["per_t"] = per_t;
  j["flags"] = report.flags;
  j["rhs_error"] = real12(report.rhs_error);
  j["integrated_maximizer"] = complex_json(report.integrated_maximizer);
  return j;
}

Json to_json(const CertificateReport& report) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "certificate";
  Json cands = Json::array();
  for (const Candidate& c : report.candidates) {
    Json row;
    row["xi"] = complex_json(c.xi);
    row["theta"] = complex_json(c.theta);
    row["i2_residual"] = real12(c.i2_residual);
    row["i1_residual"] = real12(c.i1_residual);
    row["phase_residual"] = real12(c.phase_residual);
    row["passes"] = c.passes;
    cands.push_back(row);
  }
  j["candidates"] = cands;
  j["verdict"] = to_string(report.verdict);
  j["gap_crosscheck"] = real12(report.gap_crosscheck);
  Json tol;
  tol["residual"] = real12(report.tol);
  tol["argmax_band"] = real12(report.band);
  tol["equality_gap"] = real12(10.0 * report.tol);
  tol["strict_gap"] = real12(100.0 * report.tol);
  j["tolerances"] = tol;
  j["lhs"] = real12(report.gap.lhs);
  j["rhs"] = real12(report.gap.rhs);
  j["notes"] = report.notes;
  return j;
}

Json to_json(const WxReport& report) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "wx";
  Json c1 = Json::array();
  for (const WxContinuitySample& s : report.cond1) {
    Json row;
    row["t0"] = real12(s.t0);
    Json deltas = Json::array(), dists = Json::array();
    for (double d : s.deltas) deltas.push_back(real12(d));
    for (double d : s.distances) dists.push_back(real12(d));
    row["deltas"] = deltas;
    row["distances"] = dists;
    row["verdict"] = to_string(s.verdict);
    c1.push_back(row);
  }
  j["cond1"] = c1;
  Json c2 = Json::array();
  for (const WxBoundSample& s : report.cond2) {
    Json row;
    row["epsilon"] = real12(s.epsilon);
    row["sup"] = real12(s.sup);
    row["argsup_t"] = real12(s.argsup_t);
    row["verdict"] = to_string(s.verdict);
    c2.push_back(row);
  }
  j["cond2"] = c2;
  Json c3;
  c3["levels"] = report.cond3.levels;
  Json est = Json::array();
  for (double e : report.cond3.estimates) est.push_back(real12(e));
  c3["estimates"] = est;
  c3["estimate"] = real12(report.cond3.estimate);
  c3["delta"] = real12(report.cond3.delta);
  c3["relative_increase"] = real12(report.cond3.relative_increase);
  c3["verdict"] = to_string(report.cond3.verdict);
  j["cond3"] = c3;
  j["verdict"] = to_string(report.verdict);
  j["cond1_verdict"] = to_string(report.cond1_verdict);
  j["cond2_verdict"] = to_string(report.cond2_verdict);
  j["witness"] = report.witness;
  j["diagnostics"] = report.diagnostics;
  return j;
}

std::string emit_report(const Json& report) { return report.dump(2) + "\n"; }

std::vector<SweepRow> sweep_gap(const RunConfig& config, const std::string& binding,
                                const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      Bindings b = config.bindings;
      b[binding] = v;
      const SymbolFamily f = parse_symbol(config.symbol, b);
      const CertificateReport cert = certify_equality(f, config.space, config.quad);
      row.lhs = cert.gap.lhs;
      row.rhs = cert.gap.rhs;
      row.gap = cert.gap.gap;
      row.verdict = to_string(cert.verdict);
    } catch (const std::exception& e) {
      row.verdict = "Error";
      row.error = e.what();
      row.lhs = row.rhs = row.gap = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "c,lhs,rhs,gap,verdict\n";
  auto cell = [](double x) { return std::isfinite(x) ? fmt12(x) : std::string("nan"); };
  for (const SweepRow& r : rows)
    out += cell(r.value) + "," + cell(r.lhs) + "," + cell(r.rhs) + "," + cell(r.gap) + "," + r.verdict + "\n";
  return out;
}

}  // namespace opnorm
