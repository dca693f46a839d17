#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <utility>

#include <CLI11.hpp>

#include "opnorm/report.hpp"

namespace opnorm {
namespace {

struct Outcome {
  Outcome() = default;
  Outcome(std::string t, bool f = false, std::string d = {})
      : text(std::move(t)), flagged(f), diagnostic(std::move(d)) {}

  std::string text;
  bool flagged = false;  // divergence or non-convergence: exit 1 after writing
  std::string diagnostic;
};

Json selftest_check(const std::string& name, double value, double expected, double tol, bool& all) {
  const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol;
  all = all && ok;
  Json j;
  j["name"] = name;
  j["value"] = real12(value);
  j["expected"] = real12(expected);
  j["tolerance"] = real12(tol);
  j["passed"] = ok;
  return j;
}

Outcome run_selftest() {
  const QuadConfig q;
  bool all = true;
  Json checks = Json::array();

  checks.push_back(selftest_check("evaluation functional norm on H^2 at 0.6",
                                  eval_functional_norm(0.6, SpaceSpec::hardy(2.0)), 1.25, 1e-12, all));
  checks.push_back(selftest_check("H^2 extremal function has unit norm",
                                  hardy_norm(extremal_function(0.9, SpaceSpec::hardy(2.0)), 2.0, q), 1.0, 1e-8,
                                  all));
  checks.push_back(selftest_check("A^2_0 extremal function has unit norm",
                                  bergman_norm(extremal_function(0.8, SpaceSpec::bergman(2.0, 0.0)), 2.0, 0.0, q),
                                  1.0, 1e-7, all));
  checks.push_back(selftest_check("sup norm of 1 + z", sup_norm(parse_symbol("1 + z").frozen(0.5), q).value, 2.0,
                                  1e-10, all));

  const SymbolFamily b = parse_symbol("blaschke([0.5, 0.3+0.4i]; 2)");
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) worst = std::max(worst, std::abs(std::abs(b.eval(0.5, std::polar(1.0, 0.1 * k))) - 1.0));
  checks.push_back(selftest_check("Blaschke product is unimodular on the circle", worst, 0.0, 1e-12, all));

  const SymbolFamily round = parse_symbol(b.to_string());
  checks.push_back(selftest_check("printed symbol parses back to the same tree",
                                  structurally_equal(round.body(), b.body()) ? 0.0 : 1.0, 0.0, 0.0, all));

  const SpaceSpec h2 = SpaceSpec::hardy(2.0);
  checks.push_back(selftest_check("gap vanishes for c + t + z at c = 0.3",
                                  gap_report(parse_symbol("c + t + z", {{"c", 0.3}}), h2, q).gap, 0.0, 1e-6, all));
  checks.push_back(selftest_check("gap is 1/4 for c + t + z at c = -0.5",
                                  gap_report(parse_symbol("c + t + z", {{"c", -0.5}}), h2, q).gap, 0.25, 1e-6, all));

  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = "selftest";
  j["checks"] = checks;
  j["passed"] = all;
  Outcome out{emit_report(j), !all, all ? "" : "selftest: one or more checks failed"};
  return out;
}

Outcome run_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: required for the sweep command");
  const std::string& name = cfg.sweep->binding;
  Bindings zero = cfg.bindings, one = cfg.bindings;
  zero[name] = 0.0;
  one[name] = 1.0;
  if (structurally_equal(parse_symbol(cfg.symbol, zero).body(), parse_symbol(cfg.symbol, one).body()))
    throw ConfigError("sweep.binding: '" + name + "' does not occur in the symbol");
  return {sweep_csv(sweep_gap(cfg, name, cfg.sweep->values))};
}

Outcome run_command(const std::string& cmd, const RunConfig& cfg) {
  if (cmd == "sweep") return run_sweep(cfg);
  const SymbolFamily f = parse_symbol(cfg.symbol, cfg.bindings);
  const QuadConfig& q = cfg.quad;
  const double t = cfg.t;

  if (cmd == "norm") {
    Json j;
    j["schema"] = kSchemaVersion;
    j["report"] = "norm";
    j["space"] = to_json(cfg.space);
    j["t"] = real12(t);
    j["norm"] = real12(space_norm(f.frozen(t), cfg.space, q));
    return {emit_report(j)};
  }
  if (cmd == "supnorm") {
    Json j = to_json(sup_norm(f.frozen(t), q));
    j["t"] = real12(t);
    return {emit_report(j)};
  }
  if (cmd == "opnorm") {
    const ApproxEvalMap map = maximizing_sequence(f.frozen(t), cfg.space, cfg.K, q);
    Json j = to_json(map);
    j["t"] = real12(t);
    // a finite K falls short by about 2^-K |g'(xi)|; reported, not an error
    return {emit_report(j)};
  }
  if (cmd == "gap") {
    const GapReport report = gap_report(f, cfg.space, q);
    Outcome out{emit_report(to_json(report))};
    for (const std::string& flag : report.flags) {
      if (flag == "t_quadrature_nonconvergence" || flag == "inequality_violation") {
        out.flagged = true;
        out.diagnostic = "gap: " + flag;
      }
    }
    return out;
  }
  if (cmd == "certify") {
    const WxReport wx = check_wx(f, cfg.space, q, cfg.t_probe);
    if (wx.verdict == WxVerdict::FailWithWitness) {
      CertificateReport cert;
      cert.tol = q.tol;
      cert.band = 100.0 * q.tol;
      cert.gap_crosscheck = cert.gap.lhs = cert.gap.rhs = std::nan("");
      cert.notes.push_back("W(X) fails (" + wx.witness + "); certificate not attempted");
      Json j = to_json(cert);
      j["wx_verdict"] = to_string(wx.verdict);
      return {emit_report(j), true, "certify: W(X) FailWithWitness (" + wx.witness + ")"};
    }
    CertificateReport cert = certify_equality(f, cfg.space, q);
    if (wx.verdict != WxVerdict::PassEvidence) {
      cert.verdict = CertVerdict::Inconclusive;
      cert.notes.push_back("W(X) evidence is inconclusive; certificate withheld");
    }
    Json j = to_json(cert);
    j["wx_verdict"] = to_string(wx.verdict);
    return {emit_report(j)};
  }
  if (cmd == "wx-check") {
    const WxReport wx = check_wx(f, cfg.space, q, cfg.t_probe);
    Outcome out{emit_report(to_json(wx))};
    if (wx.verdict == WxVerdict::FailWithWitness) {
      out.flagged = true;
      out.diagnostic = "wx-check: FailWithWitness (" + wx.witness + ")";
    }
    return out;
  }
  throw ConfigError("unknown subcommand '" + cmd + "'");
}

void write_output(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError("out: cannot open '" + *path + "' for writing");
  file << text;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplication-operator norm laboratory", "opnorm"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"norm", "X-norm of g_t at the configured t"},
      {"supnorm", "boundary sup norm of g_t with its maximizer"},
      {"opnorm", "operator norm of M_{g_t} and a maximizing sequence"},
      {"gap", "integral of operator norms against the norm of the integrated operator"},
      {"certify", "certify or refute equality in the gap"},
      {"wx-check", "numerical evidence for the W(X) conditions"},
      {"sweep", "gap and verdict for each value of a swept binding (CSV)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
  }
  CLI::App* selftest = app.add_subcommand("selftest", "run the bundled invariant checks");
  selftest->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "opnorm: " << one_line(e.what()) << "\n";
    return 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Outcome result;
    std::optional<std::string> target;
    if (cmd == "selftest") {
      result = run_selftest();
    } else {
      const RunConfig cfg = load_config_file(config_path);
      target = cfg.out;
      result = run_command(cmd, cfg);
    }
    if (!out_path.empty()) target = out_path;
    write_output(result.text, target, out);
    if (result.flagged) {
      err << "opnorm: " << one_line(result.diagnostic) << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "opnorm: config error: " << one_line(e.what()) << "\n";
  } catch (const ParseError& e) {
    err << "opnorm: symbol error: " << one_line(e.what()) << "\n";
  } catch (const DomainError& e) {
    err << "opnorm: domain error: " << one_line(e.what()) << "\n";
  } catch (const EvalError& e) {
    err << "opnorm: evaluation error: " << one_line(e.what()) << "\n";
  } catch (const QuadratureError& e) {
    err << "opnorm: quadrature error: " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "opnorm: internal error: " << one_line(e.what()) << "\n";
    return 2;
  }
  return 1;
}

}  // namespace opnorm
