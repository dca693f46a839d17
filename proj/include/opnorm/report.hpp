#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opnorm/certify.hpp"
#include "opnorm/operator_lab.hpp"
#include "opnorm/spaces.hpp"
#include "opnorm/symbol.hpp"

namespace opnorm {

inline constexpr const char* kSchemaVersion = "opnorm-lab/1";

using Json = nlohmann::ordered_json;

/// Malformed or invalid run configuration. The message starts with the
/// offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string binding;
  std::vector<double> values;
};

struct RunConfig {
  std::string symbol;
  Bindings bindings;
  SpaceSpec space;
  QuadConfig quad;
  double t = 0.5;  // parameter at which single-symbol commands freeze g_t
  int K = 14;      // maximizing-sequence length
  std::vector<double> t_probe = default_t_probe();
  std::optional<SweepSpec> sweep;
  std::optional<std::string> out;
};

/// Unknown fields are rejected; SpaceSpec and QuadConfig invariants are
/// re-validated.
RunConfig load_config(const Json& doc);
RunConfig load_config_file(const std::string& path);

/// x rounded to 12 significant digits (null when not finite).
Json real12(double x);

Json to_json(const SpaceSpec& space);
Json to_json(const SupNormResult& sup);
Json to_json(const ApproxEvalMap& map);
Json to_json(const GapReport& report);
Json to_json(const CertificateReport& report);
Json to_json(const WxReport& report);

std::string emit_report(const Json& report);

struct SweepRow {
  double value = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::string verdict;
  std::string error;
};

/// One certify run per value of the swept binding, in input order. A failing
/// value yields a row with verdict "Error".
std::vector<SweepRow> sweep_gap(const RunConfig& config, const std::string& binding,
                                const std::vector<double>& values);

/// Header `c,lhs,rhs,gap,verdict`, LF endings, 12 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Subcommands: norm | supnorm | opnorm | gap | certify | wx-check | sweep |
/// selftest. Returns 0 on success, 1 on domain errors or divergence flags,
/// 2 on internal failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opnorm
