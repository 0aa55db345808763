#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "nsolit/json_writer.hpp"
#include "nsolit/metric.hpp"
#include "nsolit/pde.hpp"
#include "nsolit/sampling.hpp"
#include "nsolit/tensor.hpp"

namespace nsolit::cli {

/// Exit codes shared by all commands.
enum Exit : int { kOk = 0, kCheckFailed = 1, kParse = 2, kSingular = 3, kIntegration = 4 };

/// Entry point used by main() and by the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Every geometry object of the metric's tangent-bundle lift, with the sample points.
/// Grouped tables use dotted names ("T.hhh", "ricci.Rij").
struct GeometryBundle {
  SamplePoints points;
  std::vector<std::pair<std::string, Tensor>> tables;
};
[[nodiscard]] GeometryBundle geometry_bundle(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed);

/// GeometryTables: every object symbolically and at `samples` random (x, y) points.
[[nodiscard]] Json geometry_tables(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed);
/// Same values as rows `table,entry,point,value` (entries 1-based, dot separated).
[[nodiscard]] std::string geometry_csv(const expr::MetricSpec& m, std::size_t samples, std::uint64_t seed);

/// Reads a flow config document. Unknown keys and bad values throw ConfigError.
[[nodiscard]] pde::FlowConfig parse_flow_config(const nlohmann::json& doc, pde::FlowConfig defaults = {});
/// Every field, defaults included, in a fixed order.
[[nodiscard]] Json flow_config_json(const pde::FlowConfig& cfg);
/// Defaults of the `sg` command: breather on L = 200, N = 1024, dt = 2e-3, tau in [0, 1].
[[nodiscard]] pde::FlowConfig sg_defaults();

struct ConfigError : Error {
  using Error::Error;
};

struct CheckOptions {
  std::string suite = "all";
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  /// "connection" perturbs L^1_11 before the compatibility check.
  std::string fault;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

[[nodiscard]] std::vector<CheckResult> run_checks(const CheckOptions& opt);
[[nodiscard]] Json check_report(const CheckOptions& opt, const std::vector<CheckResult>& results);

/// Flow and Hamiltonian formulas with the coefficients used by the code.
[[nodiscard]] std::string expand_text(int k);

/// FNV-1a 64-bit of a file, as 16 hex digits.
[[nodiscard]] std::string file_hash(const std::string& path);

}  // namespace nsolit::cli
