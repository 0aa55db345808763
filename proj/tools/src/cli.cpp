#include "nsolit_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "nsolit/errors.hpp"
#include "nsolit/metric.hpp"

namespace nsolit::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string out = ".";
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  std::string format = "json";
};

/// Writes through a temporary name so readers never see a partial file.
void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    f << text;
  }
  fs::rename(tmp, path);
}

class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}
  void config(Json c) { config_ = std::move(c); }
  void input(const std::string& path) {
    inputs_.push(Json::object().set("name", fs::path(path).filename().string()).set("fnv1a64", file_hash(path)));
  }
  void output(const std::string& name) { outputs_.push(name); }
  void write(const fs::path& dir) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json j = Json::object();
    j.set("command", command_);
    j.set("version", NSOLIT_VERSION);
    j.set("config", config_);
    j.set("inputs", inputs_);
    j.set("outputs", outputs_);
    j.set("wall_time_s", wall);
    write_atomic(dir / "manifest.json", j.dump());
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
};

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

int cmd_geometry(const std::string& metric_file, const Common& c, std::ostream& out) {
  Manifest man("geometry");
  const auto m = expr::load_metric(metric_file);
  const std::string body =
      c.format == "csv" ? geometry_csv(m, c.samples, c.seed) : geometry_tables(m, c.samples, c.seed).dump();
  const std::string name = c.format == "csv" ? "geometry.csv" : "geometry.json";
  fs::create_directories(c.out);
  write_atomic(fs::path(c.out) / name, body);
  man.config(Json::object()
                 .set("metric", fs::path(metric_file).filename().string())
                 .set("samples", c.samples)
                 .set("seed", std::int64_t(c.seed))
                 .set("format", c.format));
  man.input(metric_file);
  man.output(name);
  man.write(c.out);
  out << "wrote " << (fs::path(c.out) / name).string() << "\n";
  return kOk;
}

int cmd_flow(const std::string& command, const pde::FlowConfig& cfg, const std::string& config_file, const Common& c,
             std::ostream& out) {
  Manifest man(command);
  const pde::Trajectory t = pde::integrate_flow(cfg);
  fs::create_directories(c.out);
  man.config(flow_config_json(cfg));
  if (!config_file.empty()) man.input(config_file);
  if (fs::exists(cfg.initial)) man.input(cfg.initial);
  char name[64];
  for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
    write_atomic(fs::path(c.out) / name, hier::to_csv(t.snapshots[i].field));
    man.output(name);
  }
  write_atomic(fs::path(c.out) / "diagnostics.csv", pde::diagnostics_csv(t));
  man.output("diagnostics.csv");
  man.write(c.out);

  if (t.diagnostics.size() >= 2) {
    const auto d = pde::conservation_series(t);
    out << "drift H0=" << format_double(d.h0) << " H1=" << format_double(d.h1) << " H2a=" << format_double(d.h2a)
        << " H2b=" << format_double(d.h2b);
    if (cfg.kind != pde::FlowKind::Mkdv) out << " constraint=" << format_double(d.constraint);
    out << "\n";
  }
  out << "wrote " << t.snapshots.size() << " snapshots to " << c.out << "\n";
  return kOk;
}

int cmd_check(const CheckOptions& opt, const Common& c, std::ostream& out) {
  const auto results = run_checks(opt);
  bool pass = true;
  for (const auto& r : results) pass = pass && r.pass;
  if (c.format == "csv") {
    out << "name,value,tolerance,pass\n";
    for (const auto& r : results)
      out << r.name << "," << format_double(r.value) << "," << format_double(r.tolerance) << ","
          << (r.pass ? "true" : "false") << "\n";
  } else {
    out << check_report(opt, results).dump();
  }
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nsolit: nonholonomic geometry tables and curve-flow hierarchies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NSOLIT_VERSION);
  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--samples", common.samples, "random sample points")->capture_default_str();
    sub->add_option("--seed", common.seed, "seed for random point suites")->capture_default_str();
    sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };

  std::string metric_file;
  auto* geometry = app.add_subcommand("geometry", "tables of the tangent-bundle geometry of a metric");
  geometry->add_option("metric", metric_file, "metric DSL file")->required();
  add_common(geometry);

  std::string flow_file;
  auto* flow = app.add_subcommand("flow", "integrate a hierarchy flow from a JSON config");
  flow->add_option("config", flow_file, "flow config JSON")->required();
  add_common(flow);

  std::string sg_file;
  auto* sg = app.add_subcommand("sg", "integrate the vector sine-Gordon equation (breather preset by default)");
  sg->add_option("config", sg_file, "optional config JSON overriding the defaults");
  add_common(sg);

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "run the invariant suites");
  check->add_option("--suite", check_opt.suite, "geometry, hierarchy or all")
      ->check(CLI::IsMember({"geometry", "hierarchy", "all"}))
      ->capture_default_str();
  check->add_option("--inject-fault", check_opt.fault, "perturb an object to exercise failure reporting")
      ->check(CLI::IsMember({"connection"}));
  add_common(check);

  int expand_k = 1;
  auto* expand = app.add_subcommand("expand", "print flow and Hamiltonian formulas");
  expand->add_option("k", expand_k, "flow index 0, 1 or 2")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*geometry) return cmd_geometry(metric_file, common, out);
    if (*flow) return cmd_flow("flow", parse_flow_config(read_config(flow_file)), flow_file, common, out);
    if (*sg) {
      auto cfg = sg_file.empty() ? sg_defaults() : parse_flow_config(read_config(sg_file), sg_defaults());
      if (cfg.kind == pde::FlowKind::Mkdv) throw ConfigError("sg command needs kind 'sg' or 'minus1'");
      return cmd_flow("sg", cfg, sg_file, common, out);
    }
    if (*check) {
      if (check->count("--samples") == 0) common.samples = 100;
      check_opt.samples = common.samples;
      check_opt.seed = common.seed;
      return cmd_check(check_opt, common, out);
    }
    if (*expand) {
      if (expand_k < 0 || expand_k > 2) throw ConfigError("k must be 0, 1 or 2");
      out << expand_text(expand_k);
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const SingularMatrix& e) {
    err << "error: singular metric: " << e.what() << "\n";
    return kSingular;
  } catch (const DegenerateHessian& e) {
    err << "error: degenerate Hessian: " << e.what() << "\n";
    return kSingular;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const IntegrationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kIntegration;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kParse;
}

}  // namespace nsolit::cli
