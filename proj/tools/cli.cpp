#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "tumorage/errors.hpp"
#include "tumorage/report.hpp"

namespace tumorage::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolName = "tumorage";
constexpr const char* kVersion = "1.0.0";
constexpr const char* kOutDirEnv = "TUMORAGE_OUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Collects output files of one command and writes its manifest last.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", (dir_ / name).string()));
    outputs_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
  }

  void write_manifest(const std::string& command, const std::vector<std::string>& args, json extra) {
    json manifest = std::move(extra);
    manifest["tool"] = kToolName;
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["args"] = args;
    manifest["outputs"] = outputs_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  json outputs_ = json::array();
};

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env != nullptr && *env != '\0' ? env : ".";
}

std::string num(double x) { return fmt::format("{}", x); }

struct PipelineFlags {
  double v0 = 0.01;
  double vmax = 4200.0;
  double h_days = 245.0;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  double rho = 0.0;
  std::size_t max_steps = 10000;
  double p_negative = 0.35;
  double lambda_pos = 0.79;
  double lambda_neg = 5.0;
  std::string model_json;
  std::vector<double> grid;
  std::string convention = "all-crossings";
  double bin_width = 0.1;
  unsigned threads = 1;
  std::string out_dir = default_out_dir();
};

const auto kRhoRange = CLI::Validator(
    [](std::string& value) -> std::string {
      double rho = 0.0;
      if (!CLI::detail::lexical_cast(value, rho) || !(rho >= 0.0 && rho < 1.0)) {
        return "rho must lie in [0, 1), got " + value;
      }
      return {};
    },
    "RHO in [0,1)");

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& f, bool with_rho) {
  cmd.add_option("--v0", f.v0, "Initial volume, mL")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--vmax", f.vmax, "Stopping volume, mL")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--h-days", f.h_days, "Interval length, days")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--n", f.n, "Number of histories")->capture_default_str()->check(CLI::Range(1, 100000000));
  cmd.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  if (with_rho) {
    cmd.add_option("--rho", f.rho, "Serial correlation of growth rates")->capture_default_str()->check(kRhoRange);
  }
  cmd.add_option("--max-steps", f.max_steps, "Interval cap per history")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--p-negative", f.p_negative, "Mixture weight of negative RDT")->capture_default_str();
  cmd.add_option("--lambda-pos", f.lambda_pos, "Rate of the positive branch")->capture_default_str();
  cmd.add_option("--lambda-neg", f.lambda_neg, "Rate of the negative branch")->capture_default_str();
  cmd.add_option("--model", f.model_json, "fit.json whose parameters replace the three above")
      ->check(CLI::ExistingFile);
  cmd.add_option("--grid", f.grid, "Threshold diameters, cm (comma separated)")->delimiter(',');
  cmd.add_option("--convention", f.convention, "all-crossings | first-crossing | occupancy")
      ->capture_default_str()
      ->check(CLI::IsMember({"all-crossings", "first-crossing", "occupancy"}));
  cmd.add_option("--bin-width", f.bin_width, "Occupancy bin width in ln(diameter)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--threads", f.threads, "Worker threads, 0 = all cores (does not change results)")
      ->capture_default_str();
  cmd.add_option("--out", f.out_dir, fmt::format("Output directory (default ${} or .)", kOutDirEnv));
}

// Folds --model into the explicit parameters so manifests never depend on another file.
void resolve_model(PipelineFlags& f) {
  if (f.model_json.empty()) return;
  try {
    const auto doc = json::parse(read_file(f.model_json));
    f.p_negative = doc.at("p_negative").get<double>();
    f.lambda_pos = doc.at("lambda_pos").get<double>();
    f.lambda_neg = doc.at("lambda_neg").get<double>();
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("--model {}: {}", f.model_json, e.what()));
  }
  f.model_json.clear();
}

PipelineConfig to_pipeline(PipelineFlags& f, bool check_grid) {
  resolve_model(f);
  try {
    PipelineConfig config;
    config.model = RdtMixture{f.p_negative, f.lambda_pos, f.lambda_neg};
    config.model.validate();
    config.simulation.v0 = Volume{f.v0};
    config.simulation.v_max = Volume{f.vmax};
    config.simulation.interval_years = f.h_days / 365.0;
    config.simulation.n_histories = f.n;
    config.simulation.seed = f.seed;
    config.simulation.rho = f.rho;
    config.simulation.max_steps = f.max_steps;
    config.simulation.validate();
    if (!f.grid.empty()) config.grid = DiameterGrid(f.grid);
    if (check_grid) config.grid.check_within(config.simulation);
    config.inversion.convention = parse_age_convention(f.convention);
    config.inversion.occupancy_bin_width = f.bin_width;
    config.threads = f.threads;
    return config;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

// Flags that reproduce `config`, excluding --out and --threads which never affect content.
std::vector<std::string> canonical_flags(const PipelineFlags& f, const PipelineConfig& config, bool with_rho) {
  std::vector<std::string> args = {"--v0", num(f.v0), "--vmax", num(f.vmax), "--h-days", num(f.h_days),
                                   "--n", std::to_string(f.n), "--seed", std::to_string(f.seed)};
  if (with_rho) args.insert(args.end(), {"--rho", num(f.rho)});
  args.insert(args.end(), {"--max-steps", std::to_string(f.max_steps), "--p-negative", num(f.p_negative),
                           "--lambda-pos", num(f.lambda_pos), "--lambda-neg", num(f.lambda_neg)});
  std::string grid;
  for (double d : config.grid.thresholds()) grid += (grid.empty() ? "" : ",") + num(d);
  args.insert(args.end(), {"--grid", grid, "--convention", f.convention, "--bin-width", num(f.bin_width)});
  return args;
}

std::vector<std::string> with_command(std::string command, std::vector<std::string> flags) {
  flags.insert(flags.begin(), std::move(command));
  return flags;
}

int cmd_fit(const std::string& input, const std::string& out_dir, std::ostream& out) {
  if (fs::exists(input) && fs::is_regular_file(input) && fs::file_size(input) == 0) {
    throw UsageError(fmt::format("{} is empty; expected a CSV with header `rdt`", input));
  }
  const std::string raw = read_file(input);
  std::istringstream in(raw);
  const auto samples = read_rdt_csv(in);
  const RdtMixture model = fit(samples);
  const json result = {{"p_negative", model.p_negative},
                       {"lambda_pos", model.lambda_pos},
                       {"lambda_neg", model.lambda_neg},
                       {"ks_distance", ks_distance(model, samples)},
                       {"n", samples.size()}};
  const std::string text = result.dump(2) + "\n";
  out << text;

  OutputDir dir(out_dir);
  dir.write("fit.json", text);
  dir.write_manifest("fit", {"fit", input}, {{"input", {{"file", input}, {"sha256", sha256_hex(raw)}}}});
  return kSuccess;
}

int cmd_simulate(PipelineFlags& f) {
  const PipelineConfig config = to_pipeline(f, false);
  const auto ensemble = simulate_ensemble(config.model, config.simulation, config.threads);
  std::ostringstream csv;
  write_ensemble_csv(csv, ensemble);

  OutputDir dir(f.out_dir);
  dir.write("ensemble.csv", csv.str());
  dir.write_manifest("simulate", with_command("simulate", canonical_flags(f, config, true)),
                     {{"config", to_json(config)}, {"n_truncated", count_truncated(ensemble)}});
  return kSuccess;
}

int cmd_table(PipelineFlags& f, std::ostream& out) {
  const PipelineConfig config = to_pipeline(f, true);
  const AgeTable table = run_pipeline(config);
  std::ostringstream csv;
  write_age_table_csv(csv, table);
  json doc = age_table_to_json(table);
  doc["config"] = to_json(config);

  OutputDir dir(f.out_dir);
  dir.write("table.csv", csv.str());
  dir.write("table.json", doc.dump(2) + "\n");
  dir.write_manifest("table", with_command("table", canonical_flags(f, config, true)),
                     {{"config", to_json(config)}, {"n_truncated", table.n_truncated}});
  out << csv.str();
  return kSuccess;
}

AgeTable load_table(const fs::path& path) {
  const std::string raw = read_file(path);
  if (path.extension() == ".json") {
    try {
      return age_table_from_json(json::parse(raw));
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
  }
  std::istringstream in(raw);
  return read_age_table_csv(in);
}

int cmd_query(double diameter, const std::string& table_path, PipelineFlags& f, std::ostream& out) {
  const AgeTable table = table_path.empty() ? run_pipeline(to_pipeline(f, true)) : load_table(table_path);
  out << to_json(query_age(table, diameter)).dump(2) << '\n';
  return kSuccess;
}

int cmd_sensitivity(PipelineFlags& f, const std::vector<double>& rhos, std::ostream& out) {
  const PipelineConfig config = to_pipeline(f, true);
  const SensitivityReport report = sensitivity_sweep(config, rhos);
  std::ostringstream csv;
  write_sensitivity_csv(csv, report);
  json doc = to_json(report);
  doc["config"] = to_json(config);

  std::string rho_list;
  for (double r : rhos) rho_list += (rho_list.empty() ? "" : ",") + num(r);
  auto args = with_command("sensitivity", canonical_flags(f, config, false));
  args.insert(args.end(), {"--rhos", rho_list});

  OutputDir dir(f.out_dir);
  dir.write("sensitivity.csv", csv.str());
  dir.write("sensitivity.json", doc.dump(2) + "\n");
  dir.write_manifest("sensitivity", args, {{"config", to_json(config)}, {"rhos", rhos}});
  out << csv.str();
  return kSuccess;
}

std::vector<std::string> manifest_args(const std::string& path) {
  try {
    const auto doc = json::parse(read_file(path));
    return doc.at("args").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("manifest {}: {}", path, e.what()));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Age distribution of a renal tumor from its diameter, by growth simulation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string fit_input;
  std::string fit_out = default_out_dir();
  auto* fit_cmd = app.add_subcommand("fit", "Fit the RDT mixture to a CSV of reciprocal doubling times");
  fit_cmd->add_option("input", fit_input, "CSV with header `rdt`")->required();
  fit_cmd->add_option("--out", fit_out, "Output directory");

  PipelineFlags sim_flags;
  sim_flags.n = 100;
  auto* sim_cmd = app.add_subcommand("simulate", "Export simulated growth histories as CSV");
  add_pipeline_flags(*sim_cmd, sim_flags, true);

  PipelineFlags table_flags;
  auto* table_cmd = app.add_subcommand("table", "Percentiles of age for each grid diameter");
  add_pipeline_flags(*table_cmd, table_flags, true);

  PipelineFlags query_flags;
  double query_diameter = 0.0;
  std::string query_table;
  auto* query_cmd = app.add_subcommand("query", "Age percentiles for one diameter");
  query_cmd->add_option("diameter", query_diameter, "Diameter, cm")->required()->check(CLI::PositiveNumber);
  query_cmd->add_option("--table", query_table, "table.json or table.csv from `table`; simulates when omitted")
      ->check(CLI::ExistingFile);
  add_pipeline_flags(*query_cmd, query_flags, true);

  PipelineFlags sens_flags;
  std::vector<double> rhos;
  auto* sens_cmd = app.add_subcommand("sensitivity", "Compare age tables across serial correlations");
  add_pipeline_flags(*sens_cmd, sens_flags, false);
  sens_cmd->add_option("--rhos", rhos, "Correlations to compare (comma separated)")
      ->required()
      ->delimiter(',')
      ->check(kRhoRange);

  std::string manifest_path;
  std::string rerun_out = default_out_dir();
  unsigned rerun_threads = 1;
  auto* rerun_cmd = app.add_subcommand("rerun", "Reproduce the outputs described by a manifest.json");
  rerun_cmd->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  rerun_cmd->add_option("--out", rerun_out, "Output directory");
  rerun_cmd->add_option("--threads", rerun_threads, "Worker threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_input, fit_out, out);
    if (*sim_cmd) return cmd_simulate(sim_flags);
    if (*table_cmd) return cmd_table(table_flags, out);
    if (*query_cmd) return cmd_query(query_diameter, query_table, query_flags, out);
    if (*sens_cmd) return cmd_sensitivity(sens_flags, rhos, out);
    if (*rerun_cmd) {
      auto replay = manifest_args(manifest_path);
      if (replay.empty() || replay.front() == "rerun") throw ParseError("manifest has no replayable command");
      replay.insert(replay.end(), {"--out", rerun_out});
      if (replay.front() != "fit") replay.insert(replay.end(), {"--threads", std::to_string(rerun_threads)});
      return run(replay, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const OutOfRangeError& e) {
    err << "out of range: " << e.what() << '\n';
    return kDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kIngestion;
  } catch (const InsufficientDataError& e) {
    err << "input error: " << e.what() << '\n';
    return kIngestion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}

}  // namespace tumorage::cli
