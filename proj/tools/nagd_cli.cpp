#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nagd/nagd.h"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kOverflow = 3, kCheckFailed = 4 };

int exit_for(nagd_status st) {
  switch (st) {
    case NAGD_OK: return kOk;
    case NAGD_CONFIG_ERROR:
    case NAGD_INVALID_ARGUMENT:
    case NAGD_GRID_TOO_LARGE: return kConfig;
    case NAGD_OVERFLOW_SATURATION: return kOverflow;
    default: return kOther;
  }
}

int report(nagd_status st) {
  std::cerr << "error: " << nagd_status_string(st);
  const std::string msg = nagd_last_error();
  if (!msg.empty()) std::cerr << ": " << msg;
  std::cerr << "\n";
  return exit_for(st);
}

struct Owned {
  char* p = nullptr;
  ~Owned() { nagd_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
  nagd_config* c = nullptr;
  ~ConfigHandle() { nagd_config_destroy(c); }
};

std::string default_out_dir() {
  const char* env = std::getenv("NAGD_OUT_DIR");
  return env && *env ? env : ".";
}

int cmd_classify(const std::string& config, const std::string& format) {
  ConfigHandle h;
  if (auto st = nagd_config_load(config.c_str(), &h.c)) return report(st);
  Owned out;
  if (auto st = nagd_run_classify(h.c, format == "json", &out.p)) return report(st);
  std::cout << out.str();
  return kOk;
}

int cmd_simulate(const std::string& config, const std::string& out_dir, std::size_t stride) {
  ConfigHandle h;
  if (auto st = nagd_config_load(config.c_str(), &h.c)) return report(st);
  if (stride > 0) {
    if (auto st = nagd_config_set_stride(h.c, stride)) return report(st);
  }
  Owned path;
  int saturated = 0;
  if (auto st = nagd_run_simulate(h.c, out_dir.c_str(), &path.p, &saturated)) return report(st);
  std::cout << "wrote " << path.str() << "\n";
  if (saturated) {
    std::cerr << "warning: trajectory norm exceeded 1e150; output truncated at the last finite sample\n";
    return kOverflow;
  }
  return kOk;
}

int cmd_reproduce(const std::string& figure, const std::string& out_dir) {
  std::vector<std::string> ids;
  if (figure == "all") {
    ids = {"fig1", "fig2", "fig3", "fig4", "fig5"};
  } else {
    ids = {figure};
  }
  bool all = true;
  for (const auto& id : ids) {
    int pass = 0;
    Owned summary;
    if (auto st = nagd_reproduce(id.c_str(), out_dir.c_str(), &pass, &summary.p)) return report(st);
    std::cout << id << ": " << (pass ? "PASS" : "FAIL") << "\n";
    all = all && pass;
  }
  std::cout << "outputs in " << out_dir << "\n";
  return all ? kOk : kCheckFailed;
}

int cmd_sweep(const std::string& grid, bool measure, unsigned jobs, const std::string& out) {
  Owned csv;
  if (auto st = nagd_sweep(grid.c_str(), measure ? 1 : 0, jobs, &csv.p)) return report(st);
  if (out.empty() || out == "-") {
    std::cout << csv.str();
    return kOk;
  }
  std::ofstream f(out, std::ios::binary);
  f << csv.str();
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return kOther;
  }
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_check(double dt, const std::string& format) {
  int all_pass = 0;
  Owned js;
  if (auto st = nagd_check(dt, &all_pass, &js.p)) return report(st);
  if (format == "json") {
    std::cout << js.str();
  } else {
    const auto j = nlohmann::json::parse(js.str());
    std::vector<std::string> failed;
    for (const auto& c : j["checks"]) {
      const std::string name = c["name"], status = c["status"];
      char measured[32] = "nan";
      if (!c["measured"].is_null()) std::snprintf(measured, sizeof measured, "%.3g", c["measured"].get<double>());
      std::printf("%-32s %-15s measured=%-10s threshold=%g\n", name.c_str(), status.c_str(), measured,
                  c["threshold"].get<double>());
      if (status == "fail") failed.push_back(name);
    }
    std::printf("%zu/%zu checks failed\n", failed.size(), j["total"].get<std::size_t>());
    if (!failed.empty()) {
      std::printf("failed:");
      for (const auto& n : failed) std::printf(" %s", n.c_str());
      std::printf("\n");
    }
  }
  return all_pass ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of accelerated gradient flows on quadratic games"};
  app.require_subcommand(1);

  std::string config, format = "text", out_dir = default_out_dir(), figure, grid, sweep_out;
  std::size_t stride = 0;
  unsigned jobs = 1;
  bool measure = false;
  double dt = 0.0;

  auto* classify = app.add_subcommand("classify", "Eigen-classification and stability verdicts");
  classify->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  classify->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* simulate = app.add_subcommand("simulate", "Integrate a configured experiment");
  simulate->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory (default $NAGD_OUT_DIR or .)");
  simulate->add_option("--stride", stride, "Record every k-th step")->check(CLI::PositiveNumber);

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a built-in figure");
  reproduce->add_option("--figure", figure, "fig1..fig5 or all")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "all"}));
  reproduce->add_option("--out", out_dir, "Output directory (default $NAGD_OUT_DIR or .)");

  auto* sweep = app.add_subcommand("sweep", "Classify a grid of complex eigenvalues");
  sweep->add_option("--grid", grid, "a0:a1:na,b0:b1:nb")->required();
  sweep->add_flag("--measure", measure, "Also integrate each mode and fit its rate");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "CSV file (default stdout)");

  auto* check = app.add_subcommand("check", "Run the built-in verification suite");
  check->add_option("--dt", dt, "Override the integration step")->check(CLI::PositiveNumber);
  check->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*classify) return cmd_classify(config, format);
    if (*simulate) return cmd_simulate(config, out_dir, stride);
    if (*reproduce) {
      std::filesystem::create_directories(out_dir);
      return cmd_reproduce(figure, out_dir);
    }
    if (*sweep) return cmd_sweep(grid, measure, jobs, sweep_out);
    if (*check) return cmd_check(dt, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
