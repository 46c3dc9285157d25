#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nagd/dynamics.hpp"
#include "nagd/game.hpp"
#include "nagd/spectral.hpp"

// Experiment orchestration behind the command-line tool: configuration files,
// the classify/simulate/reproduce/sweep/check commands and their outputs.
namespace nagd {

enum class Diagnostic { Modal, Lyapunov, Chetaev, Energy, Nullspace, Rates };
enum class DynamicsKind { Nagd, FirstOrder };

struct MatrixSource {
  Matrix matrix;
  Vector offset;  // b in F(x) = G x + b
  friend bool operator==(const MatrixSource&, const MatrixSource&) = default;
};

struct OutputSpec {
  std::string path;
  std::string format = "csv";
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
  std::string name;
  std::variant<MatrixSource, QuadraticGame> source;
  DynamicsKind dynamics = DynamicsKind::Nagd;
  Vector q0;
  Vector v0;
  IntegratorConfig integrator;
  std::set<Diagnostic> diagnostics;
  OutputSpec output;

  std::size_t dimension() const;
  PseudoGradientSystem system() const;
  /// Throws ConfigError on inconsistent dimensions or bad integrator values.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// JSON config. Syntax errors report line:column, semantic errors the key path.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

std::string_view to_string(Diagnostic d) noexcept;
std::string_view to_string(DynamicsKind k) noexcept;

// ---- classify -------------------------------------------------------------

struct ClassifyReport {
  Spectrum spectrum;
  StabilityVerdict verdict;
  double t0 = 1.0;
  std::vector<std::string> warnings;
};

ClassifyReport classify(const Matrix& G, double t0);
ClassifyReport classify(const ExperimentConfig& cfg);

/// One line, e.g. "NAGD: STABLE (convergent); first-order: STABLE, rate 1.0".
std::string headline(const ClassifyReport& r);
std::string format_text(const ClassifyReport& r);
std::string format_json(const ClassifyReport& r);

/// Four decimals with trailing zeros trimmed down to one decimal.
std::string format_rate(double x);

// ---- simulate -------------------------------------------------------------

struct Column {
  std::string name;
  std::vector<double> values;
};

struct SimulationOutput {
  TrajectoryRecord traj;
  std::vector<Column> extra;  // diagnostic columns in CSV order
  std::string sidecar_json;
  std::vector<std::string> notes;
};

SimulationOutput run_experiment(const ExperimentConfig& cfg);

/// Header t, q_1..q_N, v_1..v_N, norm_q, diagnostics; 17 significant digits.
std::string csv_text(const SimulationOutput& out);

/// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Writes <stem>.csv and <stem>.json; returns the CSV path.
std::filesystem::path write_outputs(const std::filesystem::path& dir, const std::string& stem,
                                    const SimulationOutput& out);

// ---- reproduce ------------------------------------------------------------

struct FigurePanel {
  std::string name;
  ExperimentConfig config;
};

std::vector<std::string> figure_ids();
/// Built-in configurations; ConfigError for an unknown id.
std::vector<FigurePanel> figure_panels(std::string_view id);

struct FigureSummary {
  std::string id;
  bool pass = false;
  std::string json;
};

/// Runs every panel of a figure. Writes per-panel CSV/JSON plus
/// <id>_summary.json when out_dir is non-empty.
FigureSummary reproduce_figure(std::string_view id, const std::filesystem::path& out_dir);

// ---- sweep ----------------------------------------------------------------

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
  double at(std::size_t i) const;
};

struct SweepSpec {
  GridAxis a;  // Re(lambda)
  GridAxis b;  // Im(lambda)
  bool measure = false;
  unsigned jobs = 1;
};

inline constexpr std::size_t kMaxGridPoints = 1000000;

/// "a0:a1:na,b0:b1:nb". Throws ConfigError on malformed text.
SweepSpec parse_grid(std::string_view text);

struct SweepRow {
  double a = 0.0;
  double b = 0.0;
  EigenTag tag = EigenTag::Zero;
  double predicted = 0.0;
  std::optional<double> measured;
};

/// Throws GridTooLarge above kMaxGridPoints.
std::vector<SweepRow> sweep(const SweepSpec& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Rate of |y| for the modal equation from (1, 0) at t0 = 1, fitted the
/// same way as the figure summaries. Empty if no fit is possible.
std::optional<double> measure_modal_rate(Complex lambda, double dt = 0.01);

// ---- check ----------------------------------------------------------------

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckOptions {
  std::optional<double> dt;  // overrides the integration step of every check
};

std::vector<CheckResult> run_checks(const CheckOptions& opts);
std::string checks_json(const std::vector<CheckResult>& results);
std::string_view to_string(CheckStatus s) noexcept;

}  // namespace nagd
