#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nagd/experiment.hpp"

namespace nagd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, "config: " + (path.empty() ? std::string("<root>") : path) + ": " + msg);
}

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing key");
  return *it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

Vector read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_number(j[i], index(path, i)));
  return v;
}

Matrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(read_vector(j[i], index(path, i)));
  const std::size_t c = rows.front().size();
  Matrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) fail(index(path, i), "row length differs from row 0");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(json(std::vector<double>(r.begin(), r.end())));
  }
  return rows;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) fail(join(path, it.key()), "unknown key");
  }
}

const std::pair<Diagnostic, std::string_view> kDiagnosticNames[] = {
    {Diagnostic::Modal, "modal"},         {Diagnostic::Lyapunov, "lyapunov"},
    {Diagnostic::Chetaev, "chetaev"},     {Diagnostic::Energy, "energy"},
    {Diagnostic::Nullspace, "nullspace"}, {Diagnostic::Rates, "rates"},
};

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

std::string_view to_string(Diagnostic d) noexcept {
  for (const auto& [k, name] : kDiagnosticNames) {
    if (k == d) return name;
  }
  return "?";
}

std::string_view to_string(DynamicsKind k) noexcept { return k == DynamicsKind::Nagd ? "nagd" : "first_order"; }

std::size_t ExperimentConfig::dimension() const {
  if (const auto* m = std::get_if<MatrixSource>(&source)) return m->matrix.rows();
  return std::get<QuadraticGame>(source).n_players();
}

PseudoGradientSystem ExperimentConfig::system() const {
  if (const auto* m = std::get_if<MatrixSource>(&source)) {
    PseudoGradientSystem sys;
    sys.G = m->matrix;
    sys.b = m->offset.empty() ? Vector(m->matrix.rows(), 0.0) : m->offset;
    return sys;
  }
  return pseudo_gradient(std::get<QuadraticGame>(source));
}

void ExperimentConfig::validate() const {
  if (const auto* m = std::get_if<MatrixSource>(&source)) {
    if (m->matrix.empty() || !m->matrix.is_square()) fail("source.matrix", "must be a non-empty square matrix");
    if (!m->offset.empty() && m->offset.size() != m->matrix.rows()) fail("source.offset", "length must match the matrix");
  } else {
    try {
      std::get<QuadraticGame>(source).validate();
    } catch (const Error& e) {
      fail("source.game", e.what());
    }
  }
  const std::size_t n = dimension();
  if (q0.size() != n) fail("initial.q0", "length must be " + std::to_string(n));
  if (!v0.empty() && v0.size() != n) fail("initial.v0", "length must be " + std::to_string(n));
  try {
    integrator.validate();
  } catch (const Error& e) {
    fail("integrator", e.what());
  }
  if (output.format != "csv") fail("output.format", "only \"csv\" is supported");
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "config: syntax error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                                            ": " + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");
  check_keys(root, {"name", "source", "dynamics", "initial", "integrator", "diagnostics", "output"}, "");

  ExperimentConfig cfg;
  if (auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) fail("name", "expected a string");
    cfg.name = it->get<std::string>();
  }

  const json& src = require(root, "source", "");
  if (!src.is_object()) fail("source", "expected an object");
  const bool has_matrix = src.contains("matrix");
  const bool has_game = src.contains("game");
  if (has_matrix == has_game) fail("source", "give exactly one of \"matrix\" or \"game\"");
  if (has_matrix) {
    check_keys(src, {"matrix", "offset"}, "source");
    MatrixSource ms;
    ms.matrix = read_matrix(src["matrix"], "source.matrix");
    if (src.contains("offset")) ms.offset = read_vector(src["offset"], "source.offset");
    cfg.source = std::move(ms);
  } else {
    check_keys(src, {"game"}, "source");
    const json& g = src["game"];
    if (!g.is_object()) fail("source.game", "expected an object");
    check_keys(g, {"Q", "d"}, "source.game");
    const json& qs = require(g, "Q", "source.game");
    if (!qs.is_array() || qs.empty()) fail("source.game.Q", "expected a non-empty array of matrices");
    QuadraticGame game;
    for (std::size_t i = 0; i < qs.size(); ++i) game.Q.push_back(read_matrix(qs[i], index("source.game.Q", i)));
    if (g.contains("d")) {
      const json& ds = g["d"];
      if (!ds.is_array()) fail("source.game.d", "expected an array of vectors");
      for (std::size_t i = 0; i < ds.size(); ++i) game.d.push_back(read_vector(ds[i], index("source.game.d", i)));
    } else {
      game.d.assign(game.Q.size(), Vector(game.Q.size(), 0.0));
    }
    cfg.source = std::move(game);
  }

  if (auto it = root.find("dynamics"); it != root.end()) {
    if (*it == "nagd") {
      cfg.dynamics = DynamicsKind::Nagd;
    } else if (*it == "first_order") {
      cfg.dynamics = DynamicsKind::FirstOrder;
    } else {
      fail("dynamics", "expected \"nagd\" or \"first_order\"");
    }
  }

  const json& init = require(root, "initial", "");
  if (!init.is_object()) fail("initial", "expected an object");
  check_keys(init, {"q0", "v0"}, "initial");
  cfg.q0 = read_vector(require(init, "q0", "initial"), "initial.q0");
  if (init.contains("v0")) cfg.v0 = read_vector(init["v0"], "initial.v0");
  if (cfg.v0.empty()) cfg.v0.assign(cfg.q0.size(), 0.0);

  if (auto it = root.find("integrator"); it != root.end()) {
    const json& ig = *it;
    if (!ig.is_object()) fail("integrator", "expected an object");
    check_keys(ig, {"t0", "t_end", "dt", "r", "record_stride"}, "integrator");
    if (ig.contains("t0")) cfg.integrator.t0 = read_number(ig["t0"], "integrator.t0");
    if (ig.contains("t_end")) cfg.integrator.t_end = read_number(ig["t_end"], "integrator.t_end");
    if (ig.contains("dt")) cfg.integrator.dt = read_number(ig["dt"], "integrator.dt");
    if (ig.contains("r")) cfg.integrator.r = read_number(ig["r"], "integrator.r");
    if (ig.contains("record_stride")) {
      const json& s = ig["record_stride"];
      if (!s.is_number_integer() || s.get<long long>() < 1) fail("integrator.record_stride", "expected an integer >= 1");
      cfg.integrator.record_stride = s.get<std::size_t>();
    }
  }

  if (auto it = root.find("diagnostics"); it != root.end()) {
    if (!it->is_array()) fail("diagnostics", "expected an array of names");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& d = (*it)[i];
      bool found = false;
      for (const auto& [k, name] : kDiagnosticNames) {
        if (d.is_string() && d.get<std::string>() == name) {
          cfg.diagnostics.insert(k);
          found = true;
        }
      }
      if (!found) fail(index("diagnostics", i), "unknown diagnostic");
    }
  }

  if (auto it = root.find("output"); it != root.end()) {
    if (!it->is_object()) fail("output", "expected an object");
    check_keys(*it, {"path", "format"}, "output");
    if (it->contains("path")) {
      if (!(*it)["path"].is_string()) fail("output.path", "expected a string");
      cfg.output.path = (*it)["path"].get<std::string>();
    }
    if (it->contains("format")) {
      if (!(*it)["format"].is_string()) fail("output.format", "expected a string");
      cfg.output.format = (*it)["format"].get<std::string>();
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json root = json::object();
  if (!cfg.name.empty()) root["name"] = cfg.name;
  if (const auto* m = std::get_if<MatrixSource>(&cfg.source)) {
    root["source"]["matrix"] = write_matrix(m->matrix);
    if (!m->offset.empty()) root["source"]["offset"] = m->offset;
  } else {
    const auto& g = std::get<QuadraticGame>(cfg.source);
    json qs = json::array();
    for (const auto& q : g.Q) qs.push_back(write_matrix(q));
    root["source"]["game"]["Q"] = qs;
    root["source"]["game"]["d"] = g.d;
  }
  root["dynamics"] = std::string(to_string(cfg.dynamics));
  root["initial"]["q0"] = cfg.q0;
  root["initial"]["v0"] = cfg.v0;
  const auto& ig = cfg.integrator;
  root["integrator"] = {{"t0", ig.t0}, {"t_end", ig.t_end}, {"dt", ig.dt}, {"r", ig.r}, {"record_stride", ig.record_stride}};
  json diags = json::array();
  for (Diagnostic d : cfg.diagnostics) diags.push_back(std::string(to_string(d)));
  root["diagnostics"] = diags;
  root["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  return root.dump(2) + "\n";
}

}  // namespace nagd
