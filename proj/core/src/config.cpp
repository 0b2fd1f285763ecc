#include "nlfv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nlfv/error.hpp"
#include "nlfv/experiments.hpp"

namespace nlfv {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(int line, const std::string& key, const std::string& message) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", key '" + key + "': " + message);
}

class Table {
 public:
  explicit Table(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) parse_error(line_no, std::string(line), "expected key = value");
      const std::string key(trim(line.substr(0, eq)));
      std::string_view value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
      }
      if (key.empty()) parse_error(line_no, key, "empty key");
      if (entries_.count(key)) parse_error(line_no, key, "duplicate key");
      entries_[key] = Entry{std::string(value), line_no, false};
    }
  }

  Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::map<std::string, Entry>& entries() { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

double to_number(const Entry& e, const std::string& key) {
  double value = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    parse_error(e.line, key, "'" + e.value + "' is not a number");
  }
  return value;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  parse_error(e.line, key, "'" + e.value + "' is not a boolean");
}

std::vector<double> to_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item(trim(rest.substr(0, comma)));
    if (!item.empty()) out.push_back(to_number(Entry{item, e.line, true}, key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class Reader {
 public:
  Reader(Table& table, std::vector<std::string>& defaults) : table_(table), defaults_(defaults) {}

  double number(const std::string& key, double fallback) {
    if (Entry* e = table_.find(key)) return to_number(*e, key);
    defaults_.push_back(key + " = " + format(fallback));
    return fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (Entry* e = table_.find(key)) return to_bool(*e, key);
    defaults_.push_back(key + " = " + (fallback ? "true" : "false"));
    return fallback;
  }

  std::string word(const std::string& key, const std::string& fallback) {
    if (Entry* e = table_.find(key)) return e->value;
    defaults_.push_back(key + " = " + fallback);
    return fallback;
  }

  Entry* raw(const std::string& key) { return table_.find(key); }

 private:
  Table& table_;
  std::vector<std::string>& defaults_;
};

InitialProfile read_profile(Reader& reader, const std::string& prefix, int line) {
  const std::string kind = reader.word(prefix, "constant");
  InitialProfile p;
  if (kind == "sin2") {
    p.kind = InitialProfile::Kind::sin2;
  } else if (kind == "cos2") {
    p.kind = InitialProfile::Kind::cos2;
  } else if (kind == "constant") {
    p.kind = InitialProfile::Kind::constant;
  } else if (kind == "indicator") {
    p.kind = InitialProfile::Kind::indicator;
  } else if (kind == "tabulated") {
    p.kind = InitialProfile::Kind::tabulated;
  } else {
    parse_error(line, prefix, "unknown initial profile '" + kind + "'");
  }
  const bool bounded = p.kind != InitialProfile::Kind::constant;
  p.amplitude = reader.number(prefix + ".amplitude", p.kind == InitialProfile::Kind::constant ? 0.0 : 1.0);
  if (p.kind == InitialProfile::Kind::sin2 || p.kind == InitialProfile::Kind::cos2) {
    p.frequency = reader.number(prefix + ".frequency", 0.5);
  }
  if (bounded) {
    p.lo = reader.number(prefix + ".lo", -2.0);
    p.hi = reader.number(prefix + ".hi", 2.0);
  }
  if (p.kind == InitialProfile::Kind::tabulated) {
    Entry* values = reader.raw(prefix + ".values");
    if (!values) parse_error(line, prefix + ".values", "tabulated profile needs values");
    p.values = to_list(*values, prefix + ".values");
  }
  return p;
}

[[noreturn]] void validation_error(const std::vector<std::string>& problems) {
  std::string msg;
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(ErrorCode::ValidationError, "invalid configuration:" + msg);
}

}  // namespace

RunConfig parse_config_text(std::string_view text) {
  Table table(text);
  RunConfig cfg;
  Reader reader(table, cfg.defaults_applied);

  cfg.x_min = reader.number("grid.x_min", cfg.x_min);
  cfg.x_max = reader.number("grid.x_max", cfg.x_max);
  cfg.dx = reader.number("grid.dx", cfg.dx);
  cfg.t_final = reader.number("run.t_final", cfg.t_final);
  cfg.beta = reader.number("run.beta", cfg.beta);
  if (Entry* e = reader.raw("run.lambda")) cfg.lambda = to_number(*e, "run.lambda");
  cfg.kahan = reader.boolean("run.kahan", cfg.kahan);

  const std::string center = reader.word("run.center_convention", "symmetric");
  if (center == "symmetric") {
    cfg.center_convention = CenterConvention::symmetric;
  } else if (center == "paper-proof" || center == "forward") {
    cfg.center_convention = CenterConvention::forward;
  } else {
    parse_error(table.entries()["run.center_convention"].line, "run.center_convention",
                "expected symmetric or paper-proof");
  }

  const std::string shape = reader.word("kernel.shape", "linear");
  if (shape == "linear" || shape == "linear_decreasing") {
    cfg.kernel.shape = KernelShape::linear_decreasing;
  } else if (shape == "constant") {
    cfg.kernel.shape = KernelShape::constant;
  } else if (shape == "tabulated") {
    cfg.kernel.shape = KernelShape::tabulated;
  } else {
    parse_error(table.entries()["kernel.shape"].line, "kernel.shape",
                "unknown kernel shape '" + shape + "'");
  }
  if (Entry* e = reader.raw("kernel.eta")) {
    if (e->value == "dx") {
      cfg.eta_is_dx = true;
      cfg.kernel.eta = cfg.dx;
    } else {
      cfg.kernel.eta = to_number(*e, "kernel.eta");
    }
  } else {
    cfg.kernel.eta = 0.0625;
    cfg.defaults_applied.push_back("kernel.eta = 0.0625");
  }
  cfg.kernel.pre_normalized = reader.boolean("kernel.pre_normalized", false);
  if (Entry* e = reader.raw("kernel.samples")) cfg.kernel.samples = to_list(*e, "kernel.samples");
  if (cfg.kernel.shape == KernelShape::tabulated && cfg.kernel.samples.empty()) {
    parse_error(0, "kernel.samples", "tabulated kernel needs samples");
  }

  if (Entry* e = reader.raw("model.source_lipschitz")) {
    cfg.source_lipschitz = to_number(*e, "model.source_lipschitz");
  }

  const std::string integrator = reader.word("integrator", "unsplit");
  if (integrator == "unsplit") {
    cfg.integrator = Integrator::unsplit;
  } else if (integrator == "split") {
    cfg.integrator = Integrator::split;
  } else {
    parse_error(table.entries()["integrator"].line, "integrator", "expected unsplit or split");
  }
  cfg.local = reader.boolean("local", false);
  if (cfg.local) {
    cfg.eta_is_dx = true;
    cfg.kernel.eta = cfg.dx;
  }
  if (Entry* e = reader.raw("outputs.snapshot_times")) {
    cfg.snapshot_times = to_list(*e, "outputs.snapshot_times");
  } else {
    cfg.snapshot_times = {cfg.t_final};
    cfg.defaults_applied.push_back("outputs.snapshot_times = " + format(cfg.t_final));
  }
  cfg.diagnostics = reader.boolean("outputs.diagnostics", true);

  // Lanes are numbered from 0 without gaps.
  std::size_t lane_count = 0;
  for (const auto& [key, entry] : table.entries()) {
    if (key.rfind("lanes.", 0) != 0) continue;
    const auto dot = key.find('.', 6);
    const std::string index = key.substr(6, dot == std::string::npos ? std::string::npos : dot - 6);
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(), k);
    if (ec != std::errc() || ptr != index.data() + index.size() || dot == std::string::npos) {
      parse_error(entry.line, key, "lane keys look like lanes.<index>.<field>");
    }
    lane_count = std::max(lane_count, k + 1);
  }
  for (std::size_t k = 0; k < lane_count; ++k) {
    const std::string prefix = "lanes." + std::to_string(k);
    LaneConfig lane;
    lane.v_scale = reader.number(prefix + ".v_scale", 1.0);
    const std::string g = reader.word(prefix + ".g", "lwr");
    if (g == "lwr") {
      lane.flux_factor = FluxFactor::lwr;
    } else if (g == "unit" || g == "one") {
      lane.flux_factor = FluxFactor::unit;
    } else {
      parse_error(table.entries()[prefix + ".g"].line, prefix + ".g",
                  "unknown flux factor '" + g + "'");
    }
    lane.initial = read_profile(reader, prefix + ".u0", 0);
    cfg.lanes.push_back(std::move(lane));
  }

  for (const auto& [key, entry] : table.entries()) {
    if (!entry.used) parse_error(entry.line, key, "unknown key");
  }

  std::vector<std::string> problems;
  if (cfg.lanes.empty()) problems.push_back("N: at least one lane (lanes.0.*) is required");
  if (!(cfg.beta > 0.0 && cfg.beta < 2.0 / 3.0)) {
    problems.push_back("run.beta = " + format(cfg.beta) + " is outside (0, 2/3)");
  }
  if (!(cfg.dx > 0.0) || !(cfg.x_max > cfg.x_min)) {
    problems.push_back("grid: need dx > 0 and x_max > x_min");
  } else {
    const double cells = (cfg.x_max - cfg.x_min) / cfg.dx;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells) {
      problems.push_back("grid.dx does not divide [x_min, x_max]");
    }
    const double ratio = cfg.kernel.eta / cfg.dx;
    if (!(ratio >= 1.0 - 1e-9) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      problems.push_back("kernel.eta must be a positive multiple of grid.dx");
    }
  }
  if (!(cfg.t_final >= 0.0)) problems.push_back("run.t_final must be non-negative");
  if (cfg.lambda && !(*cfg.lambda > 0.0)) problems.push_back("run.lambda must be positive");
  if (problems.empty()) {
    for (const auto& v : validate_system(build_system(cfg))) {
      problems.push_back(v.assumption + (v.lane >= 0 ? " (lane " + std::to_string(v.lane) + ")" : "") +
                         ": " + v.detail);
    }
  }
  if (!problems.empty()) validation_error(problems);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

SystemSpec build_system(const RunConfig& config) {
  SystemSpec spec;
  for (const auto& lane_cfg : config.lanes) {
    LaneModel lane = lane_cfg.flux_factor == FluxFactor::unit
                         ? make_linear_flux_lane(lane_cfg.v_scale)
                         : make_lwr_lane(lane_cfg.v_scale);
    spec.lanes.push_back(std::move(lane));
  }
  spec.kernel = config.kernel;
  if (config.eta_is_dx) spec.kernel.eta = config.dx;
  spec.source_lipschitz = config.source_lipschitz.value_or(
      spec.lanes.size() > 1 ? default_source_lipschitz(spec.lanes) : 0.0);
  return spec;
}

PreparedRun prepare_run(const RunConfig& config) {
  PreparedRun prepared;
  RunSettings& s = prepared.settings;
  s.spec = build_system(config);
  s.n_eta = kernel_cells(s.spec.kernel.eta, config.dx);
  prepared.cfl_lambda = cfl_time_step(config.dx, config.beta, s.spec).lambda;
  const double lambda = config.lambda.value_or(prepared.cfl_lambda);
  if (config.lambda && *config.lambda > prepared.cfl_lambda) {
    prepared.warnings.push_back("run.lambda = " + format(*config.lambda) +
                                " exceeds the computed CFL bound " +
                                format(prepared.cfl_lambda));
  }
  s.grid = make_grid(config.x_min, config.x_max, config.dx, config.beta, lambda, config.t_final);
  for (const auto& lane : config.lanes) s.initial.push_back(lane.initial);
  s.output_times = config.snapshot_times;
  s.integrator = config.integrator;
  s.options.compensated_sum = config.kahan;
  s.options.center_convention = config.center_convention;
  s.record_diagnostics = config.diagnostics;
  return prepared;
}

}  // namespace nlfv
