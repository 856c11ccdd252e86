#include "stsbo/config.hpp"

#include "stsbo/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

namespace stsbo {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(trim(cur));
  items.erase(std::remove(items.begin(), items.end(), std::string{}), items.end());
  return items;
}

double parse_num(const std::string& key, const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw DomainError("");
    return v;
  } catch (...) {
    throw DomainError(key + ": cannot parse number '" + s + "'");
  }
}

long parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw DomainError("");
    return v;
  } catch (...) {
    throw DomainError(key + ": cannot parse integer '" + s + "'");
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split_list(s)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      seeds.push_back(static_cast<std::uint64_t>(parse_int("seeds", item)));
    } else {
      const long lo = parse_int("seeds", item.substr(0, colon));
      const long hi = parse_int("seeds", item.substr(colon + 1));
      if (hi < lo) throw DomainError("seeds: descending range '" + item + "'");
      for (long v = lo; v <= hi; ++v) seeds.push_back(static_cast<std::uint64_t>(v));
    }
  }
  return seeds;
}

void assign(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "objective") c.objective = value;
  else if (key == "csv_path") c.csv_path = value;
  else if (key == "t_f") c.t_f = parse_num(key, value);
  else if (key == "i3_max") c.i3_max = parse_num(key, value);
  else if (key == "kernel") c.kernel = value;
  else if (key == "lengthscale") {
    c.lengthscale.clear();
    if (value != "auto")
      for (const std::string& item : split_list(value))
        c.lengthscale.push_back(parse_num(key, item));
  } else if (key == "signal_variance") c.signal_variance = value == "auto" ? 0 : parse_num(key, value);
  else if (key == "noise_variance") c.noise_variance = value == "auto" ? -1 : parse_num(key, value);
  else if (key == "noise_ratio") c.noise_ratio = parse_num(key, value);
  else if (key == "policy") c.policy = split_list(value);
  else if (key == "mode") c.mode = split_list(value);
  else if (key == "beta") {
    c.beta.clear();
    for (const std::string& item : split_list(value)) c.beta.push_back(parse_num(key, item));
  } else if (key == "m_workers") c.m_workers = static_cast<int>(parse_int(key, value));
  else if (key == "z_count") c.z_count = static_cast<int>(parse_int(key, value));
  else if (key == "ba_k_max") c.ba_k_max = static_cast<int>(parse_int(key, value));
  else if (key == "ba_tol") c.ba_tol = parse_num(key, value);
  else if (key == "budget_rounds") c.budget_rounds = parse_num(key, value);
  else if (key == "seeds") c.seeds = parse_seeds(value);
  else if (key == "time_scale") c.time_scale = value == "auto" ? 0 : parse_num(key, value);
  else if (key == "time_target_rounds") c.time_target_rounds = parse_num(key, value);
  else if (key == "duration_basis") c.duration_basis = value;
  else if (key == "curve_points") c.curve_points = static_cast<int>(parse_int(key, value));
  else if (key == "out_dir") c.out_dir = value;
  else throw FormatError("unknown config key '" + key + "'");
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("config: cannot open " + path);
  ExperimentConfig config;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      assign(config, key, value);
    } catch (const FormatError& e) {
      throw FormatError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw FormatError("--set expects key=value, got '" + assignment + "'");
  assign(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw DomainError("config field " + field + ": " + why);
  };
  if (c.objective != "synth" && c.objective != "csv") fail("objective", "must be synth or csv");
  if (c.objective == "csv" && c.csv_path.empty()) fail("csv_path", "required when objective = csv");
  if (c.objective == "synth" && !(c.t_f > 0)) fail("t_f", "must be > 0");
  if (c.objective == "csv" && std::isfinite(c.i3_max))
    fail("i3_max", "feasibility masking applies to the built-in charging grid only");
  if (!(c.i3_max > 0)) fail("i3_max", "must be > 0");
  if (c.kernel != "se" && c.kernel != "matern52") fail("kernel", "must be se or matern52");
  for (double l : c.lengthscale)
    if (!(l > 0)) fail("lengthscale", "entries must be > 0");
  if (c.signal_variance < 0) fail("signal_variance", "must be > 0 or auto");
  if (!(c.noise_ratio >= 0)) fail("noise_ratio", "must be >= 0");
  if (c.policy.empty()) fail("policy", "need at least one of ts, sts");
  for (const std::string& p : c.policy)
    if (p != "ts" && p != "sts") fail("policy", "unknown policy '" + p + "'");
  if (c.mode.empty()) fail("mode", "need at least one mode");
  for (const std::string& m : c.mode)
    if (m != "sequential" && m != "synchronous" && m != "asynchronous")
      fail("mode", "unknown mode '" + m + "'");
  if (c.beta.empty()) fail("beta", "need at least one value");
  for (double b : c.beta)
    if (!(b >= 0) || !std::isfinite(b)) fail("beta", "values must be finite and >= 0");
  if (c.m_workers < 1) fail("m_workers", "must be >= 1");
  if (c.z_count < 1) fail("z_count", "must be >= 1");
  if (c.ba_k_max < 1) fail("ba_k_max", "must be >= 1");
  if (!(c.ba_tol > 0)) fail("ba_tol", "must be > 0");
  if (!(c.budget_rounds > 0)) fail("budget_rounds", "must be > 0");
  if (c.seeds.empty()) fail("seeds", "need at least one seed");
  if (c.time_scale < 0) fail("time_scale", "must be > 0 or auto");
  if (!(c.time_target_rounds > 0)) fail("time_target_rounds", "must be > 0");
  if (c.duration_basis != "observed" && c.duration_basis != "true")
    fail("duration_basis", "must be observed or true");
  if (c.curve_points < 1) fail("curve_points", "must be >= 1");
  if (c.out_dir.empty()) fail("out_dir", "must be nonempty");
}

std::string variant_tag(const std::string& policy, Mode mode) {
  const std::string head = policy == "ts" ? "TS" : policy == "sts" ? "STS" : "";
  if (head.empty()) throw DomainError("variant_tag: unknown policy '" + policy + "'");
  switch (mode) {
    case Mode::sequential: return head + "-BO";
    case Mode::synchronous: return head + "-PBO-syn";
    case Mode::asynchronous: return head + "-PBO-asy";
  }
  throw DomainError("variant_tag: unknown mode");
}

Mode mode_from_name(const std::string& name) {
  if (name == "sequential") return Mode::sequential;
  if (name == "synchronous") return Mode::synchronous;
  if (name == "asynchronous") return Mode::asynchronous;
  throw DomainError("mode_from_name: unknown mode '" + name + "'");
}

TabularObjective build_objective(const ExperimentConfig& config) {
  if (config.objective == "csv") return load_objective_csv(config.csv_path);
  const Eigen::VectorXd axis = default_current_axis();
  const ChargingBenchmark bench =
      build_charging_benchmark(axis, axis, config.t_f, kDefaultDq, config.i3_max);
  return synth_battery(bench.grid);
}

ResolvedModel resolve_model(const ExperimentConfig& config, const TabularObjective& objective) {
  const int dims = objective.grid.dims;
  ResolvedModel m;
  m.kernel.kind =
      config.kernel == "matern52" ? KernelKind::matern52 : KernelKind::squared_exponential;
  if (config.lengthscale.size() == 1) {
    m.kernel.lengthscales = Eigen::VectorXd::Constant(dims, config.lengthscale[0]);
  } else if (!config.lengthscale.empty()) {
    if (config.lengthscale.size() != static_cast<std::size_t>(dims))
      throw DomainError("config field lengthscale: need 1 entry or one per dimension (" +
                        std::to_string(dims) + ")");
    m.kernel.lengthscales =
        Eigen::Map<const Eigen::VectorXd>(config.lengthscale.data(), dims);
  } else {
    m.kernel.lengthscales.resize(dims);
    for (int d = 0; d < dims; ++d) {
      const Eigen::VectorXd& axis = objective.grid.axes[static_cast<std::size_t>(d)];
      const double step =
          axis.size() > 1 ? (axis[axis.size() - 1] - axis[0]) / double(axis.size() - 1) : 1.0;
      m.kernel.lengthscales[d] = 4.0 * step;
    }
  }
  m.kernel.signal_variance = config.signal_variance > 0 ? config.signal_variance : 1.0;
  m.transform = ValueTransform::standardizing(objective);
  if (config.noise_variance >= 0) {
    m.noise_variance = config.noise_variance;
  } else {
    const double sd = config.noise_ratio * m.transform.offset / m.transform.scale;
    // Floor keeps repeated observations of one point well conditioned at
    // ratio 0.
    m.noise_variance = std::max(sd * sd, 1e-8 * m.kernel.signal_variance);
  }
  m.noise.ratio = config.noise_ratio;
  m.time_model = config.time_scale > 0
                     ? TimeModel::explicit_scale(config.time_scale)
                     : TimeModel::normalized(objective, config.time_target_rounds);
  m.basis = config.duration_basis == "true" ? DurationBasis::true_value : DurationBasis::observed;
  return m;
}

}  // namespace stsbo
