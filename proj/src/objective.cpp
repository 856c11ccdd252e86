#include "stsbo/objective.hpp"

#include "stsbo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace stsbo {

TabularObjective make_objective(GridDomain grid, Eigen::VectorXd values) {
  if (values.size() != grid.size())
    throw DomainError("make_objective: value count " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  if (values.size() == 0) throw DomainError("make_objective: empty grid");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw DomainError("make_objective: value at index " + std::to_string(i) +
                        " must be finite and > 0");
  }
  TabularObjective obj;
  obj.grid = std::move(grid);
  obj.values = std::move(values);
  obj.best_index = 0;
  for (Eigen::Index i = 1; i < obj.values.size(); ++i)
    if (obj.values[i] > obj.values[obj.best_index]) obj.best_index = i;
  obj.best_value = obj.values[obj.best_index];
  return obj;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw FormatError("");
    return v;
  } catch (...) {
    throw FormatError(context + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

TabularObjective load_objective_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("load_objective_csv: cannot open " + path);

  std::string line;
  long line_no = 0;
  // Header: coord_0,...,coord_{d-1},value. Comment lines start with '#'.
  int dims = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2 || fields.back() != "value")
      throw FormatError("load_objective_csv: bad header at line " + std::to_string(line_no) +
                        " (want coord_0,...,value)");
    dims = static_cast<int>(fields.size()) - 1;
    for (int d = 0; d < dims; ++d) {
      if (fields[static_cast<std::size_t>(d)] != "coord_" + std::to_string(d))
        throw FormatError("load_objective_csv: bad header column " +
                          fields[static_cast<std::size_t>(d)]);
    }
    break;
  }
  if (dims < 1) throw FormatError("load_objective_csv: missing header in " + path);

  std::vector<std::vector<double>> coords;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dims + 1)
      throw FormatError("load_objective_csv: wrong field count at line " + std::to_string(line_no));
    std::vector<double> point(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d)
      point[static_cast<std::size_t>(d)] =
          parse_double(fields[static_cast<std::size_t>(d)], "line " + std::to_string(line_no));
    const double v = parse_double(fields.back(), "line " + std::to_string(line_no));
    if (!(v > 0))
      throw FormatError("load_objective_csv: non-positive value at line " + std::to_string(line_no));
    coords.push_back(std::move(point));
    values.push_back(v);
  }
  if (coords.empty()) throw FormatError("load_objective_csv: no data rows in " + path);

  // Rebuild the Cartesian axes from the observed coordinates.
  std::vector<Eigen::VectorXd> axes(static_cast<std::size_t>(dims));
  for (int d = 0; d < dims; ++d) {
    std::vector<double> uniq;
    for (const auto& p : coords) uniq.push_back(p[static_cast<std::size_t>(d)]);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    axes[static_cast<std::size_t>(d)] =
        Eigen::Map<Eigen::VectorXd>(uniq.data(), static_cast<Eigen::Index>(uniq.size()));
  }
  GridDomain grid = build_grid(axes);

  auto describe = [&](const std::vector<double>& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t d = 0; d < p.size(); ++d) os << (d ? ", " : "") << p[d];
    os << ")";
    return os.str();
  };

  // Exact coordinate -> index map; text -> double parsing is deterministic, so
  // equality on doubles is the right match here.
  std::map<std::vector<double>, Eigen::Index> index_of;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    std::vector<double> key(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) key[static_cast<std::size_t>(d)] = grid.points(i, d);
    index_of.emplace(std::move(key), i);
  }

  Eigen::VectorXd table = Eigen::VectorXd::Constant(grid.size(), -1.0);
  for (std::size_t r = 0; r < coords.size(); ++r) {
    auto it = index_of.find(coords[r]);
    if (it == index_of.end())
      throw FormatError("load_objective_csv: row coordinate " + describe(coords[r]) +
                        " is off the reconstructed grid");
    if (table[it->second] >= 0)
      throw FormatError("load_objective_csv: duplicate coordinate " + describe(coords[r]));
    table[it->second] = values[r];
  }
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    if (table[i] < 0) {
      std::vector<double> p(static_cast<std::size_t>(dims));
      for (int d = 0; d < dims; ++d) p[static_cast<std::size_t>(d)] = grid.points(i, d);
      throw FormatError("load_objective_csv: grid incomplete, missing coordinate " + describe(p));
    }
  }
  return make_objective(std::move(grid), std::move(table));
}

void write_objective_csv(const TabularObjective& objective, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("write_objective_csv: cannot open " + path);
  for (int d = 0; d < objective.grid.dims; ++d) out << (d ? "," : "") << "coord_" << d;
  out << ",value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < objective.grid.size(); ++i) {
    for (int d = 0; d < objective.grid.dims; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", objective.grid.points(i, d));
      out << (d ? "," : "") << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", objective.values[i]);
    out << ',' << buf << "\n";
  }
}

TabularObjective synth_battery(const GridDomain& grid, const SynthParams& p) {
  if (grid.dims != 2) throw DomainError("synth_battery: requires a 2-D grid");
  Eigen::VectorXd values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.points(i, 0);
    const double y = grid.points(i, 1);
    const double d1 = (x - p.center1_x) * (x - p.center1_x) + (y - p.center1_y) * (y - p.center1_y);
    const double d2 = (x - p.center2_x) * (x - p.center2_x) + (y - p.center2_y) * (y - p.center2_y);
    values[i] = p.baseline + p.amp1 * std::exp(-d1 / (2.0 * p.width1 * p.width1)) +
                p.amp2 * std::exp(-d2 / (2.0 * p.width2 * p.width2)) +
                p.trend_x * (x - p.anchor_x) + p.trend_y * (y - p.anchor_y);
  }
  return make_objective(grid, std::move(values));
}

double observe(const TabularObjective& objective, const NoiseModel& noise, Eigen::Index point,
               rng::Stream& stream) {
  if (point < 0 || point >= objective.values.size())
    throw DomainError("observe: point index out of range");
  if (!(noise.ratio >= 0)) throw DomainError("observe: noise ratio must be >= 0");
  return objective.values[point] * (1.0 + noise.ratio * stream.next_normal());
}

}  // namespace stsbo
