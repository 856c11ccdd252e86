#include "stsbo/grid.hpp"

#include "stsbo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace stsbo {

GridDomain build_grid(const std::vector<Eigen::VectorXd>& axes) {
  if (axes.empty()) throw DomainError("build_grid: at least one axis required");
  Eigen::Index size = 1;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const auto& ax = axes[d];
    if (ax.size() == 0) throw DomainError("build_grid: axis " + std::to_string(d) + " is empty");
    for (Eigen::Index i = 1; i < ax.size(); ++i) {
      if (!(ax[i] > ax[i - 1]))
        throw DomainError("build_grid: axis " + std::to_string(d) + " not strictly increasing");
    }
    size *= ax.size();
  }

  GridDomain g;
  g.dims = static_cast<int>(axes.size());
  g.axes = axes;
  g.points.resize(size, g.dims);
  // Row-major flattening: the last axis varies fastest.
  for (Eigen::Index idx = 0; idx < size; ++idx) {
    Eigen::Index rem = idx;
    for (int d = g.dims - 1; d >= 0; --d) {
      const Eigen::Index n = axes[d].size();
      g.points(idx, d) = axes[d][rem % n];
      rem /= n;
    }
  }
  return g;
}

Eigen::VectorXd linear_axis(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw DomainError("linear_axis: need step > 0 and hi >= lo");
  const auto n = static_cast<Eigen::Index>(std::lround((hi - lo) / step)) + 1;
  Eigen::VectorXd ax(n);
  for (Eigen::Index i = 0; i < n; ++i) ax[i] = lo + step * static_cast<double>(i);
  return ax;
}

GridDomain mask_points(const GridDomain& domain, const std::vector<bool>& keep) {
  if (static_cast<Eigen::Index>(keep.size()) != domain.size())
    throw DomainError("mask_points: keep mask size mismatch");
  Eigen::Index kept = 0;
  for (bool k : keep) kept += k ? 1 : 0;
  if (kept == 0) throw DomainError("mask_points: mask removes every point");

  GridDomain g;
  g.dims = domain.dims;
  g.points.resize(kept, domain.dims);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < domain.size(); ++i) {
    if (keep[static_cast<std::size_t>(i)]) g.points.row(row++) = domain.points.row(i);
  }
  // Surviving unique coordinates per dimension, for reporting only.
  g.axes.resize(domain.axes.size());
  for (std::size_t d = 0; d < domain.axes.size(); ++d) {
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < g.points.rows(); ++i) {
      const double v = g.points(i, static_cast<Eigen::Index>(d));
      bool seen = false;
      for (double u : vals) {
        if (u == v) {
          seen = true;
          break;
        }
      }
      if (!seen) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    g.axes[d] = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  }
  return g;
}

void write_grid_csv(const GridDomain& domain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("write_grid_csv: cannot open " + path);
  out << "index";
  for (int d = 0; d < domain.dims; ++d) out << ",coord_" << d;
  out << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < domain.size(); ++i) {
    out << i;
    for (int d = 0; d < domain.dims; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", domain.points(i, d));
      out << ',' << buf;
    }
    out << "\n";
  }
}

ChargingProtocol protocol_from_currents(double i1, double i2, double t_f,
                                        const std::array<double, 3>& dq, double i3_max) {
  if (!(i1 > 0) || !(i2 > 0)) throw DomainError("protocol_from_currents: currents must be > 0");
  if (!(t_f > 0)) throw DomainError("protocol_from_currents: t_f must be > 0");
  for (double q : dq)
    if (!(q > 0)) throw DomainError("protocol_from_currents: charge fractions must be > 0");

  ChargingProtocol p;
  p.i1 = i1;
  p.i2 = i2;
  p.t1 = 3600.0 * dq[0] / i1;
  p.t2 = 3600.0 * dq[1] / i2;
  const double t3 = t_f - p.t1 - p.t2;
  if (t3 > 0) {
    p.t3 = t3;
    p.i3 = 3600.0 * dq[2] / t3;
    p.feasible = *p.i3 <= i3_max;
  }
  return p;
}

Eigen::VectorXd default_current_axis() { return linear_axis(2.2, 6.0, 0.2); }

ChargingBenchmark build_charging_benchmark(const Eigen::VectorXd& i1_axis,
                                           const Eigen::VectorXd& i2_axis, double t_f,
                                           const std::array<double, 3>& dq, double i3_max) {
  GridDomain full = build_grid({i1_axis, i2_axis});
  std::vector<ChargingProtocol> protocols;
  protocols.reserve(static_cast<std::size_t>(full.size()));
  std::vector<bool> keep(static_cast<std::size_t>(full.size()));
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    ChargingProtocol p = protocol_from_currents(full.points(i, 0), full.points(i, 1), t_f, dq, i3_max);
    keep[static_cast<std::size_t>(i)] = p.feasible;
    protocols.push_back(p);
  }

  ChargingBenchmark bench;
  bool all = true;
  for (bool k : keep) all = all && k;
  if (all) {
    bench.grid = std::move(full);
    bench.protocols = std::move(protocols);
    return bench;
  }
  bench.grid = mask_points(full, keep);
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    if (keep[static_cast<std::size_t>(i)])
      bench.protocols.push_back(protocols[static_cast<std::size_t>(i)]);
  }
  return bench;
}

}  // namespace stsbo
