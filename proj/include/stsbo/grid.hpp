#pragma once

// Finite candidate domains and the three-stage charging protocol geometry.
//
// Optimization runs entirely over point indices; coordinates and protocol
// timing are metadata resolved here. build_grid flattens a Cartesian product
// in row-major order (last axis fastest). mask_points keeps the index->point
// bijection but drops the product structure, so the size == product-of-axes
// invariant applies to build_grid outputs only.

#include <Eigen/Core>

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace stsbo {

struct GridDomain {
  int dims = 0;
  std::vector<Eigen::VectorXd> axes;  // per-dimension coordinates, strictly increasing
  Eigen::MatrixXd points;             // size x dims, row i = coordinates of index i

  Eigen::Index size() const { return points.rows(); }
};

GridDomain build_grid(const std::vector<Eigen::VectorXd>& axes);

// Evenly spaced axis lo, lo+step, ..., covering hi (count = round((hi-lo)/step)+1).
Eigen::VectorXd linear_axis(double lo, double hi, double step);

// Subset of the domain at the indices where keep is true; point order preserved.
GridDomain mask_points(const GridDomain& domain, const std::vector<bool>& keep);

void write_grid_csv(const GridDomain& domain, const std::string& path);

// Three-stage fast-charge protocol: stages 1 and 2 run at fixed C-rates i1, i2
// until their charge fractions dq[0], dq[1] are delivered; stage 3 uses the
// remaining time t3 = t_f - t1 - t2 to deliver dq[2], which pins its rate i3.
// A protocol is feasible when t3 > 0 and i3 <= i3_max. Stage times are seconds
// (3600 converts C-rate hours to seconds); when t3 <= 0, t3 and i3 are unset.
struct ChargingProtocol {
  double i1 = 0;
  double i2 = 0;
  double t1 = 0;
  double t2 = 0;
  std::optional<double> t3;
  std::optional<double> i3;
  bool feasible = false;
};

ChargingProtocol protocol_from_currents(double i1, double i2, double t_f,
                                        const std::array<double, 3>& dq,
                                        double i3_max);

inline constexpr double kDefaultChargeTime = 800.0;               // seconds
inline constexpr std::array<double, 3> kDefaultDq{0.2, 0.2, 0.4};  // charge fractions

// 2.2C to 6.0C in 0.2C steps: the 20-value axis of the benchmark grid.
Eigen::VectorXd default_current_axis();

// (i1, i2) grid with per-point protocol metadata; infeasible points are
// excluded. With the default arguments every one of the 400 points survives.
struct ChargingBenchmark {
  GridDomain grid;
  std::vector<ChargingProtocol> protocols;  // parallel to grid indices
};

ChargingBenchmark build_charging_benchmark(const Eigen::VectorXd& i1_axis,
                                           const Eigen::VectorXd& i2_axis,
                                           double t_f = kDefaultChargeTime,
                                           const std::array<double, 3>& dq = kDefaultDq,
                                           double i3_max = std::numeric_limits<double>::infinity());

}  // namespace stsbo
