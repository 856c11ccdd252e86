#pragma once

// Ground-truth objectives. A TabularObjective pins one positive value to each
// grid index; the synthetic family is a smooth stand-in for cycle-life maps:
// baseline plus two radial bumps plus a mild linear trend, tuned so the
// default charging grid lands roughly in the 200..1200 range with a unique
// interior maximum.

#include "stsbo/grid.hpp"
#include "stsbo/rng.hpp"

#include <Eigen/Core>

#include <string>

namespace stsbo {

struct TabularObjective {
  GridDomain grid;
  Eigen::VectorXd values;  // parallel to grid indices, all > 0
  Eigen::Index best_index = 0;
  double best_value = 0;
};

// Validates positivity and resolves the argmax (ties to the lowest index).
TabularObjective make_objective(GridDomain grid, Eigen::VectorXd values);

// CSV schema: header coord_0,...,coord_{d-1},value; one row per grid point;
// rows must cover a complete Cartesian grid in any order. Loading rebuilds
// the row-major GridDomain; writing emits rows in index order with full
// precision so a write-then-load roundtrip reproduces values exactly.
TabularObjective load_objective_csv(const std::string& path);
void write_objective_csv(const TabularObjective& objective, const std::string& path);

struct SynthParams {
  double baseline = 420.0;
  double amp1 = 680.0;
  double center1_x = 3.37;
  double center1_y = 4.53;
  double width1 = 0.85;
  double amp2 = 240.0;
  double center2_x = 5.23;
  double center2_y = 2.81;
  double width2 = 0.65;
  double trend_x = -35.0;  // amplitude coefficients too: zero both bumps and
  double trend_y = -25.0;  // both trends to get the constant-baseline map
  double anchor_x = 4.1;
  double anchor_y = 4.1;
};

// Synthetic battery-style landscape over a 2-D grid.
TabularObjective synth_battery(const GridDomain& grid, const SynthParams& params = SynthParams{});

// Multiplicative observation noise: y = f (1 + ratio * u), u standard normal,
// unclamped. ratio = 0 reproduces f exactly.
struct NoiseModel {
  double ratio = 0.05;
};

double observe(const TabularObjective& objective, const NoiseModel& noise, Eigen::Index point,
               rng::Stream& stream);

}  // namespace stsbo
