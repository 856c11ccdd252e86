#pragma once

// Shared scaffolding for the unit suites: throwaway directories and small
// deterministic fixtures.

#include "stsbo/grid.hpp"
#include "stsbo/objective.hpp"
#include "stsbo/rng.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

// Unique directory under the system temp root, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("stsbo_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// 1-D grid with n unit-spaced points.
inline stsbo::GridDomain line_grid(int n, double step = 1.0) {
  Eigen::VectorXd axis(n);
  for (int i = 0; i < n; ++i) axis[i] = step * i;
  return stsbo::build_grid({axis});
}

// Constant-valued objective over a 1-D grid.
inline stsbo::TabularObjective constant_objective(int n, double value) {
  return stsbo::make_objective(line_grid(n), Eigen::VectorXd::Constant(n, value));
}

inline stsbo::TabularObjective values_objective(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return stsbo::make_objective(line_grid(static_cast<int>(values.size())), v);
}

}  // namespace testutil
