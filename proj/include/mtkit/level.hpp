#pragma once

#include "mtkit/circle.hpp"
#include "mtkit/csv.hpp"

namespace mtk {

/// Integer level N(theta_j) per grid point; the linearization of a maximal operator.
class LevelFunction {
 public:
  LevelFunction(CircleGrid grid, Eigen::VectorXi levels);
  static LevelFunction constant(CircleGrid grid, int level);

  const CircleGrid& grid() const { return grid_; }
  const Eigen::VectorXi& levels() const { return levels_; }
  int operator[](int j) const { return levels_[j]; }
  int size() const { return grid_.size(); }
  int min() const { return levels_.minCoeff(); }
  int max() const { return levels_.maxCoeff(); }

  /// Throws InvalidArgument naming the first offending grid index.
  void require_range(int lo, int hi, const char* context) const;

 private:
  CircleGrid grid_;
  Eigen::VectorXi levels_;
};

CsvTable level_function_csv(const LevelFunction& n);

}  // namespace mtk
