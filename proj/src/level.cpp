#include "mtkit/level.hpp"

#include <string>

namespace mtk {

LevelFunction::LevelFunction(CircleGrid grid, Eigen::VectorXi levels) : grid_(grid), levels_(std::move(levels)) {
  if (levels_.size() != grid_.size())
    throw InvalidArgument("level function has " + std::to_string(levels_.size()) + " entries, grid has " +
                          std::to_string(grid_.size()));
}

LevelFunction LevelFunction::constant(CircleGrid grid, int level) {
  return LevelFunction(grid, Eigen::VectorXi::Constant(grid.size(), level));
}

void LevelFunction::require_range(int lo, int hi, const char* context) const {
  for (int j = 0; j < size(); ++j)
    if (levels_[j] < lo || levels_[j] > hi)
      throw InvalidArgument(std::string(context) + ": level " + std::to_string(levels_[j]) + " at grid index " +
                            std::to_string(j) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

CsvTable level_function_csv(const LevelFunction& n) {
  CsvTable t({"theta", "level"});
  for (int j = 0; j < n.size(); ++j) t.add_row(row({n.grid().theta(j), n[j]}));
  return t;
}

}  // namespace mtk
