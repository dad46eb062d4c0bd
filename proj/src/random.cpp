#include "mtkit/random.hpp"

#include <algorithm>
#include <vector>

namespace mtk {

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

cplx complex_normal(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return cplx(re, im) / std::sqrt(2.0);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

GridFunction random_bandlimited(CircleGrid grid, int bandwidth, Rng& rng, bool analytic) {
  const int n = grid.size();
  if (bandwidth < 0 || bandwidth >= n / 2) throw InvalidArgument("bandwidth must lie in [0, N/2)");
  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(n);
  for (int k = analytic ? 0 : -bandwidth; k <= bandwidth; ++k) spec[k >= 0 ? k : k + n] = complex_normal(rng);
  return from_spectrum(SpectrumFunction(grid, std::move(spec)));
}

GridFunction random_analytic_polynomial(CircleGrid grid, int degree, Rng& rng) {
  return random_bandlimited(grid, degree, rng, true);
}

GridFunction random_real(CircleGrid grid, Rng& rng) {
  Eigen::VectorXcd v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = standard_normal(rng);
  return GridFunction(grid, std::move(v));
}

LevelFunction random_step_levels(CircleGrid grid, int lo, int hi, int pieces, Rng& rng) {
  const int n = grid.size();
  std::vector<int> cuts{0};
  for (int p = 1; p < pieces; ++p) cuts.push_back(uniform_int(rng, 0, n - 1));
  std::sort(cuts.begin(), cuts.end());
  Eigen::VectorXi levels(n);
  size_t piece = 0;
  int current = uniform_int(rng, lo, hi);
  for (int j = 0; j < n; ++j) {
    while (piece + 1 < cuts.size() && j >= cuts[piece + 1]) {
      ++piece;
      current = uniform_int(rng, lo, hi);
    }
    levels[j] = current;
  }
  return LevelFunction(grid, std::move(levels));
}

LevelFunction random_levels(CircleGrid grid, int lo, int hi, Rng& rng) {
  Eigen::VectorXi levels(grid.size());
  for (int j = 0; j < grid.size(); ++j) levels[j] = uniform_int(rng, lo, hi);
  return LevelFunction(grid, std::move(levels));
}

}  // namespace mtk
