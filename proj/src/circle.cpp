#include "mtkit/circle.hpp"

#include <algorithm>
#include <string>
#include <unsupported/Eigen/FFT>

namespace mtk {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

CircleGrid::CircleGrid(int n_points) : n_(n_points) {
  if (n_points < 2 || !is_power_of_two(n_points))
    throw InvalidArgument("grid size must be a power of two >= 2, got " + std::to_string(n_points));
}

CircleGrid make_grid(int n_points) { return CircleGrid(n_points); }

Eigen::VectorXd CircleGrid::thetas() const {
  Eigen::VectorXd t(n_);
  for (int j = 0; j < n_; ++j) t[j] = theta(j);
  return t;
}

GridFunction::GridFunction(CircleGrid grid, Eigen::VectorXcd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("grid function has " + std::to_string(values_.size()) + " samples, grid has " +
                          std::to_string(grid_.size()));
  if (!values_.allFinite()) throw NumericInstability("grid function contains non-finite samples");
}

GridFunction GridFunction::zeros(CircleGrid grid) { return GridFunction(grid, Eigen::VectorXcd::Zero(grid.size())); }

GridFunction GridFunction::constant(CircleGrid grid, cplx c) {
  return GridFunction(grid, Eigen::VectorXcd::Constant(grid.size(), c));
}

GridFunction GridFunction::character(CircleGrid grid, int k) {
  // Reduce k*j modulo N so large frequencies stay exact.
  Eigen::VectorXcd v(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const int m = grid.wrap(static_cast<long long>(k) * j);
    v[j] = std::polar(1.0, grid.theta(m));
  }
  return GridFunction(grid, std::move(v));
}

double GridFunction::norm_squared() const { return values_.squaredNorm() / size(); }
double GridFunction::norm() const { return std::sqrt(norm_squared()); }

bool GridFunction::is_real(double tol) const { return values_.imag().cwiseAbs().maxCoeff() <= tol; }

void require_same_grid(const CircleGrid& a, const CircleGrid& b, const char* context) {
  if (!(a == b))
    throw InvalidArgument(std::string(context) + ": grid mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  // Eigen's dot conjugates its first argument.
  return g.values().dot(f.values()) / static_cast<double>(f.size());
}

double relative_l2_error(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid(), g.grid(), "relative_l2_error");
  const double diff = (f.values() - g.values()).norm();
  const double ref = g.values().norm();
  return ref > 0 ? diff / ref : diff;
}

SpectrumFunction::SpectrumFunction(CircleGrid grid, Eigen::VectorXcd coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.size()) throw InvalidArgument("spectrum length does not match grid");
}

cplx SpectrumFunction::operator()(int k) const {
  const int n = grid_.size();
  if (k < -n / 2 || k >= n / 2) throw InvalidArgument("frequency " + std::to_string(k) + " outside [-N/2, N/2)");
  return coeffs_[k >= 0 ? k : k + n];
}

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine = [] {
    Eigen::FFT<double> e;
    e.SetFlag(Eigen::FFT<double>::Unscaled);
    return e;
  }();
  return engine;
}

}  // namespace

SpectrumFunction to_spectrum(const GridFunction& f) {
  Eigen::VectorXcd out(f.size());
  fft_engine().fwd(out, f.values());
  out /= static_cast<double>(f.size());
  return SpectrumFunction(f.grid(), std::move(out));
}

GridFunction from_spectrum(const SpectrumFunction& s) {
  Eigen::VectorXcd out(s.grid().size());
  fft_engine().inv(out, s.raw());
  return GridFunction(s.grid(), std::move(out));
}

GridFunction apply_multiplier(const GridFunction& f, const Eigen::VectorXcd& multiplier) {
  if (multiplier.size() != f.size()) throw InvalidArgument("multiplier length does not match grid");
  SpectrumFunction s = to_spectrum(f);
  return from_spectrum(SpectrumFunction(f.grid(), s.raw().cwiseProduct(multiplier)));
}

GridFunction hardy_project(const GridFunction& f) {
  const int n = f.size();
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(n);
  m.head(n / 2).setOnes();
  return apply_multiplier(f, m);
}

GridFunction hl_maximal(const GridFunction& f) {
  const int n = f.size();
  const Eigen::VectorXd a = f.values().cwiseAbs();
  const double full_mean = a.mean();
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    double sum = a[i];
    double best = sum;
    for (int h = 1; h < n / 2; ++h) {
      sum += a[f.grid().wrap(i - h)] + a[f.grid().wrap(i + h)];
      best = std::max(best, sum / (2 * h + 1));
    }
    // Half-length pi: the arc is the whole circle.
    out[i] = std::max(best, full_mean);
  }
  return GridFunction(f.grid(), std::move(out));
}

}  // namespace mtk
