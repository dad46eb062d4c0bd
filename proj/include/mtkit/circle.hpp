#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

#include "mtkit/error.hpp"

namespace mtk {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to (-pi, pi]. Works for any floating scalar.
template <typename Scalar>
Scalar wrap_angle(Scalar t) {
  const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  Scalar u = std::remainder(t, two_pi);
  if (u <= -std::numbers::pi_v<Scalar>) u += two_pi;
  return u;
}

/// Uniform grid theta_j = 2*pi*j/N on the circle, N a power of two.
class CircleGrid {
 public:
  explicit CircleGrid(int n_points);

  int size() const { return n_; }
  double step() const { return kTwoPi / n_; }
  double theta(int j) const { return step() * j; }
  /// theta_j reduced to (-pi, pi].
  double theta_symmetric(int j) const { return step() * signed_index(j); }
  /// Representative of j modulo N in (-N/2, N/2].
  int signed_index(int j) const {
    const int w = wrap(j);
    return w > n_ / 2 ? w - n_ : w;
  }
  int wrap(long long j) const {
    const long long m = j % n_;
    return static_cast<int>(m < 0 ? m + n_ : m);
  }
  Eigen::VectorXd thetas() const;

  bool operator==(const CircleGrid&) const = default;

 private:
  int n_;
};

CircleGrid make_grid(int n_points);

bool is_power_of_two(long long n);

/// Complex samples of a function on a CircleGrid. Values are always finite.
class GridFunction {
 public:
  GridFunction(CircleGrid grid, Eigen::VectorXcd values);

  static GridFunction zeros(CircleGrid grid);
  static GridFunction constant(CircleGrid grid, cplx c);
  /// e^{i k theta}
  static GridFunction character(CircleGrid grid, int k);
  template <typename Fn>
  static GridFunction from(CircleGrid grid, Fn&& fn) {
    Eigen::VectorXcd v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.theta(j));
    return GridFunction(grid, std::move(v));
  }

  const CircleGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  int size() const { return grid_.size(); }
  cplx operator[](int j) const { return values_[j]; }

  cplx mean() const { return values_.mean(); }
  /// Normalized L2 norm: sqrt((1/N) sum |f_j|^2).
  double norm() const;
  double norm_squared() const;
  bool is_real(double tol = 0.0) const;

  /// Same grid, new values.
  GridFunction with_values(Eigen::VectorXcd values) const { return GridFunction(grid_, std::move(values)); }

 private:
  CircleGrid grid_;
  Eigen::VectorXcd values_;
};

void require_same_grid(const CircleGrid& a, const CircleGrid& b, const char* context);

/// (1/N) sum_j f_j conj(g_j).
cplx inner_product(const GridFunction& f, const GridFunction& g);

/// Relative L2 distance ||f - g|| / ||g|| (absolute when g = 0).
double relative_l2_error(const GridFunction& f, const GridFunction& g);

/// Discrete Fourier coefficients, stored in FFT order (index 0..N/2-1 are the
/// nonnegative frequencies, N/2..N-1 are -N/2..-1).
class SpectrumFunction {
 public:
  SpectrumFunction(CircleGrid grid, Eigen::VectorXcd coefficients);

  const CircleGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& raw() const { return coeffs_; }
  /// Coefficient at frequency k in [-N/2, N/2).
  cplx operator()(int k) const;

 private:
  CircleGrid grid_;
  Eigen::VectorXcd coeffs_;
};

/// Frequency represented by FFT slot idx on an n-point grid, in [-n/2, n/2).
inline int fft_frequency(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

SpectrumFunction to_spectrum(const GridFunction& f);
GridFunction from_spectrum(const SpectrumFunction& s);

/// Multiply the spectrum of f by the given per-slot multiplier (FFT order).
GridFunction apply_multiplier(const GridFunction& f, const Eigen::VectorXcd& multiplier);

GridFunction hardy_project(const GridFunction& f);

/// Centered Hardy-Littlewood maximal function over arcs of 2h+1 grid points.
GridFunction hl_maximal(const GridFunction& f);

}  // namespace mtk
