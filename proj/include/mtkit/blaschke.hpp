#pragma once

#include <string>
#include <vector>

#include "mtkit/circle.hpp"

namespace mtk {

/// A point of the open unit disk stored in polar form.
class DiskPoint {
 public:
  /// Moduli at or above this cap are rejected (Poisson kernels would overflow).
  static constexpr double kModulusCap = 1.0 - 1e-15;

  DiskPoint() = default;
  DiskPoint(double modulus, double angle);
  static DiskPoint from_complex(cplx a);

  double modulus() const { return modulus_; }
  double angle() const { return angle_; }
  cplx value() const { return std::polar(modulus_, angle_); }

 private:
  double modulus_ = 0.0;
  double angle_ = 0.0;
};

enum class SequenceKind { a_r, a_r_extended, b, d_r, d_r_arc, zero, custom };

std::string to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(const std::string& name);

/// Finite sequence a_{i_min}, ..., a_{i_max} of disk points. i_min may be
/// negative; an empty sequence has i_max = i_min - 1.
class MTSequence {
 public:
  MTSequence() = default;
  MTSequence(std::vector<DiskPoint> points, int i_min = 1, SequenceKind kind = SequenceKind::custom, double r = 0.0);

  int i_min() const { return i_min_; }
  int i_max() const { return i_min_ + size() - 1; }
  int size() const { return static_cast<int>(points_.size()); }
  bool empty() const { return points_.empty(); }
  SequenceKind kind() const { return kind_; }
  double r() const { return r_; }

  const DiskPoint& at(int n) const;
  const std::vector<DiskPoint>& points() const { return points_; }
  double max_modulus() const;
  /// Keep the indices i_min..new_i_max.
  MTSequence truncated(int new_i_max) const;

 private:
  std::vector<DiskPoint> points_;
  int i_min_ = 1;
  SequenceKind kind_ = SequenceKind::custom;
  double r_ = 0.0;
};

// Boundary phase of the disk automorphism z -> (conj(w)/|w|)(z - w)/(1 - conj(w) z)
// at z = e^{ix}. With u = x - arg w reduced to (-pi, pi] the phase is
//   u + 2 atan2(r sin u, 1 - r cos u),
// which equals the arcsine form and stays accurate for r close to 1. The
// denominator is evaluated as (1 - r) + 2 r sin^2(u/2) to avoid cancellation.
template <typename Scalar>
Scalar mobius_phase(Scalar modulus, Scalar angle, Scalar x) {
  if (modulus == Scalar(0)) return x;
  const Scalar u = wrap_angle(x - angle);
  const Scalar h = std::sin(u / 2);
  const Scalar denom = (1 - modulus) + 2 * modulus * h * h;
  return u + 2 * std::atan2(modulus * std::sin(u), denom);
}

/// First derivative is the Poisson kernel; second derivative in closed form.
template <typename Scalar>
Scalar mobius_phase_deriv(Scalar modulus, Scalar angle, Scalar x, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  const Scalar u = wrap_angle(x - angle);
  const Scalar h = std::sin(u / 2);
  const Scalar d = (1 - modulus) * (1 - modulus) + 4 * modulus * h * h;  // 1 + r^2 - 2 r cos u
  const Scalar num = 1 - modulus * modulus;
  if (order == 1) return num / d;
  return -2 * modulus * num * std::sin(u) / (d * d);
}

inline double mobius_phase(const DiskPoint& w, double x) { return mobius_phase(w.modulus(), w.angle(), x); }
inline double mobius_phase_deriv(const DiskPoint& w, double x, int order) {
  return mobius_phase_deriv(w.modulus(), w.angle(), x, order);
}

/// Direct Moebius factor; equals z when w = 0.
cplx mobius_factor(const DiskPoint& w, cplx z);

inline constexpr long long kDefaultTableBudget = 1LL << 28;

/// Cumulative phases psi_n(theta_j) = sum_{i_min <= m <= n} Psi_{a_m}(theta_j)
/// for levels n = i_min - 1 (all zeros) through i_max.
class PhaseTable {
 public:
  const MTSequence& sequence() const { return seq_; }
  const CircleGrid& grid() const { return grid_; }
  int first_level() const { return seq_.i_min() - 1; }
  int last_level() const { return seq_.i_max(); }
  bool has_level(int n) const { return n >= first_level() && n <= last_level(); }

  auto psi(int n) const { return psi_.col(checked(n)); }
  double psi(int n, int j) const { return psi_(j, checked(n)); }
  const Eigen::MatrixXd& matrix() const { return psi_; }

 private:
  friend PhaseTable build_phase_table(const MTSequence&, CircleGrid, long long);
  PhaseTable(MTSequence seq, CircleGrid grid) : seq_(std::move(seq)), grid_(grid) {}
  int checked(int n) const;

  MTSequence seq_;
  CircleGrid grid_;
  Eigen::MatrixXd psi_;
};

PhaseTable build_phase_table(const MTSequence& seq, CircleGrid grid, long long budget = kDefaultTableBudget);

/// B_n(z) as a product of Moebius factors over indices i_min..n (1 when n = i_min - 1).
cplx blaschke_eval(const MTSequence& seq, int n, cplx z);

/// k(x) = floor(x / (2 pi (1 - r))).
long long cell_index(double r, double x);

}  // namespace mtk
