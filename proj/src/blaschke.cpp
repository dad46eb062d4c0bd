#include "mtkit/blaschke.hpp"

#include <algorithm>
#include <cmath>

namespace mtk {

DiskPoint::DiskPoint(double modulus, double angle) : modulus_(modulus), angle_(angle) {
  if (!(modulus >= 0.0) || !(modulus < kModulusCap) || !std::isfinite(angle))
    throw InvalidArgument("disk point modulus must lie in [0, 1 - 1e-15), got " + std::to_string(modulus));
  // The angle of the origin is irrelevant; normalize it so equal points compare equal.
  if (modulus == 0.0) angle_ = 0.0;
}

DiskPoint DiskPoint::from_complex(cplx a) { return DiskPoint(std::abs(a), std::arg(a)); }

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::a_r: return "a_r";
    case SequenceKind::a_r_extended: return "a_r_extended";
    case SequenceKind::b: return "b";
    case SequenceKind::d_r: return "d_r";
    case SequenceKind::d_r_arc: return "d_r_arc";
    case SequenceKind::zero: return "zero";
    case SequenceKind::custom: return "custom";
  }
  return "custom";
}

SequenceKind parse_sequence_kind(const std::string& name) {
  for (auto k : {SequenceKind::a_r, SequenceKind::a_r_extended, SequenceKind::b, SequenceKind::d_r,
                 SequenceKind::d_r_arc, SequenceKind::zero, SequenceKind::custom})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown sequence kind '" + name + "'");
}

MTSequence::MTSequence(std::vector<DiskPoint> points, int i_min, SequenceKind kind, double r)
    : points_(std::move(points)), i_min_(i_min), kind_(kind), r_(r) {}

const DiskPoint& MTSequence::at(int n) const {
  if (n < i_min() || n > i_max())
    throw InvalidArgument("sequence index " + std::to_string(n) + " outside [" + std::to_string(i_min()) + ", " +
                          std::to_string(i_max()) + "]");
  return points_[n - i_min_];
}

double MTSequence::max_modulus() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.modulus());
  return m;
}

MTSequence MTSequence::truncated(int new_i_max) const {
  if (new_i_max > i_max() || new_i_max < i_min() - 1)
    throw InvalidArgument("truncation index " + std::to_string(new_i_max) + " outside sequence range");
  return MTSequence(std::vector<DiskPoint>(points_.begin(), points_.begin() + (new_i_max - i_min_ + 1)), i_min_,
                    kind_, r_);
}

cplx mobius_factor(const DiskPoint& w, cplx z) {
  if (w.modulus() == 0.0) return z;
  const cplx a = w.value();
  return std::polar(1.0, -w.angle()) * (z - a) / (1.0 - std::conj(a) * z);
}

int PhaseTable::checked(int n) const {
  if (!has_level(n))
    throw InvalidArgument("phase level " + std::to_string(n) + " outside table range [" +
                          std::to_string(first_level()) + ", " + std::to_string(last_level()) + "]");
  return n - first_level();
}

PhaseTable build_phase_table(const MTSequence& seq, CircleGrid grid, long long budget) {
  const long long levels = seq.size() + 1;
  const long long entries = levels * grid.size();
  if (entries > budget)
    throw ResourceError("phase table needs " + std::to_string(entries) + " entries (" + std::to_string(levels) +
                        " levels x " + std::to_string(grid.size()) + " points), budget is " + std::to_string(budget));
  PhaseTable t(seq, grid);
  t.psi_.resize(grid.size(), levels);
  t.psi_.col(0).setZero();
  const Eigen::VectorXd theta = grid.thetas();
  for (int c = 1; c < levels; ++c) {
    const DiskPoint& w = seq.points()[c - 1];
    for (int j = 0; j < grid.size(); ++j) t.psi_(j, c) = t.psi_(j, c - 1) + mobius_phase(w, theta[j]);
  }
  return t;
}

cplx blaschke_eval(const MTSequence& seq, int n, cplx z) {
  if (n < seq.i_min() - 1 || n > seq.i_max())
    throw InvalidArgument("Blaschke index " + std::to_string(n) + " outside [" + std::to_string(seq.i_min() - 1) +
                          ", " + std::to_string(seq.i_max()) + "]");
  cplx b = 1.0;
  for (int m = seq.i_min(); m <= n; ++m) b *= mobius_factor(seq.at(m), z);
  return b;
}

long long cell_index(double r, double x) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("cell_index needs 0 < r < 1");
  return static_cast<long long>(std::floor(x / (kTwoPi * (1.0 - r))));
}

}  // namespace mtk
