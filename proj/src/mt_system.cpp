#include "mtkit/mt_system.hpp"

#include <bit>
#include <cmath>

#include "mtkit/carleson.hpp"

namespace mtk {

long long floor_tolerant(double x) { return static_cast<long long>(std::floor(x * (1.0 + 1e-12) + 1e-12)); }

namespace {

void require_r(double r) {
  if (!(r > 0.5 && r < 1.0)) throw InvalidArgument("sequence parameter r must lie in (1/2, 1), got " + fmt17(r));
}

}  // namespace

int ar_length(double r) {
  require_r(r);
  return static_cast<int>(floor_tolerant(1.0 / (1.0 - r)));
}

int ar_K(double r) {
  require_r(r);
  return static_cast<int>(floor_tolerant(1.0 / (4.0 * (1.0 - r))));
}

int dr_length(double r) {
  require_r(r);
  const double eps = 1.0 - r;
  return static_cast<int>(floor_tolerant(1.0 / (eps * std::log(1.0 / eps))));
}

MTSequence make_sequence(SequenceKind kind, const SequenceParams& p) {
  std::vector<DiskPoint> pts;
  switch (kind) {
    case SequenceKind::a_r:
    case SequenceKind::a_r_extended: {
      const int len = ar_length(p.r);
      const int first = kind == SequenceKind::a_r ? 1 : -ar_K(p.r);
      for (int n = first; n <= len; ++n) pts.emplace_back(p.r, kTwoPi * n * (1.0 - p.r));
      return MTSequence(std::move(pts), first, kind, p.r);
    }
    case SequenceKind::d_r:
    case SequenceKind::d_r_arc: {
      const int len = dr_length(p.r);
      const double eps = 1.0 - p.r;
      const double step = eps * std::log(1.0 / eps) * (kind == SequenceKind::d_r ? kTwoPi : 1.0);
      for (int n = 1; n <= len; ++n) pts.emplace_back(p.r, step * n);
      return MTSequence(std::move(pts), 1, kind, p.r);
    }
    case SequenceKind::b: {
      if (p.length < 1) throw InvalidArgument("sequence b needs a truncation length >= 1");
      for (int n = 1; n <= p.length; ++n) {
        const int m = std::bit_width(static_cast<unsigned>(n)) - 1;  // floor(log2 n)
        const double scale = std::ldexp(1.0, -m);
        pts.emplace_back(1.0 - scale, kTwoPi * n * scale);
      }
      return MTSequence(std::move(pts), 1, kind, 0.0);
    }
    case SequenceKind::zero: {
      if (p.length < 0) throw InvalidArgument("sequence length must be >= 0");
      pts.assign(p.length, DiskPoint(0.0, 0.0));
      return MTSequence(std::move(pts), 1, kind, 0.0);
    }
    case SequenceKind::custom:
      break;
  }
  throw InvalidArgument("custom sequences are read from CSV, not generated");
}

CsvTable sequence_csv(const MTSequence& seq) {
  CsvTable t({"index", "modulus", "angle"});
  for (int n = seq.i_min(); n <= seq.i_max(); ++n) t.add_row(row({n, seq.at(n).modulus(), seq.at(n).angle()}));
  return t;
}

MTSequence sequence_from_csv(const CsvTable& t) {
  const auto idx = t.numeric_column("index");
  const auto mod = t.numeric_column("modulus");
  const auto ang = t.numeric_column("angle");
  std::vector<DiskPoint> pts;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && idx[i] != idx[i - 1] + 1) throw InvalidArgument("sequence indices must be consecutive");
    pts.emplace_back(mod[i], ang[i]);
  }
  const int first = idx.empty() ? 1 : static_cast<int>(idx.front());
  return MTSequence(std::move(pts), first, SequenceKind::custom, 0.0);
}

int required_grid_size(const MTSequence& seq) {
  const double need = 64.0 / (1.0 - seq.max_modulus());
  if (need > (1 << 30)) throw ResourceError("sequence needs a grid of " + fmt17(need) + " points");
  int n = 2;
  while (n < need) n *= 2;
  return n;
}

int MTBasis::checked(int n) const {
  if (!has_index(n))
    throw InvalidArgument("basis index " + std::to_string(n) + " outside [" + std::to_string(first_index()) + ", " +
                          std::to_string(last_index()) + "]");
  return n - first_index();
}

MTBasis build_basis(const MTSequence& seq, CircleGrid grid, BasisOptions options) {
  const double need = 64.0 / (1.0 - seq.max_modulus());
  if (!options.unsafe && grid.size() < need * (1.0 - 1e-12))
    throw InvalidArgument("resolution guard: grid of " + std::to_string(grid.size()) + " points is too coarse, need N >= " +
                          std::to_string(static_cast<long long>(std::ceil(need))) + " (required N = " +
                          std::to_string(required_grid_size(seq)) + ")");
  if (2LL * (seq.size() + 1) * grid.size() > options.budget)
    throw ResourceError("basis needs " + std::to_string(2LL * (seq.size() + 1) * grid.size()) +
                        " table entries, budget is " + std::to_string(options.budget));
  MTBasis b(build_phase_table(seq, grid, options.budget));
  const int n = grid.size();
  b.phi_.resize(n, seq.size());
  for (int c = 0; c < seq.size(); ++c) {
    const int idx = b.first_index() + c;
    const DiskPoint& next = seq.at(idx + 1);
    const cplx abar = std::conj(next.value());
    const double norm = std::sqrt(1.0 - next.modulus() * next.modulus());
    for (int j = 0; j < n; ++j) {
      const cplx z = std::polar(1.0, grid.theta(j));
      b.phi_(j, c) = std::polar(1.0, b.table_.psi(idx, j)) * norm / (1.0 - abar * z);
    }
  }
  if (!b.phi_.allFinite()) throw NumericInstability("basis evaluation produced non-finite values");
  return b;
}

Eigen::MatrixXcd gram_matrix(const MTBasis& basis) {
  // <phi_i, phi_j> = (1/N) sum phi_i conj(phi_j) = conj((Phi^H Phi)(i, j)) / N
  return (basis.matrix().adjoint() * basis.matrix()).conjugate() / static_cast<double>(basis.grid().size());
}

double orthonormality_deviation(const MTBasis& basis) {
  const Eigen::MatrixXcd g = gram_matrix(basis);
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

MTExpansion expand(const GridFunction& f, const MTBasis& basis, int n_max) {
  require_same_grid(f.grid(), basis.grid(), "expand");
  if (n_max < basis.first_index() - 1 || n_max > basis.last_index())
    throw InvalidArgument("expansion index " + std::to_string(n_max) + " outside basis range");
  const int count = n_max - basis.first_index() + 1;
  MTExpansion e;
  e.first_index = basis.first_index();
  e.coefficients = basis.matrix().leftCols(count).adjoint() * f.values() / static_cast<double>(f.size());
  return e;
}

MTExpansion expand(const GridFunction& f, const MTBasis& basis) { return expand(f, basis, basis.last_index()); }

namespace {

// P+ h = (h + i H h + mean h) / 2
GridFunction analytic_part(const GridFunction& h) {
  const GridFunction hh = hilbert_H(h);
  Eigen::VectorXcd v = h.values() + cplx(0, 1) * hh.values();
  v.array() += h.mean();
  return h.with_values(v / 2.0);
}

}  // namespace

GridFunction partial_sum(const GridFunction& f, const MTBasis& basis, int n, PartialSumMethod method) {
  require_same_grid(f.grid(), basis.grid(), "partial_sum");
  if (!basis.has_index(n))
    throw InvalidArgument("partial-sum index " + std::to_string(n) + " outside basis range [" +
                          std::to_string(basis.first_index()) + ", " + std::to_string(basis.last_index()) + "]");
  if (method == PartialSumMethod::coefficient) {
    const MTExpansion e = expand(f, basis, n);
    const int count = n - basis.first_index() + 1;
    return f.with_values(basis.matrix().leftCols(count) * e.coefficients);
  }
  const auto psi = basis.table().psi(n + 1);
  Eigen::VectorXcd b(f.size());
  for (int j = 0; j < f.size(); ++j) b[j] = std::polar(1.0, psi[j]);
  const GridFunction inner = analytic_part(f.with_values(b.conjugate().cwiseProduct(f.values())));
  const GridFunction outer = analytic_part(f);
  return f.with_values(outer.values() - b.cwiseProduct(inner.values()));
}

MaximalResult maximal_partial_sum(const GridFunction& f, const MTBasis& basis) {
  require_same_grid(f.grid(), basis.grid(), "maximal_partial_sum");
  const int n = f.size();
  const MTExpansion e = expand(f, basis);
  Eigen::VectorXcd running = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  Eigen::VectorXi arg = Eigen::VectorXi::Constant(n, basis.first_index());
  for (int c = 0; c < basis.size(); ++c) {
    running.noalias() += e.coefficients[c] * basis.matrix().col(c);
    for (int j = 0; j < n; ++j) {
      const double m = std::abs(running[j]);
      // Strict comparison keeps the smallest index on ties.
      if (m > best[j] || c == 0) {
        best[j] = m;
        arg[j] = basis.first_index() + c;
      }
    }
  }
  return {GridFunction(f.grid(), best.cast<cplx>()), LevelFunction(f.grid(), std::move(arg))};
}

CsvTable basis_csv(const MTBasis& basis) {
  CsvTable t({"n", "theta", "re", "im"});
  for (int n = basis.first_index(); n <= basis.last_index(); ++n) {
    const auto col = basis.phi(n);
    for (int j = 0; j < basis.grid().size(); ++j)
      t.add_row(row({n, basis.grid().theta(j), col[j].real(), col[j].imag()}));
  }
  return t;
}

CsvTable expansion_csv(const MTExpansion& e) {
  CsvTable t({"n", "coeff_re", "coeff_im"});
  for (int n = e.first_index; n <= e.last_index(); ++n) t.add_row(row({n, e.coeff(n).real(), e.coeff(n).imag()}));
  return t;
}

}  // namespace mtk
