#pragma once

#include <iosfwd>
#include <vector>

#include "mtkit/circle.hpp"

namespace mtk {

/// Analytic polynomial c_0 + c_1 z + ... + c_d z^d. Trailing zero coefficients
/// are dropped, so the leading coefficient is nonzero unless the polynomial is 0.
class PolynomialH2 {
 public:
  PolynomialH2() : c_(Eigen::VectorXcd::Zero(1)) {}
  explicit PolynomialH2(Eigen::VectorXcd coefficients);
  static PolynomialH2 from_roots(const std::vector<cplx>& roots, cplx leading = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::VectorXcd& coefficients() const { return c_; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx(0); }
  cplx at_zero() const { return c_[0]; }
  /// Hardy-space norm, sqrt(sum |c_k|^2).
  double norm() const { return c_.norm(); }
  cplx operator()(cplx z) const;
  /// Samples on the boundary grid.
  GridFunction on_grid(CircleGrid grid) const;

 private:
  Eigen::VectorXcd c_;
};

/// All roots with multiplicity: exact zeros at the origin are split off, the
/// rest come from a companion-matrix eigensolve polished by Newton steps.
/// Each root satisfies |p(z)| / max(1, |z|)^d <= 1e-10 ||p||.
std::vector<cplx> poly_roots(const PolynomialH2& p);

struct BlaschkeFactorization {
  std::vector<cplx> inside_roots;  // |a| < 1 - 1e-9, ordered by increasing modulus
  PolynomialH2 quotient;           // p / B, B the Blaschke product of inside_roots
  std::vector<double> remainders;  // synthetic-division remainder per root
};

inline constexpr double kBoundaryRootTolerance = 1e-9;

BlaschkeFactorization blaschke_factorize(const PolynomialH2& p);

struct UnwindingResult {
  PolynomialH2 original;
  std::vector<cplx> constants;               // F_k(0)
  std::vector<std::vector<cplx>> blocks;     // zeros of B_1, B_2, ...
  PolynomialH2 residual;                     // F_n after the last recorded block
  std::vector<double> remainders;            // largest division remainder per step
  std::vector<double> residual_norms;        // ||F_k|| for k = 0, 1, ...
  bool terminated = false;                   // the series ended exactly
};

/// Iterate F_k = (F_{k-1} - F_{k-1}(0)) / B_k for at most `steps` steps.
UnwindingResult unwind(const PolynomialH2& f, int steps);

/// sum_{i<k} F_i(0) B_1...B_i on the boundary grid.
GridFunction unwinding_partial_sum(const UnwindingResult& res, int k, CircleGrid grid);
/// sup over the grid of |F - (sum_k F_k(0) B_1..B_k + F_n B_1..B_n)|.
double telescoping_error(const UnwindingResult& res, CircleGrid grid);

struct UnwindMtReport {
  int grid_size = 0;
  std::vector<int> boundaries;       // cumulative block sizes D_k
  std::vector<double> discrepancies; // L2 distance of the two partial sums at D_k
  double max_discrepancy = 0.0;
};

/// Compare unwinding partial sums with MT partial sums S_{D_k - 1} for the
/// concatenated block roots. The grid is enlarged to satisfy the basis
/// resolution guard; beyond 2^22 points a ResourceError is raised.
UnwindMtReport unwind_to_mt(const UnwindingResult& res, int grid_size);

inline constexpr int kUnwindMaxGrid = 1 << 22;

/// One JSON object per step: k, Fk0_re, Fk0_im, roots, remainder.
void write_unwinding_jsonl(std::ostream& os, const UnwindingResult& res);

}  // namespace mtk
