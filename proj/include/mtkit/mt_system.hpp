#pragma once

#include "mtkit/blaschke.hpp"
#include "mtkit/csv.hpp"
#include "mtkit/level.hpp"

namespace mtk {

struct SequenceParams {
  double r = 0.0;  // a_r, a_r_extended, d_r, d_r_arc
  int length = 0;  // b (truncation depth), zero
};

/// floor(x) that forgives a relative rounding error of 1e-12 below an integer.
long long floor_tolerant(double x);

int ar_length(double r);  // floor(1/(1-r))
int ar_K(double r);       // floor(1/(4(1-r)))
int dr_length(double r);  // floor(1/((1-r) log(1/(1-r))))

/// Generate one of the named point sequences:
///   a_r          a_n = r e^{2 pi i n (1-r)},                 1 <= n <= floor(1/(1-r))
///   a_r_extended same formula for -K <= n <= floor(1/(1-r))
///   d_r          a_n = r e^{2 pi i n (1-r) log(1/(1-r))},    1 <= n <= dr_length(r)
///   d_r_arc      as d_r with angle step (1-r) log(1/(1-r)) (no 2 pi)
///   b            b_n = (1 - 2^{-m}) e^{2 pi i n 2^{-m}}, m = floor(log2 n), 1 <= n <= length
///   zero         length points at the origin
MTSequence make_sequence(SequenceKind kind, const SequenceParams& params);

CsvTable sequence_csv(const MTSequence& seq);
MTSequence sequence_from_csv(const CsvTable& t);

/// Smallest power of two N with N >= 64 / (1 - max |a_n|).
int required_grid_size(const MTSequence& seq);

struct BasisOptions {
  bool unsafe = false;  // skip the resolution guard
  long long budget = kDefaultTableBudget;
};

/// phi_n(e^{i theta_j}) for n = i_min - 1, ..., i_max - 1, built from the phase table as
/// e^{i psi_n} sqrt(1 - |a_{n+1}|^2) / (1 - conj(a_{n+1}) e^{i theta}).
class MTBasis {
 public:
  const MTSequence& sequence() const { return table_.sequence(); }
  const CircleGrid& grid() const { return table_.grid(); }
  const PhaseTable& table() const { return table_; }
  int first_index() const { return sequence().i_min() - 1; }
  int last_index() const { return sequence().i_max() - 1; }
  int size() const { return static_cast<int>(phi_.cols()); }
  bool has_index(int n) const { return n >= first_index() && n <= last_index(); }

  auto phi(int n) const { return phi_.col(checked(n)); }
  GridFunction function(int n) const { return GridFunction(grid(), phi(n)); }
  const Eigen::MatrixXcd& matrix() const { return phi_; }

 private:
  friend MTBasis build_basis(const MTSequence&, CircleGrid, BasisOptions);
  explicit MTBasis(PhaseTable table) : table_(std::move(table)) {}
  int checked(int n) const;

  PhaseTable table_;
  Eigen::MatrixXcd phi_;
};

MTBasis build_basis(const MTSequence& seq, CircleGrid grid, BasisOptions options = {});

/// Gram matrix G(i, j) = <phi_i, phi_j> in basis order.
Eigen::MatrixXcd gram_matrix(const MTBasis& basis);
/// max |G - I|.
double orthonormality_deviation(const MTBasis& basis);

struct MTExpansion {
  int first_index = 0;
  Eigen::VectorXcd coefficients;

  int last_index() const { return first_index + static_cast<int>(coefficients.size()) - 1; }
  cplx coeff(int n) const { return coefficients[n - first_index]; }
};

/// Coefficients <f, phi_n> for first_index <= n <= n_max.
MTExpansion expand(const GridFunction& f, const MTBasis& basis, int n_max);
MTExpansion expand(const GridFunction& f, const MTBasis& basis);

enum class PartialSumMethod { coefficient, kernel };

/// S_n f = sum_{j = first_index}^{n} <f, phi_j> phi_j.
///
/// The kernel route uses S_n f = P+ f - B P+(conj(B) f) with B = e^{i psi_{n+1}},
/// P+ realized through the conjugate function. It is exact for band-limited f
/// and resolves to the coefficient route up to aliasing of conj(B) f.
GridFunction partial_sum(const GridFunction& f, const MTBasis& basis, int n,
                         PartialSumMethod method = PartialSumMethod::coefficient);

struct MaximalResult {
  GridFunction value;     // sup_n |S_n f|
  LevelFunction argmax;   // smallest n attaining the sup
};

/// Running maximum of |S_n f| over all basis indices; O(L N) time, O(N) extra memory.
MaximalResult maximal_partial_sum(const GridFunction& f, const MTBasis& basis);

CsvTable basis_csv(const MTBasis& basis);
CsvTable expansion_csv(const MTExpansion& e);

}  // namespace mtk
