#pragma once

#include <vector>

#include "mtkit/blaschke.hpp"
#include "mtkit/csv.hpp"
#include "mtkit/level.hpp"

namespace mtk {

/// Parameters of the reflection/dilation probe. The dilation factor is an even
/// integer standing in for the (numerically infeasible) constant e^{2 pi^2}.
struct ProbeConfig {
  double r = 0.0;
  int lambda = 8;
  int K = 0;            // floor(1/(4(1-r)))
  int level_bound = 0;  // floor(1/(16 lambda (1-r)))

  static ProbeConfig make(double r, int lambda = 8);
  double cell_width() const { return kTwoPi * (1.0 - r); }
};

/// tau(x) = 2 pi (1-r)(2 k(x) + 1) - x: reflection of x inside its cell.
double tau(const ProbeConfig& cfg, double x);
/// Even integer lambda k(x) (rounded up to even for a general factor).
long long ktilde(const ProbeConfig& cfg, double x);
long long ktilde_of_cell(const ProbeConfig& cfg, long long k);
/// eta(x) = (ktilde(x) - k(x)) 2 pi (1-r) + x: moves cell k(x) to cell ktilde(x).
double eta(const ProbeConfig& cfg, double x);

/// Grid on which every cell holds exactly c = N(1-r) samples. Sample s (signed
/// index in (-N/2, N/2]) stands for the arc [s h, (s+1) h), so tau and eta
/// become exact index permutations:
///   tau:  s -> (2k+1)c - 1 - s,   eta:  s -> s + (ktilde - k)c.
class ProbeGrid {
 public:
  ProbeGrid(const ProbeConfig& cfg, CircleGrid grid);

  const ProbeConfig& config() const { return cfg_; }
  const CircleGrid& grid() const { return grid_; }
  int samples_per_cell() const { return c_; }

  long long cell(int j) const;
  int tau_index(int j) const;
  int eta_index(int j) const;
  /// Grid point inside [-1/(2 lambda), 1/(2 lambda)].
  bool in_interval(int j) const;

 private:
  ProbeConfig cfg_;
  CircleGrid grid_;
  int c_;
};

struct ESet {
  std::vector<bool> member;  // indicator of E on the grid
  Eigen::VectorXi p;         // p(x) = N(x) - k(x)
  int count() const;
};

/// E = {x in [-1/(2 lambda), 1/(2 lambda)] : k(x) even, p(x) >= 0}.
ESet build_E_and_p(const ProbeGrid& pg, const LevelFunction& level);

struct AssociatedPairs {
  GridFunction f, g_tilde, f_tilde;
  LevelFunction M, N_tilde, M_tilde;
};

/// The reflected pair (f, M), the dilated pair (g~, N~) and the reflected-dilated
/// pair (f~, M~). Levels are zero off the supports.
AssociatedPairs associated_pairs(const ProbeGrid& pg, const GridFunction& g, const LevelFunction& level);

/// M~ recomputed from N~ alone: (k(x) + 1 - p_{N~}(tau x)) on eta(tau(E)).
LevelFunction m_tilde_from_identity(const ProbeGrid& pg, const LevelFunction& level, const LevelFunction& n_tilde);

/// Probe context: config, grid maps and the phase table of the extended
/// sequence restricted to indices -K..K.
class ProbeContext {
 public:
  ProbeContext(const ProbeConfig& cfg, int grid_size);

  const ProbeGrid& maps() const { return maps_; }
  const PhaseTable& table() const { return table_; }
  const CircleGrid& grid() const { return maps_.grid(); }
  const ProbeConfig& config() const { return maps_.config(); }

 private:
  ProbeGrid maps_;
  PhaseTable table_;
};

/// Smallest power-of-two grid with an integral number (>= 1) of samples per cell.
int probe_grid_size(double r, int min_samples_per_cell = 1);

struct Claim2Terms {
  double b_g = 0, b_g_tilde = 0, b_f = 0, b_f_tilde = 0;
  double sigma = 0;      // b_g + lambda b_g_tilde + b_f + lambda b_f_tilde
  double g_norm_sq = 0;
};

Claim2Terms claim2_sigma(const ProbeContext& ctx, const GridFunction& g, const LevelFunction& level);

/// Sparse real sequence on nonnegative integers.
struct SparseSeq {
  std::vector<long long> support;
  std::vector<double> values;

  SparseSeq() = default;
  SparseSeq(std::vector<long long> support, std::vector<double> values);
  double norm() const;
};

inline constexpr size_t kModelMaxSupport = 1 << 13;

/// T(alpha) = -sum_{j < j'} alpha_j alpha_j' sin(log(j' - j)/(2 pi)) / (j' - j).
double model_T(const SparseSeq& alpha);

/// beta_{floor(lambda j)} = alpha_j; the floor is taken in extended precision.
SparseSeq model_dilate(const SparseSeq& alpha, long double lambda);

/// e^{2 pi^2} in extended precision.
long double model_lambda();

}  // namespace mtk
