#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mtkit/csv.hpp"
#include "mtkit/random.hpp"

namespace mtk {

/// Everything an experiment depends on. Two runs with equal configs produce
/// byte-identical CSV output.
struct ExperimentConfig {
  std::string name;
  int k_min = 4;
  int k_max = 9;
  int grid = 0;  // 0 picks the resolution-guard grid per k
  int trials = 4;
  std::uint64_t seed = 1;
  int m_min = 1;
  int m_max = 14;
  int lambda = 8;
  bool unsafe = false;
  int jobs = 1;  // worker threads for independent sweep entries
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Maximal-operator ratios for a_r, r = 1 - 2^{-k}: random analytic polynomials
/// and the even-index adversary sum_j phi_{2j}.
CsvTable run_thm1(const ExperimentConfig& cfg);

/// Growth of the maximal operator for d_r (and the d_r_arc variant) on
/// f = sum_{j=1}^{M} phi_{2j}, plus the scaled pointwise minimum of
/// Im sum_{j=j0}^{n} phi_{2j} over [(2n+2)/(2M), (2n+3)/(2M)] for j0 = 0 and 1.
CsvTable run_counterexample(const ExperimentConfig& cfg);

/// Dyadic block of b at level m: derivative sum D_m (closed form, direct sum,
/// finite difference) and max |sum Psi''|.
CsvTable run_lacunary(const ExperimentConfig& cfg);

/// Maximal-operator ratios for b truncated at depth 2^m.
CsvTable run_corollary_b(const ExperimentConfig& cfg);

/// Combined quadratic-form probe; columns trial,r,lambda,sigma,g_norm_sq,ratio.
CsvTable run_probe(const ExperimentConfig& cfg);

CsvTable run_experiment(const ExperimentConfig& cfg);

/// Independent, reproducible stream for one sweep entry.
Rng entry_rng(std::uint64_t seed, long long entry, long long trial = 0);

/// M = floor(1/(2(1-r) log(1/(1-r)))), clamped so that phi_{2M} exists for a
/// sequence of the given length.
int counterexample_M(double r, int length);

/// Constants derived from an experiment table (the calibration record).
using Constants = std::map<std::string, double>;
Constants derive_constants(const std::string& experiment, const CsvTable& table);

/// key=value files; '#' starts a comment.
Constants load_constants(const std::string& path);
void save_constants(const std::string& path, const Constants& c);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

struct PlotSpec {
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string title;
  bool scatter = false;
  /// Optional: plot only rows whose `filter_column` equals `filter_value`.
  std::string filter_column, filter_value;
};

/// Self-contained SVG line (or scatter) plot; identical input gives identical bytes.
std::string render_plot(const CsvTable& table, const PlotSpec& spec);
void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& svg_path);

}  // namespace mtk
