#include "mtkit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "mtkit/carleson.hpp"
#include "mtkit/mt_system.hpp"
#include "mtkit/probe.hpp"

namespace mtk {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"thm1", "counterexample", "lacunary", "corollary_b", "probe"};
  return names;
}

Rng entry_rng(std::uint64_t seed, long long entry, long long trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(entry), static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

// Runs fn(entry) for every entry, at most `jobs` at a time, and concatenates
// the rows in entry order whatever the completion order.
Rows sweep(const std::vector<int>& entries, int jobs, const std::function<Rows(int)>& fn) {
  std::vector<Rows> parts(entries.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < entries.size(); ++i) parts[i] = fn(entries[i]);
  } else {
    for (size_t start = 0; start < entries.size(); start += jobs) {
      std::vector<std::future<Rows>> running;
      const size_t stop = std::min(entries.size(), start + static_cast<size_t>(jobs));
      for (size_t i = start; i < stop; ++i) running.push_back(std::async(std::launch::async, fn, entries[i]));
      for (size_t i = start; i < stop; ++i) parts[i] = running[i - start].get();
    }
  }
  Rows all;
  for (auto& p : parts)
    for (auto& r : p) all.push_back(std::move(r));
  return all;
}

std::vector<int> range(int lo, int hi) {
  if (lo > hi) throw InvalidArgument("empty sweep range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

double r_of_k(int k) {
  if (k < 2 || k > 30) throw InvalidArgument("k must lie in [2, 30], got " + std::to_string(k));
  return 1.0 - std::ldexp(1.0, -k);
}

CircleGrid experiment_grid(const ExperimentConfig& cfg, const MTSequence& seq) {
  return CircleGrid(cfg.grid > 0 ? cfg.grid : required_grid_size(seq));
}

GridFunction even_index_sum(const MTBasis& basis, int j_from, int j_to) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.grid().size());
  for (int j = j_from; j <= j_to; ++j) v += basis.phi(2 * j);
  return GridFunction(basis.grid(), std::move(v));
}

double maximal_ratio(const GridFunction& f, const MTBasis& basis) {
  return maximal_partial_sum(f, basis).value.norm() / f.norm();
}

struct RatioPair {
  double random = 0.0, adversary = 0.0;
};

RatioPair stress_ratios(const MTBasis& basis, const ExperimentConfig& cfg, Rng& rng) {
  RatioPair out;
  for (int t = 0; t < cfg.trials; ++t) {
    // An unsafe coarse grid may not resolve degree L; stay below Nyquist.
    const int degree = std::min(basis.size(), basis.grid().size() / 2 - 1);
    const GridFunction f = random_analytic_polynomial(basis.grid(), degree, rng);
    out.random = std::max(out.random, maximal_ratio(f, basis));
  }
  out.adversary = maximal_ratio(even_index_sum(basis, 0, basis.last_index() / 2), basis);
  return out;
}

}  // namespace

CsvTable run_thm1(const ExperimentConfig& cfg) {
  CsvTable t({"k", "r", "L", "grid", "rho_random", "rho_adversary", "rho"});
  const Rows rows = sweep(range(cfg.k_min, cfg.k_max), cfg.jobs, [&](int k) -> Rows {
    const double r = r_of_k(k);
    const MTSequence seq = make_sequence(SequenceKind::a_r, {r, 0});
    const MTBasis basis = build_basis(seq, experiment_grid(cfg, seq), {cfg.unsafe});
    Rng rng = entry_rng(cfg.seed, k);
    const RatioPair p = stress_ratios(basis, cfg, rng);
    return {row({k, r, seq.size(), basis.grid().size(), p.random, p.adversary, std::max(p.random, p.adversary)})};
  });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

int counterexample_M(double r, int length) {
  const double eps = 1.0 - r;
  const int m = static_cast<int>(floor_tolerant(1.0 / (2.0 * eps * std::log(1.0 / eps))));
  return std::max(1, std::min(m, (length - 1) / 2));
}

namespace {

// sqrt(1-r) * min over n <= M and y in [(2n+2)/(2M), (2n+3)/(2M)] of Im sum_{j=j0}^{n} phi_{2j}(y).
double claim_minimum(const MTBasis& basis, int M, int j0, double r) {
  const CircleGrid& grid = basis.grid();
  Eigen::VectorXcd partial = Eigen::VectorXcd::Zero(grid.size());
  double best = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= M; ++n) {
    if (n >= j0) partial += basis.phi(2 * n);
    const double lo = (2.0 * n + 2.0) / (2.0 * M);
    const double hi = (2.0 * n + 3.0) / (2.0 * M);
    const int j_lo = static_cast<int>(std::ceil(lo / grid.step()));
    const int j_hi = static_cast<int>(std::floor(hi / grid.step()));
    for (int j = j_lo; j <= j_hi; ++j) best = std::min(best, partial[grid.wrap(j)].imag());
  }
  return std::sqrt(1.0 - r) * best;
}

}  // namespace

CsvTable run_counterexample(const ExperimentConfig& cfg) {
  CsvTable t({"variant", "k", "r", "L", "M", "grid", "ratio_sq", "claim_min_j0", "claim_min_j1"});
  const Rows rows = sweep(range(cfg.k_min, cfg.k_max), cfg.jobs, [&](int k) -> Rows {
    Rows out;
    const double r = r_of_k(k);
    for (SequenceKind kind : {SequenceKind::d_r, SequenceKind::d_r_arc}) {
      const MTSequence seq = make_sequence(kind, {r, 0});
      if (seq.size() < 3) throw InvalidArgument("k too small: d_r has fewer than 3 points");
      const MTBasis basis = build_basis(seq, experiment_grid(cfg, seq), {cfg.unsafe});
      const int M = counterexample_M(r, seq.size());
      const GridFunction f = even_index_sum(basis, 1, M);
      const double ratio = maximal_ratio(f, basis);
      out.push_back(row({to_string(kind), k, r, seq.size(), M, basis.grid().size(), ratio * ratio,
                         claim_minimum(basis, M, 0, r), claim_minimum(basis, M, 1, r)}));
    }
    return out;
  });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

CsvTable run_lacunary(const ExperimentConfig& cfg) {
  CsvTable t({"m", "r", "M", "D_closed", "D_direct", "D_minus_2m", "D_fd_rel_err", "psi2_max", "psi2_direct_rel_err",
              "psi2_fd_rel_err"});
  const Rows rows = sweep(range(cfg.m_min, cfg.m_max), cfg.jobs, [&](int m) -> Rows {
    if (m < 1 || m > 20) throw InvalidArgument("lacunary level m must lie in [1, 20]");
    const long long M = 1LL << m;
    const double r = 1.0 - std::ldexp(1.0, -m);
    // Points b_n, 2^m <= n < 2^{m+1}: modulus r, angles 2 pi n 2^{-m}.
    const MTSequence b = make_sequence(SequenceKind::b, {0, static_cast<int>(2 * M - 1)});
    std::vector<DiskPoint> block(b.points().begin() + (M - 1), b.points().end());

    // Summing the Poisson kernel over all M-th roots of unity collapses to
    // M P_{r^M}(M y); differentiating once more gives the Psi'' sum.
    const double rho = std::pow(r, static_cast<double>(M));
    const double d_closed = static_cast<double>(M) * (1.0 + rho) / (1.0 - rho);
    double d_direct = 0.0;
    for (const auto& w : block) d_direct += mobius_phase_deriv(w, 0.0, 1);

    const long double h = 1e-4L / static_cast<long double>(M);
    long double diff = 0.0L;
    for (const auto& w : block) {
      const long double a = mobius_phase<long double>(w.modulus(), w.angle(), h);
      const long double c = mobius_phase<long double>(w.modulus(), w.angle(), -h);
      diff += wrap_angle(a - c);
    }
    const double d_fd = static_cast<double>(diff / (2.0L * h));

    // max_t |Psi''_rho(t)| on a fine grid of one period, then rescale.
    const int samples = 1 << 16;
    double best = 0.0, t_star = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double tt = -kPi + kTwoPi * j / samples;
      const double v = std::abs(mobius_phase_deriv(rho, 0.0, tt, 2));
      if (v > best) best = v, t_star = tt;
    }
    const double psi2_max = static_cast<double>(M) * static_cast<double>(M) * best;
    const double y_star = t_star / static_cast<double>(M);
    double direct2 = 0.0;
    long double fd2 = 0.0L;
    for (const auto& w : block) {
      direct2 += mobius_phase_deriv(w, y_star, 2);
      fd2 += mobius_phase_deriv<long double>(w.modulus(), w.angle(), y_star + h, 1) -
             mobius_phase_deriv<long double>(w.modulus(), w.angle(), y_star - h, 1);
    }
    const double psi2_closed = static_cast<double>(M) * static_cast<double>(M) * mobius_phase_deriv(rho, 0.0, t_star, 2);
    const double fd2d = static_cast<double>(fd2 / (2.0L * h));
    return {row({m, r, static_cast<long long>(M), d_closed, d_direct, d_closed - static_cast<double>(M),
                 std::abs(d_fd - d_closed) / d_closed, psi2_max, std::abs(direct2 - psi2_closed) / std::abs(psi2_closed),
                 std::abs(fd2d - psi2_closed) / std::abs(psi2_closed)})};
  });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

CsvTable run_corollary_b(const ExperimentConfig& cfg) {
  CsvTable t({"m", "depth", "grid", "rho_random", "rho_adversary", "rho"});
  const Rows rows = sweep(range(cfg.m_min, cfg.m_max), cfg.jobs, [&](int m) -> Rows {
    if (m < 1 || m > 12) throw InvalidArgument("corollary depth exponent must lie in [1, 12]");
    const int depth = 1 << m;
    const MTSequence seq = make_sequence(SequenceKind::b, {0, depth});
    const MTBasis basis = build_basis(seq, experiment_grid(cfg, seq), {cfg.unsafe});
    Rng rng = entry_rng(cfg.seed, m);
    const RatioPair p = stress_ratios(basis, cfg, rng);
    return {row({m, depth, basis.grid().size(), p.random, p.adversary, std::max(p.random, p.adversary)})};
  });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

CsvTable run_probe(const ExperimentConfig& cfg) {
  CsvTable t({"trial", "r", "lambda", "sigma", "g_norm_sq", "ratio"});
  const Rows rows = sweep(range(cfg.k_min, cfg.k_max), cfg.jobs, [&](int k) -> Rows {
    const double r = r_of_k(k);
    const ProbeConfig pc = ProbeConfig::make(r, cfg.lambda);
    int n = cfg.grid;
    if (n <= 0) {
      n = probe_grid_size(r, 1);
      while (n < kQuadraticFormMaxGrid && n * (1.0 - r) < 8) n *= 2;
    }
    if (n > kQuadraticFormMaxGrid)
      throw ResourceError("probe at k = " + std::to_string(k) + " needs a grid of " + std::to_string(n) +
                          " points; the quadratic form is limited to " + std::to_string(kQuadraticFormMaxGrid));
    const ProbeContext ctx(pc, n);
    Rows out;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = entry_rng(cfg.seed, k, trial);
      const LevelFunction level = random_levels(ctx.grid(), -pc.level_bound, pc.level_bound, rng);
      const ESet e = build_E_and_p(ctx.maps(), level);
      Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
      for (int j = 0; j < n; ++j) {
        const double v = standard_normal(rng);
        if (e.member[j]) g[j] = v;
      }
      const Claim2Terms c = claim2_sigma(ctx, GridFunction(ctx.grid(), std::move(g)), level);
      const double ratio = c.g_norm_sq > 0 ? c.sigma / c.g_norm_sq : 0.0;
      out.push_back(row({trial, r, pc.lambda, c.sigma, c.g_norm_sq, ratio}));
    }
    return out;
  });
  for (const auto& r : rows) t.add_row(r);
  return t;
}

CsvTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 0) throw InvalidArgument("trials must be >= 0");
  if (cfg.name == "thm1") return run_thm1(cfg);
  if (cfg.name == "counterexample") return run_counterexample(cfg);
  if (cfg.name == "lacunary") return run_lacunary(cfg);
  if (cfg.name == "corollary_b") return run_corollary_b(cfg);
  if (cfg.name == "probe") return run_probe(cfg);
  throw InvalidArgument("unknown experiment '" + cfg.name + "'");
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least squares needs two or more points");
  Eigen::MatrixXd a(x.size(), 2);
  Eigen::VectorXd b(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    b[i] = y[i];
  }
  return a.colPivHouseholderQr().solve(b)[1];
}

namespace {

std::vector<double> select(const CsvTable& t, const std::string& col, const std::string& key, const std::string& val) {
  const int kc = t.column(key);
  CsvTable sub(t.header());
  for (const auto& r : t.rows())
    if (r[kc] == val) sub.add_row(r);
  return sub.numeric_column(col);
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

Constants derive_constants(const std::string& experiment, const CsvTable& t) {
  if (t.empty()) throw InvalidArgument("cannot derive constants from an empty table");
  Constants c;
  if (experiment == "thm1" || experiment == "corollary_b") {
    const auto rho = t.numeric_column("rho");
    c[experiment + ".rho_max"] = max_of(rho);
    c[experiment + ".rho_min"] = min_of(rho);
    c[experiment + ".band"] = max_of(rho) / min_of(rho);
  } else if (experiment == "counterexample") {
    for (const std::string v : {"d_r", "d_r_arc"}) {
      const auto k = select(t, "k", "variant", v);
      const auto rsq = select(t, "ratio_sq", "variant", v);
      std::vector<double> klog(k.size());
      for (size_t i = 0; i < k.size(); ++i) klog[i] = k[i] * std::log(2.0);
      double min_step = std::numeric_limits<double>::infinity();
      for (size_t i = 1; i < rsq.size(); ++i) min_step = std::min(min_step, rsq[i] - rsq[i - 1]);
      if (k.size() >= 2) {
        c["counterexample." + v + ".slope"] = ls_slope(klog, rsq);
        c["counterexample." + v + ".min_increment"] = min_step;
      }
      const auto j0 = select(t, "claim_min_j0", "variant", v);
      c["counterexample." + v + ".claim_c_min"] = min_of(j0);
      c["counterexample." + v + ".claim_c_max"] = max_of(j0);
    }
  } else if (experiment == "lacunary") {
    const auto m = t.numeric_column("m");
    const auto dm = t.numeric_column("D_minus_2m");
    const auto p2 = t.numeric_column("psi2_max");
    double C = 0, Cp = 0, C_all = 0, Cp_all = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      const double a = std::abs(dm[i]) / m[i], b = p2[i] / m[i];
      if (m[i] <= 7) C = std::max(C, a), Cp = std::max(Cp, b);
      C_all = std::max(C_all, a), Cp_all = std::max(Cp_all, b);
    }
    c["lacunary.C_calibrated"] = C;
    c["lacunary.Cprime_calibrated"] = Cp;
    c["lacunary.C_observed"] = C_all;
    c["lacunary.Cprime_observed"] = Cp_all;
  } else if (experiment == "probe") {
    const auto ratio = t.numeric_column("ratio");
    c["probe.ratio_max"] = max_of(ratio);
    c["probe.ratio_min"] = min_of(ratio);
  } else {
    throw InvalidArgument("unknown experiment '" + experiment + "'");
  }
  return c;
}

}  // namespace mtk
