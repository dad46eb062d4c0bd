#include "mtkit/carleson.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <vector>

namespace mtk {

Eigen::VectorXcd hilbert_multiplier(int n) {
  Eigen::VectorXcd m(n);
  for (int s = 0; s < n; ++s) {
    const int k = fft_frequency(s, n);
    m[s] = k > 0 ? cplx(0, -1) : (k < 0 ? cplx(0, 1) : cplx(0));
  }
  return m;
}

GridFunction hilbert_H(const GridFunction& f) { return apply_multiplier(f, hilbert_multiplier(f.size())); }

Eigen::VectorXcd hilbert_tilde_multiplier(int n) {
  // Partial sums of the Leibniz series, accumulated once up to |k| = n/2.
  std::vector<double> leibniz(n / 2 + 1, 0.0);
  for (int j = 1; j <= n / 2; ++j) leibniz[j] = leibniz[j - 1] + ((j % 2) ? 1.0 : -1.0) / (2.0 * j - 1.0);
  Eigen::VectorXcd m(n);
  for (int s = 0; s < n; ++s) {
    const int k = fft_frequency(s, n);
    const double mag = (4.0 / kPi) * leibniz[std::abs(k)];
    m[s] = cplx(0, k > 0 ? -mag : (k < 0 ? mag : 0.0));
  }
  return m;
}

namespace {

struct GaussRule {
  Eigen::VectorXd nodes, weights;  // on [-1, 1]
};

// Golub-Welsch: nodes are the eigenvalues of the Legendre Jacobi matrix.
GaussRule gauss_legendre(int order) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussRule rule{es.eigenvalues(), 2.0 * es.eigenvectors().row(0).transpose().array().square().matrix()};
  return rule;
}

const GaussRule& rule20() {
  static const GaussRule r = gauss_legendre(20);
  return r;
}

// (1/pi) int_0^pi tan(t/4) sin(k t) dt, with enough panels to resolve the oscillation.
double tan_quarter_sine_integral(int k) {
  const GaussRule& g = rule20();
  const int panels = std::abs(k) / 2 + 8;
  const double width = kPi / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    double s = 0.0;
    for (int q = 0; q < g.nodes.size(); ++q) {
      const double t = mid + 0.5 * width * g.nodes[q];
      s += g.weights[q] * std::tan(t / 4) * std::sin(k * t);
    }
    total += 0.5 * width * s;
  }
  return total / kPi;
}

}  // namespace

Eigen::VectorXcd tilde_correction_spectrum(int n) {
  if (n > kKernelRouteMaxGrid)
    throw ResourceError("kernel route of H~ is limited to grids of " + std::to_string(kKernelRouteMaxGrid) +
                        " points, requested " + std::to_string(n));
  Eigen::VectorXcd c(n);
  for (int s = 0; s < n; ++s) {
    const int k = fft_frequency(s, n);
    // tan(t/4) is odd, so its k-th coefficient is -i (1/pi) int_0^pi tan(t/4) sin(kt) dt.
    c[s] = cplx(0, -tan_quarter_sine_integral(k));
  }
  return c;
}

GridFunction hilbert_tilde(const GridFunction& f, TildeRoute route) {
  if (route == TildeRoute::multiplier) return apply_multiplier(f, hilbert_tilde_multiplier(f.size()));
  const GridFunction h = hilbert_H(f);
  const GridFunction corr = apply_multiplier(f, tilde_correction_spectrum(f.size()));
  return h.with_values(h.values() + corr.values());
}

namespace {

void check_levels(const PhaseTable& table, const LevelFunction& level, const char* context) {
  require_same_grid(table.grid(), level.grid(), context);
  level.require_range(table.first_level(), table.last_level(), context);
}

std::vector<int> distinct_levels(const LevelFunction& level) {
  std::vector<int> v(level.levels().begin(), level.levels().end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Eigen::VectorXcd unimodular(const Eigen::VectorXd& phase, double sign) {
  Eigen::VectorXcd e(phase.size());
  for (Eigen::Index j = 0; j < phase.size(); ++j) e[j] = std::polar(1.0, sign * phase[j]);
  return e;
}

}  // namespace

GridFunction linearized_carleson(const GridFunction& f, const PhaseTable& table, const LevelFunction& level) {
  require_same_grid(f.grid(), table.grid(), "linearized_carleson");
  check_levels(table, level, "linearized_carleson");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  const Eigen::VectorXcd multiplier = hilbert_tilde_multiplier(f.size());
  for (int m : distinct_levels(level)) {
    const GridFunction h = apply_multiplier(f.with_values(f.values().cwiseProduct(unimodular(table.psi(m), -1.0))),
                                            multiplier);
    for (int j = 0; j < f.size(); ++j)
      if (level[j] == m) out[j] = h[j];
  }
  return f.with_values(std::move(out));
}

GridFunction linearized_adjoint(const GridFunction& g, const PhaseTable& table, const LevelFunction& level) {
  require_same_grid(g.grid(), table.grid(), "linearized_adjoint");
  check_levels(table, level, "linearized_adjoint");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.size());
  const Eigen::VectorXcd multiplier = hilbert_tilde_multiplier(g.size());
  for (int m : distinct_levels(level)) {
    Eigen::VectorXcd piece = Eigen::VectorXcd::Zero(g.size());
    for (int j = 0; j < g.size(); ++j)
      if (level[j] == m) piece[j] = g[j];
    const GridFunction h = apply_multiplier(g.with_values(std::move(piece)), multiplier);
    out -= unimodular(table.psi(m), 1.0).cwiseProduct(h.values());
  }
  return g.with_values(std::move(out));
}

double chi(const PhaseTable& table, const LevelFunction& level, int x_index, int z_index) {
  check_levels(table, level, "chi");
  const int nx = level[x_index];
  const int nz = level[z_index];
  if (nx == nz) return 0.0;
  const double s = std::sin(table.psi(nz, x_index) - table.psi(nx, x_index));
  return nz > nx ? s : -s;
}

double quadratic_form_B(const GridFunction& g, const PhaseTable& table, const LevelFunction& level) {
  require_same_grid(g.grid(), table.grid(), "quadratic_form_B");
  check_levels(table, level, "quadratic_form_B");
  const int n = g.size();
  if (n > kQuadraticFormMaxGrid)
    throw ResourceError("quadratic form is limited to grids of " + std::to_string(kQuadraticFormMaxGrid) +
                        " points (O(N^2) cost), requested " + std::to_string(n));
  const double scale = g.values().cwiseAbs().maxCoeff();
  if (!g.is_real(1e-12 * scale)) throw InvalidArgument("quadratic_form_B needs a real-valued g");

  // Kernel 1/sin(t/2) by index difference; zero on the diagonal, 1 at t = pi.
  std::vector<double> kernel(n, 0.0);
  for (int d = 1; d < n; ++d) kernel[d] = d == n / 2 ? 1.0 : 1.0 / std::sin(g.grid().theta_symmetric(d) / 2);

  std::vector<int> support;
  for (int j = 0; j < n; ++j)
    if (g[j].real() != 0.0) support.push_back(j);
  if (support.empty()) return 0.0;

  // Levels occurring on the support, and sin(psi_m(x) - psi_{N(x)}(x)) per support row.
  std::map<int, int> slot_of;
  for (int j : support) slot_of.emplace(level[j], 0);
  std::vector<int> slot_levels;
  for (auto& [m, slot] : slot_of) {
    slot = static_cast<int>(slot_levels.size());
    slot_levels.push_back(m);
  }
  const int nslots = static_cast<int>(slot_levels.size());
  if (nslots == 1) return 0.0;

  const size_t s = support.size();
  std::vector<double> gval(s);
  std::vector<int> lev(s), slot(s);
  for (size_t a = 0; a < s; ++a) {
    gval[a] = g[support[a]].real();
    lev[a] = level[support[a]];
    slot[a] = slot_of[lev[a]];
  }

  double total = 0.0;
  std::vector<double> row_sin(nslots);
  for (size_t a = 0; a < s; ++a) {
    const int x = support[a];
    const double base = table.psi(lev[a], x);
    for (int q = 0; q < nslots; ++q) row_sin[q] = std::sin(table.psi(slot_levels[q], x) - base);
    double acc = 0.0;
    for (size_t b = 0; b < s; ++b) {
      if (lev[b] == lev[a]) continue;
      const double c = lev[b] > lev[a] ? row_sin[slot[b]] : -row_sin[slot[b]];
      acc += gval[b] * c * kernel[(support[b] - x) & (n - 1)];
    }
    total += gval[a] * acc;
  }
  return total / (static_cast<double>(n) * n);
}

}  // namespace mtk
