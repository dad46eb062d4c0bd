#include "mtkit/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtkit/carleson.hpp"
#include "mtkit/mt_system.hpp"

namespace mtk {

ProbeConfig ProbeConfig::make(double r, int lambda) {
  if (!(r > 0.5 && r < 1.0)) throw InvalidArgument("probe needs 1/2 < r < 1, got " + fmt17(r));
  if (lambda < 4 || lambda % 2 != 0) throw InvalidArgument("dilation factor must be an even integer >= 4");
  ProbeConfig c;
  c.r = r;
  c.lambda = lambda;
  c.K = static_cast<int>(floor_tolerant(1.0 / (4.0 * (1.0 - r))));
  c.level_bound = static_cast<int>(floor_tolerant(1.0 / (16.0 * lambda * (1.0 - r))));
  if (c.level_bound < 1)
    throw InvalidArgument("probe degenerates: level bound floor(1/(16 lambda (1-r))) is 0; increase r or lower lambda");
  return c;
}

double tau(const ProbeConfig& cfg, double x) {
  return cfg.cell_width() * (2.0 * static_cast<double>(cell_index(cfg.r, x)) + 1.0) - x;
}

long long ktilde_of_cell(const ProbeConfig& cfg, long long k) {
  const long long t = cfg.lambda * k;
  return (t % 2 == 0) ? t : t + 1;
}

long long ktilde(const ProbeConfig& cfg, double x) { return ktilde_of_cell(cfg, cell_index(cfg.r, x)); }

double eta(const ProbeConfig& cfg, double x) {
  const long long k = cell_index(cfg.r, x);
  return static_cast<double>(ktilde_of_cell(cfg, k) - k) * cfg.cell_width() + x;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ProbeGrid::ProbeGrid(const ProbeConfig& cfg, CircleGrid grid) : cfg_(cfg), grid_(grid) {
  const double c = grid.size() * (1.0 - cfg.r);
  c_ = static_cast<int>(std::llround(c));
  if (c_ < 1 || std::abs(c - c_) > 1e-9)
    throw InvalidArgument("probe grid of " + std::to_string(grid.size()) +
                          " points does not place an integral number of samples in each cell (N(1-r) = " + fmt17(c) +
                          ")");
}

long long ProbeGrid::cell(int j) const { return floor_div(grid_.signed_index(j), c_); }

int ProbeGrid::tau_index(int j) const {
  const long long s = grid_.signed_index(j);
  const long long k = floor_div(s, c_);
  return grid_.wrap((2 * k + 1) * c_ - 1 - s);
}

int ProbeGrid::eta_index(int j) const {
  const long long s = grid_.signed_index(j);
  const long long k = floor_div(s, c_);
  return grid_.wrap(s + (ktilde_of_cell(cfg_, k) - k) * c_);
}

bool ProbeGrid::in_interval(int j) const {
  return std::abs(grid_.theta_symmetric(j)) <= 1.0 / (2.0 * cfg_.lambda) + 1e-12;
}

int ESet::count() const { return static_cast<int>(std::count(member.begin(), member.end(), true)); }

ESet build_E_and_p(const ProbeGrid& pg, const LevelFunction& level) {
  require_same_grid(pg.grid(), level.grid(), "build_E_and_p");
  const int b = pg.config().level_bound;
  level.require_range(-b, b, "build_E_and_p (level bound)");
  const int n = pg.grid().size();
  ESet e{std::vector<bool>(n, false), Eigen::VectorXi(n)};
  for (int j = 0; j < n; ++j) {
    const long long k = pg.cell(j);
    e.p[j] = static_cast<int>(level[j] - k);
    e.member[j] = pg.in_interval(j) && k % 2 == 0 && e.p[j] >= 0;
  }
  return e;
}

namespace {

void require_pair_level(long long value, int K, int index, const char* which) {
  if (value < -K || value > K)
    throw InvalidArgument(std::string("associated level ") + which + " = " + std::to_string(value) +
                          " at grid index " + std::to_string(index) + " outside [-" + std::to_string(K) + ", " +
                          std::to_string(K) + "]");
}

}  // namespace

AssociatedPairs associated_pairs(const ProbeGrid& pg, const GridFunction& g, const LevelFunction& level) {
  require_same_grid(pg.grid(), g.grid(), "associated_pairs");
  const ESet e = build_E_and_p(pg, level);
  const int n = pg.grid().size();
  const int K = pg.config().K;
  for (int j = 0; j < n; ++j)
    if (g[j] != cplx(0) && !e.member[j])
      throw InvalidArgument("g is not supported on E: nonzero at grid index " + std::to_string(j));

  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n), gt = Eigen::VectorXcd::Zero(n), ft = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXi m = Eigen::VectorXi::Zero(n), nt = Eigen::VectorXi::Zero(n), mt = Eigen::VectorXi::Zero(n);

  // (f, M) on tau(E).
  for (int x = 0; x < n; ++x) {
    const int t = pg.tau_index(x);
    if (!e.member[t]) continue;
    f[x] = g[t];
    const long long v = pg.cell(x) + 1 - e.p[t];
    require_pair_level(v, K, x, "M");
    m[x] = static_cast<int>(v);
  }
  // (g~, N~) on eta(E).
  for (int x = 0; x < n; ++x) {
    if (!e.member[x]) continue;
    const int y = pg.eta_index(x);
    gt[y] = g[x];
    const long long v = ktilde_of_cell(pg.config(), pg.cell(x)) + e.p[x];
    require_pair_level(v, K, y, "N~");
    nt[y] = static_cast<int>(v);
  }
  // (f~, M~) on eta(tau(E)).
  for (int y = 0; y < n; ++y) {
    if (!e.member[pg.tau_index(y)]) continue;
    const int z = pg.eta_index(y);
    ft[z] = f[y];
    const long long k = pg.cell(y);
    const long long v = ktilde_of_cell(pg.config(), k) + m[y] - k;
    require_pair_level(v, K, z, "M~");
    mt[z] = static_cast<int>(v);
  }
  const CircleGrid grid = pg.grid();
  return {GridFunction(grid, std::move(f)), GridFunction(grid, std::move(gt)), GridFunction(grid, std::move(ft)),
          LevelFunction(grid, std::move(m)), LevelFunction(grid, std::move(nt)), LevelFunction(grid, std::move(mt))};
}

LevelFunction m_tilde_from_identity(const ProbeGrid& pg, const LevelFunction& level, const LevelFunction& n_tilde) {
  const ESet e = build_E_and_p(pg, level);
  const int n = pg.grid().size();
  Eigen::VectorXi mt = Eigen::VectorXi::Zero(n);
  for (int y = 0; y < n; ++y) {
    if (!e.member[pg.tau_index(y)]) continue;
    const int x = pg.eta_index(y);
    const int tx = pg.tau_index(x);
    const long long p_tilde = n_tilde[tx] - pg.cell(tx);
    mt[x] = static_cast<int>(pg.cell(x) + 1 - p_tilde);
  }
  return LevelFunction(pg.grid(), std::move(mt));
}

int probe_grid_size(double r, int min_samples_per_cell) {
  for (int n = 2; n <= (1 << 26); n *= 2) {
    const double c = n * (1.0 - r);
    if (c >= min_samples_per_cell - 1e-9 && std::abs(c - std::llround(c)) <= 1e-9) return n;
  }
  throw InvalidArgument("no power-of-two grid up to 2^26 is commensurate with the cell width for r = " + fmt17(r));
}

namespace {

PhaseTable probe_table(const ProbeConfig& cfg, CircleGrid grid) {
  const MTSequence ext = make_sequence(SequenceKind::a_r_extended, {cfg.r, 0});
  return build_phase_table(ext.truncated(cfg.K), grid);
}

}  // namespace

ProbeContext::ProbeContext(const ProbeConfig& cfg, int grid_size)
    : maps_(cfg, CircleGrid(grid_size)), table_(probe_table(cfg, CircleGrid(grid_size))) {}

Claim2Terms claim2_sigma(const ProbeContext& ctx, const GridFunction& g, const LevelFunction& level) {
  const AssociatedPairs ap = associated_pairs(ctx.maps(), g, level);
  Claim2Terms t;
  t.b_g = quadratic_form_B(g, ctx.table(), level);
  t.b_g_tilde = quadratic_form_B(ap.g_tilde, ctx.table(), ap.N_tilde);
  t.b_f = quadratic_form_B(ap.f, ctx.table(), ap.M);
  t.b_f_tilde = quadratic_form_B(ap.f_tilde, ctx.table(), ap.M_tilde);
  const double lam = ctx.config().lambda;
  t.sigma = t.b_g + lam * t.b_g_tilde + t.b_f + lam * t.b_f_tilde;
  t.g_norm_sq = g.norm_squared();
  return t;
}

SparseSeq::SparseSeq(std::vector<long long> s, std::vector<double> v) : support(std::move(s)), values(std::move(v)) {
  if (support.size() != values.size()) throw InvalidArgument("sparse sequence: support and values differ in length");
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0) throw InvalidArgument("sparse sequence: negative index");
    if (i > 0 && support[i] <= support[i - 1]) throw InvalidArgument("sparse sequence: support not strictly increasing");
    if (!std::isfinite(values[i])) throw InvalidArgument("sparse sequence: non-finite value");
  }
}

double SparseSeq::norm() const {
  return std::sqrt(std::inner_product(values.begin(), values.end(), values.begin(), 0.0));
}

double model_T(const SparseSeq& alpha) {
  const size_t n = alpha.support.size();
  if (n > kModelMaxSupport)
    throw ResourceError("model form limited to supports of " + std::to_string(kModelMaxSupport) + " points");
  double total = 0.0;
  for (size_t a = 0; a < n; ++a) {
    if (alpha.values[a] == 0.0) continue;
    double row = 0.0;
    for (size_t b = a + 1; b < n; ++b) {
      const double d = static_cast<double>(alpha.support[b] - alpha.support[a]);
      row += alpha.values[b] * std::sin(std::log(d) / kTwoPi) / d;
    }
    total += alpha.values[a] * row;
  }
  return -total;
}

long double model_lambda() { return std::exp(2.0L * std::numbers::pi_v<long double> * std::numbers::pi_v<long double>); }

SparseSeq model_dilate(const SparseSeq& alpha, long double lambda) {
  if (!(lambda >= 1.0L)) throw InvalidArgument("dilation factor must be >= 1");
  std::vector<long long> s;
  s.reserve(alpha.support.size());
  for (long long j : alpha.support) {
    const long double v = std::floor(lambda * static_cast<long double>(j));
    if (v > 9007199254740992.0L) throw InvalidArgument("dilated index exceeds the exact integer range of double");
    s.push_back(static_cast<long long>(v));
  }
  return SparseSeq(std::move(s), alpha.values);
}

}  // namespace mtk
