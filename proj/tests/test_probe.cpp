#include <doctest.h>

#include <algorithm>

#include "mtkit/mt_system.hpp"
#include "mtkit/probe.hpp"
#include "mtkit/random.hpp"

using namespace mtk;

namespace {

// Raw configuration with cell width exactly 0.5, bypassing the level-bound check.
ProbeConfig half_width(int lambda) {
  ProbeConfig c;
  c.r = 1 - 0.5 / kTwoPi;
  c.lambda = lambda;
  return c;
}

double r_of(int k) { return 1 - std::ldexp(1.0, -k); }

// Random levels and a Gaussian g supported on E, as the probe experiment draws them.
std::pair<GridFunction, LevelFunction> probe_input(const ProbeContext& ctx, Rng& rng) {
  const int b = ctx.config().level_bound;
  const LevelFunction level = random_levels(ctx.grid(), -b, b, rng);
  const ESet e = build_E_and_p(ctx.maps(), level);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(ctx.grid().size());
  for (int j = 0; j < g.size(); ++j) {
    const double v = standard_normal(rng);
    if (e.member[j]) g[j] = v;
  }
  return {GridFunction(ctx.grid(), std::move(g)), level};
}

}  // namespace

TEST_CASE("config") {
  const ProbeConfig c = ProbeConfig::make(r_of(10), 8);
  CHECK(c.K == 256);
  CHECK(c.level_bound == 8);
  CHECK(c.cell_width() == doctest::Approx(kTwoPi / 1024));
  CHECK_THROWS_AS(ProbeConfig::make(r_of(10), 7), InvalidArgument);
  CHECK_THROWS_AS(ProbeConfig::make(r_of(10), 2), InvalidArgument);
  CHECK_THROWS_AS(ProbeConfig::make(r_of(6), 8), InvalidArgument);  // level bound 0
  CHECK_THROWS_AS(ProbeConfig::make(0.3, 8), InvalidArgument);
}

TEST_CASE("reflection tau") {
  const ProbeConfig c = half_width(8);
  CHECK(tau(c, 0.25) == doctest::Approx(0.25));
  CHECK(tau(c, 0.1) == doctest::Approx(0.4));
  CHECK(tau(c, -0.1) == doctest::Approx(-0.4));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform_real(rng, -kPi, kPi);
    // Nudge off cell boundaries, where floor is ambiguous after rounding.
    if (std::abs(x / 0.5 - std::round(x / 0.5)) < 1e-9) continue;
    CHECK(tau(c, tau(c, x)) == doctest::Approx(x).epsilon(1e-13));
    CHECK(cell_index(c.r, tau(c, x)) == cell_index(c.r, x));
  }
}

TEST_CASE("dilation ktilde and eta") {
  const ProbeConfig c = half_width(8);
  CHECK(ktilde_of_cell(c, 3) == 24);
  CHECK(ktilde_of_cell(c, -3) == -24);
  CHECK(ktilde(c, 0.7) == 8);
  const ProbeConfig odd = half_width(5);
  CHECK(ktilde_of_cell(odd, 3) == 16);
  CHECK(ktilde_of_cell(odd, -3) == -14);
  for (long long k = -20; k <= 20; ++k) CHECK(ktilde_of_cell(odd, k) % 2 == 0);

  CHECK(eta(c, 0.3) == 0.3);  // cell 0 stays put
  CHECK(eta(c, 0.7) == doctest::Approx(0.7 + 7 * 0.5));
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform_real(rng, -0.2, 0.2);
    const ProbeConfig p = ProbeConfig::make(r_of(10), 8);
    CHECK(cell_index(p.r, eta(p, x)) == ktilde(p, x));
  }
}

TEST_CASE("reflection identity for the extended sequence phases") {
  // Psi_{a_j}(tau x) = -Psi_{a_{2k+1-j}}(x) mod 2 pi, with k the cell of x.
  const double r = r_of(6);
  ProbeConfig cfg;
  cfg.r = r;
  cfg.lambda = 8;
  const MTSequence ext = make_sequence(SequenceKind::a_r_extended, {r, 0});
  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = uniform_real(rng, -0.5, 0.5);
    const long long k = cell_index(r, x);
    const int j = uniform_int(rng, ext.i_min(), ext.i_max());
    const long long partner = 2 * k + 1 - j;
    if (partner < ext.i_min() || partner > ext.i_max()) continue;
    const double lhs = mobius_phase(ext.at(j), tau(cfg, x));
    const double rhs = -mobius_phase(ext.at(static_cast<int>(partner)), x);
    worst = std::max(worst, std::abs(wrap_angle(lhs - rhs)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("probe grid maps") {
  const ProbeConfig cfg = ProbeConfig::make(r_of(8), 8);
  CHECK(probe_grid_size(cfg.r, 1) == 256);
  CHECK(probe_grid_size(cfg.r, 8) == 2048);
  CHECK_THROWS_AS(ProbeGrid(cfg, CircleGrid(128)), InvalidArgument);

  const ProbeGrid pg(cfg, CircleGrid(2048));
  CHECK(pg.samples_per_cell() == 8);
  const double h = pg.grid().step();
  for (int j = 0; j < 2048; ++j) {
    const int s = pg.grid().signed_index(j);
    // Sample s represents the arc [s h, (s+1) h): compare at its midpoint.
    const double mid = (s + 0.5) * h;
    CHECK(pg.cell(j) == cell_index(cfg.r, mid));
    CHECK(pg.tau_index(pg.tau_index(j)) == j);
    CHECK(std::abs(wrap_angle(pg.grid().theta(pg.tau_index(j)) + 0.5 * h - tau(cfg, mid))) < 1e-12);
    if (pg.in_interval(j)) {
      CHECK(std::abs(wrap_angle(pg.grid().theta(pg.eta_index(j)) + 0.5 * h - eta(cfg, mid))) < 1e-12);
    }
  }
}

TEST_CASE("E and p") {
  const ProbeConfig cfg = ProbeConfig::make(r_of(8), 8);
  const ProbeGrid pg(cfg, CircleGrid(2048));
  Rng rng(4);
  const LevelFunction level = random_levels(pg.grid(), -2, 2, rng);
  const ESet e = build_E_and_p(pg, level);
  int count = 0;
  for (int j = 0; j < 2048; ++j) {
    const long long k = pg.cell(j);
    const bool expect = std::abs(pg.grid().theta_symmetric(j)) <= 1.0 / 16 && k % 2 == 0 && level[j] - k >= 0;
    CHECK(e.member[j] == expect);
    CHECK(e.p[j] == level[j] - k);
    count += expect;
  }
  CHECK(e.count() == count);
  CHECK(count > 0);
  CHECK_THROWS_AS(build_E_and_p(pg, LevelFunction::constant(pg.grid(), 3)), InvalidArgument);
}

TEST_CASE("associated pairs") {
  const ProbeContext ctx(ProbeConfig::make(r_of(8), 8), 2048);
  Rng rng(5);
  const auto [g, level] = probe_input(ctx, rng);

  const AssociatedPairs zero = associated_pairs(ctx.maps(), GridFunction::constant(ctx.grid(), 0.0), level);
  CHECK(zero.f.norm() == 0.0);
  CHECK(zero.g_tilde.norm() == 0.0);
  CHECK(zero.f_tilde.norm() == 0.0);

  const AssociatedPairs ap = associated_pairs(ctx.maps(), g, level);
  CHECK(ap.f.norm() == doctest::Approx(g.norm()).epsilon(1e-15));
  CHECK(ap.g_tilde.norm() == doctest::Approx(g.norm()).epsilon(1e-15));
  CHECK(ap.f_tilde.norm() == doctest::Approx(g.norm()).epsilon(1e-15));
  const int K = ctx.config().K;
  for (const LevelFunction* l : {&ap.M, &ap.N_tilde, &ap.M_tilde}) {
    CHECK(l->min() >= -K);
    CHECK(l->max() <= K);
  }
  const LevelFunction mt = m_tilde_from_identity(ctx.maps(), level, ap.N_tilde);
  for (int j = 0; j < ctx.grid().size(); ++j)
    if (ap.f_tilde[j] != cplx(0)) CHECK(mt[j] == ap.M_tilde[j]);

  // g must live on E.
  CHECK_THROWS_AS(associated_pairs(ctx.maps(), GridFunction::constant(ctx.grid(), 1.0), level), InvalidArgument);
}

TEST_CASE("combined quadratic-form sum") {
  const ProbeContext small(ProbeConfig::make(r_of(8), 8), 2048);
  Rng rng(6);
  const auto [g0, level0] = probe_input(small, rng);
  const Claim2Terms z = claim2_sigma(small, GridFunction::constant(small.grid(), 0.0), level0);
  CHECK(z.sigma == 0.0);
  CHECK(z.g_norm_sq == 0.0);

  const Claim2Terms t = claim2_sigma(small, g0, level0);
  CHECK(t.sigma == doctest::Approx(t.b_g + 8 * t.b_g_tilde + t.b_f + 8 * t.b_f_tilde));
  CHECK(t.g_norm_sq == doctest::Approx(g0.norm_squared()));

  // Sigma/|g|^2 stays in a bounded band as r -> 1.
  const ProbeContext big(ProbeConfig::make(r_of(10), 8), 8192);
  double lo = 1e300, hi = -1e300;
  for (const ProbeContext* ctx : {&small, &big}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto [g, level] = probe_input(*ctx, rng);
      const Claim2Terms c = claim2_sigma(*ctx, g, level);
      const double ratio = c.sigma / c.g_norm_sq;
      MESSAGE("r=", ctx->config().r, " ratio=", ratio);
      lo = std::min(lo, ratio), hi = std::max(hi, ratio);
    }
  }
  CHECK(std::abs(lo) < 1.0);
  CHECK(std::abs(hi) < 1.0);
}

TEST_CASE("model form") {
  CHECK(model_T(SparseSeq({5}, {2.0})) == 0.0);
  CHECK(model_T(SparseSeq({3, 4}, {1.0, 1.0})) == 0.0);
  CHECK(model_T(SparseSeq({0, 1000}, {2.0, 3.0})) ==
        doctest::Approx(-6.0 * std::sin(std::log(1000.0) / kTwoPi) / 1000.0).epsilon(1e-15));
  CHECK_THROWS_AS(SparseSeq({2, 1}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(SparseSeq({-1}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(SparseSeq({1, 2}, {1.0}), InvalidArgument);
}

TEST_CASE("model dilation") {
  const long double lam = model_lambda();
  CHECK(static_cast<double>(lam) == doctest::Approx(373791533.22422619).epsilon(1e-15));
  const SparseSeq a({0, 1, 2}, {1.0, -2.0, 0.5});
  const SparseSeq d = model_dilate(a, lam);
  CHECK(d.support == std::vector<long long>{0, 373791533, 747583066});
  CHECK(d.values == a.values);
  CHECK(d.norm() == a.norm());
  CHECK_THROWS_AS(model_dilate(SparseSeq({30000000000LL}, {1.0}), lam), InvalidArgument);
  CHECK_THROWS_AS(model_dilate(a, 0.5L), InvalidArgument);
}
