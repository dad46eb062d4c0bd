#include "mtkit/unwinding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "mtkit/blaschke.hpp"
#include "mtkit/csv.hpp"
#include "mtkit/mt_system.hpp"

namespace mtk {

PolynomialH2::PolynomialH2(Eigen::VectorXcd coefficients) : c_(std::move(coefficients)) {
  if (c_.size() == 0) c_ = Eigen::VectorXcd::Zero(1);
  if (!c_.allFinite()) throw NumericInstability("polynomial has non-finite coefficients");
  Eigen::Index d = c_.size() - 1;
  while (d > 0 && c_[d] == cplx(0)) --d;
  c_.conservativeResize(d + 1);
}

PolynomialH2 PolynomialH2::from_roots(const std::vector<cplx>& roots, cplx leading) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(roots.size() + 1);
  c[0] = leading;
  int deg = 0;
  for (cplx a : roots) {
    // multiply by (z - a)
    for (int k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - a * c[k];
    c[0] *= -a;
    ++deg;
  }
  return PolynomialH2(std::move(c));
}

cplx PolynomialH2::operator()(cplx z) const {
  cplx acc = 0;
  for (Eigen::Index k = c_.size() - 1; k >= 0; --k) acc = acc * z + c_[k];
  return acc;
}

GridFunction PolynomialH2::on_grid(CircleGrid grid) const {
  return GridFunction::from(grid, [&](double t) { return (*this)(std::polar(1.0, t)); });
}

namespace {

cplx derivative_at(const Eigen::VectorXcd& c, cplx z) {
  cplx acc = 0;
  for (Eigen::Index k = c.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

double scaled_residual(const PolynomialH2& p, cplx z) {
  return std::abs(p(z)) / std::pow(std::max(1.0, std::abs(z)), p.degree());
}

bool modulus_order(cplx a, cplx b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
  return std::arg(a) < std::arg(b);
}

}  // namespace

std::vector<cplx> poly_roots(const PolynomialH2& p) {
  if (p.is_zero()) throw InvalidArgument("poly_roots: zero polynomial");
  if (p.degree() < 1) throw InvalidArgument("poly_roots: degree must be >= 1");
  const Eigen::VectorXcd& c = p.coefficients();
  int zeros = 0;
  while (c[zeros] == cplx(0)) ++zeros;
  std::vector<cplx> roots(zeros, cplx(0));

  const Eigen::VectorXcd q = c.segment(zeros, c.size() - zeros);
  const int d = static_cast<int>(q.size()) - 1;
  if (d >= 1) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -q[i] / q[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericInstability("companion eigensolve did not converge");
    const PolynomialH2 qp(q);
    for (int i = 0; i < d; ++i) {
      cplx z = es.eigenvalues()[i];
      for (int it = 0; it < 8; ++it) {
        const cplx dz = derivative_at(q, z);
        if (dz == cplx(0)) break;
        const cplx next = z - qp(z) / dz;
        if (!(std::abs(qp(next)) < std::abs(qp(z)))) break;
        z = next;
      }
      roots.push_back(z);
    }
  }
  const double tol = 1e-10 * p.norm();
  for (cplx z : roots)
    if (!(scaled_residual(p, z) <= tol))
      throw NumericInstability("root residual " + fmt17(scaled_residual(p, z)) + " exceeds 1e-10 * ||p||");
  std::sort(roots.begin(), roots.end(), modulus_order);
  return roots;
}

BlaschkeFactorization blaschke_factorize(const PolynomialH2& p) {
  if (p.is_zero()) throw InvalidArgument("blaschke_factorize: zero polynomial");
  BlaschkeFactorization out;
  if (p.degree() == 0) {
    out.quotient = p;
    return out;
  }
  for (cplx a : poly_roots(p))
    if (std::abs(a) < 1.0 - kBoundaryRootTolerance) out.inside_roots.push_back(a);

  Eigen::VectorXcd c = p.coefficients();
  const double budget = 1e-8 * p.norm();
  for (cplx a : out.inside_roots) {
    const Eigen::Index d = c.size() - 1;
    // Synthetic division by (z - a), from the top coefficient down.
    Eigen::VectorXcd q(d);
    q[d - 1] = c[d];
    for (Eigen::Index k = d - 1; k >= 1; --k) q[k - 1] = c[k] + a * q[k];
    const double rem = std::abs(c[0] + a * q[0]);
    out.remainders.push_back(rem);
    if (!(rem <= budget))
      throw NumericInstability("division remainder " + fmt17(rem) + " exceeds 1e-8 * ||p||");
    if (a == cplx(0)) {
      c = q;
      continue;
    }
    // Multiply by (a/|a|)(1 - conj(a) z).
    const cplx unit = a / std::abs(a);
    Eigen::VectorXcd r(d + 1);
    for (Eigen::Index k = 0; k <= d; ++k) {
      const cplx hi = k < d ? q[k] : cplx(0);
      const cplx lo = k > 0 ? q[k - 1] : cplx(0);
      r[k] = unit * (hi - std::conj(a) * lo);
    }
    c = r;
  }
  out.quotient = PolynomialH2(c);
  return out;
}

UnwindingResult unwind(const PolynomialH2& f, int steps) {
  if (steps < 0) throw InvalidArgument("unwind: steps must be >= 0");
  UnwindingResult res;
  res.original = f;
  res.residual = f;
  res.residual_norms.push_back(f.norm());
  const double scale = std::max(f.norm(), std::numeric_limits<double>::min());
  for (int k = 0; k < steps; ++k) {
    const PolynomialH2& cur = res.residual;
    res.constants.push_back(cur.at_zero());
    Eigen::VectorXcd g = cur.coefficients();
    g[0] = 0;
    // Coefficients at roundoff level relative to F carry no information.
    Eigen::Index d = g.size() - 1;
    while (d > 0 && std::abs(g[d]) <= 1e-15 * scale) --d;
    g.conservativeResize(d + 1);
    if (g.norm() <= 1e-13 * scale) {
      res.residual = PolynomialH2();
      res.residual_norms.push_back(0.0);
      res.terminated = true;
      break;
    }
    BlaschkeFactorization fac = blaschke_factorize(PolynomialH2(g));
    res.blocks.push_back(fac.inside_roots);
    res.remainders.push_back(fac.remainders.empty() ? 0.0
                                                    : *std::max_element(fac.remainders.begin(), fac.remainders.end()));
    res.residual = fac.quotient;
    res.residual_norms.push_back(res.residual.norm());
  }
  return res;
}

namespace {

// B_1 ... B_m on the grid for each m = 0..blocks.size().
std::vector<Eigen::VectorXcd> block_products(const UnwindingResult& res, CircleGrid grid) {
  const int n = grid.size();
  std::vector<Eigen::VectorXcd> prods{Eigen::VectorXcd::Ones(n)};
  for (const auto& block : res.blocks) {
    Eigen::VectorXcd next = prods.back();
    for (cplx a : block) {
      const DiskPoint w = DiskPoint::from_complex(a);
      for (int j = 0; j < n; ++j) next[j] *= mobius_factor(w, std::polar(1.0, grid.theta(j)));
    }
    prods.push_back(std::move(next));
  }
  return prods;
}

}  // namespace

GridFunction unwinding_partial_sum(const UnwindingResult& res, int k, CircleGrid grid) {
  if (k < 0 || k > static_cast<int>(res.constants.size()))
    throw InvalidArgument("unwinding partial sum index out of range");
  const auto prods = block_products(res, grid);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(grid.size());
  for (int i = 0; i < k; ++i) s += res.constants[i] * prods[i];
  return GridFunction(grid, std::move(s));
}

double telescoping_error(const UnwindingResult& res, CircleGrid grid) {
  const auto prods = block_products(res, grid);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(grid.size());
  for (size_t i = 0; i < res.constants.size(); ++i) s += res.constants[i] * prods[i];
  s += res.residual.on_grid(grid).values().cwiseProduct(prods.back());
  return (res.original.on_grid(grid).values() - s).cwiseAbs().maxCoeff();
}

UnwindMtReport unwind_to_mt(const UnwindingResult& res, int grid_size) {
  UnwindMtReport rep;
  std::vector<DiskPoint> pts;
  for (const auto& block : res.blocks) {
    for (cplx a : block) pts.push_back(DiskPoint::from_complex(a));
    rep.boundaries.push_back(static_cast<int>(pts.size()));
  }
  const MTSequence seq(pts, 1);
  long long n = std::max(grid_size, 2);
  if (!is_power_of_two(n)) throw InvalidArgument("unwind_to_mt: grid size must be a power of two");
  while (n < required_grid_size(seq) || n <= 2LL * (res.original.degree() + 1)) n *= 2;
  if (n > kUnwindMaxGrid)
    throw ResourceError("unwind_to_mt needs a grid of " + std::to_string(n) + " points, limit is " +
                        std::to_string(kUnwindMaxGrid));
  const CircleGrid grid(static_cast<int>(n));
  rep.grid_size = grid.size();
  if (pts.empty()) return rep;

  const MTBasis basis = build_basis(seq, grid);
  const GridFunction f = res.original.on_grid(grid);
  const MTExpansion e = expand(f, basis);
  const auto prods = block_products(res, grid);
  Eigen::VectorXcd mt = Eigen::VectorXcd::Zero(grid.size());
  Eigen::VectorXcd uw = Eigen::VectorXcd::Zero(grid.size());
  int next = 0;
  for (size_t k = 0; k < rep.boundaries.size(); ++k) {
    for (; next < rep.boundaries[k]; ++next) mt += e.coefficients[next] * basis.matrix().col(next);
    uw += res.constants[k] * prods[k];
    const double d = (mt - uw).norm() / std::sqrt(static_cast<double>(grid.size()));
    rep.discrepancies.push_back(d);
    rep.max_discrepancy = std::max(rep.max_discrepancy, d);
  }
  return rep;
}

void write_unwinding_jsonl(std::ostream& os, const UnwindingResult& res) {
  for (size_t k = 0; k < res.constants.size(); ++k) {
    nlohmann::ordered_json rec;
    rec["k"] = k;
    rec["Fk0_re"] = res.constants[k].real();
    rec["Fk0_im"] = res.constants[k].imag();
    nlohmann::ordered_json roots = nlohmann::ordered_json::array();
    if (k < res.blocks.size())
      for (cplx a : res.blocks[k]) roots.push_back({{"re", a.real()}, {"im", a.imag()}});
    rec["roots"] = roots;
    rec["remainder"] = k < res.remainders.size() ? res.remainders[k] : 0.0;
    os << rec.dump() << '\n';
  }
}

}  // namespace mtk
