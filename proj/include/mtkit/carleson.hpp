#pragma once

#include "mtkit/blaschke.hpp"
#include "mtkit/level.hpp"

namespace mtk {

/// Conjugate function: multiplier -i sgn(k), sgn(0) = 0.
Eigen::VectorXcd hilbert_multiplier(int n);
GridFunction hilbert_H(const GridFunction& f);

/// Multiplier of the 1/sin((x-y)/2) transform:
/// -i sgn(k) (4/pi) sum_{j=1}^{|k|} (-1)^{j-1}/(2j-1).
Eigen::VectorXcd hilbert_tilde_multiplier(int n);

/// Fourier coefficients of the bounded kernel tan(t/4) = 1/sin(t/2) - 1/tan(t/2),
/// computed by composite Gauss-Legendre quadrature. FFT order.
Eigen::VectorXcd tilde_correction_spectrum(int n);

enum class TildeRoute { multiplier, kernel };

/// The kernel route costs O(N^2) quadrature work; it is refused above this size.
inline constexpr int kKernelRouteMaxGrid = 1 << 13;

/// H~ f, either from its closed-form multiplier or as H f plus convolution with tan(t/4).
GridFunction hilbert_tilde(const GridFunction& f, TildeRoute route = TildeRoute::multiplier);

/// T_N f(x) = H~(f e^{-i psi_{N(x)}})(x), one transform per occurring level.
GridFunction linearized_carleson(const GridFunction& f, const PhaseTable& table, const LevelFunction& level);

/// T_N^* g = -sum_m e^{i psi_m} H~(g 1_{A_m}), the exact discrete adjoint of T_N.
GridFunction linearized_adjoint(const GridFunction& g, const PhaseTable& table, const LevelFunction& level);

/// sgn(N(z) - N(x)) sin(psi_{N(z)}(x) - psi_{N(x)}(x)) at grid indices x, z.
double chi(const PhaseTable& table, const LevelFunction& level, int x_index, int z_index);

inline constexpr int kQuadraticFormMaxGrid = 1 << 13;

/// B(g, N) = (1/N^2) sum_{x != z} g(x) g(z) chi(x, z) / sin((z - x)/2), with z - x
/// reduced to (-pi, pi]. g must be real. Cost O(|supp g|^2).
double quadratic_form_B(const GridFunction& g, const PhaseTable& table, const LevelFunction& level);

}  // namespace mtk
