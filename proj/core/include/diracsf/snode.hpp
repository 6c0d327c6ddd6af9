#pragma once

#include <utility>
#include <vector>

#include "diracsf/numerics.hpp"
#include "diracsf/spectral_measure.hpp"

namespace diracsf {

/// Node data for the structured operator S = 2 pi alpha I + K on [0, L],
/// K the convolution with the difference kernel k(x) = integral e^{itx}
/// d sigma(t). Stores the accessory function Phi_1, the kernel samples at
/// nonnegative offsets (k(-x) = k(x)^*), and the fitted constant term nu.
struct SNode {
  int p = 0;
  double alpha = 0.0;
  UniformGrid grid{0.0, 1.0, 1};   // [0, L], n subintervals
  std::vector<Matrix> phi1;        // Phi_1 at the nodes
  std::vector<Matrix> kernel;      // k(d h), d = 0..n
  Matrix nu;
};

/// Phi_1(x) = I - i integral ((e^{itx} - 1)/t) d sigma(t) on the grid nodes,
/// together with nu = integral (t/(1+t^2)) d sigma(t) + i (pi alpha - 1) I.
std::pair<std::vector<Matrix>, Matrix> phi1_from_measure(
    const SpectralMeasure& m, const UniformGrid& grid);

/// Difference kernel k at the given offsets.
std::vector<Matrix> difference_kernel(const SpectralMeasure& m,
                                      const std::vector<double>& offsets);

SNode build_snode(const SpectralMeasure& m, double ell, int n);

/// Trapezoid node weight of the discretized inner product: 1/2 at the left
/// endpoint, 1 elsewhere. Keeping the right endpoint at full weight makes
/// the leading principal blocks of S exactly the smaller-interval operators.
double node_weight(int i);

/// Dense discretization M = 2 pi alpha I + h [c_i c_j k(x_i - x_j)] with
/// c_i = sqrt(node_weight(i)); Hermitian by construction.
Matrix assemble_s_operator(const SNode& node);

/// Frobenius norm, scaled by node count times p, of
/// A S - S A^* - i h (Omega o G), with A the weighted cumulative-integration
/// matrix and G_{ij} = Phi_1(x_i) + Phi_1(x_j)^*. Zero for the free measure.
double operator_identity_residual(const SNode& node, const Matrix& s);

/// Lower Cholesky factor of the discretized operator, with triangular
/// solves for applying E = L^{-1} and its leading principal sub-blocks.
class LowerFactor {
 public:
  LowerFactor(int p, UniformGrid grid, Matrix lower);

  int p() const { return p_; }
  const UniformGrid& grid() const { return grid_; }
  const Matrix& lower() const { return lower_; }

  /// L^{-1} rhs by forward substitution.
  Matrix apply_e(const Matrix& rhs) const;

  /// Solve the leading principal block (nodes 0..m) system S_m x = rhs via
  /// the nested factor: two triangular solves.
  Matrix solve_leading(int m, const Matrix& rhs) const;

  /// Frobenius defect of E^* E S = S^{-1} S against the identity, scaled by
  /// sqrt of the dimension.
  double factorization_defect(const Matrix& s) const;

 private:
  int p_;
  UniformGrid grid_;
  Matrix lower_;
};

LowerFactor factorize_s_operator(const SNode& node, const Matrix& s);
LowerFactor factorize_s_operator(const SNode& node);

/// Discretized transfer matrix w_A(xi, z) at a grid node xi:
///   w_A = I + i z J h (C Pi)^* S_xi^{-1} (C R),
/// Pi the stacked [Phi_1, I] blocks and R the resolvent-corrected columns.
Matrix transfer_matrix(const SNode& node, const LowerFactor& factor,
                       double xi, Complex z);

}  // namespace diracsf
