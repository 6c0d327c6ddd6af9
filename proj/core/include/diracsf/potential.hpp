#pragma once

#include <vector>

#include "diracsf/numerics.hpp"

namespace diracsf {

/// Signature matrices for block size p:
///   j = diag(I_p, -I_p),  J = [[0, I_p], [I_p, 0]],
///   Theta = (1/sqrt2) [[I, -I], [I, I]] with Theta* = Theta^{-1} and
///   Theta j Theta* = J.
struct SignatureConstants {
  int p;
  Matrix j;
  Matrix J;
  Matrix Theta;

  explicit SignatureConstants(int p_);
};

/// Off-diagonal Dirac potential on [0, ell]: p x p complex samples of v on a
/// uniform grid. The full 2p x 2p potential block is V = [[0, v], [v*, 0]].
class Potential {
 public:
  Potential(int p, double ell, int n, std::vector<Matrix> v_samples);

  int p() const { return p_; }
  double ell() const { return ell_; }
  const UniformGrid& grid() const { return grid_; }
  const std::vector<Matrix>& samples() const { return v_; }

  /// v at arbitrary x in [0, ell] by linear interpolation of the samples.
  /// Throws GridMismatch outside the interval (up to roundoff slack).
  Matrix value_at(double x) const;

  /// Full 2p x 2p matrix V(x) = [[0, v(x)], [v(x)*, 0]].
  Matrix big_v_at(double x) const;

  double sup_norm() const;

 private:
  int p_;
  double ell_;
  UniformGrid grid_;
  std::vector<Matrix> v_;
};

/// Potential with v identically zero.
Potential zero_potential(int p, double ell, int n);

/// Potential with constant v == c (p = 1).
Potential constant_potential(double c, double ell, int n);

/// Sample a callable v(x) on the uniform grid over [0, ell].
template <typename F>
Potential sampled_potential(int p, double ell, int n, F&& v_of_x) {
  UniformGrid g(0.0, ell, n);
  std::vector<Matrix> samples;
  samples.reserve(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) samples.push_back(v_of_x(g.node(i)));
  return Potential(p, ell, n, std::move(samples));
}

}  // namespace diracsf
