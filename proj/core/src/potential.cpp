#include "diracsf/potential.hpp"

#include <cmath>

namespace diracsf {

SignatureConstants::SignatureConstants(int p_) : p(p_) {
  if (p < 1) throw DimensionMismatch("block size p must be positive");
  const Matrix id = Matrix::Identity(p, p);
  j = Matrix::Zero(2 * p, 2 * p);
  j.topLeftCorner(p, p) = id;
  j.bottomRightCorner(p, p) = -id;
  J = Matrix::Zero(2 * p, 2 * p);
  J.topRightCorner(p, p) = id;
  J.bottomLeftCorner(p, p) = id;
  Theta = Matrix::Zero(2 * p, 2 * p);
  const double s = 1.0 / std::sqrt(2.0);
  Theta.topLeftCorner(p, p) = s * id;
  Theta.topRightCorner(p, p) = -s * id;
  Theta.bottomLeftCorner(p, p) = s * id;
  Theta.bottomRightCorner(p, p) = s * id;
}

Potential::Potential(int p, double ell, int n, std::vector<Matrix> v_samples)
    : p_(p), ell_(ell), grid_(0.0, ell, n), v_(std::move(v_samples)) {
  if (p_ < 1) throw DimensionMismatch("block size p must be positive");
  if (static_cast<int>(v_.size()) != grid_.node_count())
    throw DimensionMismatch("potential: sample count does not match grid");
  for (const Matrix& m : v_)
    if (m.rows() != p_ || m.cols() != p_)
      throw DimensionMismatch("potential: sample is not p x p");
}

Matrix Potential::value_at(double x) const {
  const double h = grid_.step();
  const double slack = 1e-9 * (1.0 + std::abs(ell_));
  if (x < -slack || x > ell_ + slack)
    throw GridMismatch("potential evaluated outside [0, ell]");
  double s = (x - grid_.start) / h;
  int i = static_cast<int>(std::floor(s));
  if (i < 0) i = 0;
  if (i >= grid_.n) i = grid_.n - 1;
  const double w = s - i;
  return (1.0 - w) * v_[i] + w * v_[i + 1];
}

Matrix Potential::big_v_at(double x) const {
  const Matrix v = value_at(x);
  Matrix big = Matrix::Zero(2 * p_, 2 * p_);
  big.topRightCorner(p_, p_) = v;
  big.bottomLeftCorner(p_, p_) = v.adjoint();
  return big;
}

double Potential::sup_norm() const {
  double m = 0.0;
  for (const Matrix& v : v_) m = std::max(m, v.operatorNorm());
  return m;
}

Potential zero_potential(int p, double ell, int n) {
  return Potential(p, ell, n,
                   std::vector<Matrix>(n + 1, Matrix::Zero(p, p)));
}

Potential constant_potential(double c, double ell, int n) {
  return Potential(1, ell, n,
                   std::vector<Matrix>(n + 1, Matrix::Constant(1, 1, c)));
}

}  // namespace diracsf
