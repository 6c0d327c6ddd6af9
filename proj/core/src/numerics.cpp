#include "diracsf/numerics.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace diracsf {

double sine_integral(double x) {
  const double ax = std::abs(x);
  double si;
  if (ax <= 20.0) {
    // Power series sum (-1)^k ax^{2k+1} / ((2k+1)(2k+1)!); alternating with
    // fast decay, partial cancellation stays benign on this range.
    double term = ax, sum = ax;
    for (int k = 1; k < 64; ++k) {
      term *= -ax * ax / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term / (2.0 * k + 1.0);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    si = sum;
  } else {
    // Rational auxiliary functions f, g with Si = pi/2 - f cos - g sin.
    const double x2 = ax * ax;
    const double f = (x2 * x2 + 7.241163 * x2 + 2.463936) /
                     (x2 * x2 + 9.068580 * x2 + 7.157433) / ax;
    const double g = (x2 * x2 + 7.547478 * x2 + 1.564072) /
                     (x2 * x2 + 12.723684 * x2 + 15.723606) / x2;
    si = 0.5 * kPi - f * std::cos(ax) - g * std::sin(ax);
  }
  return x < 0.0 ? -si : si;
}

UniformGrid::UniformGrid(double start_, double end_, int n_)
    : start(start_), end(end_), n(n_) {
  if (n < 1) throw GridMismatch("grid needs at least one subinterval");
  if (!(end > start)) throw GridMismatch("grid end must exceed start");
}

Matrix cholesky_lower(const Matrix& a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("cholesky_lower: matrix not square");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("cholesky_lower: pivot failure");
  return llt.matrixL();
}

Matrix matrix_exponential(const Matrix& a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("matrix_exponential: matrix not square");
  return a.exp();
}

}  // namespace diracsf
