#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "diracsf/errors.hpp"

namespace diracsf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Uniform grid with n subintervals (n + 1 nodes) on [start, end].
struct UniformGrid {
  double start = 0.0;
  double end = 1.0;
  int n = 1;

  UniformGrid() = default;
  UniformGrid(double start_, double end_, int n_);

  double step() const { return (end - start) / n; }
  int node_count() const { return n + 1; }
  double node(int i) const { return start + i * step(); }
};

/// Sine integral Si(x) = integral_0^x sin(t)/t dt. Power series on
/// |x| <= 20, rational auxiliary-function form beyond; odd in x; absolute
/// accuracy better than 1e-5 everywhere.
double sine_integral(double x);

/// Lower Cholesky factor of a Hermitian positive definite matrix, no pivoting.
/// Throws NotPositiveDefinite when a pivot fails, DimensionMismatch if A is
/// not square.
Matrix cholesky_lower(const Matrix& a);

/// Matrix exponential exp(A) of a square complex matrix.
Matrix matrix_exponential(const Matrix& a);

/// Composite trapezoid rule with uniform step h. Needs at least two samples.
template <typename T>
T trapezoid_integrate(const std::vector<T>& samples, double h) {
  if (samples.size() < 2) throw TooFewSamples("trapezoid needs >= 2 samples");
  T acc = samples.front() * 0.5;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
  acc += samples.back() * 0.5;
  return acc * h;
}

/// Trapezoid rule on arbitrary strictly increasing abscissae.
template <typename T>
T trapezoid_integrate(const std::vector<T>& samples,
                      const std::vector<double>& x) {
  if (samples.size() < 2) throw TooFewSamples("trapezoid needs >= 2 samples");
  if (samples.size() != x.size())
    throw DimensionMismatch("trapezoid: samples/abscissae length mismatch");
  T acc = (samples[0] + samples[1]) * (0.5 * (x[1] - x[0]));
  for (std::size_t i = 1; i + 1 < samples.size(); ++i)
    acc += (samples[i] + samples[i + 1]) * (0.5 * (x[i + 1] - x[i]));
  return acc;
}

/// Cumulative trapezoid: out[i] = integral from x_0 to x_i, out[0] = 0.
template <typename T>
std::vector<T> cumulative_trapezoid(const std::vector<T>& samples, double h) {
  if (samples.size() < 2) throw TooFewSamples("trapezoid needs >= 2 samples");
  std::vector<T> out(samples.size(), samples[0] * 0.0);
  for (std::size_t i = 1; i < samples.size(); ++i)
    out[i] = out[i - 1] + (samples[i - 1] + samples[i]) * (0.5 * h);
  return out;
}

/// Second-order finite differences on a uniform grid: central stencils in the
/// interior, one-sided three-point stencils at both ends.
template <typename T>
std::vector<T> central_difference(const std::vector<T>& samples, double h) {
  const std::size_t m = samples.size();
  if (m < 3) throw TooFewSamples("central_difference needs >= 3 samples");
  std::vector<T> out(m, samples[0] * 0.0);
  const double inv2h = 1.0 / (2.0 * h);
  out[0] = (samples[0] * -3.0 + samples[1] * 4.0 - samples[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < m; ++i)
    out[i] = (samples[i + 1] - samples[i - 1]) * inv2h;
  out[m - 1] =
      (samples[m - 1] * 3.0 - samples[m - 2] * 4.0 + samples[m - 3]) * inv2h;
  return out;
}

}  // namespace diracsf
