#pragma once

#include <string>
#include <vector>

#include "diracsf/numerics.hpp"

namespace diracsf {

/// Point mass of a matrix measure.
struct Atom {
  double t = 0.0;
  Matrix weight;
};

/// Matrix-valued measure in split form
///   d tau = (alpha I_p) dt  +  d sigma,
///   d sigma = (D(t) - alpha I_p) dt on the window + atoms,
/// where D is sampled on a strictly increasing grid spanning the window and
/// equals the constant tail alpha I outside. The split makes every integral
/// used downstream absolutely convergent; the free-tail contribution enters
/// through closed forms.
class SpectralMeasure {
 public:
  SpectralMeasure(int p, double alpha, double window_lo, double window_hi,
                  std::vector<double> grid, std::vector<Matrix> density,
                  std::vector<Atom> atoms);

  int p() const { return p_; }
  double alpha() const { return alpha_; }
  double window_lo() const { return lo_; }
  double window_hi() const { return hi_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Matrix>& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<std::string>& notes() const { return notes_; }

  /// Density at t: linear interpolation inside the window, alpha I outside.
  Matrix density_at(double t) const;

  /// integral of f(t) d sigma(t): trapezoid against (D - alpha I) on the
  /// window grid plus atom sums. f is scalar complex.
  template <typename F>
  Matrix integrate_dsigma(F&& f) const {
    Matrix acc = Matrix::Zero(p_, p_);
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
      const double half_dx = 0.5 * (grid_[i + 1] - grid_[i]);
      acc += half_dx * (Complex(f(grid_[i])) * pert_[i] +
                        Complex(f(grid_[i + 1])) * pert_[i + 1]);
    }
    for (const Atom& a : atoms_) acc += Complex(f(a.t)) * a.weight;
    return acc;
  }

  /// Full-measure mass of [a, b): matrix valued; atoms use the half-open
  /// convention, the density integral uses the linear interpolant exactly.
  Matrix interval_mass(double a, double b) const;

  /// Scalar mass of [a, b) (requires p = 1).
  double mass(double a, double b) const;

 private:
  int p_;
  double alpha_;
  double lo_, hi_;
  std::vector<double> grid_;
  std::vector<Matrix> density_;
  std::vector<Matrix> pert_;  // density - alpha I, precomputed
  std::vector<Atom> atoms_;
  std::vector<std::string> notes_;
};

/// Free measure dt/pi sampled on a uniform window grid (the spectral measure
/// of the zero potential).
SpectralMeasure free_measure(int p, double T, int grid_points);

/// Measure with constant density alpha I on the window plus the given atoms.
SpectralMeasure flat_measure_with_atoms(int p, double alpha, double T,
                                        int grid_points,
                                        std::vector<Atom> atoms);

}  // namespace diracsf
