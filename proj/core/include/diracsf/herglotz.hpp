#pragma once

#include <functional>

#include "diracsf/numerics.hpp"
#include "diracsf/spectral_measure.hpp"

namespace diracsf {

/// Integral representation of a matrix Herglotz function,
///   phi(z) = mu z + nu + integral (1/(t - z) - t/(1 + t^2)) d tau(t),
/// with mu >= 0 Hermitian and nu Hermitian up to the anti-Hermitian offset
/// carried by the tail convention of the measure.
struct HerglotzRepresentation {
  Matrix mu;
  Matrix nu;
  SpectralMeasure measure;
};

using HerglotzEvaluator = std::function<Matrix(Complex)>;

/// Evaluate the representation at z with Im z > 0. The tail integral over
/// the full line contributes i pi alpha I in closed form; only the
/// perturbation (D - alpha I) and the atoms are integrated numerically.
Matrix herglotz_eval(const HerglotzRepresentation& rep, Complex z);

/// Convenience: evaluator closure over a representation.
HerglotzEvaluator make_evaluator(HerglotzRepresentation rep);

/// Operator norm of integral d tau(t) / (1 + t^2), the finiteness functional
/// of the measure. Tail outside the window in closed form.
double condition_i_integral(const SpectralMeasure& m);

/// Options for the Stieltjes inversion.
struct StieltjesOptions {
  double T = 40.0;          // reconstruction window [-T, T]
  double epsilon = 1e-3;    // Poisson regularization height
  int grid_points = 4001;   // output density grid
  double atom_spike_factor = 25.0;  // peak / local background threshold
  double atom_stability = 0.1;      // relative mass drift allowed under
                                    // halving epsilon
};

/// Recover the measure from boundary values of a Herglotz evaluator:
/// density D(t) = Im phi(t + i eps) / pi on the grid, atoms detected as
/// Poisson-stable spikes and subtracted from the density. The tail
/// coefficient is fixed to 1/pi (spectral candidates of this class have a
/// free tail). Throws NotHerglotz if the imaginary part fails positivity at
/// any probe.
SpectralMeasure stieltjes_invert(const HerglotzEvaluator& phi, int p,
                                 const StieltjesOptions& opt = {});

/// Estimate of the linear coefficient mu from growth along the imaginary
/// axis, norm of Im phi(iY) / Y.
double estimate_linear_coefficient(const HerglotzEvaluator& phi,
                                   double big_y = 200.0);

/// Fit the constant term: nu = Hermitian part of phi(z0) minus the measure
/// integral at z0.
Matrix fit_nu(const HerglotzEvaluator& phi, const SpectralMeasure& m,
              Complex z0 = Complex(0.0, 1.0));

}  // namespace diracsf
