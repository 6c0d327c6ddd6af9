#pragma once

#include <string>
#include <vector>

#include "diracsf/numerics.hpp"
#include "diracsf/potential.hpp"
#include "diracsf/spectral_measure.hpp"

namespace diracsf {

/// Per-refinement-level evidence for the admissibility check.
struct LevelDatum {
  int n = 0;
  double lambda_min = 0.0;        // smallest eigenvalue of the operator
  double phi1_deriv_norm = 0.0;   // discrete L2 norm of Phi_1' = k
};

/// Evidence report of the four admissibility conditions:
///   (i)  finiteness of integral d tau / (1 + t^2),
///   (ii) positivity of the structured operator, non-vanishing with
///        refinement,
///   (iii) square-integrability proxy: stability of the discrete L2 norm of
///        the kernel across levels,
///   (iv) Hermitian constant term (anti-Hermitian defect witnesses a tail
///        mismatch) together with the positivity trend.
struct CheckReport {
  double condition_i_value = 0.0;
  bool condition_i_pass = false;
  std::vector<LevelDatum> levels;
  double lambda_min_trend = 0.0;
  bool condition_ii_pass = false;
  double condition_iii_ratio = 0.0;
  bool condition_iii_pass = false;
  double nu_defect = 0.0;
  bool condition_iv_pass = false;
  bool verdict = false;
  std::vector<std::string> notes;

  std::vector<std::string> failed_conditions() const;
};

CheckReport check_spectral_conditions(const SpectralMeasure& m, double ell,
                                      const std::vector<int>& levels,
                                      double lambda_floor = 1e-3);

/// A test function for the Parseval check: one 2p-component sample per node
/// of the potential grid.
using SampledFunction = std::vector<Vector>;

/// Gaussian bump exp(-((x - center)/width)^2) e^{i modulation x} in one
/// component, sampled on the grid.
SampledFunction gaussian_test_function(const UniformGrid& grid, int p,
                                       int component, double center,
                                       double width, double modulation);

/// Default battery: bumps and modulated bumps in the first and last
/// components.
std::vector<SampledFunction> default_parseval_test_functions(
    const UniformGrid& grid, int p);

/// Worst relative Plancherel defect |<S f, f> / ||f||^2 - 1| over the test
/// functions, with the measure integral truncated to [t_lo, t_hi] plus atoms
/// and the free-tail complement alpha (pi ||f||^2 - window energy of the
/// free transform) in closed form.
double parseval_defect(const Potential& pot,
                       const SpectralMeasure& m,
                       const std::vector<SampledFunction>& test_functions,
                       double t_lo = -60.0, double t_hi = 60.0,
                       int t_count = 1201);

/// Consistency of one measure across nested intervals [0, ell_k]: the
/// admissibility checks per interval plus agreement of the recovered data
/// on the common sub-interval at a shared step size.
struct SemiaxisReport {
  std::vector<double> ells;
  std::vector<CheckReport> reports;
  double nested_beta_agreement = 0.0;
  double nested_gamma_agreement = 0.0;
  double nested_potential_agreement = 0.0;
  bool verdict = false;
  std::vector<std::string> notes;
};

SemiaxisReport semiaxis_check(const SpectralMeasure& m,
                              const std::vector<double>& ells, int n_base);

}  // namespace diracsf
