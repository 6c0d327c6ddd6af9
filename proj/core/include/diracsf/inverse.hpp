#pragma once

#include <vector>

#include "diracsf/dirac_direct.hpp"
#include "diracsf/numerics.hpp"
#include "diracsf/potential.hpp"
#include "diracsf/snode.hpp"
#include "diracsf/spectral_measure.hpp"

namespace diracsf {

enum class BetaRoute { kFactor, kThetaOde, kFromGamma };
enum class GammaRoute { kDirect, kVarthetaOde };

/// Primary recovery: beta_j = (L^{-1} C Pi)_j / c_j with Pi the stacked
/// [Phi_1, I] blocks. Free measure gives (1/sqrt2)[I I] at every node.
std::vector<Matrix> recover_beta_factor(const SNode& node,
                                        const LowerFactor& factor);

/// gamma from the factor route: gamma' = -(1/sqrt2) (E Phi_1')^* beta with
/// Phi_1' = k, integrated by cumulative trapezoid from
/// gamma(0) = (1/sqrt2)[-I, I].
std::vector<Matrix> recover_gamma_direct(const SNode& node,
                                         const LowerFactor& factor,
                                         const std::vector<Matrix>& beta);

/// beta from the Hamiltonian H = beta^* beta: normalize the bottom block
/// row bt = [0 I] H by the matrix ODE theta' = -theta (bt' J bt^* bt_2^{-1}),
/// theta(0) = sqrt2 I, beta = theta bt. Throws SingularBlock when the
/// trailing block bt_2 = H_22 loses invertibility.
std::vector<Matrix> recover_beta_theta_ode(const std::vector<Matrix>& ham,
                                           const UniformGrid& grid);

/// gamma from beta: the raw complement gt = (1/2)[-(beta_2^*)^{-1},
/// (beta_1^*)^{-1}] is renormalized by vartheta' = -vartheta (gt' J gt^*)
/// (gt J gt^*)^{-1}, vartheta(0) = I, gamma = vartheta gt.
std::vector<Matrix> recover_gamma_vartheta_ode(const std::vector<Matrix>& beta,
                                               const UniformGrid& grid);

/// beta from gamma: bh = [(gamma_2^*)^{-1}, -(gamma_1^*)^{-1}], chi' =
/// -chi (bh' J bh^*) (bh J bh^*)^{-1}, chi(0) = (1/2) I, beta = chi bh.
std::vector<Matrix> recover_beta_from_gamma(const std::vector<Matrix>& gamma,
                                            const UniformGrid& grid);

/// Hamiltonian H_j = beta_j^* beta_j from the factor route.
std::vector<Matrix> recover_hamiltonian(const SNode& node,
                                        const LowerFactor& factor);

/// Cross-check of H at interior probe nodes from independent leading-block
/// solves: central difference of G(m) = (C Pi)_m^* S_m^{-1} (C Pi)_m h.
std::vector<Matrix> hamiltonian_validation(const SNode& node,
                                           const LowerFactor& factor,
                                           const std::vector<int>& probes);

struct InverseOptions {
  int n = 512;
  BetaRoute beta_route = BetaRoute::kFactor;
  GammaRoute gamma_route = GammaRoute::kDirect;
  bool force = false;          // skip the admissibility check
  double lambda_floor = 1e-3;  // positivity floor for the check
};

struct InverseResult {
  SNode node;
  BetaGamma bg;
  std::vector<Matrix> ham;
  Potential potential;
};

/// Full pipeline measure -> potential on [0, ell]: admissibility check
/// (unless forced), node build, factorization, route recovery, and
/// v(x/2) = 2 i beta' J gamma^*. Throws CharacterizationFailure when the
/// measure fails the admissibility check and force is off.
InverseResult solve_inverse(const SpectralMeasure& m, double ell,
                            const InverseOptions& opt = {});

}  // namespace diracsf
