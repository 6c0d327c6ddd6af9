#pragma once

#include <vector>

#include "diracsf/potential.hpp"

namespace diracsf {

/// Fundamental solution u(x, z) of u' = i (z j + j V(x)) u, u(0, z) = I_{2p},
/// sampled at the nodes of `g` (a subgrid of [0, ell] starting at 0).
/// One step: u_{i+1} = exp(i h (z j + j V(x_{i+1/2}))) u_i with v linearly
/// interpolated at the midpoint.
std::vector<Matrix> fundamental_solution(const Potential& pot, Complex z,
                                         const UniformGrid& g);
std::vector<Matrix> fundamental_solution(const Potential& pot, Complex z);

/// One exponential-midpoint step factor exp(i h (z j + j V)) for the given
/// midpoint potential value v_mid (p x p). Fast closed form for p = 1.
Matrix dirac_step(Complex z, const Matrix& v_mid, double h);

/// Normalized pair beta(x) = [I 0] u(x/2, 0) Theta*,
/// gamma(x) = [0 I] u(x/2, 0) Theta* on a uniform grid over [0, 2 ell].
struct BetaGamma {
  int p = 1;
  UniformGrid grid;              // on [0, 2 ell]
  std::vector<Matrix> beta;      // p x 2p per node
  std::vector<Matrix> gamma;     // p x 2p per node
};

BetaGamma beta_gamma(const Potential& pot, int n);

/// Hamiltonian H(x) = beta(x)* beta(x) of the associated canonical system.
std::vector<Matrix> hamiltonian(const BetaGamma& bg);

/// Recover the potential from the pair: v(x/2) = 2i beta'(x) J gamma(x)*,
/// derivatives by second-order finite differences (one-sided at the ends).
Potential potential_from_beta_gamma(const BetaGamma& bg);

/// Canonical-system fundamental solution
/// W(x, z) = e^{izx/2} Theta u(x/2, 0)^{-1} u(x/2, z) Theta*, x in [0, 2 ell].
Matrix canonical_fundamental(const Potential& pot, double x, Complex z);

/// W(x_i, z) at every node of a uniform grid over [0, 2 ell] (single sweep).
std::vector<Matrix> canonical_fundamental_nodes(const Potential& pot, int n,
                                                Complex z);

/// Default Weyl direction P = [I_p; 0]: constant, property-j
/// (P*P > 0, P* j P >= 0).
Matrix default_weyl_direction(int p);

/// Weyl-type function phi(z) = i [I -I] U(z) P ([I I] U(z) P)^{-1} with
/// U(z) = u(ell, conj(z))*. Throws SingularDenominator when [I I] U P is
/// numerically singular.
Matrix weyl_function(const Potential& pot, Complex z, const Matrix& P);

/// Truncated semiaxis compatibility residual
/// || int_0^{x_max} [I i phi*] Theta u(x,z)* u(x,z) Theta* [I; -i phi] dx ||.
double weyl_residual_semiaxis(const Potential& pot, const Matrix& phi,
                              Complex z, double x_max);

/// Dirac differential expression -(i j f' + V f) applied to samples of f
/// (2p-vectors on the potential grid).
std::vector<Vector> apply_dirac_expression(const Potential& pot,
                                           const std::vector<Vector>& f);

/// Spectral transform (U f)(t) = (1/sqrt2) int_0^ell [I I] u(x, t)* f(x) dx
/// for real t, f sampled on the potential grid.
Vector spectral_transform(const Potential& pot, const std::vector<Vector>& f,
                          double t);

/// Batched transform over many real t values (shares the midpoint samples).
std::vector<Vector> spectral_transform(const Potential& pot,
                                       const std::vector<Vector>& f,
                                       const std::vector<double>& ts);

}  // namespace diracsf
