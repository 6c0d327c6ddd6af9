#include "diracsf/inverse.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "diracsf/characterization.hpp"
#include "diracsf/errors.hpp"

namespace diracsf {

namespace {

Matrix antidiagonal_j(int p) {
  Matrix jj = Matrix::Zero(2 * p, 2 * p);
  jj.topRightCorner(p, p) = Matrix::Identity(p, p);
  jj.bottomLeftCorner(p, p) = Matrix::Identity(p, p);
  return jj;
}

Matrix invert_or_throw(const Matrix& a, const char* what) {
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw SingularBlock(what);
  return lu.inverse();
}

// Left-multiplicative normalizer ODE x' = -x q(t), advanced by the
// exponential midpoint rule.
std::vector<Matrix> normalizer_flow(const Matrix& x0,
                                    const std::vector<Matrix>& q, double h) {
  std::vector<Matrix> x(q.size(), x0);
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    x[i + 1] = x[i] * matrix_exponential(-0.5 * h * (q[i] + q[i + 1]));
  return x;
}

}  // namespace

std::vector<Matrix> recover_beta_factor(const SNode& node,
                                        const LowerFactor& factor) {
  const int p = node.p;
  const int n_nodes = node.grid.node_count();
  Matrix cpi(n_nodes * p, 2 * p);
  for (int j = 0; j < n_nodes; ++j) {
    const double cj = std::sqrt(node_weight(j));
    cpi.block(j * p, 0, p, p) = cj * node.phi1[static_cast<std::size_t>(j)];
    cpi.block(j * p, p, p, p) = cj * Matrix::Identity(p, p);
  }
  const Matrix y = factor.apply_e(cpi);
  std::vector<Matrix> beta(static_cast<std::size_t>(n_nodes));
  for (int j = 0; j < n_nodes; ++j)
    beta[static_cast<std::size_t>(j)] =
        y.block(j * p, 0, p, 2 * p) / std::sqrt(node_weight(j));
  return beta;
}

std::vector<Matrix> recover_gamma_direct(const SNode& node,
                                         const LowerFactor& factor,
                                         const std::vector<Matrix>& beta) {
  const int p = node.p;
  const int n_nodes = node.grid.node_count();
  if (beta.size() != static_cast<std::size_t>(n_nodes))
    throw DimensionMismatch("recover_gamma_direct: beta length mismatch");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Matrix ck(n_nodes * p, p);
  for (int j = 0; j < n_nodes; ++j)
    ck.block(j * p, 0, p, p) =
        std::sqrt(node_weight(j)) * node.kernel[static_cast<std::size_t>(j)];
  const Matrix w = factor.apply_e(ck);

  std::vector<Matrix> gp(static_cast<std::size_t>(n_nodes));
  for (int j = 0; j < n_nodes; ++j) {
    const Matrix ephi =
        w.block(j * p, 0, p, p) / std::sqrt(node_weight(j));
    gp[static_cast<std::size_t>(j)] =
        -inv_sqrt2 * ephi.adjoint() * beta[static_cast<std::size_t>(j)];
  }

  Matrix gamma0(p, 2 * p);
  gamma0 << -inv_sqrt2 * Matrix::Identity(p, p),
      inv_sqrt2 * Matrix::Identity(p, p);
  std::vector<Matrix> gamma = cumulative_trapezoid(gp, node.grid.step());
  for (Matrix& g : gamma) g += gamma0;
  return gamma;
}

std::vector<Matrix> recover_beta_theta_ode(const std::vector<Matrix>& ham,
                                           const UniformGrid& grid) {
  if (ham.size() != static_cast<std::size_t>(grid.node_count()))
    throw DimensionMismatch("recover_beta_theta_ode: sample count mismatch");
  const int p = static_cast<int>(ham.front().rows()) / 2;
  const Matrix jj = antidiagonal_j(p);
  const double h = grid.step();

  std::vector<Matrix> bt(ham.size());
  for (std::size_t i = 0; i < ham.size(); ++i) bt[i] = ham[i].bottomRows(p);
  const std::vector<Matrix> btp = central_difference(bt, h);

  std::vector<Matrix> q(ham.size());
  for (std::size_t i = 0; i < ham.size(); ++i) {
    const Matrix inv_tail = invert_or_throw(
        bt[i].rightCols(p),
        "recover_beta_theta_ode: trailing block of H lost invertibility");
    q[i] = btp[i] * jj * bt[i].adjoint() * inv_tail;
  }

  const std::vector<Matrix> theta =
      normalizer_flow(std::sqrt(2.0) * Matrix::Identity(p, p), q, h);
  std::vector<Matrix> beta(ham.size());
  for (std::size_t i = 0; i < ham.size(); ++i) beta[i] = theta[i] * bt[i];
  return beta;
}

std::vector<Matrix> recover_gamma_vartheta_ode(const std::vector<Matrix>& beta,
                                               const UniformGrid& grid) {
  if (beta.size() != static_cast<std::size_t>(grid.node_count()))
    throw DimensionMismatch(
        "recover_gamma_vartheta_ode: sample count mismatch");
  const int p = static_cast<int>(beta.front().rows());
  const Matrix jj = antidiagonal_j(p);
  const double h = grid.step();

  std::vector<Matrix> gt(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const Matrix inv1 = invert_or_throw(
        beta[i].leftCols(p).adjoint(),
        "recover_gamma_vartheta_ode: leading block of beta is singular");
    const Matrix inv2 = invert_or_throw(
        beta[i].rightCols(p).adjoint(),
        "recover_gamma_vartheta_ode: trailing block of beta is singular");
    Matrix g(p, 2 * p);
    g << -0.5 * inv2, 0.5 * inv1;
    gt[i] = g;
  }
  const std::vector<Matrix> gtp = central_difference(gt, h);

  std::vector<Matrix> q(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const Matrix pairing = gt[i] * jj * gt[i].adjoint();
    const Matrix inv_pairing = invert_or_throw(
        pairing, "recover_gamma_vartheta_ode: degenerate pairing");
    q[i] = gtp[i] * jj * gt[i].adjoint() * inv_pairing;
  }

  const std::vector<Matrix> vartheta =
      normalizer_flow(Matrix::Identity(p, p), q, h);
  std::vector<Matrix> gamma(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i)
    gamma[i] = vartheta[i] * gt[i];
  return gamma;
}

std::vector<Matrix> recover_beta_from_gamma(const std::vector<Matrix>& gamma,
                                            const UniformGrid& grid) {
  if (gamma.size() != static_cast<std::size_t>(grid.node_count()))
    throw DimensionMismatch("recover_beta_from_gamma: sample count mismatch");
  const int p = static_cast<int>(gamma.front().rows());
  const Matrix jj = antidiagonal_j(p);
  const double h = grid.step();

  std::vector<Matrix> bh(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Matrix inv1 = invert_or_throw(
        gamma[i].leftCols(p).adjoint(),
        "recover_beta_from_gamma: leading block of gamma is singular");
    const Matrix inv2 = invert_or_throw(
        gamma[i].rightCols(p).adjoint(),
        "recover_beta_from_gamma: trailing block of gamma is singular");
    Matrix b(p, 2 * p);
    b << inv2, -inv1;
    bh[i] = b;
  }
  const std::vector<Matrix> bhp = central_difference(bh, h);

  std::vector<Matrix> q(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Matrix pairing = bh[i] * jj * bh[i].adjoint();
    const Matrix inv_pairing = invert_or_throw(
        pairing, "recover_beta_from_gamma: degenerate pairing");
    q[i] = bhp[i] * jj * bh[i].adjoint() * inv_pairing;
  }

  const std::vector<Matrix> chi =
      normalizer_flow(0.5 * Matrix::Identity(p, p), q, h);
  std::vector<Matrix> beta(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) beta[i] = chi[i] * bh[i];
  return beta;
}

std::vector<Matrix> recover_hamiltonian(const SNode& node,
                                        const LowerFactor& factor) {
  const std::vector<Matrix> beta = recover_beta_factor(node, factor);
  std::vector<Matrix> ham(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i)
    ham[i] = beta[i].adjoint() * beta[i];
  return ham;
}

std::vector<Matrix> hamiltonian_validation(const SNode& node,
                                           const LowerFactor& factor,
                                           const std::vector<int>& probes) {
  const int p = node.p;
  const double h = node.grid.step();
  auto accumulated = [&](int m) -> Matrix {
    Matrix cpi((m + 1) * p, 2 * p);
    for (int j = 0; j <= m; ++j) {
      const double cj = std::sqrt(node_weight(j));
      cpi.block(j * p, 0, p, p) =
          cj * node.phi1[static_cast<std::size_t>(j)];
      cpi.block(j * p, p, p, p) = cj * Matrix::Identity(p, p);
    }
    return h * (cpi.adjoint() * factor.solve_leading(m, cpi));
  };
  std::vector<Matrix> out;
  out.reserve(probes.size());
  for (int m : probes) {
    if (m < 1 || m + 1 >= node.grid.node_count())
      throw GridMismatch("hamiltonian_validation: probe must be interior");
    out.push_back((accumulated(m + 1) - accumulated(m - 1)) / (2.0 * h));
  }
  return out;
}

InverseResult solve_inverse(const SpectralMeasure& m, double ell,
                            const InverseOptions& opt) {
  if (!opt.force) {
    const std::vector<int> levels = {std::max(2, opt.n / 4),
                                     std::max(2, opt.n / 2), opt.n};
    const CheckReport report =
        check_spectral_conditions(m, ell, levels, opt.lambda_floor);
    if (!report.verdict) {
      std::ostringstream os;
      os << "solve_inverse: measure fails the admissibility check (";
      bool first = true;
      for (const std::string& f : report.failed_conditions()) {
        if (!first) os << ", ";
        os << f;
        first = false;
      }
      os << "); pass force to attempt recovery anyway";
      throw CharacterizationFailure(os.str());
    }
  }

  SNode node = build_snode(m, ell, opt.n);
  const Matrix s = assemble_s_operator(node);
  const LowerFactor factor = factorize_s_operator(node, s);

  const std::vector<Matrix> beta0 = recover_beta_factor(node, factor);
  std::vector<Matrix> ham(beta0.size());
  for (std::size_t i = 0; i < beta0.size(); ++i)
    ham[i] = beta0[i].adjoint() * beta0[i];

  std::vector<Matrix> gamma;
  switch (opt.gamma_route) {
    case GammaRoute::kDirect:
      gamma = recover_gamma_direct(node, factor, beta0);
      break;
    case GammaRoute::kVarthetaOde:
      gamma = recover_gamma_vartheta_ode(beta0, node.grid);
      break;
  }

  std::vector<Matrix> beta;
  switch (opt.beta_route) {
    case BetaRoute::kFactor:
      beta = beta0;
      break;
    case BetaRoute::kThetaOde:
      beta = recover_beta_theta_ode(ham, node.grid);
      break;
    case BetaRoute::kFromGamma:
      beta = recover_beta_from_gamma(gamma, node.grid);
      break;
  }

  BetaGamma bg{node.p, node.grid, std::move(beta), std::move(gamma)};
  Potential potential = potential_from_beta_gamma(bg);
  return InverseResult{std::move(node), std::move(bg), std::move(ham),
                       std::move(potential)};
}

}  // namespace diracsf
