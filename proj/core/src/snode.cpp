#include "diracsf/snode.hpp"

#include <cmath>

#include "diracsf/errors.hpp"

namespace diracsf {

namespace {

// (e^{itx} - 1)/t, continued through t = 0 (value i x); series near zero to
// avoid cancellation.
Complex cauchy_difference(double t, double x) {
  const double tx = t * x;
  if (std::abs(tx) < 1e-4) {
    const Complex itx = kI * tx;
    return kI * x * (1.0 + itx * (0.5 + itx / 6.0));
  }
  return (std::exp(kI * tx) - 1.0) / t;
}

// Hermitian coefficient Q of the leading odd decay
//   (D - alpha I)(t) ~ Q sign(t)/|t|   for |t| beyond the window,
// fitted from the outer quarter of the density samples on each side.
// Truncating that tail leaves an error in the synthesized kernel of size
// 2 Q (pi/2 - Si(|x| T)) concentrated on offsets |x| <~ 1/T with a steep
// slope there, which is exactly where the recovered potential reads off its
// boundary values; adding the closed-form tail removes it. Antisymmetrizing
// the two window edges isolates the odd part, so even perturbations (for
// example a constant offset of the density) contribute nothing. Returns zero
// (plain truncation) unless the window is symmetric, both edge zones carry
// enough samples, each zone is free of a strong trend (the 1/t law holds),
// and the even part is subordinate.
Matrix tail_decay_coefficient(const SpectralMeasure& m) {
  const int p = m.p();
  const Matrix zero = Matrix::Zero(p, p);
  const double lo = m.window_lo();
  const double hi = m.window_hi();
  if (!(hi > 0.0) || std::abs(hi + lo) > 1e-9 * (hi - lo)) return zero;
  const std::vector<double>& grid = m.grid();
  const std::vector<Matrix>& dens = m.density();
  const Matrix alpha_eye = m.alpha() * Matrix::Identity(p, p);
  // Per side: mean of w = t (D - alpha I) over the zone, the drift between
  // the inner and outer halves of the zone, and the rms spread.
  auto side_stats = [&](bool right, Matrix& mean, double& drift,
                        double& spread) {
    std::vector<Matrix> w;
    std::vector<double> ts;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      if (right ? t >= 0.75 * hi : t <= 0.75 * lo) {
        w.push_back(t * (dens[i] - alpha_eye));
        ts.push_back(std::abs(t));
      }
    }
    if (w.size() < 8) return false;
    const double t_mid = right ? 0.875 * hi : 0.875 * std::abs(lo);
    Matrix inner = zero, outer = zero;
    int n_inner = 0, n_outer = 0;
    mean = zero;
    for (std::size_t i = 0; i < w.size(); ++i) {
      mean += w[i];
      if (ts[i] < t_mid) {
        inner += w[i];
        ++n_inner;
      } else {
        outer += w[i];
        ++n_outer;
      }
    }
    mean /= static_cast<double>(w.size());
    if (n_inner < 4 || n_outer < 4) return false;
    drift = (outer / n_outer - inner / n_inner).norm();
    double var = 0.0;
    for (const Matrix& x : w) var += (x - mean).squaredNorm();
    spread = std::sqrt(var / static_cast<double>(w.size()));
    return true;
  };
  Matrix mr, ml;
  double dr = 0.0, dl = 0.0, sr = 0.0, sl = 0.0;
  if (!side_stats(true, mr, dr, sr) || !side_stats(false, ml, dl, sl))
    return zero;
  // w -> +Q on the right edge and +Q on the left edge for a pure odd tail;
  // the even part lands in the difference.
  Matrix q = 0.25 * (mr + ml + mr.adjoint() + ml.adjoint());
  Matrix even = 0.5 * (mr - ml);
  const double scale = q.norm();
  if (scale < 1e-12 * (1.0 + m.alpha())) return zero;
  if (even.norm() > 0.5 * scale) return zero;
  if (dr > 0.25 * scale || dl > 0.25 * scale) return zero;
  if (sr > 2.0 * scale || sl > 2.0 * scale) return zero;
  if (scale > 10.0 * (1.0 + m.alpha())) return zero;
  return q;
}

// integral_T^infinity sin(x t)/t dt = pi/2 - Si(x T) for x >= 0.
double tail_sin_t1(double x, double big_t) {
  if (x <= 0.0) return 0.0;
  return 0.5 * kPi - sine_integral(x * big_t);
}

// integral_T^infinity cos(x t)/t^2 dt for x >= 0.
double tail_cos_t2(double x, double big_t) {
  if (x <= 0.0) return 1.0 / big_t;
  return std::cos(x * big_t) / big_t - x * tail_sin_t1(x, big_t);
}

}  // namespace

std::pair<std::vector<Matrix>, Matrix> phi1_from_measure(
    const SpectralMeasure& m, const UniformGrid& grid) {
  const int p = m.p();
  const Matrix eye = Matrix::Identity(p, p);
  const Matrix q_tail = tail_decay_coefficient(m);
  const bool corrected = q_tail.norm() > 0.0;
  const double big_t = m.window_hi();
  std::vector<Matrix> phi1;
  phi1.reserve(static_cast<std::size_t>(grid.node_count()));
  for (int i = 0; i < grid.node_count(); ++i) {
    const double x = grid.node(i);
    Matrix value =
        eye - kI * m.integrate_dsigma(
                  [&](double t) { return cauchy_difference(t, x); });
    // Tail of -i integral (e^{ixt}-1)/t * Q sign(t)/|t| dt over |t| > T;
    // sign(t)/(t |t|) = 1/t^2, so the integral is even in x and vanishes at
    // x = 0. Its x-derivative reproduces the kernel correction exactly.
    if (corrected)
      value += (-2.0 * kI *
                (tail_cos_t2(std::abs(x), big_t) - 1.0 / big_t)) *
               q_tail;
    phi1.push_back(std::move(value));
  }
  Matrix nu =
      m.integrate_dsigma([](double t) { return t / (1.0 + t * t); });
  // t/(1+t^2) * Q sign(t)/|t| is even, integrating to 2 (pi/2 - atan T) Q.
  if (corrected) nu += (kPi - 2.0 * std::atan(big_t)) * q_tail;
  nu += kI * (kPi * m.alpha() - 1.0) * eye;
  return {std::move(phi1), std::move(nu)};
}

std::vector<Matrix> difference_kernel(const SpectralMeasure& m,
                                      const std::vector<double>& offsets) {
  const Matrix q_tail = tail_decay_coefficient(m);
  const bool corrected = q_tail.norm() > 0.0;
  const double big_t = m.window_hi();
  std::vector<Matrix> out;
  out.reserve(offsets.size());
  for (double x : offsets) {
    Matrix value =
        m.integrate_dsigma([&](double t) { return std::exp(kI * t * x); });
    // Tail of integral e^{ixt} Q sign(t)/|t| dt over |t| > T; odd in x, and
    // k(-x) = k(x)^* is preserved since Q is Hermitian.
    if (corrected) {
      const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      value += (2.0 * kI * sgn * tail_sin_t1(std::abs(x), big_t)) * q_tail;
    }
    out.push_back(std::move(value));
  }
  return out;
}

SNode build_snode(const SpectralMeasure& m, double ell, int n) {
  if (n < 2) throw TooFewSamples("build_snode: need at least 2 subintervals");
  SNode node;
  node.p = m.p();
  node.alpha = m.alpha();
  node.grid = UniformGrid{0.0, 2.0 * ell, n};
  auto [phi1, nu] = phi1_from_measure(m, node.grid);
  node.phi1 = std::move(phi1);
  node.nu = std::move(nu);
  std::vector<double> offsets;
  offsets.reserve(static_cast<std::size_t>(node.grid.node_count()));
  for (int i = 0; i < node.grid.node_count(); ++i)
    offsets.push_back(node.grid.node(i));
  node.kernel = difference_kernel(m, offsets);
  return node;
}

double node_weight(int i) { return i == 0 ? 0.5 : 1.0; }

Matrix assemble_s_operator(const SNode& node) {
  const int p = node.p;
  const int n_nodes = node.grid.node_count();
  const double h = node.grid.step();
  const int dim = n_nodes * p;
  Matrix s = 2.0 * kPi * node.alpha * Matrix::Identity(dim, dim);
  std::vector<double> c(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i)
    c[static_cast<std::size_t>(i)] = std::sqrt(node_weight(i));
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = 0; j <= i; ++j) {
      const Matrix block =
          h * (c[static_cast<std::size_t>(i)] *
               c[static_cast<std::size_t>(j)]) *
          node.kernel[static_cast<std::size_t>(i - j)];
      s.block(i * p, j * p, p, p) += block;
      if (j < i) s.block(j * p, i * p, p, p) += block.adjoint();
    }
  }
  return s;
}

double operator_identity_residual(const SNode& node, const Matrix& s) {
  const int p = node.p;
  const int n_nodes = node.grid.node_count();
  const double h = node.grid.step();
  const int dim = n_nodes * p;
  if (s.rows() != dim || s.cols() != dim)
    throw DimensionMismatch("operator_identity_residual: size mismatch");
  std::vector<double> c(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i)
    c[static_cast<std::size_t>(i)] = std::sqrt(node_weight(i));

  // Weighted cumulative-integration matrix: trapezoid prefix sums expressed
  // in the sqrt-weight conjugated basis.
  Matrix a = Matrix::Zero(dim, dim);
  const Matrix eye = Matrix::Identity(p, p);
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double omega = c[static_cast<std::size_t>(i)] *
                           c[static_cast<std::size_t>(j)];
      const Complex scale = kI * h * omega * (i == j ? 0.5 : 1.0);
      a.block(i * p, j * p, p, p) = scale * eye;
    }
  }

  Matrix r = a * s - s * a.adjoint();
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = 0; j < n_nodes; ++j) {
      const double omega = c[static_cast<std::size_t>(i)] *
                           c[static_cast<std::size_t>(j)];
      r.block(i * p, j * p, p, p) -=
          kI * h * omega *
          (node.phi1[static_cast<std::size_t>(i)] +
           node.phi1[static_cast<std::size_t>(j)].adjoint());
    }
  }
  return r.norm() / static_cast<double>(dim);
}

LowerFactor::LowerFactor(int p, UniformGrid grid, Matrix lower)
    : p_(p), grid_(grid), lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols() ||
      lower_.rows() != grid_.node_count() * p_)
    throw DimensionMismatch("LowerFactor: factor size mismatch");
}

Matrix LowerFactor::apply_e(const Matrix& rhs) const {
  if (rhs.rows() != lower_.rows())
    throw DimensionMismatch("apply_e: row count mismatch");
  return lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Matrix LowerFactor::solve_leading(int m, const Matrix& rhs) const {
  const int dim = (m + 1) * p_;
  if (m < 0 || dim > lower_.rows())
    throw DimensionMismatch("solve_leading: node index out of range");
  if (rhs.rows() != dim)
    throw DimensionMismatch("solve_leading: row count mismatch");
  const Matrix lm = lower_.topLeftCorner(dim, dim);
  Matrix y = lm.triangularView<Eigen::Lower>().solve(rhs);
  return lm.triangularView<Eigen::Lower>().adjoint().solve(y);
}

double LowerFactor::factorization_defect(const Matrix& s) const {
  Matrix y = apply_e(s);
  Matrix z = lower_.triangularView<Eigen::Lower>().adjoint().solve(y);
  z -= Matrix::Identity(s.rows(), s.cols());
  return z.norm() / std::sqrt(static_cast<double>(s.rows()));
}

LowerFactor factorize_s_operator(const SNode& node, const Matrix& s) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(
        "factorize_s_operator: discretized operator is not positive "
        "definite; the measure fails the positivity condition");
  return LowerFactor(node.p, node.grid, llt.matrixL());
}

LowerFactor factorize_s_operator(const SNode& node) {
  return factorize_s_operator(node, assemble_s_operator(node));
}

Matrix transfer_matrix(const SNode& node, const LowerFactor& factor,
                       double xi, Complex z) {
  const int p = node.p;
  const double h = node.grid.step();
  const double span = node.grid.end - node.grid.start;
  const int idx = static_cast<int>(std::lround(xi / h));
  if (idx < 0 || idx >= node.grid.node_count() ||
      std::abs(xi - static_cast<double>(idx) * h) > 1e-9 * std::max(1.0, span))
    throw GridMismatch("transfer_matrix: xi must be a grid node");

  const int n_nodes = idx + 1;
  const int dim = n_nodes * p;
  const Matrix eye = Matrix::Identity(p, p);

  Matrix cpi(dim, 2 * p);
  Matrix cr(dim, 2 * p);
  // Resolvent column (I - zA)^{-1} Phi_1 = Phi_1 + i z Ivol, with
  // Ivol(x) = integral_0^x e^{i z (x - s)} Phi_1(s) ds accumulated by the
  // panel-additive trapezoid recursion.
  const Complex phase = std::exp(kI * z * h);
  Matrix ivol = Matrix::Zero(p, p);
  for (int j = 0; j < n_nodes; ++j) {
    const Matrix& f = node.phi1[static_cast<std::size_t>(j)];
    if (j > 0) {
      const Matrix& fprev = node.phi1[static_cast<std::size_t>(j - 1)];
      ivol = phase * ivol + 0.5 * h * (phase * fprev + f);
    }
    const double cj = std::sqrt(node_weight(j));
    cpi.block(j * p, 0, p, p) = cj * f;
    cpi.block(j * p, p, p, p) = cj * eye;
    cr.block(j * p, 0, p, p) = cj * (f + kI * z * ivol);
    cr.block(j * p, p, p, p) =
        cj * std::exp(kI * z * node.grid.node(j)) * eye;
  }

  const Matrix x = factor.solve_leading(idx, cr);
  const Matrix gram = cpi.adjoint() * x;

  Matrix jj = Matrix::Zero(2 * p, 2 * p);
  jj.topRightCorner(p, p) = eye;
  jj.bottomLeftCorner(p, p) = eye;
  return Matrix::Identity(2 * p, 2 * p) + kI * z * h * (jj * gram);
}

}  // namespace diracsf
