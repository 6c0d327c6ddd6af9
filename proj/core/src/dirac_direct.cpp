#include "diracsf/dirac_direct.hpp"

#include <cmath>

namespace diracsf {

namespace {

// v at the subinterval midpoints of g, by linear interpolation.
std::vector<Matrix> midpoint_samples(const Potential& pot,
                                     const UniformGrid& g) {
  std::vector<Matrix> mids;
  mids.reserve(g.n);
  const double h = g.step();
  for (int i = 0; i < g.n; ++i) mids.push_back(pot.value_at(g.node(i) + 0.5 * h));
  return mids;
}

std::vector<Matrix> propagate(const std::vector<Matrix>& v_mids, Complex z,
                              double h, int p) {
  std::vector<Matrix> u(v_mids.size() + 1);
  u[0] = Matrix::Identity(2 * p, 2 * p);
  for (std::size_t i = 0; i < v_mids.size(); ++i)
    u[i + 1] = dirac_step(z, v_mids[i], h) * u[i];
  return u;
}

void check_subgrid(const Potential& pot, const UniformGrid& g) {
  const double slack = 1e-9 * (1.0 + pot.ell());
  if (std::abs(g.start) > slack)
    throw GridMismatch("fundamental_solution: grid must start at 0");
  if (g.end > pot.ell() + slack)
    throw GridMismatch("fundamental_solution: grid exceeds [0, ell]");
}

}  // namespace

Matrix dirac_step(Complex z, const Matrix& v_mid, double h) {
  const int p = static_cast<int>(v_mid.rows());
  if (p == 1) {
    // M = [[z, v], [-conj(v), -z]] is trace-free with M^2 = (z^2 - |v|^2) I,
    // so exp(i h M) = cos(theta) I + i (sin(theta)/theta) h M, theta = h w.
    const Complex v = v_mid(0, 0);
    const Complex w2 = z * z - std::norm(v);
    const Complex theta = h * std::sqrt(w2);
    const Complex c = std::cos(theta);
    const Complex s =
        (std::abs(theta) < 1e-12) ? Complex(1.0) : std::sin(theta) / theta;
    Matrix out(2, 2);
    const Complex ihs = kI * h * s;
    out(0, 0) = c + ihs * z;
    out(0, 1) = ihs * v;
    out(1, 0) = -ihs * std::conj(v);
    out(1, 1) = c - ihs * z;
    return out;
  }
  Matrix m = Matrix::Zero(2 * p, 2 * p);
  m.topLeftCorner(p, p) = z * Matrix::Identity(p, p);
  m.topRightCorner(p, p) = v_mid;
  m.bottomLeftCorner(p, p) = -v_mid.adjoint();
  m.bottomRightCorner(p, p) = -z * Matrix::Identity(p, p);
  return matrix_exponential((kI * h) * m);
}

std::vector<Matrix> fundamental_solution(const Potential& pot, Complex z,
                                         const UniformGrid& g) {
  check_subgrid(pot, g);
  return propagate(midpoint_samples(pot, g), z, g.step(), pot.p());
}

std::vector<Matrix> fundamental_solution(const Potential& pot, Complex z) {
  return fundamental_solution(pot, z, pot.grid());
}

BetaGamma beta_gamma(const Potential& pot, int n) {
  const int p = pot.p();
  const SignatureConstants sig(p);
  const UniformGrid half(0.0, pot.ell(), n);
  const std::vector<Matrix> u = fundamental_solution(pot, 0.0, half);
  BetaGamma bg;
  bg.p = p;
  bg.grid = UniformGrid(0.0, 2.0 * pot.ell(), n);
  bg.beta.reserve(n + 1);
  bg.gamma.reserve(n + 1);
  const Matrix theta_adj = sig.Theta.adjoint();
  for (int i = 0; i <= n; ++i) {
    bg.beta.push_back(u[i].topRows(p) * theta_adj);
    bg.gamma.push_back(u[i].bottomRows(p) * theta_adj);
  }
  return bg;
}

std::vector<Matrix> hamiltonian(const BetaGamma& bg) {
  std::vector<Matrix> h;
  h.reserve(bg.beta.size());
  for (const Matrix& b : bg.beta) h.push_back(b.adjoint() * b);
  return h;
}

Potential potential_from_beta_gamma(const BetaGamma& bg) {
  const SignatureConstants sig(bg.p);
  const std::vector<Matrix> bp = central_difference(bg.beta, bg.grid.step());
  std::vector<Matrix> v;
  v.reserve(bg.beta.size());
  for (std::size_t i = 0; i < bg.beta.size(); ++i)
    v.push_back(2.0 * kI * bp[i] * sig.J * bg.gamma[i].adjoint());
  return Potential(bg.p, 0.5 * bg.grid.end, bg.grid.n, std::move(v));
}

Matrix canonical_fundamental(const Potential& pot, double x, Complex z) {
  const int p = pot.p();
  if (x < 0.0 || x > 2.0 * pot.ell() + 1e-9)
    throw GridMismatch("canonical_fundamental: x outside [0, 2 ell]");
  if (x < 1e-14) return Matrix::Identity(2 * p, 2 * p);
  const SignatureConstants sig(p);
  const int m = std::max(
      1, static_cast<int>(std::ceil(pot.grid().n * (0.5 * x) / pot.ell() - 1e-12)));
  const UniformGrid g(0.0, 0.5 * x, m);
  const Matrix u0 = fundamental_solution(pot, 0.0, g).back();
  const Matrix uz = fundamental_solution(pot, z, g).back();
  return std::exp(kI * z * (0.5 * x)) * sig.Theta *
         u0.partialPivLu().solve(uz) * sig.Theta.adjoint();
}

std::vector<Matrix> canonical_fundamental_nodes(const Potential& pot, int n,
                                                Complex z) {
  const int p = pot.p();
  const SignatureConstants sig(p);
  const UniformGrid half(0.0, pot.ell(), n);
  const std::vector<Matrix> u0 = fundamental_solution(pot, 0.0, half);
  const std::vector<Matrix> uz = fundamental_solution(pot, z, half);
  std::vector<Matrix> w;
  w.reserve(n + 1);
  const UniformGrid g2(0.0, 2.0 * pot.ell(), n);
  for (int i = 0; i <= n; ++i)
    w.push_back(std::exp(kI * z * (0.5 * g2.node(i))) * sig.Theta *
                u0[i].partialPivLu().solve(uz[i]) * sig.Theta.adjoint());
  return w;
}

Matrix default_weyl_direction(int p) {
  Matrix P = Matrix::Zero(2 * p, p);
  P.topRows(p) = Matrix::Identity(p, p);
  return P;
}

Matrix weyl_function(const Potential& pot, Complex z, const Matrix& P) {
  const int p = pot.p();
  if (P.rows() != 2 * p || P.cols() != p)
    throw DimensionMismatch("weyl_function: P must be 2p x p");
  const Matrix u = fundamental_solution(pot, std::conj(z)).back();
  const Matrix up = u.adjoint() * P;
  const Matrix num = up.topRows(p) - up.bottomRows(p);
  const Matrix den = up.topRows(p) + up.bottomRows(p);
  const Eigen::JacobiSVD<Matrix> svd(den);
  const double scale = std::max(num.norm(), den.norm());
  if (svd.singularValues().minCoeff() <= 1e-12 * std::max(scale, 1.0))
    throw SingularDenominator("weyl_function: [I I] U P is singular");
  return kI * num * den.fullPivLu().inverse();
}

double weyl_residual_semiaxis(const Potential& pot, const Matrix& phi,
                              Complex z, double x_max) {
  const int p = pot.p();
  const SignatureConstants sig(p);
  const int m = std::max(
      1, static_cast<int>(std::ceil(pot.grid().n * x_max / pot.ell() - 1e-12)));
  const UniformGrid g(0.0, x_max, m);
  const std::vector<Matrix> u = fundamental_solution(pot, z, g);
  Matrix column(2 * p, p);
  column.topRows(p) = Matrix::Identity(p, p);
  column.bottomRows(p) = -kI * phi;
  const Matrix b = sig.Theta.adjoint() * column;
  std::vector<Matrix> integrand;
  integrand.reserve(u.size());
  for (const Matrix& ui : u) {
    const Matrix w = ui * b;
    integrand.push_back(w.adjoint() * w);
  }
  return trapezoid_integrate(integrand, g.step()).operatorNorm();
}

std::vector<Vector> apply_dirac_expression(const Potential& pot,
                                           const std::vector<Vector>& f) {
  const int p = pot.p();
  const UniformGrid& g = pot.grid();
  if (static_cast<int>(f.size()) != g.node_count())
    throw DimensionMismatch("apply_dirac_expression: sample count mismatch");
  const SignatureConstants sig(p);
  const std::vector<Vector> fp = central_difference(f, g.step());
  std::vector<Vector> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Matrix big = Matrix::Zero(2 * p, 2 * p);
    big.topRightCorner(p, p) = pot.samples()[i];
    big.bottomLeftCorner(p, p) = pot.samples()[i].adjoint();
    out[i] = -(kI * sig.j * fp[i] + big * f[i]);
  }
  return out;
}

std::vector<Vector> spectral_transform(const Potential& pot,
                                       const std::vector<Vector>& f,
                                       const std::vector<double>& ts) {
  const int p = pot.p();
  const UniformGrid& g = pot.grid();
  if (static_cast<int>(f.size()) != g.node_count())
    throw DimensionMismatch("spectral_transform: sample count mismatch");
  const std::vector<Matrix> v_mids = midpoint_samples(pot, g);
  const double h = g.step();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Vector> out;
  out.reserve(ts.size());
  for (double t : ts) {
    Matrix u = Matrix::Identity(2 * p, 2 * p);
    Vector acc = Vector::Zero(p);
    // trapezoid accumulated on the fly: [I I] u(x,t)* f(x)
    auto term = [&](const Matrix& um, const Vector& fv) -> Vector {
      const Vector uf = um.adjoint() * fv;
      return uf.head(p) + uf.tail(p);
    };
    acc += 0.5 * term(u, f[0]);
    for (int i = 0; i < g.n; ++i) {
      u = dirac_step(t, v_mids[i], h) * u;
      const double w = (i + 1 == g.n) ? 0.5 : 1.0;
      acc += w * term(u, f[i + 1]);
    }
    out.push_back(inv_sqrt2 * h * acc);
  }
  return out;
}

Vector spectral_transform(const Potential& pot, const std::vector<Vector>& f,
                          double t) {
  return spectral_transform(pot, f, std::vector<double>{t}).front();
}

}  // namespace diracsf
