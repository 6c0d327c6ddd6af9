#include "diracsf/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "diracsf/errors.hpp"

namespace diracsf {

namespace {

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix imaginary_part(const Matrix& a) {
  return (a - a.adjoint()) / (2.0 * kI);
}

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix clip_negative_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  return v[mid];
}

double poisson_kernel(double x, double eps) {
  return eps / (kPi * (x * x + eps * eps));
}

}  // namespace

Matrix herglotz_eval(const HerglotzRepresentation& rep, Complex z) {
  if (!(z.imag() > 0.0)) throw Error("herglotz_eval: need Im z > 0");
  const SpectralMeasure& m = rep.measure;
  const Matrix id = Matrix::Identity(m.p(), m.p());
  Matrix out = rep.mu * z + rep.nu;
  // Tail over the full line in closed form: the Cauchy part of alpha dt
  // integrates to i pi alpha and the compensator part cancels by parity.
  out += kI * kPi * m.alpha() * id;
  // Windowed deviation: integrate the piecewise-linear interpolant of
  // D - alpha I against the kernel segment by segment in closed form.
  // Sampled quadrature would need Im z well above the grid step to resolve
  // the Cauchy kernel; the closed form has no such restriction.
  const std::vector<double>& grid = m.grid();
  const std::vector<Matrix>& dens = m.density();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    const Matrix ga = dens[i] - m.alpha() * id;
    const Matrix gb = dens[i + 1] - m.alpha() * id;
    const Matrix slope = (gb - ga) / (b - a);
    // integral of G(t)/(t - z) with G linear: both endpoints sit below the
    // pole, so the principal log branch is the right one.
    const Complex seg_log = std::log((b - z) / (a - z));
    out += (gb - ga) + (ga + slope * (z - a)) * seg_log;
    // integral of G(t) t/(1 + t^2) for the same interpolant.
    const double even = 0.5 * std::log((1.0 + b * b) / (1.0 + a * a));
    const double odd = (b - std::atan(b)) - (a - std::atan(a));
    out -= (ga - slope * a) * even + slope * odd;
  }
  for (const Atom& atom : m.atoms())
    out += (1.0 / (atom.t - z) - atom.t / (1.0 + atom.t * atom.t)) *
           atom.weight;
  return out;
}

HerglotzEvaluator make_evaluator(HerglotzRepresentation rep) {
  auto shared =
      std::make_shared<HerglotzRepresentation>(std::move(rep));
  return [shared](Complex z) { return herglotz_eval(*shared, z); };
}

double condition_i_integral(const SpectralMeasure& m) {
  Matrix acc = m.alpha() * kPi * Matrix::Identity(m.p(), m.p());
  acc += m.integrate_dsigma([](double t) { return 1.0 / (1.0 + t * t); });
  return hermitize(acc).operatorNorm();
}

SpectralMeasure stieltjes_invert(const HerglotzEvaluator& phi, int p,
                                 const StieltjesOptions& opt) {
  if (opt.grid_points < 9)
    throw TooFewSamples("stieltjes_invert: grid too coarse");
  const int n = opt.grid_points;
  const double T = opt.T;
  const double eps = opt.epsilon;
  const double step = 2.0 * T / static_cast<double>(n - 1);

  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<Matrix> density(grid.size());
  std::vector<double> norms(grid.size());
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = -T + step * static_cast<double>(i);
    const Matrix value = phi(Complex(grid[static_cast<std::size_t>(i)], eps));
    const Matrix im = imaginary_part(value);
    const double tol = 1e-8 * std::max(1.0, value.norm());
    if (min_eigenvalue(im) < -tol)
      throw NotHerglotz(
          "stieltjes_invert: imaginary part loses positivity at a probe");
    density[static_cast<std::size_t>(i)] = im / kPi;
    norms[static_cast<std::size_t>(i)] =
        density[static_cast<std::size_t>(i)].norm();
  }

  // Atoms appear as Poisson spikes of height ~ weight/(pi eps): detect local
  // maxima far above the local background, refine the location, and accept
  // only if the mass estimate pi*eps*D is stable under halving eps.
  auto refine_peak = [&](double center, double e,
                         double radius) -> std::pair<double, Matrix> {
    double best_t = center;
    Matrix best_d;
    double best_norm = -1.0;
    const int m_pts = 41;
    for (int k = 0; k < m_pts; ++k) {
      const double t = center - radius +
                       2.0 * radius * static_cast<double>(k) /
                           static_cast<double>(m_pts - 1);
      const Matrix d = imaginary_part(phi(Complex(t, e))) / kPi;
      if (d.norm() > best_norm) {
        best_norm = d.norm();
        best_t = t;
        best_d = d;
      }
    }
    return {best_t, best_d};
  };

  std::vector<Atom> atoms;
  const int halfwin = std::max(5, n / 100);
  for (int i = 1; i + 1 < n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (norms[ui] < norms[ui - 1] || norms[ui] < norms[ui + 1]) continue;
    std::vector<double> local;
    for (int j = std::max(0, i - halfwin);
         j <= std::min(n - 1, i + halfwin); ++j)
      local.push_back(norms[static_cast<std::size_t>(j)]);
    const double background = std::max(median(std::move(local)), 1e-6);
    if (norms[ui] < opt.atom_spike_factor * background) continue;
    bool near_known = false;
    for (const Atom& a : atoms)
      if (std::abs(a.t - grid[ui]) < 5.0 * std::max(eps, step))
        near_known = true;
    if (near_known) continue;

    auto [t1, d1] = refine_peak(grid[ui], eps, 2.0 * step);
    auto [t2, d2] = refine_peak(t1, 0.5 * eps, 2.0 * eps);
    const Matrix m1 = kPi * eps * d1;
    const Matrix m2 = kPi * 0.5 * eps * d2;
    const double drift = (m1 - m2).norm() / std::max(m2.norm(), 1e-12);
    if (drift > opt.atom_stability) continue;
    atoms.push_back({t2, hermitize(m2)});
  }

  // Remove the detected Poisson bumps from the density and clip stray
  // negative eigenvalues introduced by the subtraction.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const Atom& a : atoms)
      density[i] -= poisson_kernel(grid[i] - a.t, eps) * a.weight;
    if (min_eigenvalue(density[i]) < 0.0)
      density[i] = clip_negative_eigenvalues(density[i]);
  }

  return SpectralMeasure(p, 1.0 / kPi, -T, T, std::move(grid),
                         std::move(density), std::move(atoms));
}

double estimate_linear_coefficient(const HerglotzEvaluator& phi,
                                   double big_y) {
  const Matrix value = phi(Complex(0.0, big_y));
  return imaginary_part(value).norm() / big_y;
}

Matrix fit_nu(const HerglotzEvaluator& phi, const SpectralMeasure& m,
              Complex z0) {
  HerglotzRepresentation bare{Matrix::Zero(m.p(), m.p()),
                              Matrix::Zero(m.p(), m.p()), m};
  // Linear coefficient vanishes for this measure class, so the difference
  // at a single interior point is the constant term, anti-Hermitian part
  // included (it witnesses a tail-convention mismatch).
  return phi(z0) - herglotz_eval(bare, z0);
}

}  // namespace diracsf
