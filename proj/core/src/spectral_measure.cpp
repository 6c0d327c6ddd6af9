#include "diracsf/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diracsf/errors.hpp"

namespace diracsf {

namespace {

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

SpectralMeasure::SpectralMeasure(int p, double alpha, double window_lo,
                                 double window_hi, std::vector<double> grid,
                                 std::vector<Matrix> density,
                                 std::vector<Atom> atoms)
    : p_(p),
      alpha_(alpha),
      lo_(window_lo),
      hi_(window_hi),
      grid_(std::move(grid)),
      density_(std::move(density)),
      atoms_(std::move(atoms)) {
  if (p_ < 1) throw DimensionMismatch("measure: p must be positive");
  if (!(alpha_ >= 0.0))
    throw Error("measure: tail coefficient must be nonnegative");
  if (!(lo_ < hi_)) throw GridMismatch("measure: window must be nonempty");
  if (grid_.size() < 2)
    throw TooFewSamples("measure: density grid needs at least 2 points");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
    if (!(grid_[i] < grid_[i + 1]))
      throw GridMismatch("measure: density grid must be strictly increasing");
  const double span = hi_ - lo_;
  if (std::abs(grid_.front() - lo_) > 1e-9 * span ||
      std::abs(grid_.back() - hi_) > 1e-9 * span)
    throw GridMismatch("measure: density grid must span the window");
  if (density_.size() != grid_.size())
    throw DimensionMismatch("measure: one density sample per grid point");

  pert_.reserve(density_.size());
  const Matrix tail = alpha_ * Matrix::Identity(p_, p_);
  for (Matrix& d : density_) {
    if (d.rows() != p_ || d.cols() != p_)
      throw DimensionMismatch("measure: density samples must be p x p");
    d = hermitize(d);
    if (min_eigenvalue(d) < -1e-10)
      throw Error("measure: density sample is not positive semidefinite");
    pert_.push_back(d - tail);
  }

  std::vector<double> locations;
  for (Atom& a : atoms_) {
    if (a.weight.rows() != p_ || a.weight.cols() != p_)
      throw DimensionMismatch("measure: atom weights must be p x p");
    a.weight = hermitize(a.weight);
    if (min_eigenvalue(a.weight) < -1e-10)
      throw Error("measure: atom weight is not positive semidefinite");
    if (a.t < lo_ || a.t > hi_)
      throw Error("measure: atom location outside the window");
    locations.push_back(a.t);
  }
  std::sort(locations.begin(), locations.end());
  for (std::size_t i = 0; i + 1 < locations.size(); ++i)
    if (locations[i + 1] - locations[i] < 1e-12 * std::max(1.0, span))
      throw Error("measure: atom locations must be pairwise distinct");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.t < y.t; });

  const double edge_dev = std::max((density_.front() - tail).norm(),
                                   (density_.back() - tail).norm());
  if (edge_dev > 0.1 * std::max(alpha_, 1e-3)) {
    std::ostringstream os;
    os << "density at the window edge deviates from the tail coefficient by "
       << edge_dev << "; truncation error may dominate";
    notes_.push_back(os.str());
  }
}

Matrix SpectralMeasure::density_at(double t) const {
  if (t <= grid_.front() || t >= grid_.back())
    return alpha_ * Matrix::Identity(p_, p_);
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double x0 = grid_[i], x1 = grid_[i + 1];
  const double s = (t - x0) / (x1 - x0);
  return (1.0 - s) * density_[i] + s * density_[i + 1];
}

Matrix SpectralMeasure::interval_mass(double a, double b) const {
  if (!(a <= b)) throw GridMismatch("interval_mass: need a <= b");
  Matrix acc = alpha_ * (b - a) * Matrix::Identity(p_, p_);
  // Perturbation part: exact integral of the linear interpolant of
  // (D - alpha I) over [a, b] clipped to the window.
  const double ca = std::max(a, grid_.front());
  const double cb = std::min(b, grid_.back());
  if (ca < cb) {
    auto pert_at = [&](std::size_t i, double t) -> Matrix {
      const double x0 = grid_[i], x1 = grid_[i + 1];
      const double s = (t - x0) / (x1 - x0);
      return (1.0 - s) * pert_[i] + s * pert_[i + 1];
    };
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
      const double c0 = std::max(ca, grid_[i]);
      const double c1 = std::min(cb, grid_[i + 1]);
      if (c0 >= c1) continue;
      acc += 0.5 * (c1 - c0) * (pert_at(i, c0) + pert_at(i, c1));
    }
  }
  for (const Atom& at : atoms_)
    if (at.t >= a && at.t < b) acc += at.weight;
  return acc;
}

double SpectralMeasure::mass(double a, double b) const {
  if (p_ != 1)
    throw DimensionMismatch("mass: scalar interval mass requires p = 1");
  return interval_mass(a, b)(0, 0).real();
}

SpectralMeasure free_measure(int p, double T, int grid_points) {
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<Matrix> density(grid.size());
  const double alpha = 1.0 / kPi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = -T + 2.0 * T * static_cast<double>(i) /
                       static_cast<double>(grid_points - 1);
    density[i] = alpha * Matrix::Identity(p, p);
  }
  return SpectralMeasure(p, alpha, -T, T, std::move(grid), std::move(density),
                         {});
}

SpectralMeasure flat_measure_with_atoms(int p, double alpha, double T,
                                        int grid_points,
                                        std::vector<Atom> atoms) {
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<Matrix> density(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = -T + 2.0 * T * static_cast<double>(i) /
                       static_cast<double>(grid_points - 1);
    density[i] = alpha * Matrix::Identity(p, p);
  }
  return SpectralMeasure(p, alpha, -T, T, std::move(grid), std::move(density),
                         std::move(atoms));
}

}  // namespace diracsf
