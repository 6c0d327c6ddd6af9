#include <doctest.h>

#include <cmath>
#include <vector>

#include "diracsf/characterization.hpp"
#include "diracsf/dirac_direct.hpp"
#include "diracsf/errors.hpp"
#include "diracsf/herglotz.hpp"
#include "diracsf/inverse.hpp"
#include "diracsf/potential.hpp"
#include "diracsf/spectral_measure.hpp"

using namespace diracsf;

namespace {

Matrix scalar(double v) { return v * Matrix::Identity(1, 1); }

// Boundary Weyl-type function of the constant scalar potential v = c on
// [0, ell], used as an independent source of admissible measures.
Matrix constant_v_weyl(double c, double ell, Complex z) {
  const Complex om = std::sqrt(z * z - c * c);
  const Complex s =
      std::abs(om) < 1e-8 ? Complex(ell, 0.0) : std::sin(om * ell) / om;
  const Complex cs = std::cos(om * ell);
  return kI * (cs - kI * (z - c) * s) / (cs - kI * (z + c) * s) *
         Matrix::Identity(1, 1);
}

const SpectralMeasure& constant_v_measure() {
  static const SpectralMeasure m = [] {
    StieltjesOptions opt;
    opt.T = 50.0;
    opt.grid_points = 4001;
    return stieltjes_invert(
        [](Complex z) { return constant_v_weyl(0.5, 1.0, z); }, 1, opt);
  }();
  return m;
}

}  // namespace

TEST_CASE("free measure passes every admissibility condition") {
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  const CheckReport rep = check_spectral_conditions(m, 1.0, {64, 128, 256});
  CHECK(rep.verdict);
  CHECK(rep.failed_conditions().empty());
  CHECK(rep.condition_i_value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.levels.size() == 3);
  for (const LevelDatum& d : rep.levels) {
    CHECK(d.lambda_min == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.phi1_deriv_norm == 0.0);
  }
  CHECK(rep.lambda_min_trend == doctest::Approx(1.0).epsilon(1e-12));
  // ratio guard: an identically zero kernel counts as stable
  CHECK(rep.condition_iii_ratio == 1.0);
  CHECK(rep.nu_defect == 0.0);
  CHECK(!rep.notes.empty());
}

TEST_CASE("admissibility check needs at least two levels") {
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  CHECK_THROWS_AS(check_spectral_conditions(m, 1.0, {64}), TooFewSamples);
}

TEST_CASE("doubled tail coefficient fails exactly the Hermitian condition") {
  const int pts = 801;
  std::vector<double> grid(pts);
  for (int i = 0; i < pts; ++i) grid[i] = -40.0 + 80.0 * i / (pts - 1);
  const double alpha = 2.0 / kPi;
  const SpectralMeasure m(1, alpha, -40.0, 40.0, grid,
                          std::vector<Matrix>(grid.size(), scalar(alpha)),
                          {});
  const CheckReport rep = check_spectral_conditions(m, 1.0, {32, 64});
  CHECK(!rep.verdict);
  // nu = i (pi alpha - 1) I = i I, so the anti-Hermitian defect is exactly 1
  CHECK(rep.nu_defect == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.condition_i_pass);
  CHECK(rep.condition_ii_pass);
  CHECK(rep.condition_iii_pass);
  CHECK(!rep.condition_iv_pass);
  const std::vector<std::string> failed = rep.failed_conditions();
  REQUIRE(failed.size() == 1);
  CHECK(failed[0] == "Hermitian constant term (IV)");
}

TEST_CASE("finite-atom measure fails by positivity decay") {
  const std::vector<Atom> atoms = {
      {-1.0, scalar(0.6)}, {0.0, scalar(0.3)}, {1.5, scalar(0.2)}};
  const SpectralMeasure m = flat_measure_with_atoms(1, 0.0, 5.0, 101, atoms);
  const CheckReport rep = check_spectral_conditions(m, 1.0, {32, 64});
  CHECK(!rep.verdict);
  CHECK(rep.condition_i_pass);
  // the operator has rank <= number of atoms, so its smallest eigenvalue
  // collapses once the discretization exceeds three nodes
  CHECK(!rep.condition_ii_pass);
  CHECK(std::abs(rep.levels.back().lambda_min) < 1e-6);
  // alpha = 0 also breaks the constant term: nu = -i I
  CHECK(!rep.condition_iv_pass);
  CHECK(rep.nu_defect == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure of a constant potential is accepted") {
  const CheckReport rep =
      check_spectral_conditions(constant_v_measure(), 1.0, {64, 128, 256});
  CHECK(rep.verdict);
  CHECK(rep.failed_conditions().empty());
  CHECK(rep.levels.back().lambda_min == doctest::Approx(1.379).epsilon(0.01));
  CHECK(rep.lambda_min_trend > 0.9);
  CHECK(rep.lambda_min_trend < 1.1);
  CHECK(rep.condition_iii_ratio > 0.95);
  CHECK(rep.condition_iii_ratio < 1.05);
  CHECK(rep.nu_defect <= 1e-10);
}

TEST_CASE("measure produced by the boundary-Weyl pipeline is accepted") {
  // smooth sine potential -> boundary Weyl function by ODE -> density probe
  const int n = 256;
  std::vector<Matrix> v(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    v[static_cast<std::size_t>(i)] = scalar(0.4 * std::sin(kPi * x));
  }
  const Potential pot(1, 1.0, n, v);
  const Matrix P = default_weyl_direction(1);
  StieltjesOptions opt;
  opt.T = 50.0;
  opt.grid_points = 4001;
  const SpectralMeasure m = stieltjes_invert(
      [&](Complex z) { return weyl_function(pot, z, P); }, 1, opt);
  CHECK(m.atoms().empty());
  const CheckReport rep = check_spectral_conditions(m, 1.0, {64, 128, 256});
  CHECK(rep.verdict);
  CHECK(rep.nu_defect <= 1e-10);
  // and the generating potential passes the isometry test against it
  const double defect =
      parseval_defect(pot, m, default_parseval_test_functions(pot.grid(), 1));
  CHECK(defect < 1e-2);
  CHECK(defect < 1e-3);
}

TEST_CASE("gaussian test function validates the component index") {
  const UniformGrid grid{0.0, 1.0, 64};
  CHECK_THROWS_AS(gaussian_test_function(grid, 1, 2, 0.5, 0.1, 0.0),
                  DimensionMismatch);
  CHECK_THROWS_AS(gaussian_test_function(grid, 1, -1, 0.5, 0.1, 0.0),
                  DimensionMismatch);
  const SampledFunction f = gaussian_test_function(grid, 2, 3, 0.5, 0.1, 1.0);
  REQUIRE(f.size() == 65);
  CHECK(f[32](3) != Complex(0.0, 0.0));
  CHECK(f[32](0) == Complex(0.0, 0.0));
}

TEST_CASE("default battery spans single components and conjugate pairs") {
  const UniformGrid grid{0.0, 1.0, 64};
  const std::vector<SampledFunction> fs =
      default_parseval_test_functions(grid, 2);
  REQUIRE(fs.size() == 10);
  for (const SampledFunction& f : fs) {
    REQUIRE(f.size() == 65);
    REQUIRE(f[0].size() == 4);
  }
  // the trailing entries populate both a top and a bottom component
  const SampledFunction& pair = fs.back();
  CHECK(std::abs(pair[32](0)) > 0.5);
  CHECK(std::abs(pair[32](3)) > 0.5);
  CHECK(pair[32](1) == Complex(0.0, 0.0));
}

TEST_CASE("matched free pair is isometric to machine precision") {
  const Potential pot = zero_potential(1, 1.0, 512);
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  const double defect =
      parseval_defect(pot, m, default_parseval_test_functions(pot.grid(), 1));
  CHECK(defect < 1e-12);
}

TEST_CASE("matched constant-potential pair passes the isometry test") {
  const Potential pot = constant_potential(0.5, 1.0, 512);
  const double defect = parseval_defect(
      pot, constant_v_measure(),
      default_parseval_test_functions(pot.grid(), 1));
  CHECK(defect < 1e-2);
  CHECK(defect < 1e-3);
}

TEST_CASE("mismatched pair is flagged by the isometry test") {
  const Potential pot = constant_potential(0.5, 1.0, 512);
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  const double defect =
      parseval_defect(pot, m, default_parseval_test_functions(pot.grid(), 1));
  CHECK(defect >= 0.1);
  CHECK(defect < 0.5);
}

TEST_CASE("disjointly supported two-component function keeps cross terms") {
  const Potential pot = zero_potential(1, 1.0, 512);
  SampledFunction f =
      gaussian_test_function(pot.grid(), 1, 0, 0.3, 0.08, 0.0);
  const SampledFunction g =
      gaussian_test_function(pot.grid(), 1, 1, 0.7, 0.08, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += g[i];
  CHECK(parseval_defect(pot, free_measure(1, 40.0, 801), {f}) < 1e-2);
  const Potential cpot = constant_potential(0.5, 1.0, 512);
  CHECK(parseval_defect(cpot, constant_v_measure(), {f}) < 1e-2);
}

TEST_CASE("isometry test validates its inputs") {
  const Potential pot = zero_potential(1, 1.0, 64);
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  CHECK_THROWS_AS(parseval_defect(pot, m, {}), TooFewSamples);
  const std::vector<SampledFunction> fs =
      default_parseval_test_functions(pot.grid(), 1);
  CHECK_THROWS_AS(parseval_defect(pot, m, fs, -60.0, 60.0, 2),
                  TooFewSamples);
  const SampledFunction zero(
      static_cast<std::size_t>(pot.grid().node_count()), Vector::Zero(2));
  CHECK_THROWS_AS(parseval_defect(pot, m, {zero}), Error);
  const SpectralMeasure m2 = free_measure(2, 40.0, 801);
  CHECK_THROWS_AS(parseval_defect(pot, m2, fs), DimensionMismatch);
}

TEST_CASE("atom perturbation yields a nonzero potential the test accepts") {
  const SpectralMeasure m = flat_measure_with_atoms(
      1, 1.0 / kPi, 40.0, 1601, {{1.0, scalar(0.2)}});
  InverseOptions opt;
  opt.n = 256;
  const InverseResult res = solve_inverse(m, 1.0, opt);
  double vmax = 0.0;
  for (const Matrix& v : res.potential.samples())
    vmax = std::max(vmax, v.norm());
  CHECK(vmax > 0.05);
  const double defect = parseval_defect(
      res.potential, m,
      default_parseval_test_functions(res.potential.grid(), 1));
  CHECK(defect <= 1e-2);
  CHECK(defect < 1e-3);
}

TEST_CASE("interval consistency holds for the free measure") {
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  const SemiaxisReport rep = semiaxis_check(m, {0.5, 1.0}, 128);
  CHECK(rep.verdict);
  REQUIRE(rep.reports.size() == 2);
  CHECK(rep.reports[0].verdict);
  CHECK(rep.reports[1].verdict);
  CHECK(rep.nested_beta_agreement <= 1e-13);
  CHECK(rep.nested_gamma_agreement <= 1e-13);
  CHECK(rep.nested_potential_agreement <= 1e-13);
  CHECK(!rep.notes.empty());
}

TEST_CASE("interval consistency holds for a perturbed measure") {
  const SemiaxisReport rep =
      semiaxis_check(constant_v_measure(), {0.5, 1.0}, 256);
  CHECK(rep.verdict);
  CHECK(rep.nested_beta_agreement <= 1e-12);
  CHECK(rep.nested_gamma_agreement <= 1e-12);
  CHECK(rep.nested_potential_agreement <= 1e-3);
}

TEST_CASE("interval consistency needs at least two lengths") {
  const SpectralMeasure m = free_measure(1, 40.0, 801);
  CHECK_THROWS_AS(semiaxis_check(m, {1.0}, 128), TooFewSamples);
}
