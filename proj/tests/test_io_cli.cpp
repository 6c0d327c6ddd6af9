#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diracsf/errors.hpp"
#include "diracsf/io.hpp"
#include "diracsf/potential.hpp"
#include "diracsf/spectral_measure.hpp"

namespace fs = std::filesystem;
using namespace diracsf;

namespace {

/// Scratch directory removed when the test case ends.
struct TempDir {
  fs::path path;

  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("diracsf-io-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

struct CliResult {
  int code = -1;
  std::string output;
};

/// Run the installed command-line binary with the given arguments, capturing
/// the exit code and the combined stdout/stderr text.
CliResult run_cli(const TempDir& dir, const std::string& args) {
  const std::string log = dir.file("cli_log.txt");
  const std::string cmd =
      std::string(DIRACSF_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
  if (status != -1 && WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.output = read_text(log);
  return result;
}

Matrix m1(std::complex<double> v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

Matrix hermitian2(double a, double b, std::complex<double> c) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  m(0, 1) = c;
  m(1, 0) = std::conj(c);
  return m;
}

SpectralMeasure awkward_measure() {
  const double alpha = 1.0 / 3.0;
  const std::vector<double> grid = {-2.5, -1.0 / 3.0, 0.1,
                                    1.0000000000000002, 2.5};
  const Matrix tail = alpha * Matrix::Identity(2, 2);
  std::vector<Matrix> density = {
      tail,
      hermitian2(1.0 / 3.0, 0.7, {0.2, 0.1}),
      hermitian2(std::sqrt(2.0), 0.9, {-0.3, 0.05}),
      hermitian2(0.41, 0.6, {0.0, -0.17}),
      tail};
  std::vector<Atom> atoms = {
      {-1.25, hermitian2(0.5, 0.5, {0.25, 0.125})},
      {1.0 / 3.0, hermitian2(kPi / 10.0, 0.2, {0.1, -0.05})}};
  return SpectralMeasure(2, alpha, -2.5, 2.5, grid, density, atoms);
}

std::string baseline_measure_json(const std::string& version,
                                  const std::string& density,
                                  const std::string& atoms) {
  return std::string("{\"schema\":\"spectral-measure\",\"version\":") +
         version +
         ",\"p\":1,\"tail_coefficient\":0.3,\"window\":[-1.0,1.0],"
         "\"grid\":[-1.0,0.0,1.0],\"density\":" +
         density + ",\"atoms\":" + atoms + "}";
}

}  // namespace

TEST_CASE("measure JSON roundtrip reproduces every field bit for bit") {
  TempDir dir;
  const SpectralMeasure original = awkward_measure();
  const std::string path = dir.file("measure.json");
  save_measure(original, path);
  const SpectralMeasure loaded = load_measure(path);

  CHECK(loaded.p() == original.p());
  CHECK(loaded.alpha() == original.alpha());
  CHECK(loaded.window_lo() == original.window_lo());
  CHECK(loaded.window_hi() == original.window_hi());
  REQUIRE(loaded.grid().size() == original.grid().size());
  for (std::size_t i = 0; i < original.grid().size(); ++i)
    CHECK(loaded.grid()[i] == original.grid()[i]);
  REQUIRE(loaded.density().size() == original.density().size());
  for (std::size_t i = 0; i < original.density().size(); ++i)
    CHECK((loaded.density()[i] - original.density()[i]).norm() == 0.0);
  REQUIRE(loaded.atoms().size() == original.atoms().size());
  for (std::size_t i = 0; i < original.atoms().size(); ++i) {
    CHECK(loaded.atoms()[i].t == original.atoms()[i].t);
    CHECK((loaded.atoms()[i].weight - original.atoms()[i].weight).norm() ==
          0.0);
  }

  // A second save of the loaded object must produce the identical document.
  const std::string path2 = dir.file("measure2.json");
  save_measure(loaded, path2);
  CHECK(read_text(path2) == read_text(path));
}

TEST_CASE("potential JSON roundtrip reproduces every field bit for bit") {
  TempDir dir;
  const Potential original = sampled_potential(2, kPi / 3.0, 5, [](double x) {
    Matrix v(2, 2);
    v(0, 0) = std::complex<double>(std::sin(x), 1.0 / 7.0);
    v(0, 1) = std::complex<double>(x / 3.0, -std::sqrt(2.0));
    v(1, 0) = std::complex<double>(-0.1, 0.25 * x);
    v(1, 1) = std::complex<double>(std::cos(3.0 * x), 0.0);
    return v;
  });
  const std::string path = dir.file("potential.json");
  save_potential(original, path);
  const Potential loaded = load_potential(path);

  CHECK(loaded.p() == original.p());
  CHECK(loaded.ell() == original.ell());
  REQUIRE(loaded.grid().node_count() == original.grid().node_count());
  for (int i = 0; i < original.grid().node_count(); ++i)
    CHECK(loaded.grid().node(i) == original.grid().node(i));
  REQUIRE(loaded.samples().size() == original.samples().size());
  for (std::size_t i = 0; i < original.samples().size(); ++i)
    CHECK((loaded.samples()[i] - original.samples()[i]).norm() == 0.0);
}

TEST_CASE("check report JSON roundtrip preserves all diagnostics") {
  TempDir dir;
  CheckReport report;
  report.condition_i_value = 0.123456789012345678;
  report.condition_i_pass = true;
  report.levels = {{16, 1.25, 3.0e-3}, {32, 1.2600000000000001, 1.5e-3}};
  report.lambda_min_trend = 1.008;
  report.condition_ii_pass = true;
  report.condition_iii_ratio = 0.998;
  report.condition_iii_pass = true;
  report.nu_defect = 2.5e-9;
  report.condition_iv_pass = false;
  report.verdict = false;
  report.notes = {"first note", "second note"};

  const std::string path = dir.file("report.json");
  save_check_report(report, path);
  const CheckReport loaded = load_check_report(path);

  CHECK(loaded.condition_i_value == report.condition_i_value);
  CHECK(loaded.condition_i_pass == report.condition_i_pass);
  REQUIRE(loaded.levels.size() == report.levels.size());
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    CHECK(loaded.levels[i].n == report.levels[i].n);
    CHECK(loaded.levels[i].lambda_min == report.levels[i].lambda_min);
    CHECK(loaded.levels[i].phi1_deriv_norm == report.levels[i].phi1_deriv_norm);
  }
  CHECK(loaded.lambda_min_trend == report.lambda_min_trend);
  CHECK(loaded.condition_ii_pass == report.condition_ii_pass);
  CHECK(loaded.condition_iii_ratio == report.condition_iii_ratio);
  CHECK(loaded.condition_iii_pass == report.condition_iii_pass);
  CHECK(loaded.nu_defect == report.nu_defect);
  CHECK(loaded.condition_iv_pass == report.condition_iv_pass);
  CHECK(loaded.verdict == report.verdict);
  CHECK(loaded.notes == report.notes);
}

TEST_CASE("malformed documents raise ParseError with a reason") {
  TempDir dir;
  const std::string ok_density = "[[[0.3,0.0]],[[0.3,0.0]],[[0.3,0.0]]]";

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_measure(dir.file("nope.json")), ParseError);
  }
  SUBCASE("not JSON at all") {
    const std::string path = dir.file("garbage.json");
    write_text(path, "this is { not json");
    CHECK_THROWS_AS(load_measure(path), ParseError);
    CHECK_THROWS_AS(load_potential(path), ParseError);
    CHECK_THROWS_AS(load_check_report(path), ParseError);
  }
  SUBCASE("JSON root is not an object") {
    const std::string path = dir.file("array.json");
    write_text(path, "[1, 2, 3]");
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("wrong schema tag") {
    const std::string path = dir.file("measure.json");
    save_measure(free_measure(1, 1.0, 3), path);
    CHECK_THROWS_AS(load_potential(path), ParseError);
    CHECK_THROWS_AS(load_check_report(path), ParseError);
    CHECK_NOTHROW(load_measure(path));
  }
  SUBCASE("unsupported version") {
    const std::string path = dir.file("v2.json");
    write_text(path, baseline_measure_json("2", ok_density, "[]"));
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("density count does not match the grid") {
    const std::string path = dir.file("short.json");
    write_text(path,
               baseline_measure_json("1", "[[[0.3,0.0]],[[0.3,0.0]]]", "[]"));
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("complex entry is not a [re, im] pair") {
    const std::string path = dir.file("badc.json");
    write_text(path, baseline_measure_json(
                         "1", "[[[0.3,0.0]],[[\"x\",0.0]],[[0.3,0.0]]]",
                         "[]"));
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("atom weight has the wrong entry count") {
    const std::string path = dir.file("badatom.json");
    write_text(path,
               baseline_measure_json(
                   "1", ok_density,
                   "[{\"t\":0.5,\"weight\":[[1.0,0.0],[1.0,0.0]]}]"));
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("missing required key") {
    const std::string path = dir.file("nokey.json");
    write_text(path,
               "{\"schema\":\"spectral-measure\",\"version\":1,\"p\":1}");
    CHECK_THROWS_AS(load_measure(path), ParseError);
  }
  SUBCASE("potential grid must be uniform from zero") {
    const std::string path = dir.file("grid.json");
    write_text(path,
               "{\"schema\":\"dirac-potential\",\"version\":1,\"p\":1,"
               "\"ell\":1.0,\"grid\":[0.0,0.4,1.0],"
               "\"v\":[[[0.0,0.0]],[[0.0,0.0]],[[0.0,0.0]]]}");
    CHECK_THROWS_AS(load_potential(path), ParseError);
  }
  SUBCASE("potential grid too short") {
    const std::string path = dir.file("short_grid.json");
    write_text(path,
               "{\"schema\":\"dirac-potential\",\"version\":1,\"p\":1,"
               "\"ell\":1.0,\"grid\":[0.0],\"v\":[[[0.0,0.0]]]}");
    CHECK_THROWS_AS(load_potential(path), ParseError);
  }
  SUBCASE("potential sample count mismatch") {
    const std::string path = dir.file("vcount.json");
    write_text(path,
               "{\"schema\":\"dirac-potential\",\"version\":1,\"p\":1,"
               "\"ell\":1.0,\"grid\":[0.0,0.5,1.0],"
               "\"v\":[[[0.0,0.0]],[[0.0,0.0]]]}");
    CHECK_THROWS_AS(load_potential(path), ParseError);
  }
}

TEST_CASE("CSV exports carry headers, one row per node, and an atom sibling") {
  TempDir dir;

  SUBCASE("scalar measure with atoms") {
    std::vector<Atom> atoms = {{0.25, m1(0.4)}, {1.5, m1(0.1)}};
    const SpectralMeasure m =
        flat_measure_with_atoms(1, 1.0 / kPi, 2.0, 5, atoms);
    const std::string path = dir.file("meas.csv");
    write_measure_csv(m, path);

    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 6);  // header + 5 grid rows
    CHECK(lines[0] == "t,D_re_00,D_im_00");

    const std::string atom_path = dir.file("meas_atoms.csv");
    REQUIRE(fs::exists(atom_path));
    const auto atom_lines = read_lines(atom_path);
    REQUIRE(atom_lines.size() == 3);  // header + 2 atoms
    CHECK(atom_lines[0] == "t,W_re_00,W_im_00");
    CHECK(atom_lines[1].substr(0, 5) == "0.25,");
  }

  SUBCASE("atom-free measure writes no sibling") {
    const SpectralMeasure m = free_measure(1, 2.0, 5);
    const std::string path = dir.file("plain.csv");
    write_measure_csv(m, path);
    CHECK(fs::exists(path));
    CHECK(!fs::exists(dir.file("plain_atoms.csv")));
  }

  SUBCASE("matrix potential header enumerates entries row-major") {
    const Potential pot = zero_potential(2, 1.0, 3);
    const std::string path = dir.file("pot.csv");
    write_potential_csv(pot, path);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 5);  // header + 4 nodes
    CHECK(lines[0] ==
          "x,v_re_00,v_im_00,v_re_01,v_im_01,v_re_10,v_im_10,v_re_11,v_im_11");
  }
}

TEST_CASE("cli direct writes the measure of a potential") {
  TempDir dir;
  save_potential(zero_potential(1, 1.0, 32), dir.file("pot.json"));
  const CliResult r = run_cli(
      dir, "direct --in " + dir.file("pot.json") + " --out " +
               dir.file("meas.json") + " --window 20 --grid-points 801");
  CHECK(r.code == 0);
  CHECK(r.output.find("measure on") != std::string::npos);

  const SpectralMeasure m = load_measure(dir.file("meas.json"));
  CHECK(m.p() == 1);
  CHECK(m.grid().size() == 801);
  CHECK(m.alpha() == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(std::abs(m.density_at(0.0)(0, 0) -
                 std::complex<double>(1.0 / kPi, 0.0)) < 1e-6);
  CHECK(m.atoms().empty());
  CHECK(fs::exists(dir.file("meas.csv")));
}

TEST_CASE("cli check reports verdicts with matching exit codes") {
  TempDir dir;
  save_measure(free_measure(1, 50.0, 2001), dir.file("free.json"));
  save_measure(flat_measure_with_atoms(1, 2.0 / kPi, 50.0, 2001, {}),
               dir.file("flat.json"));

  const CliResult ok = run_cli(
      dir, "check --in " + dir.file("free.json") +
               " --ell 1 --levels 16,32 --out " + dir.file("rep_ok.json"));
  CHECK(ok.code == 0);
  CHECK(ok.output.find("verdict: ADMISSIBLE") != std::string::npos);
  const CheckReport rep_ok = load_check_report(dir.file("rep_ok.json"));
  CHECK(rep_ok.verdict);
  CHECK(rep_ok.condition_i_pass);
  CHECK(rep_ok.condition_ii_pass);
  CHECK(rep_ok.condition_iii_pass);
  CHECK(rep_ok.condition_iv_pass);

  const CliResult bad = run_cli(
      dir, "check --in " + dir.file("flat.json") +
               " --ell 1 --levels 16,32 --out " + dir.file("rep_bad.json"));
  CHECK(bad.code == 2);
  CHECK(bad.output.find("verdict: REJECTED") != std::string::npos);
  const CheckReport rep_bad = load_check_report(dir.file("rep_bad.json"));
  CHECK(!rep_bad.verdict);
  CHECK(rep_bad.condition_i_pass);
  CHECK(rep_bad.condition_ii_pass);
  CHECK(rep_bad.condition_iii_pass);
  CHECK(!rep_bad.condition_iv_pass);
  CHECK(rep_bad.nu_defect == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cli inverse distinguishes refusal, force, and hard failure") {
  TempDir dir;
  save_measure(flat_measure_with_atoms(1, 2.0 / kPi, 50.0, 2001, {}),
               dir.file("flat.json"));

  // Inadmissible measure: refused outright, no output written.
  const CliResult refused = run_cli(
      dir, "inverse --in " + dir.file("flat.json") + " --out " +
               dir.file("v.json") + " --ell 1 --n 16");
  CHECK(refused.code == 4);
  CHECK(!fs::exists(dir.file("v.json")));

  // Same measure with --force: the operator is positive definite, so the
  // recovery runs to completion.
  const CliResult forced = run_cli(
      dir, "inverse --in " + dir.file("flat.json") + " --out " +
               dir.file("v.json") + " --ell 1 --n 16 --force");
  CHECK(forced.code == 0);
  REQUIRE(fs::exists(dir.file("v.json")));
  CHECK(fs::exists(dir.file("v.csv")));
  const Potential rec = load_potential(dir.file("v.json"));
  CHECK(rec.p() == 1);
  CHECK(rec.grid().node_count() == 17);

  // Purely atomic measure with no absolutely continuous part: the
  // discretized operator is rank deficient and factorization must fail
  // even under --force.
  std::vector<Atom> atoms = {
      {-1.0, m1(0.35)}, {0.2, m1(0.5)}, {1.4, m1(0.25)}};
  save_measure(flat_measure_with_atoms(1, 0.0, 50.0, 2001, atoms),
               dir.file("atoms.json"));
  const CliResult hard = run_cli(
      dir, "inverse --in " + dir.file("atoms.json") + " --out " +
               dir.file("va.json") + " --ell 1 --n 16 --force");
  CHECK(hard.code == 5);

  // Unknown route names are parse failures.
  const CliResult route = run_cli(
      dir, "inverse --in " + dir.file("flat.json") + " --out " +
               dir.file("vr.json") +
               " --ell 1 --n 16 --force --beta-route bogus");
  CHECK(route.code == 3);
}

TEST_CASE("cli roundtrip reports the recovery deviation") {
  TempDir dir;
  save_potential(constant_potential(0.5, 1.0, 32), dir.file("pot.json"));
  const CliResult r = run_cli(
      dir, "roundtrip --in " + dir.file("pot.json") +
               " --n 64 --window 30 --grid-points 1201 --measure-out " +
               dir.file("m.json") + " --out " + dir.file("rec.json"));
  CHECK(r.code == 0);
  CHECK(r.output.find("max interior deviation") != std::string::npos);
  CHECK(fs::exists(dir.file("m.json")));
  CHECK(fs::exists(dir.file("rec.json")));
  CHECK(fs::exists(dir.file("rec.csv")));
}

TEST_CASE("cli pw prints certificates and verdict exit codes") {
  TempDir dir;
  save_measure(free_measure(1, 50.0, 2001), dir.file("free.json"));
  const CliResult cert = run_cli(
      dir, "pw --in " + dir.file("free.json") +
               " --r 0.2 --window \"-50,50\" --ell 1.5");
  CHECK(cert.code == 0);
  CHECK(cert.output.find("rate 0.2: CERTIFIED") != std::string::npos);
  CHECK(cert.output.find("interval-class sampling: CERTIFIED") !=
        std::string::npos);

  // A purely atomic measure has vanishing capacity density at every rate.
  std::vector<Atom> atoms = {
      {-1.0, m1(0.35)}, {0.2, m1(0.5)}, {1.4, m1(0.25)}};
  save_measure(flat_measure_with_atoms(1, 0.0, 50.0, 2001, atoms),
               dir.file("atoms.json"));
  const CliResult refuted =
      run_cli(dir, "pw --in " + dir.file("atoms.json") + " --r 0.2");
  CHECK(refuted.code == 2);
  CHECK(refuted.output.find("NOT CERTIFIED") != std::string::npos);
}

TEST_CASE("cli propagates parse failures as the parse exit code") {
  TempDir dir;
  write_text(dir.file("bad.json"), "garbage {");
  CHECK(run_cli(dir, "direct --in " + dir.file("bad.json") + " --out " +
                         dir.file("x.json"))
            .code == 3);
  CHECK(run_cli(dir, "check --in " + dir.file("bad.json") + " --ell 1")
            .code == 3);
  CHECK(run_cli(dir, "weyl --in " + dir.file("bad.json")).code == 3);
}

TEST_CASE("cli weyl prints function values") {
  TempDir dir;
  save_potential(constant_potential(0.5, 1.0, 64), dir.file("pot.json"));
  const CliResult r = run_cli(
      dir, "weyl --in " + dir.file("pot.json") + " --z 1.0i,2.0+0.5i");
  CHECK(r.code == 0);
  CHECK(r.output.find("phi(0+1i) =") != std::string::npos);
  CHECK(r.output.find("phi(2+0.5i) =") != std::string::npos);
  // Spot value against the constant-potential closed form at z = i.
  CHECK(r.output.find("0.915842") != std::string::npos);
}
