#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "diracsf/characterization.hpp"
#include "diracsf/dirac_direct.hpp"
#include "diracsf/errors.hpp"
#include "diracsf/herglotz.hpp"
#include "diracsf/inverse.hpp"
#include "diracsf/io.hpp"
#include "diracsf/pw_sampling.hpp"

namespace {

constexpr int kExitVerdictFail = 2;
constexpr int kExitParse = 3;
constexpr int kExitCharacterization = 4;
constexpr int kExitNotPositive = 5;

diracsf::Complex parse_complex(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw diracsf::ParseError("empty complex literal");
  // forms: "a", "bi", "a+bi", "a-bi" with scientific notation allowed
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  try {
    if (s.back() == 'i') {
      if (split == std::string::npos) {
        std::string im = s.substr(0, s.size() - 1);
        if (im.empty() || im == "+" || im == "-") im += "1";
        return {0.0, std::stod(im)};
      }
      std::string im = s.substr(split, s.size() - 1 - split);
      if (im == "+" || im == "-") im += "1";
      return {std::stod(s.substr(0, split)), std::stod(im)};
    }
    if (split != std::string::npos)
      throw diracsf::ParseError("complex literal must end in 'i': " + text);
    return {std::stod(s), 0.0};
  } catch (const std::logic_error&) {
    throw diracsf::ParseError("cannot parse complex literal: " + text);
  }
}

std::vector<diracsf::Complex> parse_complex_list(const std::string& text) {
  std::vector<diracsf::Complex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    if (!item.empty()) out.push_back(parse_complex(item));
    start = comma + 1;
  }
  if (out.empty()) throw diracsf::ParseError("empty value list");
  return out;
}

diracsf::Interval parse_interval(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) {
    const double t = std::stod(text);
    return {-std::abs(t), std::abs(t)};
  }
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

diracsf::BetaRoute parse_beta_route(const std::string& name) {
  if (name == "factor") return diracsf::BetaRoute::kFactor;
  if (name == "theta-ode") return diracsf::BetaRoute::kThetaOde;
  if (name == "from-gamma") return diracsf::BetaRoute::kFromGamma;
  throw diracsf::ParseError("unknown beta route: " + name);
}

diracsf::GammaRoute parse_gamma_route(const std::string& name) {
  if (name == "direct") return diracsf::GammaRoute::kDirect;
  if (name == "vartheta-ode") return diracsf::GammaRoute::kVarthetaOde;
  throw diracsf::ParseError("unknown gamma route: " + name);
}

std::string csv_path(const std::string& json_path) {
  const std::size_t dot = json_path.find_last_of('.');
  if (dot == std::string::npos) return json_path + ".csv";
  return json_path.substr(0, dot) + ".csv";
}

diracsf::SpectralMeasure measure_of_potential(const diracsf::Potential& pot,
                                              double window, double eps,
                                              int grid_points) {
  const diracsf::Matrix direction = diracsf::default_weyl_direction(pot.p());
  diracsf::StieltjesOptions opt;
  opt.T = window;
  opt.epsilon = eps;
  opt.grid_points = grid_points;
  return diracsf::stieltjes_invert(
      [&](diracsf::Complex z) {
        return diracsf::weyl_function(pot, z, direction);
      },
      pot.p(), opt);
}

void print_check_report(const diracsf::CheckReport& report) {
  auto flag = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  std::cout << "finiteness (i):              " << flag(report.condition_i_pass)
            << "  value " << report.condition_i_value << "\n";
  std::cout << "operator positivity (II):    "
            << flag(report.condition_ii_pass) << "  lambda_min";
  for (const auto& lv : report.levels) std::cout << " " << lv.lambda_min;
  std::cout << "  trend " << report.lambda_min_trend << "\n";
  std::cout << "kernel integrability (III):  "
            << flag(report.condition_iii_pass) << "  ratio "
            << report.condition_iii_ratio << "\n";
  std::cout << "Hermitian constant (IV):     "
            << flag(report.condition_iv_pass) << "  nu defect "
            << report.nu_defect << "\n";
  std::cout << "verdict: " << (report.verdict ? "ADMISSIBLE" : "REJECTED")
            << "\n";
  for (const std::string& note : report.notes)
    std::cout << "note: " << note << "\n";
}

struct DirectArgs {
  std::string in, out;
  double window = 50.0;
  double eps = 1e-3;
  int grid_points = 4001;
};

struct InverseArgs {
  std::string in, out;
  double ell = 1.0;
  int n = 512;
  std::string beta_route = "factor";
  std::string gamma_route = "direct";
  bool force = false;
  double lambda_floor = 1e-3;
};

struct RoundtripArgs {
  std::string in, out, measure_out;
  double window = 50.0;
  double eps = 1e-3;
  int grid_points = 4001;
  int n = 512;
  std::string beta_route = "factor";
  std::string gamma_route = "direct";
};

struct CheckArgs {
  std::string in, out;
  double ell = 1.0;
  std::string levels = "128,256,512";
  double lambda_floor = 1e-3;
};

struct PwArgs {
  std::string in;
  std::string rates = "0.1,0.2";
  std::string window = "-50,50";
  double ell = 0.0;
};

struct WeylArgs {
  std::string in;
  std::string zs = "1.0i";
};

int run_direct(const DirectArgs& a) {
  const diracsf::Potential pot = diracsf::load_potential(a.in);
  const diracsf::SpectralMeasure m =
      measure_of_potential(pot, a.window, a.eps, a.grid_points);
  diracsf::save_measure(m, a.out);
  diracsf::write_measure_csv(m, csv_path(a.out));
  std::cout << "measure on [" << m.window_lo() << ", " << m.window_hi()
            << "] with " << m.grid().size() << " density samples and "
            << m.atoms().size() << " atoms -> " << a.out << "\n";
  return 0;
}

int run_inverse(const InverseArgs& a) {
  const diracsf::SpectralMeasure m = diracsf::load_measure(a.in);
  diracsf::InverseOptions opt;
  opt.n = a.n;
  opt.beta_route = parse_beta_route(a.beta_route);
  opt.gamma_route = parse_gamma_route(a.gamma_route);
  opt.force = a.force;
  opt.lambda_floor = a.lambda_floor;
  const diracsf::InverseResult result =
      diracsf::solve_inverse(m, a.ell, opt);
  diracsf::save_potential(result.potential, a.out);
  diracsf::write_potential_csv(result.potential, csv_path(a.out));
  std::cout << "recovered potential on [0, " << a.ell << "] with "
            << result.potential.grid().node_count() << " samples -> " << a.out
            << "\n";
  return 0;
}

int run_roundtrip(const RoundtripArgs& a) {
  const diracsf::Potential pot = diracsf::load_potential(a.in);
  const diracsf::SpectralMeasure m =
      measure_of_potential(pot, a.window, a.eps, a.grid_points);
  if (!a.measure_out.empty()) diracsf::save_measure(m, a.measure_out);

  diracsf::InverseOptions opt;
  opt.n = a.n;
  opt.beta_route = parse_beta_route(a.beta_route);
  opt.gamma_route = parse_gamma_route(a.gamma_route);
  const diracsf::InverseResult result =
      diracsf::solve_inverse(m, pot.ell(), opt);
  if (!a.out.empty()) {
    diracsf::save_potential(result.potential, a.out);
    diracsf::write_potential_csv(result.potential, csv_path(a.out));
  }

  double worst = 0.0;
  const diracsf::UniformGrid& grid = result.potential.grid();
  for (int i = 0; i < grid.node_count(); ++i) {
    const double x = grid.node(i);
    if (x > 0.9 * pot.ell()) break;
    worst = std::max(
        worst, (result.potential.samples()[static_cast<std::size_t>(i)] -
                pot.value_at(x))
                   .norm());
  }
  std::cout << "max interior deviation on [0, " << 0.9 * pot.ell()
            << "]: " << worst << "\n";
  return 0;
}

int run_check(const CheckArgs& a) {
  const diracsf::SpectralMeasure m = diracsf::load_measure(a.in);
  std::vector<int> levels;
  for (const diracsf::Complex& z : parse_complex_list(a.levels))
    levels.push_back(static_cast<int>(z.real()));
  const diracsf::CheckReport report =
      diracsf::check_spectral_conditions(m, a.ell, levels, a.lambda_floor);
  if (!a.out.empty()) diracsf::save_check_report(report, a.out);
  print_check_report(report);
  return report.verdict ? 0 : kExitVerdictFail;
}

int run_pw(const PwArgs& a) {
  const diracsf::SpectralMeasure m = diracsf::load_measure(a.in);
  std::vector<double> rates;
  for (const diracsf::Complex& z : parse_complex_list(a.rates))
    rates.push_back(z.real());
  const diracsf::Interval window = parse_interval(a.window);
  const diracsf::PwReport report =
      diracsf::pw_sampling_report(m, rates, window);
  for (const diracsf::PwCertificate& c : report.per_r)
    std::cout << "rate " << c.r << ": "
              << (c.certified ? "CERTIFIED" : "NOT CERTIFIED") << " ("
              << c.evidence << ")\n";
  for (const std::string& note : report.notes)
    std::cout << "note: " << note << "\n";
  bool ok = report.all_certified;
  if (a.ell > 0.0) {
    const diracsf::PwlCertificate cert =
        diracsf::pwl_sampling_certificate(m, a.ell, window);
    std::cout << "interval-class sampling: "
              << (cert.found ? "CERTIFIED" : "NOT CERTIFIED") << " ("
              << cert.note << ")\n";
    ok = ok && cert.found;
  }
  return ok ? 0 : kExitVerdictFail;
}

int run_weyl(const WeylArgs& a) {
  const diracsf::Potential pot = diracsf::load_potential(a.in);
  const diracsf::Matrix direction = diracsf::default_weyl_direction(pot.p());
  for (const diracsf::Complex& z : parse_complex_list(a.zs)) {
    const diracsf::Matrix phi = diracsf::weyl_function(pot, z, direction);
    std::cout << "phi(" << z.real() << (z.imag() < 0 ? "-" : "+")
              << std::abs(z.imag()) << "i) =";
    for (Eigen::Index r = 0; r < phi.rows(); ++r)
      for (Eigen::Index c = 0; c < phi.cols(); ++c)
        std::cout << " " << phi(r, c).real()
                  << (phi(r, c).imag() < 0 ? "-" : "+")
                  << std::abs(phi(r, c).imag()) << "i";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Direct and inverse spectral problems for Dirac systems with "
      "square-integrable potentials"};
  app.require_subcommand(1);

  DirectArgs direct_args;
  auto* direct = app.add_subcommand(
      "direct", "Potential -> spectral measure via the Weyl function");
  direct->add_option("--in", direct_args.in, "potential JSON")->required();
  direct->add_option("--out", direct_args.out, "measure JSON")->required();
  direct->add_option("--window", direct_args.window,
                     "density window half-width T");
  direct->add_option("--eps", direct_args.eps,
                     "boundary regularization height");
  direct->add_option("--grid-points", direct_args.grid_points,
                     "density grid size");

  InverseArgs inverse_args;
  auto* inverse = app.add_subcommand(
      "inverse", "Spectral measure -> potential on [0, ell]");
  inverse->add_option("--in", inverse_args.in, "measure JSON")->required();
  inverse->add_option("--out", inverse_args.out, "potential JSON")
      ->required();
  inverse->add_option("--ell", inverse_args.ell, "interval length")
      ->required();
  inverse->add_option("--n", inverse_args.n, "subintervals of [0, 2 ell]");
  inverse->add_option("--beta-route", inverse_args.beta_route,
                      "factor | theta-ode | from-gamma");
  inverse->add_option("--gamma-route", inverse_args.gamma_route,
                      "direct | vartheta-ode");
  inverse->add_flag("--force", inverse_args.force,
                    "skip the admissibility check");
  inverse->add_option("--lambda-floor", inverse_args.lambda_floor,
                      "positivity floor of the admissibility check");

  RoundtripArgs roundtrip_args;
  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Potential -> measure -> potential, report the deviation");
  roundtrip->add_option("--in", roundtrip_args.in, "potential JSON")
      ->required();
  roundtrip->add_option("--out", roundtrip_args.out,
                        "recovered potential JSON");
  roundtrip->add_option("--measure-out", roundtrip_args.measure_out,
                        "intermediate measure JSON");
  roundtrip->add_option("--window", roundtrip_args.window,
                        "density window half-width T");
  roundtrip->add_option("--eps", roundtrip_args.eps,
                        "boundary regularization height");
  roundtrip->add_option("--grid-points", roundtrip_args.grid_points,
                        "density grid size");
  roundtrip->add_option("--n", roundtrip_args.n,
                        "subintervals of [0, 2 ell]");
  roundtrip->add_option("--beta-route", roundtrip_args.beta_route,
                        "factor | theta-ode | from-gamma");
  roundtrip->add_option("--gamma-route", roundtrip_args.gamma_route,
                        "direct | vartheta-ode");

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "Admissibility of a measure as spectral data");
  check->add_option("--in", check_args.in, "measure JSON")->required();
  check->add_option("--out", check_args.out, "report JSON");
  check->add_option("--ell", check_args.ell, "interval length")->required();
  check->add_option("--levels", check_args.levels,
                    "refinement levels, e.g. 128,256,512");
  check->add_option("--lambda-floor", check_args.lambda_floor,
                    "positivity floor");

  PwArgs pw_args;
  auto* pw = app.add_subcommand(
      "pw", "Sampling certificates for bandlimited classes");
  pw->add_option("--in", pw_args.in, "measure JSON")->required();
  pw->add_option("--r", pw_args.rates, "sampling rates, e.g. 0.1,0.2");
  pw->add_option("--window", pw_args.window, "analysis window \"a,b\"");
  pw->add_option("--ell", pw_args.ell,
                 "interval length for the arithmetic-sequence certificate");

  WeylArgs weyl_args;
  auto* weyl = app.add_subcommand("weyl", "Evaluate the Weyl function");
  weyl->add_option("--in", weyl_args.in, "potential JSON")->required();
  weyl->add_option("--z", weyl_args.zs,
                   "evaluation points, e.g. \"0.0+1.0i,2.0+0.5i\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep CLI11's diagnostics but fold usage errors into the documented
    // "any other error" code; --help and --version still exit 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(direct)) return run_direct(direct_args);
    if (app.got_subcommand(inverse)) return run_inverse(inverse_args);
    if (app.got_subcommand(roundtrip)) return run_roundtrip(roundtrip_args);
    if (app.got_subcommand(check)) return run_check(check_args);
    if (app.got_subcommand(pw)) return run_pw(pw_args);
    if (app.got_subcommand(weyl)) return run_weyl(weyl_args);
  } catch (const diracsf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const diracsf::CharacterizationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCharacterization;
  } catch (const diracsf::NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotPositive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
