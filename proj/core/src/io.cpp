#include "diracsf/io.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diracsf/errors.hpp"

namespace diracsf {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    throw ParseError("expected a complex number as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(complex_to_json(m(r, c)));
  return out;
}

Matrix matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols))
    throw ParseError("matrix entry count mismatch");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[k++]);
  return m;
}

json load_document(const std::string& path, const char* schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " +
                     e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != schema)
    throw ParseError(path + ": expected schema \"" + schema + "\"");
  if (doc.value("version", 0) != 1)
    throw ParseError(path + ": unsupported schema version");
  return doc;
}

void save_document(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

template <typename F>
auto reparse(const std::string& path, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string csv_sibling(const std::string& path, const char* tag) {
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

void write_complex_table(std::ofstream& out, double abscissa,
                         const Matrix& m) {
  out << abscissa;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << "," << m(r, c).real() << "," << m(r, c).imag();
  out << "\n";
}

void write_header(std::ofstream& out, const char* abscissa, const char* name,
                  int rows, int cols) {
  out << abscissa;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out << "," << name << "_re_" << r << c << "," << name << "_im_" << r
          << c;
  out << "\n";
}

}  // namespace

SpectralMeasure load_measure(const std::string& path) {
  const json doc = load_document(path, "spectral-measure");
  return reparse(path, [&] {
    const int p = doc.at("p").get<int>();
    const double alpha = doc.at("tail_coefficient").get<double>();
    const auto& window = doc.at("window");
    if (!window.is_array() || window.size() != 2)
      throw ParseError(path + ": window must be [lo, hi]");
    std::vector<double> grid =
        doc.at("grid").get<std::vector<double>>();
    const auto& density = doc.at("density");
    if (!density.is_array() || density.size() != grid.size())
      throw ParseError(path + ": one density sample per grid point");
    std::vector<Matrix> d;
    d.reserve(density.size());
    for (const auto& entry : density) d.push_back(matrix_from_json(entry, p, p));
    std::vector<Atom> atoms;
    for (const auto& entry : doc.value("atoms", json::array())) {
      Atom a;
      a.t = entry.at("t").get<double>();
      a.weight = matrix_from_json(entry.at("weight"), p, p);
      atoms.push_back(std::move(a));
    }
    return SpectralMeasure(p, alpha, window[0].get<double>(),
                           window[1].get<double>(), std::move(grid),
                           std::move(d), std::move(atoms));
  });
}

void save_measure(const SpectralMeasure& m, const std::string& path) {
  json doc;
  doc["schema"] = "spectral-measure";
  doc["version"] = 1;
  doc["p"] = m.p();
  doc["tail_coefficient"] = m.alpha();
  doc["window"] = json::array({m.window_lo(), m.window_hi()});
  doc["grid"] = m.grid();
  json density = json::array();
  for (const Matrix& d : m.density()) density.push_back(matrix_to_json(d));
  doc["density"] = std::move(density);
  json atoms = json::array();
  for (const Atom& a : m.atoms())
    atoms.push_back({{"t", a.t}, {"weight", matrix_to_json(a.weight)}});
  doc["atoms"] = std::move(atoms);
  save_document(doc, path);
}

Potential load_potential(const std::string& path) {
  const json doc = load_document(path, "dirac-potential");
  return reparse(path, [&] {
    const int p = doc.at("p").get<int>();
    const double ell = doc.at("ell").get<double>();
    const std::vector<double> grid =
        doc.at("grid").get<std::vector<double>>();
    if (grid.size() < 2) throw ParseError(path + ": grid too short");
    const int n = static_cast<int>(grid.size()) - 1;
    const double h = ell / n;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::abs(grid[i] - static_cast<double>(i) * h) >
          1e-9 * std::max(1.0, ell))
        throw ParseError(path + ": grid must be uniform over [0, ell]");
    const auto& v = doc.at("v");
    if (!v.is_array() || v.size() != grid.size())
      throw ParseError(path + ": one sample per grid point");
    std::vector<Matrix> samples;
    samples.reserve(v.size());
    for (const auto& entry : v) samples.push_back(matrix_from_json(entry, p, p));
    return Potential(p, ell, n, std::move(samples));
  });
}

void save_potential(const Potential& pot, const std::string& path) {
  json doc;
  doc["schema"] = "dirac-potential";
  doc["version"] = 1;
  doc["p"] = pot.p();
  doc["ell"] = pot.ell();
  json grid = json::array();
  for (int i = 0; i < pot.grid().node_count(); ++i)
    grid.push_back(pot.grid().node(i));
  doc["grid"] = std::move(grid);
  json v = json::array();
  for (const Matrix& s : pot.samples()) v.push_back(matrix_to_json(s));
  doc["v"] = std::move(v);
  save_document(doc, path);
}

CheckReport load_check_report(const std::string& path) {
  const json doc = load_document(path, "check-report");
  return reparse(path, [&] {
    CheckReport r;
    const json& c = doc.at("conditions");
    r.condition_i_value = c.at("finiteness").at("value").get<double>();
    r.condition_i_pass = c.at("finiteness").at("pass").get<bool>();
    for (const auto& lv : c.at("levels")) {
      LevelDatum d;
      d.n = lv.at("n").get<int>();
      d.lambda_min = lv.at("lambda_min").get<double>();
      d.phi1_deriv_norm = lv.at("kernel_deriv_norm").get<double>();
      r.levels.push_back(d);
    }
    r.lambda_min_trend = c.at("positivity").at("trend").get<double>();
    r.condition_ii_pass = c.at("positivity").at("pass").get<bool>();
    r.condition_iii_ratio =
        c.at("square_integrability").at("ratio").get<double>();
    r.condition_iii_pass =
        c.at("square_integrability").at("pass").get<bool>();
    r.nu_defect = c.at("hermitian_constant").at("nu_defect").get<double>();
    r.condition_iv_pass = c.at("hermitian_constant").at("pass").get<bool>();
    r.verdict = doc.at("verdict").get<bool>();
    r.notes = doc.value("notes", std::vector<std::string>{});
    return r;
  });
}

void save_check_report(const CheckReport& report, const std::string& path) {
  json levels = json::array();
  for (const LevelDatum& d : report.levels)
    levels.push_back({{"n", d.n},
                      {"lambda_min", d.lambda_min},
                      {"kernel_deriv_norm", d.phi1_deriv_norm}});
  json doc;
  doc["schema"] = "check-report";
  doc["version"] = 1;
  doc["conditions"] = {
      {"finiteness",
       {{"value", report.condition_i_value},
        {"pass", report.condition_i_pass}}},
      {"levels", std::move(levels)},
      {"positivity",
       {{"trend", report.lambda_min_trend},
        {"pass", report.condition_ii_pass}}},
      {"square_integrability",
       {{"ratio", report.condition_iii_ratio},
        {"pass", report.condition_iii_pass}}},
      {"hermitian_constant",
       {{"nu_defect", report.nu_defect},
        {"pass", report.condition_iv_pass}}}};
  doc["verdict"] = report.verdict;
  doc["notes"] = report.notes;
  save_document(doc, path);
}

void write_measure_csv(const SpectralMeasure& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  write_header(out, "t", "D", m.p(), m.p());
  for (std::size_t i = 0; i < m.grid().size(); ++i)
    write_complex_table(out, m.grid()[i], m.density()[i]);
  if (!m.atoms().empty()) {
    std::ofstream aout(csv_sibling(path, "_atoms"));
    if (!aout) throw Error("cannot write atom table next to " + path);
    aout.precision(17);
    write_header(aout, "t", "W", m.p(), m.p());
    for (const Atom& a : m.atoms()) write_complex_table(aout, a.t, a.weight);
  }
}

void write_potential_csv(const Potential& pot, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  write_header(out, "x", "v", pot.p(), pot.p());
  for (int i = 0; i < pot.grid().node_count(); ++i)
    write_complex_table(out, pot.grid().node(i),
                        pot.samples()[static_cast<std::size_t>(i)]);
}

}  // namespace diracsf
