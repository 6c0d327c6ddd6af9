#pragma once

#include <string>

#include "diracsf/characterization.hpp"
#include "diracsf/potential.hpp"
#include "diracsf/spectral_measure.hpp"

namespace diracsf {

/// JSON artifacts (versioned schemas, complex numbers as [re, im] pairs,
/// matrices row-major). Doubles are printed in shortest-roundtrip form, so
/// a save/load cycle reproduces every finite value bit-exactly. Malformed
/// or mis-shaped input throws ParseError.

SpectralMeasure load_measure(const std::string& path);
void save_measure(const SpectralMeasure& m, const std::string& path);

Potential load_potential(const std::string& path);
void save_potential(const Potential& pot, const std::string& path);

CheckReport load_check_report(const std::string& path);
void save_check_report(const CheckReport& report, const std::string& path);

/// Flat tables for plotting, one row per grid point. A measure with atoms
/// also writes <stem>_atoms.csv next to the main table.
void write_measure_csv(const SpectralMeasure& m, const std::string& path);
void write_potential_csv(const Potential& pot, const std::string& path);

}  // namespace diracsf
