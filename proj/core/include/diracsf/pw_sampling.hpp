#pragma once

#include <string>
#include <vector>

#include "diracsf/spectral_measure.hpp"

namespace diracsf {

/// Half-open interval [a, b).
struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

/// Supremum of the measure of unit windows [x, x+1) with x scanned over
/// `search` at the given step (p = 1).
double unit_window_sup(const SpectralMeasure& m, Interval search,
                       double scan_step = 0.05);

/// Greedy left-to-right packing of window into disjoint half-open intervals
/// of length >= delta and mass >= delta: at each position emit the shortest
/// qualifying interval (endpoints on a delta/10 scan grid) and restart at
/// its right endpoint.
std::vector<Interval> delta_massive_intervals(const SpectralMeasure& m,
                                              double delta, Interval window);

/// Largest number of pairwise disjoint delta-massive intervals, each
/// intersecting `range`, with endpoints on the delta/10 scan grid. The
/// greedy earliest-right-endpoint sweep agrees with exhaustive search over
/// the same candidate set.
int delta_capacity(const SpectralMeasure& m, double delta, Interval range);

struct PwCertificate {
  double r = 0.0;
  bool certified = false;
  double c = 0.0;      // minimal interval length the bound was verified for
  double delta = 0.0;  // mass scale of the certificate
  double min_ratio = 0.0;
  std::string evidence;
};

struct PwReport {
  std::vector<PwCertificate> per_r;
  bool all_certified = false;
  std::vector<std::string> notes;
};

/// For each sampling rate r, search mass scales delta and length cutoffs c
/// such that every sampled interval I, within the window, of length >= c has
/// delta-capacity >= r |I|. Sampled evidence, window-relative.
PwReport pw_sampling_report(const SpectralMeasure& m,
                            const std::vector<double>& rs, Interval window);

struct PwlCertificate {
  bool found = false;
  std::vector<double> lambdas;  // arithmetic sampling sequence
  double delta = 0.0;           // uniform mass of the neighborhoods
  double separation = 0.0;      // gap of the sequence (< pi / ell)
  double neighborhood = 0.0;    // half-width of the disjoint neighborhoods
  std::string note;
};

/// Search an arithmetic sequence of step pi/(2 ell), over a few phase
/// shifts, whose disjoint neighborhoods all carry mass > delta. A valid
/// certificate yields sampling for the Paley-Wiener-type class of the
/// interval [0, ell].
PwlCertificate pwl_sampling_certificate(const SpectralMeasure& m, double ell,
                                        Interval window);

}  // namespace diracsf
