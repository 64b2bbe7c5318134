#pragma once

#include <string>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/params.hpp"

namespace modspace {

enum class Family { schrodinger, wave_sine, wave_cosine, kg_sine, kg_cosine };

std::string to_string(Family f);
Family family_from_string(const std::string& s);
const std::vector<Family>& all_families();

/// A linear propagator at time t.
struct PropagatorKind {
  Family family;
  double t;
};

/// Multiplier value at frequency xi:
///   schrodinger  exp(-i t 4 pi^2 |xi|^2)
///   wave_sine    sin(2 pi t |xi|) / (2 pi |xi|), equal to t at xi = 0
///   wave_cosine  cos(2 pi t |xi|)
///   kg_sine      sin(t <2 pi xi>) / <2 pi xi>, with <a> = (1 + |a|^2)^{1/2}
///   kg_cosine    cos(t <2 pi xi>)
Complex symbol(const PropagatorKind& kind, const Point& xi);

/// Symbol sampled on the frequency lattice of the grid.
std::vector<Complex> symbol_table(const PropagatorKind& kind, const GridSpec& grid);

/// Inverse transform of symbol times f^.
SampledField apply(const PropagatorKind& kind, const SampledField& f);

struct BoundRatioRow {
  double t;
  double ratio;       // max over the battery of ||H f|| / ||f||
  double normalized;  // ratio / (1 + t^2)^{dim/4}
};

struct BoundRatioReport {
  Family family;
  std::vector<BoundRatioRow> rows;
  double constant;  // max of normalized over t
};

BoundRatioReport bound_ratio(Family family, const std::vector<double>& times,
                             const std::vector<SampledField>& battery, const ModParams& params);

}  // namespace modspace
