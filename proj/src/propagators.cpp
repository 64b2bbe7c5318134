#include "modspace/propagators.hpp"

#include <cmath>
#include <stdexcept>

#include "lattice.hpp"
#include "modspace/norms.hpp"

namespace modspace {

std::string to_string(Family f) {
  switch (f) {
    case Family::schrodinger: return "schrodinger";
    case Family::wave_sine: return "wave_sine";
    case Family::wave_cosine: return "wave_cosine";
    case Family::kg_sine: return "kg_sine";
    case Family::kg_cosine: return "kg_cosine";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  for (Family f : all_families())
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown propagator kind: " + s);
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families{Family::schrodinger, Family::wave_sine, Family::wave_cosine,
                                            Family::kg_sine, Family::kg_cosine};
  return families;
}

namespace {

// sin(w t)/w, by its Taylor series near w = 0 to avoid cancellation.
double sinc_t(double w, double t) {
  if (w < 1e-6) {
    double x = w * t;
    return t * (1.0 - x * x / 6.0);
  }
  return std::sin(w * t) / w;
}

Complex symbol_r2(Family family, double t, double r2) {
  const double two_pi = 2.0 * M_PI;
  switch (family) {
    case Family::schrodinger: {
      // t 4 pi^2 r2 = 2 pi turns; reduce the turns before the trig call.
      double turns = std::fmod(two_pi * t * r2, 1.0);
      return std::polar(1.0, -two_pi * turns);
    }
    case Family::wave_sine:
      return sinc_t(two_pi * std::sqrt(r2), t);
    case Family::wave_cosine:
      return std::cos(two_pi * std::sqrt(r2) * t);
    case Family::kg_sine: {
      double w = std::sqrt(1.0 + two_pi * two_pi * r2);
      return std::sin(w * t) / w;
    }
    case Family::kg_cosine:
      return std::cos(std::sqrt(1.0 + two_pi * two_pi * r2) * t);
  }
  return 0.0;
}

}  // namespace

Complex symbol(const PropagatorKind& kind, const Point& xi) {
  return symbol_r2(kind.family, kind.t, xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

std::vector<Complex> symbol_table(const PropagatorKind& kind, const GridSpec& grid) {
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Point w = grid.frequency_position(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) r2 += w[d] * w[d];
    out[i] = symbol_r2(kind.family, kind.t, r2);
  }
  return out;
}

SampledField apply(const PropagatorKind& kind, const SampledField& f) {
  if (f.domain() != Domain::space) throw std::invalid_argument("apply: field must be in the space domain");
  std::vector<Complex> v(f.values().begin(), f.values().end());
  detail::forward_centered(v, f.grid());
  auto sym = symbol_table(kind, f.grid());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= sym[i];
  detail::inverse_centered(v, f.grid());
  return SampledField(f.grid(), std::move(v));
}

BoundRatioReport bound_ratio(Family family, const std::vector<double>& times,
                             const std::vector<SampledField>& battery, const ModParams& params) {
  if (battery.empty()) throw std::invalid_argument("bound_ratio: empty battery");
  std::vector<double> base;
  for (const auto& f : battery) base.push_back(mod_norm(f, params));
  BoundRatioReport report{family, {}, 0.0};
  for (double t : times) {
    double ratio = 0.0;
    for (std::size_t b = 0; b < battery.size(); ++b) {
      if (base[b] == 0.0) continue;
      ratio = std::max(ratio, mod_norm(apply({family, t}, battery[b]), params) / base[b]);
    }
    double envelope = std::pow(1.0 + t * t, battery.front().grid().dim() / 4.0);
    report.rows.push_back({t, ratio, ratio / envelope});
    report.constant = std::max(report.constant, ratio / envelope);
  }
  return report;
}

}  // namespace modspace
