#include "modspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "lattice.hpp"

namespace modspace {

void ModParams::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("norm exponents must lie in [1, inf]");
  if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("weight exponent s must be a finite value >= 0");
}

std::string ModParams::label() const {
  return "(" + format_exponent(p) + "," + format_exponent(q) + "," + format_exponent(s) + ")";
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad exponent: " + text);
  return v;
}

std::string format_exponent(double e) {
  if (std::isinf(e)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", e);
  return buf;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

namespace {

// Per-row inner value: sum of |V|^p h^dim, or max |V| when p is infinite.
double inner_value(const double* mags, std::size_t count, double p, double cell) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < count; ++k) m = std::max(m, mags[k]);
    return m;
  }
  thread_local std::vector<double> powered;
  powered.resize(count);
  if (p == 1.0)
    std::copy(mags, mags + count, powered.begin());
  else if (p == 2.0)
    for (std::size_t k = 0; k < count; ++k) powered[k] = mags[k] * mags[k];
  else
    for (std::size_t k = 0; k < count; ++k) powered[k] = std::pow(mags[k], p);
  return pairwise_sum(powered) * cell;
}

double weight(const GridSpec& grid, std::size_t row, double s) {
  if (s == 0.0) return 1.0;
  Point w = grid.frequency_position(row);
  double r2 = 0.0;
  for (int d = 0; d < grid.dim(); ++d) r2 += w[d] * w[d];
  return std::pow(1.0 + r2, 0.5 * s);
}

// Combines the per-row inner values into the outer L^q_s norm.
double outer_value(const GridSpec& grid, const std::vector<double>& inner, const ModParams& prm) {
  const bool pinf = std::isinf(prm.p);
  if (std::isinf(prm.q)) {
    double m = 0.0;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      double row = pinf ? inner[j] : std::pow(inner[j], 1.0 / prm.p);
      m = std::max(m, row * weight(grid, j, prm.s));
    }
    return m;
  }
  std::vector<double> terms(inner.size());
  for (std::size_t j = 0; j < inner.size(); ++j) {
    double row = pinf ? inner[j] : (prm.q == prm.p ? inner[j] : std::pow(inner[j], prm.q / prm.p));
    if (pinf) row = std::pow(row, prm.q);
    terms[j] = row * std::pow(weight(grid, j, prm.s), prm.q);
  }
  double total = pairwise_sum(terms) * std::pow(grid.dual_spacing(), grid.dim());
  return prm.q == 1.0 ? total : std::pow(total, 1.0 / prm.q);
}

std::vector<double> norms_from_rows(const GridSpec& grid, std::span<const ModParams> params,
                                    const std::function<void(const std::function<void(std::size_t, const double*)>&)>& rows) {
  for (const auto& p : params) p.validate();
  const std::size_t total = grid.size();
  const double cell = std::pow(grid.spacing(), grid.dim());
  // Inner values depend only on p, so group params by p.
  std::vector<double> ps;
  for (const auto& prm : params)
    if (std::find(ps.begin(), ps.end(), prm.p) == ps.end()) ps.push_back(prm.p);
  std::vector<std::vector<double>> inner(ps.size(), std::vector<double>(total));
  rows([&](std::size_t j, const double* mags) {
    for (std::size_t a = 0; a < ps.size(); ++a) inner[a][j] = inner_value(mags, total, ps[a], cell);
  });
  std::vector<double> out;
  for (const auto& prm : params) {
    auto a = std::size_t(std::find(ps.begin(), ps.end(), prm.p) - ps.begin());
    out.push_back(outer_value(grid, inner[a], prm));
  }
  return out;
}

}  // namespace

double mixed_norm(const TFMatrix& V, const ModParams& params) {
  const std::size_t total = V.grid().size();
  auto out = norms_from_rows(V.grid(), std::span(&params, 1), [&](const auto& visit) {
    std::vector<double> mags(total);
    for (std::size_t j = 0; j < total; ++j) {
      const Complex* row = V.row(j);
      for (std::size_t k = 0; k < total; ++k) mags[k] = std::abs(row[k]);
      visit(j, mags.data());
    }
  });
  return out[0];
}

double mod_norm(const SampledField& f, const SampledField& window, const ModParams& params) {
  auto out = norms_from_rows(f.grid(), std::span(&params, 1),
                             [&](const auto& visit) { stft_magnitude_rows(f, window, visit); });
  return out[0];
}

double mod_norm(const SampledField& f, const ModParams& params) {
  return mod_norm(f, canonical_window(f.grid()), params);
}

std::vector<double> mod_norms(const SampledField& f, std::span<const ModParams> params) {
  auto window = canonical_window(f.grid());
  return norms_from_rows(f.grid(), params, [&](const auto& visit) { stft_magnitude_rows(f, window, visit); });
}

WindowRatio window_equivalence_ratio(const SampledField& f, const SampledField& g1, const SampledField& g2,
                                     const ModParams& params) {
  double a = mod_norm(f, g1, params);
  double b = mod_norm(f, g2, params);
  ModParams l11{1.0, 1.0, params.s};
  double bound = mod_norm(g1, g2, l11);
  double ratio = a / b;
  return {ratio, bound, ratio / bound};
}

long torus_band(const GridSpec& grid) {
  double L = grid.extent();
  if (std::abs(L - std::round(L)) > 1e-12 * L) throw std::invalid_argument("torus norms need an integer extent");
  long Li = std::lround(L);
  return (long(grid.samples()) / 2 - 1) / Li;
}

PeriodicSpectrum periodization_spectrum(const SampledField& f, long band) {
  const auto& grid = f.grid();
  long max_band = torus_band(grid);
  if (band < 0 || band > max_band) throw std::invalid_argument("periodization_spectrum: band exceeds Nyquist");
  long Li = std::lround(grid.extent());
  auto hat = transform(f);
  const double inv_volume = 1.0 / std::pow(grid.extent(), grid.dim());
  const long n = long(grid.samples());
  PeriodicSpectrum out{{}, 0.0};
  double peak = 0.0, off = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unravel(i);
    bool integer = true, inside = true;
    LatticePoint m{0, 0, 0};
    for (int d = 0; d < grid.dim(); ++d) {
      long rel = long(idx[d]) - n / 2;
      if (rel % Li != 0) integer = false;
      m[d] = rel / Li;
      if (std::abs(m[d]) > band) inside = false;
    }
    Complex c = hat[i] * inv_volume;
    if (!integer) {
      off = std::max(off, std::abs(c));
      continue;
    }
    peak = std::max(peak, std::abs(c));
    if (inside) out.coefficients[m] = c;
  }
  out.off_integer_ratio = peak > 0.0 ? off / peak : 0.0;
  return out;
}

double torus_algebra_norm(const SampledField& f) {
  auto spec = periodization_spectrum(f, torus_band(f.grid()));
  std::vector<double> mags;
  mags.reserve(spec.coefficients.size());
  for (const auto& [m, c] : spec.coefficients) mags.push_back(std::abs(c));
  return pairwise_sum(mags);
}

SampledField periodize_unit(const SampledField& f) {
  const auto& grid = f.grid();
  long Li = std::lround(grid.extent());
  torus_band(grid);
  if (long(grid.samples()) % Li != 0) throw std::invalid_argument("periodize_unit: samples per unit length must be an integer");
  const std::size_t n = grid.samples(), per = n / std::size_t(Li);
  // Fold every node onto the first unit cell, then copy the cell everywhere.
  std::vector<Complex> cell(grid.size(), Complex{});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int d = 0; d < grid.dim(); ++d) idx[d] %= per;
    cell[grid.ravel(idx)] += f[i];
  }
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int d = 0; d < grid.dim(); ++d) idx[d] %= per;
    out[i] = cell[grid.ravel(idx)];
  }
  return SampledField(grid, std::move(out), f.domain());
}

namespace {

std::pair<double, double> weighted_l2(const SampledField& f, double s) {
  const auto& grid = f.grid();
  auto hat = transform(f);
  std::vector<double> a(grid.size()), b(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Point x = grid.position(i), w = grid.frequency_position(i);
    double rx = 0.0, rw = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      rx += x[d] * x[d];
      rw += w[d] * w[d];
    }
    a[i] = std::norm(f[i]) * std::pow(1.0 + std::sqrt(rx), 2.0 * s);
    b[i] = std::norm(hat[i]) * std::pow(1.0 + std::sqrt(rw), 2.0 * s);
  }
  return {std::sqrt(pairwise_sum(a) * std::pow(grid.spacing(), grid.dim())),
          std::sqrt(pairwise_sum(b) * std::pow(grid.dual_spacing(), grid.dim()))};
}

}  // namespace

L2sMembership l2s_membership(const SampledField& f, double s) {
  const auto& grid = f.grid();
  if (!(s > grid.dim())) throw std::invalid_argument("l2s_membership: needs s > dim");
  if (f.domain() != Domain::space) throw std::invalid_argument("l2s_membership: field must be in the space domain");
  if (grid.samples() < 8) throw std::invalid_argument("l2s_membership: grid too coarse to refine");
  GridSpec coarse(grid.dim(), grid.samples() / 2, grid.extent());
  std::vector<Complex> sub(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    auto idx = coarse.unravel(i);
    for (int d = 0; d < grid.dim(); ++d) idx[d] *= 2;
    sub[i] = f[grid.ravel(idx)];
  }
  auto [fs, ff] = weighted_l2(f, s);
  auto [cs, cf] = weighted_l2(SampledField(coarse, std::move(sub)), s);
  auto rel = [](double fine, double coarse_value) {
    return fine == 0.0 ? 0.0 : std::abs(fine - coarse_value) / fine;
  };
  L2sMembership out{fs, ff, rel(fs, cs), rel(ff, cf), false};
  out.certified = std::isfinite(fs) && std::isfinite(ff) && out.change_space < 0.02 && out.change_freq < 0.02;
  return out;
}

}  // namespace modspace
