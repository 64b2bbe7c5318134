#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "modspace/norms.hpp"
#include "modspace/verification.hpp"

namespace modspace {

namespace {

using nlohmann::json;

json exponent_json(double e) { return std::isinf(e) ? json("inf") : json(e); }

json params_json(const ModParams& p) { return {{"p", exponent_json(p.p)}, {"q", exponent_json(p.q)}, {"s", p.s}}; }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json table(std::vector<std::string> columns) { return {{"columns", columns}, {"rows", json::array()}}; }

void add_row(json& t, const std::vector<double>& values) {
  json row = json::array();
  for (double v : values) row.push_back(number(v));
  t["rows"].push_back(row);
}

void set_outcome(CheckReport& r, bool ok) {
  r.pass = ok;
  r.status = ok ? "pass" : "fail";
}

double dual_factor(const GridSpec& g) { return std::pow(g.spacing(), g.dim()); }

double l1_norm(const SampledField& k) {
  std::vector<double> a(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) a[i] = std::abs(k[i]);
  return dual_factor(k.grid()) * pairwise_sum(a);
}

std::vector<SampledField> fields_of(const Battery& b, const std::vector<std::size_t>& idx) {
  std::vector<SampledField> out;
  for (std::size_t i : idx) out.push_back(b[i].field);
  return out;
}

bool algebra_hypothesis(const ModParams& p, int dim) {
  if (p.q == 1.0) return p.s >= 0.0;
  double inv_q_conj = std::isinf(p.q) ? 1.0 : 1.0 - 1.0 / p.q;
  return p.s > dim * inv_q_conj;
}

struct PairRatios {
  double constant = 0.0;
  std::vector<double> ratios;
};

PairRatios pair_ratios(const Battery& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       const ModParams& params) {
  std::map<std::size_t, double> norms;
  for (auto [i, j] : pairs) {
    for (std::size_t k : {i, j})
      if (!norms.count(k)) norms[k] = mod_norm(b[k].field, params);
  }
  PairRatios out;
  for (auto [i, j] : pairs) {
    double den = norms[i] * norms[j];
    double r = den > 0.0 ? mod_norm(b[i].field * b[j].field, params) / den : NAN;
    out.ratios.push_back(r);
    if (std::isfinite(r)) out.constant = std::max(out.constant, r);
  }
  return out;
}

SampledField box_kernel(const GridSpec& grid, double height) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    bool inside = true;
    for (int d = 0; d < grid.dim(); ++d) inside = inside && std::abs(x[d]) <= 0.5 + 1e-12;
    v[i] = inside ? height : 0.0;
  }
  return SampledField(grid, std::move(v));
}

SampledField delta_kernel(const GridSpec& grid) {
  std::vector<Complex> v(grid.size());
  std::array<std::size_t, 3> mid{};
  for (int d = 0; d < grid.dim(); ++d) mid[d] = grid.samples() / 2;
  v[grid.ravel(mid)] = 1.0 / dual_factor(grid);
  return SampledField(grid, std::move(v));
}

struct ConvolutionResult {
  double worst = 0.0;
  double delta_error = 0.0;
  std::vector<std::vector<double>> ratios;  // per kernel, per member
};

ConvolutionResult convolution_ratios(const Battery& b, const std::vector<std::size_t>& idx,
                                     const ModParams& params) {
  const auto& grid = b.grid();
  std::vector<SampledField> kernels{sample_builtin("gaussian", grid, {{"normalize", 1.0}}), box_kernel(grid, 1.0),
                                    box_kernel(grid, 3.0)};
  std::vector<double> k1;
  for (const auto& k : kernels) k1.push_back(l1_norm(k));
  ConvolutionResult out;
  out.ratios.assign(kernels.size(), {});
  auto delta = delta_kernel(grid);
  for (std::size_t i : idx) {
    const auto& f = b[i].field;
    double nf = mod_norm(f, params);
    if (nf == 0.0) continue;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      double r = mod_norm(convolve(f, kernels[k]), params) / (k1[k] * nf);
      out.ratios[k].push_back(r);
      out.worst = std::max(out.worst, r);
    }
    out.delta_error = std::max(out.delta_error, max_abs_difference(convolve(f, delta), f));
  }
  return out;
}

double isometry_deviation(const Battery& b, const std::vector<std::size_t>& idx, double p, double s,
                          json* rows) {
  ModParams params{p, p, s};
  double dev = 0.0;
  for (std::size_t i : idx) {
    const auto& f = b[i].field;
    double a = mod_norm(f, params);
    double c = mod_norm(fourier_image(f), params);
    if (a == 0.0) continue;
    double d = std::abs(c / a - 1.0);
    dev = std::max(dev, d);
    if (rows) add_row(*rows, {static_cast<double>(i), a, c, d});
  }
  return dev;
}

struct EmbeddingPair {
  ModParams from;
  ModParams to;
};

const std::vector<EmbeddingPair>& embedding_pairs() {
  static const std::vector<EmbeddingPair> pairs{
      {{1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}},
      {{1.0, 1.0, 0.0}, {kInfinity, 1.0, 0.0}},
      {{2.0, 2.0, 1.0}, {kInfinity, 1.0, 0.0}},
  };
  return pairs;
}

std::vector<double> embedding_constants(const Battery& b) {
  const std::vector<ModParams> all{{1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}, {kInfinity, 1.0, 0.0}, {2.0, 2.0, 1.0}};
  auto slot = [&](const ModParams& p) {
    for (std::size_t k = 0; k < all.size(); ++k)
      if (all[k].p == p.p && all[k].q == p.q && all[k].s == p.s) return k;
    throw std::logic_error("embedding parameter missing");
  };
  std::vector<double> out(embedding_pairs().size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto n = mod_norms(b[i].field, all);
    for (std::size_t e = 0; e < out.size(); ++e) {
      const auto& ep = embedding_pairs()[e];
      if (!in_modulation_space(b[i].builtin, ep.from)) continue;
      double den = n[slot(ep.from)];
      if (den > 0.0) out[e] = std::max(out[e], n[slot(ep.to)] / den);
    }
  }
  return out;
}

// Partial sums sum_{|w_j| <= W} sup_x |V_g f(x, w_j)| dw for each cutoff.
std::vector<double> truncated_sums(const SampledField& f, const std::vector<double>& cutoffs) {
  const auto& grid = f.grid();
  std::vector<double> sup(grid.size(), 0.0);
  stft_magnitude_rows(f, canonical_window(grid), [&](std::size_t j, const double* mags) {
    sup[j] = *std::max_element(mags, mags + grid.size());
  });
  std::vector<double> out;
  for (double W : cutoffs) {
    std::vector<double> kept;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      Point w = grid.frequency_position(j);
      double r = 0.0;
      for (int d = 0; d < grid.dim(); ++d) r = std::max(r, std::abs(w[d]));
      if (r <= W) kept.push_back(sup[j]);
    }
    out.push_back(std::pow(grid.dual_spacing(), grid.dim()) * pairwise_sum(kept));
  }
  return out;
}

std::vector<double> increments(const std::vector<double>& sums) {
  std::vector<double> d;
  for (std::size_t k = 1; k < sums.size(); ++k) d.push_back(sums[k] - sums[k - 1]);
  return d;
}

SampledField odd_gaussian(const GridSpec& grid, double amplitude) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) r2 += x[d] * x[d];
    v[i] = amplitude * x[0] * std::exp(-M_PI * r2);
  }
  return SampledField(grid, std::move(v));
}

SampledField power_nonlinearity(const SampledField& f, double alpha) {
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * std::pow(std::abs(f[i]), alpha);
  return SampledField(f.grid(), std::move(v), f.domain());
}

std::size_t nearest_node(const GridSpec& grid, const Point& x0) {
  std::array<std::size_t, 3> idx{};
  for (int d = 0; d < grid.dim(); ++d) {
    double k = (x0[d] + 0.5 * grid.extent()) / grid.spacing();
    double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(grid.samples()))
      throw std::invalid_argument("localization_probe: x0 must be a lattice point inside the box");
    idx[d] = static_cast<std::size_t>(r);
  }
  return grid.ravel(idx);
}

double torus_ratio(const SampledField& f, const SampledField& bump, double p) {
  double rhs = mod_norm(f, {p, 1.0, 0.0});
  if (rhs == 0.0) return NAN;
  return torus_algebra_norm(periodize_unit(bump * f)) / rhs;
}

std::vector<Family> families_of(Equation e) {
  switch (e) {
    case Equation::nls: return {Family::schrodinger};
    case Equation::nlw: return {Family::wave_sine, Family::wave_cosine};
    case Equation::nlkg: return {Family::kg_sine, Family::kg_cosine};
  }
  return {};
}

bool identity_at_zero(Family f) {
  return f == Family::schrodinger || f == Family::wave_cosine || f == Family::kg_cosine;
}

std::vector<double> composition_constants(const Battery& b, const std::vector<std::size_t>& idx,
                                          const std::vector<RealEntireSeries>& series, const ModParams& params) {
  std::vector<double> out(series.size(), 0.0);
  for (std::size_t i : idx) {
    for (std::size_t k = 0; k < series.size(); ++k) {
      auto cert = norm_certificate(series[k], b[i].field, params);
      if (cert.rhs > 0.0) out[k] = std::max(out[k], cert.C);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> cross_pairs(const std::vector<std::size_t>& idx, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t c = a + 1; c < idx.size(); ++c) {
      if (out.size() >= count) return out;
      out.push_back({idx[a], idx[c]});
    }
  return out;
}

std::vector<double> lipschitz_constants(const Battery& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        const std::vector<RealEntireSeries>& series, const ModParams& params,
                                        std::size_t* violations) {
  std::vector<double> out(series.size(), 0.0);
  for (auto [i, j] : pairs) {
    for (std::size_t k = 0; k < series.size(); ++k) {
      auto cert = lipschitz_bound(series[k], b[i].field, b[j].field, params);
      if (cert.rhs > 0.0) out[k] = std::max(out[k], cert.C);
      if (violations && cert.lhs > cert.rhs) ++*violations;
    }
  }
  return out;
}

// The same band-limited function on the lattice with twice the samples, by
// zero-padding its spectrum.
SampledField spectral_refine(const SampledField& f) {
  const auto& g = f.grid();
  auto hat = transform(f);
  GridSpec fine = g.refined();
  std::vector<Complex> v(fine.size());
  const std::size_t off = g.samples() / 2;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    auto idx = g.unravel(i);
    for (int d = 0; d < g.dim(); ++d) idx[d] += off;
    v[fine.ravel(idx)] = hat[i];
  }
  return inverse_transform(SampledField(fine, std::move(v), Domain::frequency));
}

SampledField wide_window(const GridSpec& grid) { return sample_builtin("gaussian", grid, {{"width", 2.0}}); }

}  // namespace

CheckReport check_algebra(const Battery& battery, const ModParams& params, std::size_t pairs) {
  params.validate();
  CheckReport r;
  r.name = "algebra";
  r.params = params_json(params);
  const bool inside = algebra_hypothesis(params, battery.grid().dim());
  auto members = battery.eligible(params);
  auto chosen = battery_pairs(members, pairs);
  auto coarse = pair_ratios(battery, chosen, params);
  auto fine = pair_ratios(battery.on_grid(battery.grid().refined()), chosen, params);
  r.measured_constant = coarse.constant;
  r.stability = relative_change(coarse.constant, fine.constant);
  r.criterion = inside ? "C finite and relative change under N->2N below 0.05"
                       : "outside the algebra hypothesis: measured and flagged, growth permitted";
  json t = table({"pair", "i", "j", "ratio", "ratio_refined"});
  for (std::size_t k = 0; k < chosen.size(); ++k)
    add_row(t, {static_cast<double>(k), static_cast<double>(chosen[k].first), static_cast<double>(chosen[k].second),
                coarse.ratios[k], fine.ratios[k]});
  r.details = {{"pairs", chosen.size()}, {"constant_refined", number(fine.constant)}, {"table", t}};
  if (inside) {
    set_outcome(r, std::isfinite(coarse.constant) && coarse.constant > 0.0 && r.stability < 0.05);
  } else {
    r.pass = true;
    r.status = "outside-hypothesis";
  }
  return r;
}

CheckReport check_convolution(const Battery& battery, const ModParams& params) {
  params.validate();
  CheckReport r;
  r.name = "convolution";
  r.params = params_json(params);
  auto members = battery.eligible(params);
  auto coarse = convolution_ratios(battery, members, params);
  auto fine = convolution_ratios(battery.on_grid(battery.grid().refined()), members, params);
  r.measured_constant = coarse.worst;
  r.stability = relative_change(coarse.worst, fine.worst);
  r.criterion = "max ||k*f|| / (||k||_1 ||f||) <= 1 + 1e-6 over k in {gaussian, box, 3 box}; delta kernel reproduces f to 1e-10";
  const std::vector<std::string> names{"gaussian", "box", "box3"};
  json per_kernel = json::object();
  for (std::size_t k = 0; k < names.size(); ++k) {
    double m = 0.0;
    for (double v : coarse.ratios[k]) m = std::max(m, v);
    per_kernel[names[k]] = number(m);
  }
  r.details = {{"members", members.size()},
               {"max_ratio_by_kernel", per_kernel},
               {"max_ratio_refined", number(fine.worst)},
               {"delta_max_abs_error", coarse.delta_error}};
  set_outcome(r, coarse.worst <= 1.0 + 1e-6 && fine.worst <= 1.0 + 1e-6 && coarse.delta_error <= 1e-10);
  return r;
}

CheckReport check_approx_identity(const SampledField& f, const std::vector<double>& radii, const ModParams& params,
                                  double eps) {
  params.validate();
  if (radii.empty()) throw std::invalid_argument("check_approx_identity: empty radius sequence");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] < radii[k - 1])) throw std::invalid_argument("check_approx_identity: radii must decrease");
  CheckReport r;
  r.name = "approx_identity";
  r.params = params_json(params);
  r.params["eps"] = eps;
  auto errors_on = [&](const SampledField& field) {
    std::vector<double> e;
    for (double rad : radii) {
      auto phi = sample_builtin("gaussian", field.grid(), {{"width", rad}, {"normalize", 1.0}});
      e.push_back(mod_norm(convolve(field, phi) - field, params));
    }
    return e;
  };
  auto coarse = errors_on(f);
  auto fine = errors_on(spectral_refine(f));
  bool monotone = true;
  for (std::size_t k = 1; k < coarse.size(); ++k) monotone = monotone && coarse[k] <= coarse[k - 1];
  double delta = NAN;
  for (std::size_t k = coarse.size(); k-- > 0;) {
    if (coarse[k] >= eps) break;
    delta = radii[k];
  }
  json t = table({"r", "error", "error_refined"});
  for (std::size_t k = 0; k < radii.size(); ++k) add_row(t, {radii[k], coarse[k], fine[k]});
  r.measured_constant = coarse.back();
  r.stability = relative_change(coarse.back(), fine.back());
  r.criterion = "error non-increasing along the radii and below eps at the smallest radius";
  r.details = {{"monotone", monotone}, {"delta", number(delta)}, {"table", t}};
  set_outcome(r, monotone && coarse.back() < eps);
  return r;
}

CheckReport check_fourier_isometry(const Battery& battery, double p) {
  ModParams params{p, p, 0.0};
  params.validate();
  CheckReport r;
  r.name = "isometry";
  r.params = params_json(params);
  auto members = battery.eligible(params);
  json t = table({"member", "norm", "norm_of_transform", "deviation"});
  double dev = isometry_deviation(battery, members, p, 0.0, &t);
  auto fine_battery = battery.on_grid(battery.grid().refined());
  double dev_fine = isometry_deviation(fine_battery, members, p, 0.0, nullptr);
  double control = isometry_deviation(battery, members, p, 1.0, nullptr);
  // The discrete transform is an exact isometry, so both deviations sit at
  // roundoff; below the floor there is nothing left to shrink.
  constexpr double kRoundoffFloor = 1e-12;
  bool shrinks = dev_fine <= std::max(dev / 4.0, kRoundoffFloor);
  bool control_deviates = control > 1e-3;
  r.measured_constant = dev;
  r.stability = relative_change(dev, dev_fine);
  r.criterion = "max deviation < 1e-4; refined deviation <= max(deviation/4, 1e-12); s = 1 control deviation > 1e-3";
  r.details = {{"deviation_refined", dev_fine},
               {"control_s1_deviation", control},
               {"shrinks", shrinks},
               {"control_deviates", control_deviates},
               {"table", t}};
  set_outcome(r, dev < 1e-4 && shrinks && control_deviates);
  return r;
}

CheckReport check_embeddings(const Battery& battery) {
  CheckReport r;
  r.name = "embeddings";
  auto coarse = embedding_constants(battery);
  auto fine = embedding_constants(battery.on_grid(battery.grid().refined()));
  json rows = json::array();
  bool ok = true;
  double worst_change = 0.0;
  for (std::size_t e = 0; e < coarse.size(); ++e) {
    double change = relative_change(coarse[e], fine[e]);
    worst_change = std::max(worst_change, change);
    ok = ok && std::isfinite(coarse[e]) && coarse[e] > 0.0 && change < 0.05;
    const auto& ep = embedding_pairs()[e];
    rows.push_back({{"from", params_json(ep.from)},
                    {"to", params_json(ep.to)},
                    {"constant", number(coarse[e])},
                    {"constant_refined", number(fine[e])},
                    {"stability", number(change)}});
  }
  r.params = json::array();
  for (const auto& ep : embedding_pairs()) r.params.push_back({{"from", params_json(ep.from)}, {"to", params_json(ep.to)}});
  r.measured_constant = *std::max_element(coarse.begin(), coarse.end());
  r.stability = worst_change;
  r.criterion = "every embedding constant finite with relative change under N->2N below 0.05";
  r.details = {{"embeddings", rows}, {"identity_constant", 1.0}};
  set_outcome(r, ok);
  return r;
}

CheckReport counterexample_probe(const ProbeGrid& probe) {
  if (probe.cutoffs.size() < 3) throw std::invalid_argument("counterexample_probe: need at least three cutoffs");
  GridSpec grid(1, probe.samples, probe.extent);
  if (probe.cutoffs.back() > grid.nyquist()) throw std::invalid_argument("counterexample_probe: cutoff beyond Nyquist");
  CheckReport r;
  r.name = "counterexample";
  r.params = {{"samples", probe.samples}, {"extent", probe.extent}, {"cutoffs", probe.cutoffs}};

  auto tri = truncated_sums(sample_builtin("triangle", grid), probe.cutoffs);
  auto jump = truncated_sums(sample_builtin("jump", grid), probe.cutoffs);
  auto gauss_field = sample_builtin("gaussian", grid);
  auto gauss = truncated_sums(gauss_field, probe.cutoffs);
  double gauss_norm = mod_norm(gauss_field, {kInfinity, 1.0, 0.0});
  auto d_tri = increments(tri);
  auto d_jump = increments(jump);

  bool tri_cauchy = d_tri.back() < 0.25 * d_tri.front();
  bool jump_log = true;
  for (std::size_t k = 0; k < d_jump.size(); ++k) {
    jump_log = jump_log && d_jump[k] >= 0.1;
    if (k > 0) jump_log = jump_log && std::abs(d_jump[k] - d_jump[k - 1]) <= 0.3 * d_jump[k - 1];
  }
  double gauss_gap = relative_change(gauss_norm, gauss.back());

  GridSpec fine(1, 2 * probe.samples, probe.extent);
  auto d_jump_fine = increments(truncated_sums(sample_builtin("jump", fine), probe.cutoffs));

  double mean = 0.0;
  for (double d : d_jump) mean += d;
  mean /= static_cast<double>(d_jump.size());
  double mean_fine = 0.0;
  for (double d : d_jump_fine) mean_fine += d;
  mean_fine /= static_cast<double>(d_jump_fine.size());

  json t = table({"W", "triangle", "jump", "gaussian"});
  for (std::size_t k = 0; k < probe.cutoffs.size(); ++k) add_row(t, {probe.cutoffs[k], tri[k], jump[k], gauss[k]});
  r.measured_constant = mean;
  r.stability = relative_change(mean, mean_fine);
  r.criterion = "triangle: last doubling increment < 1/4 of the first; jump: every increment >= 0.1 and within 30% of "
                "the previous; gaussian partial sum within 1e-6 of its full norm";
  r.details = {{"triangle_increments", d_tri},
               {"jump_increments", d_jump},
               {"jump_increments_refined", d_jump_fine},
               {"triangle_cauchy", tri_cauchy},
               {"jump_log_growth", jump_log},
               {"gaussian_norm", gauss_norm},
               {"gaussian_gap", gauss_gap},
               {"table", t}};
  set_outcome(r, tri_cauchy && jump_log && gauss_gap < 1e-6);
  return r;
}

CheckReport analyticity_probe(const GridSpec& grid, const std::vector<double>& alphas,
                              const std::vector<double>& amplitudes) {
  const ModParams params{1.0, 1.0, 0.0};
  CheckReport r;
  r.name = "analyticity";
  r.params = {{"alphas", alphas}, {"amplitudes", amplitudes}, {"p", 1.0}, {"q", 1.0}, {"s", 0.0}};
  json t = table({"family", "alpha", "amplitude", "ratio", "ratio_refined", "drift"});
  json flags = json::array();
  double worst = 0.0;
  const GridSpec fine = grid.refined();
  for (int family = 0; family < 2; ++family) {
    for (double alpha : alphas) {
      double drift_max = 0.0;
      for (double a : amplitudes) {
        auto ratio_on = [&](const GridSpec& g) {
          SampledField f = family == 0 ? sample_builtin("gaussian", g, {{"amplitude", a}}) : odd_gaussian(g, a);
          double nf = mod_norm(f, params);
          return mod_norm(power_nonlinearity(f, alpha), params) / std::pow(nf, alpha + 1.0);
        };
        double c = ratio_on(grid), fr = ratio_on(fine);
        double drift = relative_change(c, fr);
        drift_max = std::max(drift_max, drift);
        worst = std::max(worst, drift);
        add_row(t, {static_cast<double>(family), alpha, a, c, fr, drift});
      }
      bool even = alpha == 2.0 * std::round(alpha / 2.0);
      flags.push_back({{"family", family == 0 ? "gaussian" : "odd_gaussian"},
                       {"alpha", alpha},
                       {"even_integer", even},
                       {"max_drift", drift_max},
                       {"stable", drift_max < 0.05}});
    }
  }
  r.measured_constant = worst;
  r.stability = worst;
  r.pass = true;
  r.status = "exploratory";
  r.criterion = "diagnostic only: ratios and their drift under N->2N are tabulated, no pass rule";
  r.details = {{"flags", flags}, {"table", t}};
  return r;
}

CheckReport localization_probe(const SampledField& f, const Point& x0, double eps) {
  const ModParams params{1.0, 1.0, 0.0};
  const auto& grid = f.grid();
  if (f.domain() != Domain::space) throw std::invalid_argument("localization_probe: field must be in the space domain");
  CheckReport r;
  r.name = "localization";
  r.params = {{"x0", std::vector<double>(x0.begin(), x0.begin() + grid.dim())}, {"eps", eps}};
  const Complex f0 = f[nearest_node(grid, x0)];

  auto local_norm = [&](const SampledField& field, double lambda) {
    auto phi = smooth_cutoff(field.grid(), lambda, x0);
    return mod_norm(phi * (field - SampledField(field.grid(), std::vector<Complex>(field.size(), f0))), params);
  };

  // Dilations stop once the plateau of the cutoff spans fewer than four cells.
  json curve = table({"lambda", "norm"});
  double lambda_found = NAN, norm_found = NAN;
  const double lambda_max = 0.25 / grid.spacing();
  for (double lambda = 1.0; lambda <= lambda_max; lambda *= 2.0) {
    double n = local_norm(f, lambda);
    add_row(curve, {lambda, n});
    if (n < eps && std::isnan(lambda_found)) {
      lambda_found = lambda;
      norm_found = n;
    }
  }

  json tail = table({"R", "norm"});
  double radius_found = NAN;
  for (double R = 0.5; 2.0 * R <= 0.5 * grid.extent(); R *= 2.0) {
    auto psi = smooth_cutoff(grid, 1.0 / R, x0);
    auto one = SampledField(grid, std::vector<Complex>(grid.size(), 1.0));
    double n = mod_norm((one - psi) * f, params);
    add_row(tail, {R, n});
    if (n < eps && std::isnan(radius_found)) radius_found = R;
  }

  double stability = NAN;
  if (std::isfinite(lambda_found)) {
    stability = relative_change(norm_found, local_norm(spectral_refine(f), lambda_found));
  }
  r.measured_constant = lambda_found;
  r.stability = stability;
  r.criterion = "a dilation lambda with ||phi_lambda (f - f(x0))|| < eps and a radius R with ||(1 - psi_R) f|| < eps exist";
  r.details = {{"lambda", number(lambda_found)},
               {"local_norm", number(norm_found)},
               {"tail_radius", number(radius_found)},
               {"lambda_curve", curve},
               {"tail_curve", tail}};
  set_outcome(r, std::isfinite(lambda_found) && std::isfinite(radius_found));
  return r;
}

CheckReport torus_restriction_check(const Battery& battery, double p) {
  const ModParams params{p, 1.0, 0.0};
  params.validate();
  CheckReport r;
  r.name = "torus";
  r.params = params_json(params);
  auto members = battery.eligible(params);
  auto fine_battery = battery.on_grid(battery.grid().refined());
  auto bump = unit_bump(battery.grid());
  auto bump_fine = unit_bump(fine_battery.grid());
  json t = table({"member", "ratio", "ratio_refined"});
  double c = 0.0, cf = 0.0;
  for (std::size_t i : members) {
    double a = torus_ratio(battery[i].field, bump, p);
    double b = torus_ratio(fine_battery[i].field, bump_fine, p);
    add_row(t, {static_cast<double>(i), a, b});
    if (std::isfinite(a)) c = std::max(c, a);
    if (std::isfinite(b)) cf = std::max(cf, b);
  }
  r.measured_constant = c;
  r.stability = relative_change(c, cf);
  r.criterion = "max ||phi f||_A(T) / ||f|| finite with relative change under N->2N below 0.10";
  r.details = {{"constant_refined", cf}, {"table", t}};
  set_outcome(r, std::isfinite(c) && r.stability < 0.10);
  return r;
}

CheckReport check_multipliers(const Battery& battery, const std::vector<double>& times, const ModParams& params) {
  params.validate();
  if (times.size() < 4) throw std::invalid_argument("check_multipliers: need at least four times");
  CheckReport r;
  r.name = "multipliers";
  r.params = params_json(params);
  r.params["times"] = times;
  auto members = battery.eligible(params);
  auto fields = fields_of(battery, members);
  auto fine_fields = fields_of(battery.on_grid(battery.grid().refined()), members);
  json families = json::array();
  json t = table({"t"});
  for (double tt : times) add_row(t, {tt});
  bool ok = true;
  double constant = 0.0, worst_change = 0.0;
  for (Family fam : all_families()) {
    auto rep = bound_ratio(fam, times, fields, params);
    // The constant is attained at one time; only that time is re-measured on
    // the refined grid.
    std::size_t peak = 0;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
      if (rep.rows[k].normalized > rep.rows[peak].normalized) peak = k;
    auto rep_fine = bound_ratio(fam, {times[peak]}, fine_fields, params);
    double head = std::max({rep.rows[0].normalized, rep.rows[1].normalized, rep.rows[2].normalized});
    bool no_trend = rep.rows.back().normalized <= 1.2 * head;
    double identity_error = 0.0;
    if (identity_at_zero(fam))
      for (const auto& f : fields) identity_error = std::max(identity_error, max_abs_difference(apply({fam, 0.0}, f), f));
    bool identity_ok = identity_error <= 1e-12;
    double change = relative_change(rep.constant, rep_fine.constant);
    worst_change = std::max(worst_change, change);
    constant = std::max(constant, rep.constant);
    ok = ok && no_trend && identity_ok;
    json normalized = json::array();
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
      normalized.push_back(number(rep.rows[k].normalized));
      t["rows"][k].push_back(number(rep.rows[k].normalized));
    }
    t["columns"].push_back(to_string(fam));
    json fam_json = {{"family", to_string(fam)},
                     {"normalized", normalized},
                     {"constant", number(rep.constant)},
                     {"peak_time", times[peak]},
                     {"constant_refined", number(rep_fine.constant)},
                     {"no_upward_trend", no_trend}};
    if (identity_at_zero(fam)) {
      fam_json["identity_error"] = identity_error;
      fam_json["identity_ok"] = identity_ok;
    }
    families.push_back(fam_json);
  }
  r.measured_constant = constant;
  r.stability = worst_change;
  r.criterion = "for every family the normalized ratio at the last time is <= 1.2 x the max over the first three; "
                "identity kinds reproduce the input at t = 0 to 1e-12";
  r.details = {{"families", families}, {"table", t}};
  set_outcome(r, ok);
  return r;
}

double measure_c1(Equation equation, const Battery& battery, const ModParams& params) {
  auto fields = fields_of(battery, battery.eligible(params));
  double c1 = 1.0;
  for (Family fam : families_of(equation)) {
    auto rep = bound_ratio(fam, {1.0}, fields, params);
    c1 = std::max(c1, rep.rows.front().ratio);
  }
  return c1;
}

CheckReport check_composition(const Battery& battery, const std::vector<std::string>& presets, double algebra_constant,
                              const ModParams& params) {
  params.validate();
  CheckReport r;
  r.name = "composition";
  r.params = params_json(params);
  r.params["presets"] = presets;
  std::vector<RealEntireSeries> series;
  for (const auto& name : presets) series.push_back(RealEntireSeries::preset(name));
  auto members = battery.eligible(params);
  auto coarse = composition_constants(battery, members, series, params);
  auto fine = composition_constants(battery.on_grid(battery.grid().refined()), members, series, params);
  json rows = json::array();
  bool ok = std::isfinite(algebra_constant) && algebra_constant > 0.0;
  double worst = 0.0, worst_change = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    double bound = std::pow(algebra_constant, series[k].degree() - 1) * 1.1;
    double change = relative_change(coarse[k], fine[k]);
    bool within = coarse[k] <= bound;
    ok = ok && within && change < 0.10;
    worst = std::max(worst, coarse[k]);
    worst_change = std::max(worst_change, change);
    rows.push_back({{"preset", presets[k]},
                    {"degree", series[k].degree()},
                    {"C", number(coarse[k])},
                    {"C_refined", number(fine[k])},
                    {"bound", number(bound)},
                    {"within_bound", within},
                    {"stability", number(change)}});
  }
  r.measured_constant = worst;
  r.stability = worst_change;
  r.criterion = "for every preset C <= algebra_constant^(degree-1) x 1.1 and relative change under N->2N below 0.10";
  r.details = {{"algebra_constant", number(algebra_constant)}, {"presets", rows}};
  set_outcome(r, ok);
  return r;
}

CheckReport check_lipschitz(const Battery& battery, const std::vector<std::string>& presets, double algebra_constant,
                            std::size_t pairs, const ModParams& params) {
  params.validate();
  CheckReport r;
  r.name = "lipschitz";
  r.params = params_json(params);
  r.params["presets"] = presets;
  std::vector<RealEntireSeries> series;
  for (const auto& name : presets) series.push_back(RealEntireSeries::preset(name));
  auto chosen = cross_pairs(battery.eligible(params), pairs);
  std::size_t violations = 0;
  auto coarse = lipschitz_constants(battery, chosen, series, params, &violations);
  auto fine = lipschitz_constants(battery.on_grid(battery.grid().refined()), chosen, series, params, nullptr);
  json rows = json::array();
  bool ok = violations == 0 && std::isfinite(algebra_constant) && algebra_constant > 0.0;
  double worst = 0.0, worst_change = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    double bound = std::pow(algebra_constant, series[k].degree() - 1) * 1.1;
    double change = relative_change(coarse[k], fine[k]);
    bool within = coarse[k] <= bound;
    ok = ok && within && change < 0.10;
    worst = std::max(worst, coarse[k]);
    worst_change = std::max(worst_change, change);
    rows.push_back({{"preset", presets[k]},
                    {"degree", series[k].degree()},
                    {"C", number(coarse[k])},
                    {"C_refined", number(fine[k])},
                    {"bound", number(bound)},
                    {"within_bound", within},
                    {"stability", number(change)}});
  }
  r.measured_constant = worst;
  r.stability = worst_change;
  r.criterion = "no pair with lhs > rhs; for every preset C <= algebra_constant^(degree-1) x 1.1 and relative change "
                "under N->2N below 0.10";
  r.details = {{"pairs", chosen.size()},
               {"violations", violations},
               {"algebra_constant", number(algebra_constant)},
               {"presets", rows}};
  set_outcome(r, ok);
  return r;
}

CheckReport check_window_equivalence(const Battery& battery, const ModParams& params) {
  params.validate();
  CheckReport r;
  r.name = "window";
  r.params = params_json(params);
  auto run = [&](const Battery& b, json* rows) {
    auto g1 = canonical_window(b.grid());
    auto g2 = wide_window(b.grid());
    // ||V_{g1} f|| <= ||V_{g2} g1||_{L^1} / ||g2||_2^2 ||V_{g2} f||, and symmetrically.
    const double n1 = l2_norm(g1), n2 = l2_norm(g2);
    double worst = 0.0;
    for (std::size_t i : b.eligible(params)) {
      auto fwd = window_equivalence_ratio(b[i].field, g1, g2, params);
      auto bwd = window_equivalence_ratio(b[i].field, g2, g1, params);
      double a = fwd.constant * n2 * n2, c = bwd.constant * n1 * n1;
      worst = std::max({worst, a, c});
      if (rows) add_row(*rows, {static_cast<double>(i), fwd.ratio, a, c});
    }
    return worst;
  };
  json t = table({"member", "ratio", "normalized_forward", "normalized_backward"});
  double c = run(battery, &t);
  double cf = run(battery.on_grid(battery.grid().refined()), nullptr);
  r.measured_constant = c;
  r.stability = relative_change(c, cf);
  r.criterion = "both window-change ratios, normalized by the window-equivalence bound, are <= 1 + 1e-9";
  r.details = {{"constant_refined", cf}, {"table", t}};
  set_outcome(r, c <= 1.0 + 1e-9 && cf <= 1.0 + 1e-9);
  return r;
}

CheckReport check_l2s(const GridSpec& grid, double s) {
  CheckReport r;
  r.name = "l2s";
  r.params = {{"s", s}};
  std::vector<std::string> names{"gaussian"};
  if (grid.dim() == 1) names = {"gaussian", "triangle", "jump"};
  // Expected membership of f^ in L^2_s from the decay of each transform.
  auto expected = [&](const std::string& n) {
    if (n == "triangle") return s < 1.5;
    if (n == "jump") return s < 0.5;
    return true;
  };
  json rows = json::array();
  bool ok = true;
  double worst = 0.0;
  for (const auto& n : names) {
    auto m = l2s_membership(sample_builtin(n, grid), s);
    bool agree = m.certified == expected(n);
    ok = ok && agree;
    if (m.certified) worst = std::max({worst, m.change_space, m.change_freq});
    rows.push_back({{"function", n},
                    {"norm_space", number(m.norm_space)},
                    {"norm_freq", number(m.norm_freq)},
                    {"change_space", number(m.change_space)},
                    {"change_freq", number(m.change_freq)},
                    {"certified", m.certified},
                    {"expected", expected(n)}});
  }
  r.measured_constant = worst;
  r.stability = worst;
  r.criterion = "certification (both weighted norms within 2% under resolution halving) agrees with the expected "
                "membership of every shape";
  r.details = {{"functions", rows}};
  set_outcome(r, ok);
  return r;
}

CheckReport check_solver(const SolverCheckOptions& options, double c1) {
  GridSpec grid(1, options.samples, options.extent);
  CheckReport r;
  r.name = "solver";
  r.params = {{"samples", options.samples},
              {"extent", options.extent},
              {"amplitude", options.amplitude},
              {"t_end", options.t_end},
              {"quadrature_step", options.quadrature_step},
              {"picard_tol", options.picard_tol},
              {"c1", c1}};
  CauchyData data{Equation::nls, sample_builtin("gaussian", grid, {{"amplitude", options.amplitude}}), std::nullopt, 0.0};
  SolverConfig cfg;
  cfg.F = RealEntireSeries::preset("cubic");
  cfg.quadrature_step = options.quadrature_step;
  cfg.picard_tol = options.picard_tol;
  cfg.c1 = c1;
  auto path = continue_solution(data, cfg, options.t_end);
  SolverConfig zero_cfg = cfg;
  zero_cfg.zero_initial_guess = true;
  auto zero_path = continue_solution(data, zero_cfg, options.t_end);

  auto first = solve_window(data, cfg);
  double fixed_point_residual = residual(first, cfg, ResidualKind::scheme);

  json t = table({"t_start", "T", "T1", "T2", "M", "contraction", "iterations", "max_norm"});
  double contraction = 0.0;
  bool confined = true;
  for (const auto& w : path.per_window) {
    contraction = std::max(contraction, w.contraction_factor);
    confined = confined && w.max_norm <= w.M;
    add_row(t, {w.t_start, w.T_used, w.T1, w.T2, w.M, w.contraction_factor, static_cast<double>(w.picard_iters),
                w.max_norm});
  }
  double guess_gap = path.states.empty() || zero_path.states.empty()
                         ? NAN
                         : max_abs_difference(path.states.back(), zero_path.states.back());
  bool reached = !path.blow_up && !path.times.empty() && std::abs(path.times.back() - options.t_end) < 1e-12;
  r.measured_constant = contraction;
  r.stability = NAN;
  r.criterion = "every window contracts by at most 0.55, fixed-point residual <= 2 tol, norms stay within M, zero and "
                "free initial guesses agree to 1e-10, and t_end is reached";
  r.details = {{"windows", path.per_window.size()},
               {"fixed_point_residual", fixed_point_residual},
               {"norm_confined", confined},
               {"guess_gap", number(guess_gap)},
               {"reached_t_end", reached},
               {"table", t}};
  set_outcome(r, reached && contraction <= 0.55 && fixed_point_residual <= 2.0 * options.picard_tol && confined &&
                     guess_gap <= 1e-10);
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra",      "convolution", "approx_identity", "isometry",
                                              "embeddings",   "counterexample", "analyticity",  "localization",
                                              "torus",        "multipliers", "composition",     "lipschitz",
                                              "window",       "l2s",         "solver"};
  return names;
}

std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& options) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite: " + suite);
  auto wanted = [&](const std::string& n) { return suite == "all" || suite == n; };
  const ModParams m11{1.0, 1.0, 0.0};
  const auto battery = Battery::standard(options.grid, options.seed, options.battery_size);
  const std::vector<std::string> presets{"quadratic", "cubic", "quintic"};
  std::vector<CheckReport> out;

  double algebra_constant = NAN;
  auto need_algebra = [&] {
    if (std::isnan(algebra_constant)) algebra_constant = check_algebra(battery, m11).measured_constant;
    return algebra_constant;
  };

  if (wanted("algebra")) {
    out.push_back(check_algebra(battery, m11));
    algebra_constant = out.back().measured_constant;
    out.push_back(check_algebra(battery, {2.0, 2.0, 0.0}));
  }
  if (wanted("convolution")) out.push_back(check_convolution(battery, m11));
  if (wanted("approx_identity"))
    out.push_back(check_approx_identity(sample_builtin("gaussian", options.grid), {1.0, 0.5, 0.25, 0.125, 0.0625}, m11));
  if (wanted("isometry")) {
    out.push_back(check_fourier_isometry(battery, 1.0));
    out.push_back(check_fourier_isometry(battery, 2.0));
  }
  if (wanted("embeddings")) out.push_back(check_embeddings(battery));
  if (wanted("counterexample") && options.grid.dim() == 1) out.push_back(counterexample_probe(options.probe));
  if (wanted("analyticity")) out.push_back(analyticity_probe(options.grid, {1.0, 2.0, 4.0}, {0.5, 1.0, 2.0}));
  if (wanted("localization"))
    out.push_back(localization_probe(sample_builtin("gaussian", options.grid), Point{0.0, 0.0, 0.0}, 0.1));
  if (wanted("torus")) out.push_back(torus_restriction_check(battery, 1.0));
  if (wanted("multipliers")) out.push_back(check_multipliers(battery, {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}, m11));
  if (wanted("composition")) out.push_back(check_composition(battery, presets, need_algebra(), m11));
  if (wanted("lipschitz")) out.push_back(check_lipschitz(battery, presets, need_algebra(), 20, m11));
  if (wanted("window")) out.push_back(check_window_equivalence(battery, m11));
  if (wanted("l2s")) out.push_back(check_l2s(options.grid, 1.25));
  if (wanted("solver")) {
    SolverCheckOptions so;
    out.push_back(check_solver(so, measure_c1(Equation::nls, battery, m11)));
  }
  return out;
}

}  // namespace modspace
