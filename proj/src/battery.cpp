#include <cmath>
#include <random>
#include <stdexcept>

#include "modspace/verification.hpp"

namespace modspace {

Battery Battery::standard(const GridSpec& grid, std::uint64_t seed, std::size_t size) {
  Battery b(grid, seed);
  std::vector<std::pair<std::string, Params>> recipes;
  recipes.push_back({"gaussian", {}});
  if (grid.dim() == 1) {
    recipes.push_back({"triangle", {}});
    recipes.push_back({"jump", {}});
  }
  recipes.push_back({"plane_wave", {{"m", 1.0}}});

  // Random fill: bandwidths spread from wide to nearly delta-like packets, so
  // the battery probes both ends of the product inequality.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double max_band = std::min(7.0, grid.nyquist() / 5.0);
  const double min_band = std::min(0.5, 0.5 * max_band);
  for (std::size_t k = 0; recipes.size() < size; ++k) {
    Params p;
    p["seed"] = static_cast<double>(rng() >> 12);
    p["bandwidth"] = min_band + (max_band - min_band) * uniform();
    p["count"] = static_cast<double>(1 + rng() % 4);
    p["spread"] = 2.0 * uniform();
    p["real"] = k % 2 == 0 ? 1.0 : 0.0;
    recipes.push_back({"random_bandlimited", p});
  }
  std::size_t fill = 0;
  for (const auto& [builtin, params] : recipes) {
    std::string name = builtin == "random_bandlimited" ? "random_bandlimited_" + std::to_string(fill++) : builtin;
    b.members_.push_back({name, builtin, params, sample_builtin(builtin, grid, params)});
  }
  return b;
}

Battery Battery::on_grid(const GridSpec& grid) const {
  Battery b(grid, seed_);
  for (const auto& m : members_) b.members_.push_back({m.name, m.builtin, m.params, sample_builtin(m.builtin, grid, m.params)});
  return b;
}

bool in_modulation_space(const std::string& builtin, const ModParams& params) {
  double inv_q = std::isinf(params.q) ? 0.0 : 1.0 / params.q;
  if (builtin == "jump") return params.q > 1.0 && params.s < 1.0 - inv_q;
  if (builtin == "triangle") return params.s < 2.0 - inv_q;
  if (builtin == "plane_wave") return std::isinf(params.p);
  return true;
}

std::vector<std::size_t> Battery::eligible(const ModParams& params) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (in_modulation_space(members_[i].builtin, params)) out.push_back(i);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> battery_pairs(const std::vector<std::size_t>& members,
                                                               std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i : members) {
    if (out.size() >= count) return out;
    out.push_back({i, i});
  }
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (out.size() >= count) return out;
      out.push_back({members[a], members[b]});
    }
  return out;
}

namespace {

double rho(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// 1 on [-1, 1], 0 outside [-2, 2], smooth in between.
double plateau(double x) {
  double r = std::abs(x);
  double a = rho(2.0 - r), b = rho(r - 1.0);
  return a / (a + b);
}

}  // namespace

SampledField smooth_cutoff(const GridSpec& grid, double scale, const Point& center) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    double prod = 1.0;
    for (int d = 0; d < grid.dim(); ++d) prod *= plateau(scale * (x[d] - center[d]));
    v[i] = prod;
  }
  return SampledField(grid, std::move(v));
}

SampledField unit_bump(const GridSpec& grid) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    double prod = 1.0;
    for (int d = 0; d < grid.dim(); ++d) {
      double y = 2.0 * x[d] - 1.0;
      prod *= std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
    }
    v[i] = prod;
  }
  return SampledField(grid, std::move(v));
}

double relative_change(double reference, double value) {
  if (reference == value) return 0.0;
  if (reference == 0.0) return std::abs(value) > 0.0 ? INFINITY : 0.0;
  return std::abs(value - reference) / std::abs(reference);
}

nlohmann::json CheckReport::to_json() const {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"name", name},
          {"params", params},
          {"measured_constant", finite_or_null(measured_constant)},
          {"stability", finite_or_null(stability)},
          {"pass", pass},
          {"status", status},
          {"criterion", criterion},
          {"details", details},
          {"artifacts", artifacts}};
}

}  // namespace modspace
