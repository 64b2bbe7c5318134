#include <cmath>
#include <random>
#include <stdexcept>

#include "lattice.hpp"
#include "modspace/grid.hpp"

namespace modspace {
namespace {

double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Point center_of(const Params& p) {
  return {param(p, "center", 0.0), param(p, "center1", 0.0), param(p, "center2", 0.0)};
}

void require_dim1(const GridSpec& grid, const std::string& name) {
  if (grid.dim() != 1) throw std::invalid_argument(name + " is only defined in dimension 1");
}

SampledField gaussian(const GridSpec& grid, const Params& p) {
  double width = param(p, "width", 1.0);
  if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
  double amp = param(p, "amplitude", 1.0);
  if (param(p, "normalize", 0.0) != 0.0) amp /= std::pow(width, grid.dim());
  Point c = center_of(p);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
    v[i] = amp * std::exp(-M_PI * r2 / (width * width));
  }
  return SampledField(grid, std::move(v));
}

SampledField triangle(const GridSpec& grid, const Params& p, bool signed_jump) {
  require_dim1(grid, signed_jump ? "jump" : "triangle");
  double c = param(p, "center", 0.0), amp = param(p, "amplitude", 1.0);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double y = grid.node(i) - c;
    double tri = std::max(0.0, 1.0 - std::abs(y));
    if (signed_jump) tri *= (y > 0.0) - (y < 0.0);
    v[i] = amp * tri;
  }
  return SampledField(grid, std::move(v));
}

SampledField plane_wave(const GridSpec& grid, const Params& p) {
  std::array<double, 3> m{param(p, "m", 1.0), param(p, "m1", 0.0), param(p, "m2", 0.0)};
  for (double mi : m)
    if (mi != std::round(mi)) throw std::invalid_argument("plane_wave: frequencies must be integers");
  double amp = param(p, "amplitude", 1.0);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point x = grid.position(i);
    double phase = 0.0;
    for (int d = 0; d < grid.dim(); ++d) phase += m[d] * x[d];
    // Reduce before scaling by 2 pi so large |m x| keeps full precision.
    phase -= std::floor(phase);
    v[i] = amp * std::polar(1.0, 2.0 * M_PI * phase);
  }
  return SampledField(grid, std::move(v));
}

// Spectrum bump(|w|/B) * sum_r c_r exp(-2 pi i w.a_r): a band-limited mixture
// of wave packets centered at the random offsets a_r.
SampledField random_bandlimited(const GridSpec& grid, const Params& p) {
  double band = param(p, "bandwidth", 1.0);
  if (!(band > 0.0)) throw std::invalid_argument("random_bandlimited: bandwidth must be positive");
  if (band >= grid.nyquist()) throw std::invalid_argument("random_bandlimited: bandwidth must be below N/(2L)");
  auto seed = static_cast<std::uint64_t>(param(p, "seed", 0.0));
  int count = static_cast<int>(param(p, "count", 3.0));
  double spread = param(p, "spread", 1.0);
  bool real = param(p, "real", 0.0) != 0.0;
  double amp = param(p, "amplitude", 1.0);
  if (count < 1) throw std::invalid_argument("random_bandlimited: count must be positive");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Complex> coef(count);
  std::vector<Point> shift(count, Point{0, 0, 0});
  for (int r = 0; r < count; ++r) {
    coef[r] = Complex(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
    for (int d = 0; d < grid.dim(); ++d) shift[r][d] = spread * (2.0 * uniform() - 1.0);
  }

  std::vector<Complex> spec(grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    Point w = grid.frequency_position(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) r2 += w[d] * w[d];
    double t2 = r2 / (band * band);
    if (t2 >= 1.0) continue;
    double bump = std::exp(1.0 - 1.0 / (1.0 - t2));
    Complex sum{};
    for (int r = 0; r < count; ++r) {
      double phase = 0.0;
      for (int d = 0; d < grid.dim(); ++d) phase += w[d] * shift[r][d];
      sum += coef[r] * std::polar(1.0, -2.0 * M_PI * phase);
    }
    spec[i] = bump * sum;
  }
  detail::inverse_centered(spec, grid);
  if (real)
    for (auto& v : spec) v = v.real();
  double peak = 0.0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (auto& v : spec) v *= amp / peak;
  return SampledField(grid, std::move(spec));
}

}  // namespace

SampledField sample_builtin(const std::string& name, const GridSpec& grid, const Params& params) {
  if (name == "gaussian") return gaussian(grid, params);
  if (name == "triangle") return triangle(grid, params, false);
  if (name == "jump") return triangle(grid, params, true);
  if (name == "plane_wave") return plane_wave(grid, params);
  if (name == "random_bandlimited") return random_bandlimited(grid, params);
  throw std::invalid_argument("unknown builtin function: " + name);
}

}  // namespace modspace
