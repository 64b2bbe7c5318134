#include <cmath>
#include <complex>
#include <mutex>

#include "doctest.h"
#include "modspace/norms.hpp"
#include "modspace/stft.hpp"

using namespace modspace;

namespace {

// V_g g for g = e^{-pi x^2}: 2^{-1/2} e^{-pi (x^2 + w^2)/2} e^{-pi i x w}.
Complex gaussian_stft(double x, double w) {
  return std::exp(Complex(-M_PI * (x * x + w * w) / 2.0, -M_PI * x * w)) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("STFT of the gaussian against its closed form") {
  for (auto [n, L] : {std::pair<std::size_t, double>{256, 16.0}, {512, 32.0}}) {
    GridSpec g(1, n, L);
    auto f = canonical_window(g);
    auto V = stft(f, f, "gaussian");
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        err = std::max(err, std::abs(V.at(j, k) - gaussian_stft(g.node(k), g.frequency(j))));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("STFT of a translated and modulated gaussian") {
  // V_g (M_nu T_y g)(x, w) = e^{-2 pi i y (w - nu)} V_g g(x - y, w - nu).
  // The frequency period N/L must leave the shifted peak far from the edge.
  GridSpec g(1, 256, 16.0);
  const double y = 1.0, nu = 0.5;
  auto f = modulate(translate(canonical_window(g), {y, 0, 0}), {nu, 0, 0});
  auto V = stft(f, canonical_window(g));
  double err = 0.0;
  for (std::size_t j = 0; j < 256; ++j)
    for (std::size_t k = 0; k < 256; ++k) {
      double x = g.node(k), w = g.frequency(j);
      Complex expected = std::exp(Complex(0.0, -2.0 * M_PI * y * (w - nu))) * gaussian_stft(x - y, w - nu);
      err = std::max(err, std::abs(V.at(j, k) - expected));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("magnitude rows agree with the full matrix") {
  GridSpec g(2, 16, 4.0);
  auto f = sample_builtin("random_bandlimited", g, {{"bandwidth", 1.5}, {"seed", 3.0}});
  auto w = canonical_window(g);
  auto V = stft(f, w);
  std::mutex m;
  double err = 0.0;
  std::size_t visits = 0;
  stft_magnitude_rows(f, w, [&](std::size_t j, const double* mags) {
    double local = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) local = std::max(local, std::abs(mags[k] - std::abs(V.at(j, k))));
    std::lock_guard lock(m);
    err = std::max(err, local);
    ++visits;
  });
  CHECK(visits == g.size());
  CHECK(err < 1e-14);
}

TEST_CASE("STFT preconditions") {
  GridSpec g(1, 16, 4.0);
  auto f = canonical_window(g);
  CHECK_THROWS_AS(stft(f, SampledField::zeros(g)), std::invalid_argument);
  CHECK_THROWS_AS(stft(f, canonical_window(GridSpec(1, 32, 4.0))), std::invalid_argument);
  CHECK_THROWS_AS(stft(transform(f), f), std::invalid_argument);
  CHECK_THROWS_AS(stft(canonical_window(GridSpec(1, 8192, 64.0)), canonical_window(GridSpec(1, 8192, 64.0))),
                  std::invalid_argument);
}

TEST_CASE("window equivalence ratio is bounded by the window cross norm") {
  GridSpec g(1, 256, 16.0);
  auto g1 = canonical_window(g);
  auto g2 = sample_builtin("gaussian", g, {{"width", 2.0}});
  auto f = sample_builtin("random_bandlimited", g, {{"bandwidth", 2.0}, {"seed", 9.0}});
  auto r = window_equivalence_ratio(f, g1, g2, {1.0, 1.0, 0.0});
  CHECK(r.ratio > 0.0);
  CHECK(r.constant == doctest::Approx(r.ratio / r.bound));
  // ||V_{g1} f|| <= ||V_{g2} g1||_1 / ||g2||^2 ||V_{g2} f||
  CHECK(r.constant * std::pow(l2_norm(g2), 2) <= 1.0 + 1e-12);
  auto same = window_equivalence_ratio(f, g1, g1, {1.0, 1.0, 0.0});
  CHECK(same.ratio == doctest::Approx(1.0).epsilon(1e-14));
}
