#include <cmath>
#include <vector>

#include "doctest.h"
#include "modspace/norms.hpp"
#include "modspace/verification.hpp"

using namespace modspace;

namespace {

const GridSpec kGrid(1, 512, 32.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gaussian norms match closed-form integrals") {
  // |V_g g| = 2^{-1/2} e^{-pi (x^2 + w^2)/2}; every mixed norm separates.
  auto g = sample_builtin("gaussian", kGrid);
  CHECK(rel(mod_norm(g, {1, 1, 0}), std::sqrt(2.0)) < 1e-10);
  CHECK(rel(mod_norm(g, {2, 2, 0}), 1.0 / std::sqrt(2.0)) < 1e-10);
  CHECK(rel(mod_norm(g, {kInfinity, kInfinity, 0}), 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(rel(mod_norm(g, {kInfinity, 1, 0}), 1.0) < 1e-10);
  CHECK(rel(mod_norm(g, {1, 2, 0}), 1.0) < 1e-10);
  CHECK(rel(mod_norm(g, {2, 1, 0}), 1.0) < 1e-10);
  // int e^{-pi w^2/2} (1 + w^2) dw = sqrt(2) (1 + 1/pi)
  CHECK(rel(mod_norm(g, {1, 1, 2}), std::sqrt(2.0) * (1.0 + 1.0 / M_PI)) < 1e-10);

  GridSpec g2(2, 64, 8.0);
  auto h = sample_builtin("gaussian", g2);
  CHECK(rel(mod_norm(h, {1, 1, 0}), 2.0) < 1e-10);
  CHECK(rel(mod_norm(h, {2, 2, 0}), 0.5) < 1e-10);
}

TEST_CASE("batched norms equal single norms") {
  auto f = sample_builtin("random_bandlimited", kGrid, {{"bandwidth", 2.0}, {"seed", 4.0}});
  std::vector<ModParams> ps{{1, 1, 0}, {2, 1, 0}, {kInfinity, 1, 0}, {2, 2, 1}, {1, kInfinity, 0.5}};
  auto batch = mod_norms(f, ps);
  for (std::size_t k = 0; k < ps.size(); ++k) CHECK(batch[k] == mod_norm(f, ps[k]));
}

TEST_CASE("mixed_norm on a materialized matrix agrees with the streamed norm") {
  GridSpec g(1, 128, 16.0);
  auto f = sample_builtin("triangle", g);
  auto V = stft(f, canonical_window(g));
  for (ModParams p : {ModParams{1, 1, 0}, ModParams{2, 1, 1}, ModParams{kInfinity, 2, 0}})
    CHECK(rel(mixed_norm(V, p), mod_norm(f, p)) < 1e-14);
}

TEST_CASE("norm symmetries") {
  auto f = sample_builtin("random_bandlimited", kGrid, {{"bandwidth", 3.0}, {"seed", 8.0}, {"real", 0.0}});
  const ModParams p{1, 1, 0};
  double n = mod_norm(f, p);
  CHECK(rel(mod_norm(Complex(-2.5) * f, p), 2.5 * n) < 1e-13);
  CHECK(rel(mod_norm(translate(f, {3.0, 0, 0}), p), n) < 1e-12);
  CHECK(rel(mod_norm(modulate(f, {1.0, 0, 0}), p), n) < 1e-12);
  CHECK(rel(mod_norm(conj(f), p), n) < 1e-12);
  // Triangle inequality.
  auto g = sample_builtin("gaussian", kGrid, {{"width", 0.5}});
  CHECK(mod_norm(f + g, p) <= n + mod_norm(g, p) + 1e-12);
  CHECK(mod_norm(SampledField::zeros(kGrid), p) == 0.0);
}

TEST_CASE("parameter validation") {
  auto g = sample_builtin("gaussian", GridSpec(1, 16, 4.0));
  CHECK_THROWS_AS(mod_norm(g, {0.5, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(mod_norm(g, {1, 1, -1}), std::invalid_argument);
  CHECK(parse_exponent("inf") == kInfinity);
  CHECK(parse_exponent("2.5") == 2.5);
  CHECK_THROWS_AS(parse_exponent("x"), std::invalid_argument);
  CHECK(format_exponent(kInfinity) == "inf");
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000003, 0.1);
  double s = pairwise_sum(v);
  CHECK(std::abs(s - 100000.3) < 1e-8);
  CHECK(pairwise_sum(v) == s);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("torus algebra norm reads integer-frequency coefficients") {
  GridSpec g(1, 256, 8.0);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x = g.node(i);
    v[i] = std::exp(Complex(0.0, 2.0 * M_PI * x)) + 0.5 * std::exp(Complex(0.0, -4.0 * M_PI * x));
  }
  SampledField f(g, v);
  CHECK(torus_algebra_norm(f) == doctest::Approx(1.5).epsilon(1e-12));
  auto spec = periodization_spectrum(f, 3);
  CHECK(std::abs(spec.coefficients.at({1, 0, 0}) - 1.0) < 1e-12);
  CHECK(std::abs(spec.coefficients.at({-2, 0, 0}) - 0.5) < 1e-12);
  CHECK(spec.off_integer_ratio < 1e-12);
  CHECK(torus_band(g) == 15);
  CHECK_THROWS_AS(torus_band(GridSpec(1, 256, 8.5)), std::invalid_argument);
}

TEST_CASE("periodization of a bump supported in the unit cell") {
  GridSpec g(1, 512, 8.0);
  auto bump = unit_bump(g);
  auto per = periodize_unit(bump);
  // Zeroth coefficient is the integral of the bump.
  double integral = 0.0;
  for (const auto& z : bump.values()) integral += z.real() * g.spacing();
  auto spec = periodization_spectrum(per, 2);
  CHECK(std::abs(spec.coefficients.at({0, 0, 0}) - integral) < 1e-12);
  // The periodic version repeats with period one.
  for (std::size_t i = 0; i + 64 < g.size(); i += 17) CHECK(std::abs(per[i] - per[i + 64]) < 1e-14);
}

TEST_CASE("weighted L2 membership") {
  GridSpec g(1, 512, 8.0);
  auto gm = l2s_membership(sample_builtin("gaussian", g), 1.25);
  CHECK(gm.certified);
  auto jm = l2s_membership(sample_builtin("jump", g), 1.25);
  CHECK_FALSE(jm.certified);
  CHECK(jm.change_freq > 0.02);
  CHECK_THROWS_AS(l2s_membership(sample_builtin("gaussian", g), 1.0), std::invalid_argument);
}
