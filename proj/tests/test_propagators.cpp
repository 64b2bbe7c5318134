#include <cmath>

#include "doctest.h"
#include "modspace/norms.hpp"
#include "modspace/propagators.hpp"

using namespace modspace;

TEST_CASE("symbols at zero frequency and at a sample point") {
  const Point zero{0, 0, 0}, xi{0.5, 0, 0};
  const double t = 0.7;
  CHECK(symbol({Family::schrodinger, t}, zero) == Complex(1.0));
  CHECK(symbol({Family::wave_sine, t}, zero) == Complex(t));
  CHECK(symbol({Family::wave_cosine, t}, zero) == Complex(1.0));
  CHECK(symbol({Family::kg_sine, t}, zero).real() == doctest::Approx(std::sin(t)));
  CHECK(symbol({Family::kg_cosine, t}, zero).real() == doctest::Approx(std::cos(t)));

  CHECK(std::abs(symbol({Family::schrodinger, t}, xi) - std::exp(Complex(0.0, -t * M_PI * M_PI))) < 1e-15);
  CHECK(symbol({Family::wave_sine, t}, xi).real() == doctest::Approx(std::sin(M_PI * t) / M_PI));
  double bracket = std::sqrt(1.0 + M_PI * M_PI);
  CHECK(symbol({Family::kg_sine, t}, xi).real() == doctest::Approx(std::sin(t * bracket) / bracket));
  // Small frequencies approach the zero-frequency limit continuously.
  CHECK(symbol({Family::wave_sine, t}, {1e-9, 0, 0}).real() == doctest::Approx(t));
}

TEST_CASE("Schrodinger evolution of the gaussian has a closed form") {
  GridSpec g(1, 512, 32.0);
  const double t = 0.1;
  auto u = apply({Family::schrodinger, t}, sample_builtin("gaussian", g));
  // (1 + 4 pi i t)^{-1/2} exp(-pi x^2 / (1 + 4 pi i t))
  const Complex a(1.0, 4.0 * M_PI * t);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double x = g.node(k);
    err = std::max(err, std::abs(u[k] - std::exp(-M_PI * x * x / a) / std::sqrt(a)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("Schrodinger group is unitary and composes") {
  GridSpec g(1, 256, 16.0);
  auto f = sample_builtin("random_bandlimited", g, {{"bandwidth", 2.0}, {"seed", 1.0}});
  auto a = apply({Family::schrodinger, 0.3}, apply({Family::schrodinger, 0.45}, f));
  auto b = apply({Family::schrodinger, 0.75}, f);
  CHECK(max_abs_difference(a, b) < 1e-12);
  CHECK(l2_norm(b) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK(max_abs_difference(apply({Family::schrodinger, -0.75}, b), f) < 1e-12);
}

TEST_CASE("wave pair satisfies the energy identity on the symbol") {
  // cos^2 + (2 pi |xi|)^2 (sin / (2 pi |xi|))^2 = 1
  for (double w : {0.1, 1.0, 3.7}) {
    const Point xi{w, 0, 0};
    double c = symbol({Family::wave_cosine, 2.3}, xi).real();
    double s = symbol({Family::wave_sine, 2.3}, xi).real();
    CHECK(c * c + std::pow(2.0 * M_PI * w * s, 2) == doctest::Approx(1.0));
  }
}

TEST_CASE("bound ratio at time zero") {
  GridSpec g(1, 256, 16.0);
  std::vector<SampledField> battery{sample_builtin("gaussian", g),
                                    sample_builtin("random_bandlimited", g, {{"bandwidth", 2.0}, {"seed", 2.0}})};
  const ModParams p{1, 1, 0};
  auto r = bound_ratio(Family::schrodinger, {0.0, 1.0}, battery, p);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rows[1].normalized == doctest::Approx(r.rows[1].ratio / std::sqrt(std::sqrt(2.0))));
  CHECK(r.constant >= r.rows[0].normalized);
  auto zero = bound_ratio(Family::wave_sine, {0.0}, battery, p);
  CHECK(zero.rows[0].ratio == 0.0);
}

TEST_CASE("family names round trip") {
  for (Family f : all_families()) CHECK(family_from_string(to_string(f)) == f);
  CHECK(all_families().size() == 5);
  CHECK_THROWS_AS(family_from_string("heat"), std::invalid_argument);
}
