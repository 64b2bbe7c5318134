#include <cmath>

#include "doctest.h"
#include "modspace/norms.hpp"
#include "modspace/series.hpp"

using namespace modspace;

TEST_CASE("preset coefficients") {
  const Complex i(0.0, 1.0);
  auto cubic = RealEntireSeries::preset("cubic");
  CHECK(cubic.coefficient(3, 0) == Complex(1.0));
  CHECK(cubic.coefficient(2, 1) == i);
  CHECK(cubic.coefficient(1, 2) == Complex(1.0));
  CHECK(cubic.coefficient(0, 3) == i);
  CHECK(cubic.coeffs().size() == 4);
  CHECK(cubic.degree() == 3);
  CHECK(RealEntireSeries::preset("quadratic").degree() == 2);
  CHECK(RealEntireSeries::preset("quintic").degree() == 5);
  CHECK(RealEntireSeries::preset("zero").is_zero());
  CHECK(RealEntireSeries::preset("zero").degree() == -1);
  CHECK_THROWS_AS(RealEntireSeries::preset("sextic"), std::invalid_argument);
}

TEST_CASE("evaluation reproduces |z|^2k z") {
  for (double s : {-1.3, 0.0, 0.7})
    for (double t : {-0.4, 0.25, 2.0}) {
      Complex z(s, t);
      double r = std::norm(z);
      CHECK(std::abs(evaluate(RealEntireSeries::preset("quadratic"), s, t) - r) < 1e-14);
      CHECK(std::abs(evaluate(RealEntireSeries::preset("cubic"), s, t) - r * z) < 1e-13);
      CHECK(std::abs(evaluate(RealEntireSeries::preset("quintic"), s, t) - r * r * z) < 1e-12);
    }
}

TEST_CASE("series arithmetic") {
  auto q = RealEntireSeries::preset("quadratic");
  auto sum = q + Complex(-1.0) * q;
  CHECK(sum.is_zero());
  auto sq = q * q;
  CHECK(sq.coefficient(2, 2) == Complex(2.0));
  auto dx = partial_x(RealEntireSeries::preset("cubic"));
  CHECK(dx.coefficient(2, 0) == Complex(3.0));
  CHECK(dx.coefficient(1, 1) == Complex(0.0, 2.0));
  auto dy = partial_y(RealEntireSeries::preset("cubic"));
  CHECK(dy.coefficient(0, 2) == Complex(0.0, 3.0));
}

TEST_CASE("majorant and one-variable factor") {
  auto cubic = RealEntireSeries::preset("cubic");
  // F~(x, y) = (x^2 + y^2)(x + y)
  CHECK(evaluate_majorant(cubic, 0.5, 2.0) == doctest::Approx(4.25 * 2.5));
  CHECK(majorant(cubic).coefficient(2, 1) == Complex(1.0));
  auto G = g_factor(cubic);
  // F~(x, x) = 4 x^3 = x G(x)
  CHECK(G(1.5) == doctest::Approx(4.0 * 1.5 * 1.5));
  CHECK(evaluate_majorant(cubic, 1.5, 1.5) == doctest::Approx(1.5 * G(1.5)));
}

TEST_CASE("exp preset tail accounts for the truncated majorant") {
  for (double R : {0.3, 0.8}) {
    auto e5 = RealEntireSeries::preset("exp5");
    double full = (std::exp(2.0 * R * R) - 1.0) * 2.0 * R;
    CHECK(evaluate_majorant(e5, R, R) + exp_preset_tail(5, R) == doctest::Approx(full).epsilon(1e-12));
  }
  auto e5 = RealEntireSeries::preset("exp5");
  CHECK(e5.coefficient(3, 0) == Complex(1.0));
  CHECK(e5.coefficient(5, 0) == Complex(0.5));
  CHECK(e5.degree() == 5);
}

TEST_CASE("json round trip") {
  auto q = RealEntireSeries::preset("quintic");
  CHECK(RealEntireSeries::from_json(q.to_json()) == q);
  auto parsed = RealEntireSeries::from_json(R"({"coeffs": [[1, 0, 2.0, 0.0], [0, 1, 0.0, -1.0], [2, 2, 0.0, 0.0]]})");
  CHECK(parsed.coeffs().size() == 2);
  CHECK(parsed.coefficient(0, 1) == Complex(0.0, -1.0));
  CHECK_THROWS(RealEntireSeries::from_json(R"({"coeffs": [[1, 0, 2.0]]})"));
  CHECK_THROWS(RealEntireSeries::from_json(R"({"coeffs": [[-1, 0, 2.0, 0.0]]})"));
}

TEST_CASE("composition acts pointwise") {
  GridSpec g(1, 64, 8.0);
  auto f = modulate(sample_builtin("gaussian", g), {0.25, 0, 0});
  auto c = compose(RealEntireSeries::preset("cubic"), f);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(c[i] - std::norm(f[i]) * f[i]));
  CHECK(err < 1e-15);
}

TEST_CASE("certificates") {
  GridSpec g(1, 256, 16.0);
  const ModParams p{1, 1, 0};
  auto f = sample_builtin("gaussian", g);
  auto cert = norm_certificate(RealEntireSeries::preset("quadratic"), f, p);
  CHECK(cert.lhs == doctest::Approx(mod_norm(f * f, p)));
  CHECK(cert.rhs == doctest::Approx(std::pow(mod_norm(f, p), 2)));
  CHECK(cert.C == doctest::Approx(cert.lhs / cert.rhs));

  std::map<RealEntireSeries::Index, Complex> with_constant{{{0, 0}, 1.0}, {{1, 0}, 1.0}};
  CHECK_THROWS_AS(norm_certificate(RealEntireSeries(with_constant), f, p), std::invalid_argument);

  auto h = sample_builtin("gaussian", g, {{"width", 0.7}, {"amplitude", 0.5}});
  auto lip = lipschitz_bound(RealEntireSeries::preset("cubic"), f, h, p);
  CHECK(lip.lhs <= lip.rhs);
  CHECK(lipschitz_bound(RealEntireSeries::preset("cubic"), f, f, p).lhs == 0.0);
}
