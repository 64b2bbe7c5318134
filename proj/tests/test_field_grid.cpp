#include <cmath>
#include <complex>
#include <functional>

#include "doctest.h"
#include "modspace/grid.hpp"

using namespace modspace;

namespace {

double gauss(double x, double width = 1.0) { return std::exp(-M_PI * x * x / (width * width)); }

SampledField tabulate(const GridSpec& g, Domain d, const std::function<Complex(const Point&)>& fn) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(d == Domain::space ? g.position(i) : g.frequency_position(i));
  return SampledField(g, std::move(v), d);
}

}  // namespace

TEST_CASE("lattice geometry") {
  GridSpec g(1, 256, 16.0);
  CHECK(g.spacing() == doctest::Approx(1.0 / 16.0));
  CHECK(g.node(0) == -8.0);
  CHECK(g.node(128) == 0.0);
  CHECK(g.frequency(128) == 0.0);
  CHECK(g.frequency(0) == doctest::Approx(-8.0));
  CHECK(g.nyquist() == doctest::Approx(8.0));
  CHECK(g.dual() == GridSpec(1, 256, 16.0));
  CHECK(g.refined().samples() == 512);

  GridSpec g3(3, 8, 2.0);
  for (std::size_t i = 0; i < g3.size(); i += 37) CHECK(g3.ravel(g3.unravel(i)) == i);
  CHECK(g3.size() == 512);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec(1, 100, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 8, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledField(GridSpec(1, 8, 1.0), std::vector<Complex>(7)), std::invalid_argument);
}

TEST_CASE("gaussian is self-dual under the continuum-normalized transform") {
  for (int dim : {1, 2}) {
    GridSpec g(dim, dim == 1 ? 256 : 64, dim == 1 ? 16.0 : 8.0);
    auto f = sample_builtin("gaussian", g);
    auto hat = transform(f);
    CHECK(hat.domain() == Domain::frequency);
    auto exact = tabulate(g, Domain::frequency, [&](const Point& w) {
      double r = 1.0;
      for (int d = 0; d < dim; ++d) r *= gauss(w[d]);
      return Complex(r);
    });
    CHECK(max_abs_difference(hat, exact) < 1e-12);
  }
}

TEST_CASE("transform round trip and Plancherel") {
  GridSpec g(1, 128, 10.0);
  auto f = sample_builtin("random_bandlimited", g, {{"bandwidth", 3.0}, {"seed", 5.0}});
  auto back = inverse_transform(transform(f));
  CHECK(max_abs_difference(back, f) < 1e-13);
  CHECK(l2_norm(transform(f)) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK(l2_norm(sample_builtin("gaussian", g)) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
}

TEST_CASE("translation and modulation intertwine with the transform") {
  GridSpec g(1, 256, 16.0);
  auto f = sample_builtin("gaussian", g, {{"width", 0.8}});
  const double y = 1.25;  // 20 cells
  auto lhs = transform(translate(f, {y, 0, 0}));
  auto rhs = tabulate(g, Domain::frequency, [&](const Point& w) {
    return std::exp(Complex(0.0, -2.0 * M_PI * y * w[0])) * gauss(w[0], 1.0 / 0.8) * 0.8;
  });
  CHECK(max_abs_difference(lhs, rhs) < 1e-12);

  const double nu = 2.0;  // 32 frequency cells
  auto mod_hat = transform(modulate(f, {nu, 0, 0}));
  auto shifted = translate(transform(f), {nu, 0, 0});
  CHECK(max_abs_difference(mod_hat, shifted) < 1e-12);

  CHECK_THROWS_AS(translate(f, {0.01, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(modulate(f, {0.01, 0, 0}), std::invalid_argument);
}

TEST_CASE("convolution of gaussians has the closed form") {
  GridSpec g(1, 512, 32.0);
  const double a = 1.0, b = 0.5;
  auto c = convolve(sample_builtin("gaussian", g, {{"width", a}}), sample_builtin("gaussian", g, {{"width", b}}));
  const double w2 = a * a + b * b;
  auto exact = tabulate(g, Domain::space, [&](const Point& x) {
    return Complex(a * b / std::sqrt(w2) * std::exp(-M_PI * x[0] * x[0] / w2));
  });
  CHECK(max_abs_difference(c, exact) < 1e-12);
}

TEST_CASE("catalog shapes") {
  GridSpec g(1, 64, 4.0);
  auto tri = sample_builtin("triangle", g);
  auto jump = sample_builtin("jump", g);
  CHECK(tri[32].real() == 1.0);  // x = 0
  CHECK(tri[40].real() == doctest::Approx(0.5));
  CHECK(jump[32].real() == 0.0);
  CHECK(jump[24].real() == doctest::Approx(-0.5));
  CHECK(jump[40].real() == doctest::Approx(0.5));
  CHECK(jump[0].real() == 0.0);
  CHECK_THROWS_AS(sample_builtin("triangle", GridSpec(2, 8, 4.0)), std::invalid_argument);
  CHECK_THROWS_AS(sample_builtin("nope", g), std::invalid_argument);

  // A plane wave with integer frequency is a single spectral spike of height L.
  auto pw = transform(sample_builtin("plane_wave", g, {{"m", 1.0}}));
  for (std::size_t j = 0; j < g.size(); ++j) {
    double expected = g.frequency(j) == 1.0 ? 4.0 : 0.0;
    CHECK(std::abs(pw[j] - expected) < 1e-12);
  }
}

TEST_CASE("random band-limited fields") {
  GridSpec g(1, 256, 16.0);
  Params p{{"bandwidth", 2.5}, {"seed", 11.0}, {"count", 3.0}, {"real", 1.0}, {"amplitude", 0.7}};
  auto f = sample_builtin("random_bandlimited", g, p);
  auto again = sample_builtin("random_bandlimited", g, p);
  CHECK(max_abs_difference(f, again) == 0.0);
  double sup = 0.0, imag = 0.0;
  for (const auto& z : f.values()) sup = std::max(sup, std::abs(z)), imag = std::max(imag, std::abs(z.imag()));
  CHECK(sup == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(imag == 0.0);
  auto hat = transform(f);
  for (std::size_t j = 0; j < g.size(); ++j)
    if (std::abs(g.frequency(j)) >= 2.5) CHECK(std::abs(hat[j]) < 1e-12);
  p["seed"] = 12.0;
  CHECK(max_abs_difference(f, sample_builtin("random_bandlimited", g, p)) > 1e-3);
  CHECK_THROWS_AS(sample_builtin("random_bandlimited", g, {{"bandwidth", 9.0}}), std::invalid_argument);
}

TEST_CASE("pointwise algebra") {
  GridSpec g(1, 16, 2.0);
  auto f = sample_builtin("gaussian", g);
  auto two = Complex(2.0) * f;
  CHECK(max_abs_difference(two - f, f) == 0.0);
  CHECK(max_abs_difference(f * f, pointwise(PointwiseOp::mul, f, f)) == 0.0);
  auto z = modulate(f, {0.5, 0, 0});
  CHECK(max_abs_difference(real_part(z) + Complex(0.0, 1.0) * imag_part(z), z) < 1e-15);
  CHECK(max_abs_difference(conj(conj(z)), z) == 0.0);
  CHECK_THROWS_AS(f + sample_builtin("gaussian", GridSpec(1, 32, 2.0)), std::invalid_argument);
  CHECK(all_finite(f));
  std::vector<Complex> bad(g.size(), 1.0);
  bad[3] = NAN;
  CHECK_FALSE(all_finite(SampledField(g, bad)));
}

TEST_CASE("fourier image lives on the dual lattice") {
  GridSpec g(1, 128, 8.0);
  auto img = fourier_image(sample_builtin("gaussian", g));
  CHECK(img.grid() == GridSpec(1, 128, 16.0));
  CHECK(img.domain() == Domain::space);
  CHECK(max_abs_difference(img, sample_builtin("gaussian", img.grid())) < 1e-12);
}
