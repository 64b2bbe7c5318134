#include <cmath>

#include "doctest.h"
#include "modspace/norms.hpp"
#include "modspace/verification.hpp"

using namespace modspace;

namespace {

const GridSpec kGrid(1, 128, 8.0);

}  // namespace

TEST_CASE("battery is deterministic and ordered") {
  auto a = Battery::standard(kGrid, 7, 8);
  auto b = Battery::standard(kGrid, 7, 8);
  REQUIRE(a.size() == 8);
  CHECK(a[0].name == "gaussian");
  CHECK(a[1].name == "triangle");
  CHECK(a[2].name == "jump");
  CHECK(a[3].name == "plane_wave");
  CHECK(a[4].name == "random_bandlimited_0");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_abs_difference(a[i].field, b[i].field) == 0.0);
  auto c = Battery::standard(kGrid, 8, 8);
  CHECK(max_abs_difference(a[5].field, c[5].field) > 0.0);

  auto fine = a.on_grid(kGrid.refined());
  CHECK(fine.grid() == kGrid.refined());
  CHECK(fine[4].params == a[4].params);

  auto two = Battery::standard(GridSpec(2, 16, 4.0), 7, 4);
  CHECK(two[0].name == "gaussian");
  CHECK(two[1].name == "plane_wave");
}

TEST_CASE("membership of the catalog shapes") {
  CHECK(in_modulation_space("gaussian", {1, 1, 5}));
  CHECK_FALSE(in_modulation_space("jump", {1, 1, 0}));
  CHECK(in_modulation_space("jump", {2, 2, 0.4}));
  CHECK_FALSE(in_modulation_space("jump", {2, 2, 0.5}));
  CHECK(in_modulation_space("triangle", {1, 1, 0.9}));
  CHECK_FALSE(in_modulation_space("triangle", {1, 1, 1.0}));
  CHECK_FALSE(in_modulation_space("plane_wave", {2, 1, 0}));
  CHECK(in_modulation_space("plane_wave", {kInfinity, 1, 0}));

  auto battery = Battery::standard(kGrid, 7, 6);
  CHECK(battery.eligible({1, 1, 0}) == std::vector<std::size_t>{0, 1, 4, 5});
  CHECK(battery.eligible({kInfinity, 2, 0}) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("battery pairs put self-pairs first") {
  auto pairs = battery_pairs({0, 2, 5}, 5);
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(pairs == std::vector<P>{{0, 0}, {2, 2}, {5, 5}, {0, 2}, {0, 5}});
  CHECK(battery_pairs({0, 2, 5}, 100).size() == 6);
  CHECK(battery_pairs({0, 2, 5}, 2).size() == 2);
}

TEST_CASE("cutoff and bump shapes") {
  GridSpec g(1, 256, 8.0);
  auto phi = smooth_cutoff(g, 1.0, {0, 0, 0});
  auto bump = unit_bump(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double x = g.node(k);
    if (std::abs(x) <= 1.0) CHECK(phi[k].real() == 1.0);
    if (std::abs(x) >= 2.0) CHECK(phi[k].real() == 0.0);
    CHECK(phi[k].real() >= 0.0);
    CHECK(phi[k].real() <= 1.0);
    if (x <= 0.0 || x >= 1.0) CHECK(bump[k].real() == 0.0);
  }
  CHECK(bump[g.size() / 2 + 16].real() == doctest::Approx(1.0));  // x = 1/2
}

TEST_CASE("relative change and report serialization") {
  CHECK(relative_change(2.0, 2.0) == 0.0);
  CHECK(relative_change(2.0, 3.0) == 0.5);
  CHECK(std::isinf(relative_change(0.0, 1.0)));
  CheckReport r;
  r.name = "x";
  r.measured_constant = NAN;
  r.stability = INFINITY;
  auto j = r.to_json();
  CHECK(j["measured_constant"].is_null());
  CHECK(j["stability"].is_null());
  CHECK(j["name"] == "x");
}

TEST_CASE("algebra check flags pairs outside the hypothesis") {
  auto battery = Battery::standard(kGrid, 7, 6);
  auto inside = check_algebra(battery, {1, 1, 0}, 6);
  CHECK(inside.status != "outside-hypothesis");
  CHECK(inside.measured_constant > 0.0);
  auto outside = check_algebra(battery, {2, 2, 0}, 6);
  CHECK(outside.status == "outside-hypothesis");
  CHECK(outside.pass);
}

TEST_CASE("approximate identity on the gaussian") {
  // The smallest radius spans four lattice cells.
  GridSpec g(1, 512, 8.0);
  auto f = sample_builtin("gaussian", g);
  // f * phi_r = (1 + r^2)^{-1/2} e^{-pi x^2 / (1 + r^2)}
  const double r = 0.5;
  auto phi = sample_builtin("gaussian", g, {{"width", r}, {"normalize", 1.0}});
  const double w = std::sqrt(1.0 + r * r);
  auto exact = sample_builtin("gaussian", g, {{"width", w}, {"amplitude", 1.0 / w}});
  CHECK(max_abs_difference(convolve(f, phi), exact) < 1e-12);

  auto rep = check_approx_identity(f, {1.0, 0.5, 0.25, 0.125, 0.0625});
  CHECK(rep.pass);
  CHECK(rep.details["monotone"] == true);
  CHECK(rep.measured_constant < 1e-2);
  CHECK_THROWS_AS(check_approx_identity(f, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("small-battery checks") {
  auto battery = Battery::standard(kGrid, 7, 6);
  CHECK(check_convolution(battery).pass);
  CHECK(check_fourier_isometry(battery, 2.0).pass);
  CHECK(check_window_equivalence(battery).pass);
  CHECK(check_l2s(GridSpec(1, 512, 8.0), 1.25).pass);
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 15);
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), std::invalid_argument);
  SuiteOptions o;
  o.grid = kGrid;
  o.battery_size = 6;
  auto reports = run_suite("convolution", o);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].name == "convolution");
}
