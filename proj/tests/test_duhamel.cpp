#include <cmath>

#include "doctest.h"
#include "modspace/duhamel.hpp"
#include "modspace/norms.hpp"
#include "modspace/propagators.hpp"

using namespace modspace;

namespace {

const GridSpec kGrid(1, 128, 16.0);

SolverConfig config(const std::string& preset, double dt = 0.01) {
  SolverConfig cfg;
  cfg.F = RealEntireSeries::preset(preset);
  cfg.quadrature_step = dt;
  cfg.picard_tol = 1e-13;
  return cfg;
}

CauchyData nls_data(double amplitude) {
  return {Equation::nls, sample_builtin("gaussian", kGrid, {{"amplitude", amplitude}}), std::nullopt, 0.0};
}

}  // namespace

TEST_CASE("step horizon by hand") {
  // Cubic: F~ = (x^2 + y^2)(x + y), G(x) = 4 x^2, (d_x + d_y) F~ (a, a) = 12 a^2.
  const double c1 = 1.5, n0 = 0.3, n1 = 0.1;
  auto hz = step_horizon(n0, n1, RealEntireSeries::preset("cubic"), c1, 0.9, 1.0);
  const double M = 2.0 * c1 * (n0 + n1);
  const double T1 = 1.0 / (2.0 * c1 * 4.0 * M * M);
  const double T2 = 1.0 / (4.0 * c1 * 12.0 * 4.0 * M * M);
  CHECK(std::abs(hz.M - M) < 1e-12);
  CHECK(std::abs(hz.T1 - T1) < 1e-12);
  CHECK(std::abs(hz.T2 - T2) < 1e-12);
  CHECK(std::abs(hz.T - 0.9 * std::min(T1, T2)) < 1e-12);

  auto capped = step_horizon(1e-3, 0.0, RealEntireSeries::preset("cubic"), 1.0, 0.5, 0.2);
  CHECK(capped.T == doctest::Approx(0.1));
  auto free = step_horizon(5.0, 0.0, RealEntireSeries(), 1.0, 0.9, 0.7);
  CHECK(free.T == 0.7);
  CHECK_THROWS_AS(step_horizon(1.0, 0.0, RealEntireSeries(), 0.0), std::invalid_argument);
}

TEST_CASE("zero nonlinearity reproduces the free Schrodinger flow in both directions") {
  auto data = nls_data(1.0);
  auto cfg = config("zero", 0.05);
  cfg.horizon_cap = 0.2;
  auto fwd = continue_solution(data, cfg, 0.5);
  CHECK(fwd.times.back() == 0.5);
  CHECK(fwd.per_window.size() == 3);
  auto exact = apply({Family::schrodinger, 0.5}, data.u0);
  CHECK(mod_norm(fwd.states.back() - exact, cfg.params) < 1e-8);

  auto back = continue_solution({Equation::nls, fwd.states.back(), std::nullopt, 0.5}, cfg, 0.0);
  CHECK(back.times.back() == 0.0);
  CHECK(mod_norm(back.states.back() - data.u0, cfg.params) < 1e-8);
}

TEST_CASE("zero nonlinearity reproduces the free wave and Klein-Gordon flows") {
  auto u0 = sample_builtin("gaussian", kGrid);
  auto u1 = sample_builtin("gaussian", kGrid, {{"width", 0.6}, {"amplitude", 0.5}});
  const double t = 0.3;
  for (Equation eq : {Equation::nlw, Equation::nlkg}) {
    auto cfg = config("zero", 0.05);
    auto path = continue_solution({eq, u0, u1, 0.0}, cfg, t);
    bool kg = eq == Equation::nlkg;
    auto exact = apply({kg ? Family::kg_cosine : Family::wave_cosine, t}, u0) +
                 apply({kg ? Family::kg_sine : Family::wave_sine, t}, u1);
    CHECK(mod_norm(path.states.back() - exact, cfg.params) < 1e-8);
    REQUIRE(path.velocities.size() == path.states.size());
  }
}

TEST_CASE("the Duhamel correction scales like the cube of the data") {
  auto cfg = config("cubic", 0.01);
  auto deviation = [&](double eps) {
    auto data = nls_data(eps);
    auto sol = picard_window(data, cfg, 0.2);
    REQUIRE(sol.has_value());
    return mod_norm(sol->nodes.back() - apply({Family::schrodinger, 0.2}, data.u0), cfg.params);
  };
  double ratio = deviation(0.2) / deviation(0.1);
  CHECK(ratio >= 7.0);
  CHECK(ratio <= 9.0);
}

TEST_CASE("Picard iteration contracts and converges to the scheme fixed point") {
  auto cfg = config("cubic", 0.01);
  auto data = nls_data(0.5);
  auto sol = solve_window(data, cfg);
  CHECK(sol.record.contraction_factor < 0.5);
  CHECK(sol.record.final_increment < cfg.picard_tol);
  CHECK(sol.record.T_used > 0.0);
  CHECK(residual(sol, cfg, ResidualKind::scheme) <= 2.0 * cfg.picard_tol);

  auto neg = solve_window(data, cfg, -1.0);
  CHECK(neg.record.T_used < 0.0);
}

TEST_CASE("reference residual is second order in the step") {
  auto data = nls_data(1.0);
  double r[2];
  for (int k = 0; k < 2; ++k) {
    auto cfg = config("cubic", k == 0 ? 0.01 : 0.005);
    auto sol = picard_window(data, cfg, 0.08);
    REQUIRE(sol.has_value());
    r[k] = residual(*sol, cfg, ResidualKind::reference);
  }
  CHECK(r[0] / r[1] > 3.0);
  CHECK(r[0] / r[1] < 5.0);
}

TEST_CASE("nonlinear wave and Klein-Gordon runs reach the end time") {
  auto u0 = sample_builtin("gaussian", kGrid, {{"amplitude", 0.5}});
  auto u1 = SampledField::zeros(kGrid);
  for (Equation eq : {Equation::nlw, Equation::nlkg}) {
    auto cfg = config("cubic", 0.02);
    auto path = continue_solution({eq, u0, u1, 0.0}, cfg, 0.3);
    CHECK_FALSE(path.blow_up);
    CHECK(path.times.back() == 0.3);
    for (const auto& w : path.per_window) CHECK(w.contraction_factor < 0.6);
  }
}

TEST_CASE("a zero initial guess converges to the same window") {
  auto cfg = config("cubic", 0.01);
  auto data = nls_data(0.5);
  auto a = picard_window(data, cfg, 0.1);
  cfg.zero_initial_guess = true;
  auto b = picard_window(data, cfg, 0.1);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(b->record.picard_iters > a->record.picard_iters);
  CHECK(mod_norm(a->nodes.back() - b->nodes.back(), cfg.params) < 1e-11);
}

TEST_CASE("input validation") {
  auto cfg = config("cubic");
  auto u0 = sample_builtin("gaussian", kGrid);
  CHECK_THROWS_AS(continue_solution({Equation::nls, u0, u0, 0.0}, cfg, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(continue_solution({Equation::nlw, u0, std::nullopt, 0.0}, cfg, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(continue_solution({Equation::nls, transform(u0), std::nullopt, 0.0}, cfg, 0.1),
                  std::invalid_argument);
  auto bad = cfg;
  bad.F = RealEntireSeries({{{0, 0}, 1.0}});
  CHECK_THROWS_AS(continue_solution(nls_data(1.0), bad, 0.1), std::invalid_argument);
  bad = cfg;
  bad.safety = 1.5;
  CHECK_THROWS_AS(continue_solution(nls_data(1.0), bad, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(equation_from_string("kdv"), std::invalid_argument);
}

TEST_CASE("Picard failure surfaces after the allowed halvings") {
  auto cfg = config("cubic", 0.05);
  cfg.picard_max_iter = 1;
  cfg.picard_tol = 1e-300;
  cfg.max_halvings = 2;
  CHECK_THROWS_AS(solve_window(nls_data(1.0), cfg), NumericalFailure);
}
