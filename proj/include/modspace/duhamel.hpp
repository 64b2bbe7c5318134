#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modspace/errors.hpp"
#include "modspace/grid.hpp"
#include "modspace/params.hpp"
#include "modspace/series.hpp"

namespace modspace {

enum class Equation { nls, nlw, nlkg };

std::string to_string(Equation e);
Equation equation_from_string(const std::string& s);

/// Initial data at time t0. u1 is the initial velocity for nlw/nlkg and must
/// be absent for nls.
struct CauchyData {
  Equation equation;
  SampledField u0;
  std::optional<SampledField> u1;
  double t0 = 0.0;

  void validate() const;
};

struct SolverConfig {
  RealEntireSeries F;
  ModParams params{1.0, 1.0, 0.0};
  double quadrature_step = 1e-3;
  double picard_tol = 1e-10;
  int picard_max_iter = 60;
  double horizon_cap = 1.0;
  double c1 = 1.0;
  double safety = 0.9;
  double norm_ceiling = 1e6;   // blow-up when the norm exceeds this multiple of the initial norm
  double window_floor = 1e-8;  // blow-up when the horizon drops below this
  int max_halvings = 10;
  bool zero_initial_guess = false;

  void validate() const;
};

struct Horizon {
  double M;
  double T1;
  double T2;
  double T;
};

/// M = 2 c1 (norm_u0 + norm_u1), T1 = min{cap, 1/(2 c1 G(M))},
/// T2 = min{cap, [4 c1 (d_xF~ + d_yF~)(2M, 2M)]^{-1}}, T = safety min{T1, T2}.
/// For F = 0 the horizon is the cap.
Horizon step_horizon(double norm_u0, double norm_u1, const RealEntireSeries& F, double c1, double safety = 0.9,
                     double horizon_cap = 1.0);

/// Trial path on a window [0, T]: samples at the midpoints (l + 1/2) T / K of
/// K equal steps. T may be negative for backward solves.
struct TrialPath {
  double T;
  std::vector<SampledField> midpoints;
};

struct DuhamelImage {
  TrialPath path;                             // J(u) at the midpoints
  std::vector<SampledField> nodes;            // J(u) at l T / K, l = 0..K
  std::vector<SampledField> node_velocities;  // time derivative at the nodes (nlw/nlkg)
};

/// Applies the Duhamel map to a trial path with the midpoint rule.
DuhamelImage duhamel_map(const CauchyData& data, const SolverConfig& cfg, const TrialPath& trial);

/// The free evolution sampled at the midpoints of K steps on [0, T].
TrialPath free_path(const CauchyData& data, double T, std::size_t steps);

/// Number of quadrature steps used for a window of length T.
std::size_t window_steps(double T, double dt);

struct WindowRecord {
  double t_start;
  double T_used;
  double T1;
  double T2;
  double M;
  double contraction_factor;  // largest ratio of successive Picard increments
  int picard_iters;
  int halvings;
  double final_increment;
  double max_norm;            // sup over nodes of the state norm
};

struct WindowSolution {
  CauchyData data;  // data at the start of the window
  TrialPath path;   // converged midpoint samples
  std::vector<SampledField> nodes;
  std::vector<SampledField> node_velocities;
  std::vector<double> increments;  // Picard increments, one per iteration
  WindowRecord record;
};

/// Picard iteration on a window of fixed length T (no halving). Returns
/// nullopt when picard_max_iter is exceeded.
std::optional<WindowSolution> picard_window(const CauchyData& data, const SolverConfig& cfg, double T);

/// Picard iteration with the horizon from step_horizon, halving T on failure.
/// Throws NumericalFailure after max_halvings.
WindowSolution solve_window(const CauchyData& data, const SolverConfig& cfg, double direction = 1.0);

struct SolutionPath {
  std::vector<double> times;
  std::vector<SampledField> states;
  std::vector<SampledField> velocities;  // nlw/nlkg only
  std::vector<WindowRecord> per_window;
  bool blow_up = false;
  std::string blow_up_reason;
};

/// Repeated windows from data.t0 to t_end (either direction), re-deriving the
/// horizon from the current state at every restart.
SolutionPath continue_solution(const CauchyData& data, const SolverConfig& cfg, double t_end);

enum class ResidualKind {
  scheme,     // u - J(u) at the midpoints, with the solver's own quadrature
  reference,  // u - J(u) at the nodes, with J computed by a cubic-exact rule
};

/// sup over nodes of ||u - J(u)|| on one window.
double residual(const WindowSolution& window, const SolverConfig& cfg, ResidualKind kind = ResidualKind::scheme);

}  // namespace modspace
