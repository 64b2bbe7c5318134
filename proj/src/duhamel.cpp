#include "modspace/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lattice.hpp"
#include "modspace/norms.hpp"
#include "modspace/propagators.hpp"

namespace modspace {

std::string to_string(Equation e) {
  switch (e) {
    case Equation::nls: return "nls";
    case Equation::nlw: return "nlw";
    case Equation::nlkg: return "nlkg";
  }
  return "unknown";
}

Equation equation_from_string(const std::string& s) {
  if (s == "nls") return Equation::nls;
  if (s == "nlw") return Equation::nlw;
  if (s == "nlkg") return Equation::nlkg;
  throw std::invalid_argument("unknown equation: " + s);
}

void CauchyData::validate() const {
  if (u0.domain() != Domain::space) throw std::invalid_argument("cauchy data: u0 must be in the space domain");
  if (equation == Equation::nls) {
    if (u1) throw std::invalid_argument("cauchy data: nls takes no initial velocity");
  } else {
    if (!u1) throw std::invalid_argument("cauchy data: nlw/nlkg need an initial velocity");
    if (!(u1->grid() == u0.grid()) || u1->domain() != Domain::space)
      throw std::invalid_argument("cauchy data: u0 and u1 must share a space-domain grid");
  }
}

void SolverConfig::validate() const {
  if (!F.constant_free()) throw std::invalid_argument("solver: nonlinearity must vanish at 0");
  if (!(quadrature_step > 0.0)) throw std::invalid_argument("solver: quadrature step must be positive");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("solver: picard_tol must be positive");
  if (picard_max_iter < 1) throw std::invalid_argument("solver: picard_max_iter must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("solver: safety must lie in (0, 1]");
  if (!(c1 > 0.0)) throw std::invalid_argument("solver: c1 must be positive");
  if (!(horizon_cap > 0.0)) throw std::invalid_argument("solver: horizon_cap must be positive");
  params.validate();
}

Horizon step_horizon(double norm_u0, double norm_u1, const RealEntireSeries& F, double c1, double safety,
                     double horizon_cap) {
  if (!(c1 > 0.0)) throw std::invalid_argument("step_horizon: c1 must be positive");
  double M = 2.0 * c1 * (norm_u0 + norm_u1);
  if (F.is_zero()) return {M, horizon_cap, horizon_cap, horizon_cap};
  double g = g_factor(F)(M);
  double T1 = g > 0.0 ? std::min(horizon_cap, 1.0 / (2.0 * c1 * g)) : horizon_cap;
  double d = evaluate_majorant(partial_x(F), 2.0 * M, 2.0 * M) + evaluate_majorant(partial_y(F), 2.0 * M, 2.0 * M);
  double T2 = d > 0.0 ? std::min(horizon_cap, 1.0 / (4.0 * c1 * d)) : horizon_cap;
  return {M, T1, T2, safety * std::min(T1, T2)};
}

std::size_t window_steps(double T, double dt) {
  double k = std::abs(T) / dt;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k - 1e-9)));
}

namespace {

using Spectrum = std::vector<Complex>;

Spectrum spectrum_of(const SampledField& f) {
  Spectrum v(f.values().begin(), f.values().end());
  detail::forward_centered(v, f.grid());
  return v;
}

SampledField field_of(Spectrum v, const GridSpec& grid) {
  detail::inverse_centered(v, grid);
  return SampledField(grid, std::move(v));
}

// The linear flow of one equation in Fourier variables. The Duhamel term is
// carried by running integrals I(t) of propagated nonlinearities:
//   nls:      u^(t) = S(t) (u0^ - i I0),              I0' = S(-t) F^
//   nlw/nlkg: u^(t) = C(t) u0^ + S(t) u1^ + S(t) I0 - C(t) I1,
//             I0' = C(t) F^,  I1' = S(t) F^,
// with C = cos(t w), S = sin(t w)/w, using K(t - s) = K(t) C(s) - C(t) K(s).
class Dynamics {
 public:
  explicit Dynamics(const CauchyData& data) : eq_(data.equation), grid_(data.u0.grid()) {
    u0_ = spectrum_of(data.u0);
    if (data.u1) u1_ = spectrum_of(*data.u1);
    if (eq_ != Equation::nls) {
      omega2_.resize(grid_.size());
      double shift = eq_ == Equation::nlkg ? 1.0 : 0.0;
      for (std::size_t i = 0; i < omega2_.size(); ++i) {
        Point w = grid_.frequency_position(i);
        double r2 = 0.0;
        for (int d = 0; d < grid_.dim(); ++d) r2 += w[d] * w[d];
        omega2_[i] = shift + 4.0 * M_PI * M_PI * r2;
      }
    }
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t parts() const { return eq_ == Equation::nls ? 1 : 2; }

  void integrand(double tau, const Spectrum& Fhat, std::vector<Spectrum>& out) const {
    out.resize(parts());
    if (eq_ == Equation::nls) {
      auto s = symbol_table({Family::schrodinger, -tau}, grid_);
      out[0].resize(Fhat.size());
      for (std::size_t i = 0; i < Fhat.size(); ++i) out[0][i] = s[i] * Fhat[i];
      return;
    }
    auto [c, s] = pair_tables(tau);
    out[0].resize(Fhat.size());
    out[1].resize(Fhat.size());
    for (std::size_t i = 0; i < Fhat.size(); ++i) {
      out[0][i] = c[i] * Fhat[i];
      out[1][i] = s[i] * Fhat[i];
    }
  }

  Spectrum state(double t, const std::vector<Spectrum>* I) const {
    Spectrum out(u0_.size());
    if (eq_ == Equation::nls) {
      auto s = symbol_table({Family::schrodinger, t}, grid_);
      const Complex minus_i(0.0, -1.0);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = s[i] * (I ? u0_[i] + minus_i * (*I)[0][i] : u0_[i]);
      return out;
    }
    auto [c, s] = pair_tables(t);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = c[i] * u0_[i] + s[i] * u1_[i];
      if (I) out[i] += s[i] * (*I)[0][i] - c[i] * (*I)[1][i];
    }
    return out;
  }

  Spectrum velocity(double t, const std::vector<Spectrum>* I) const {
    auto [c, s] = pair_tables(t);
    Spectrum out(u0_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = -omega2_[i] * s[i] * u0_[i] + c[i] * u1_[i];
      if (I) out[i] += c[i] * (*I)[0][i] + omega2_[i] * s[i] * (*I)[1][i];
    }
    return out;
  }

 private:
  std::pair<std::vector<Complex>, std::vector<Complex>> pair_tables(double t) const {
    bool kg = eq_ == Equation::nlkg;
    return {symbol_table({kg ? Family::kg_cosine : Family::wave_cosine, t}, grid_),
            symbol_table({kg ? Family::kg_sine : Family::wave_sine, t}, grid_)};
  }

  Equation eq_;
  GridSpec grid_;
  Spectrum u0_, u1_;
  std::vector<double> omega2_;
};

void axpy(std::vector<Spectrum>& y, Complex a, const std::vector<Spectrum>& x) {
  for (std::size_t p = 0; p < y.size(); ++p)
    for (std::size_t i = 0; i < y[p].size(); ++i) y[p][i] += a * x[p][i];
}

std::vector<Spectrum> zero_parts(std::size_t parts, std::size_t n) { return std::vector<Spectrum>(parts, Spectrum(n)); }

// Integrand samples h_l at the midpoints of the trial path.
std::vector<std::vector<Spectrum>> integrand_samples(const Dynamics& dyn, const SolverConfig& cfg,
                                                     const TrialPath& trial) {
  const std::size_t K = trial.midpoints.size();
  const double dt = trial.T / double(K);
  std::vector<std::vector<Spectrum>> h(K);
  for (std::size_t l = 0; l < K; ++l) {
    if (cfg.F.is_zero()) {
      h[l] = zero_parts(dyn.parts(), dyn.grid().size());
      continue;
    }
    auto Fhat = spectrum_of(compose(cfg.F, trial.midpoints[l]));
    dyn.integrand((double(l) + 0.5) * dt, Fhat, h[l]);
  }
  return h;
}

bool is_exact_zero(const SampledField& f) {
  for (const auto& v : f.values())
    if (v != Complex{}) return false;
  return true;
}

double norm_or_zero(const SampledField& f, const ModParams& params) {
  return is_exact_zero(f) ? 0.0 : mod_norm(f, params);
}

}  // namespace

DuhamelImage duhamel_map(const CauchyData& data, const SolverConfig& cfg, const TrialPath& trial) {
  if (trial.midpoints.empty()) throw std::invalid_argument("duhamel_map: empty trial path");
  data.validate();
  Dynamics dyn(data);
  const auto& grid = dyn.grid();
  const std::size_t K = trial.midpoints.size();
  const double dt = trial.T / double(K);
  auto h = integrand_samples(dyn, cfg, trial);

  DuhamelImage out{{trial.T, {}}, {}, {}};
  auto running = zero_parts(dyn.parts(), grid.size());
  auto emit_node = [&](double t) {
    out.nodes.push_back(field_of(dyn.state(t, &running), grid));
    if (data.equation != Equation::nls) out.node_velocities.push_back(field_of(dyn.velocity(t, &running), grid));
  };
  for (std::size_t m = 0; m < K; ++m) {
    emit_node(double(m) * dt);
    // Half step to the midpoint with the integrand at t_m + dt/4, linearly
    // interpolated from the neighbouring midpoint samples.
    auto partial = running;
    if (K == 1) {
      axpy(partial, 0.5 * dt, h[0]);
    } else if (m == 0) {
      axpy(partial, 0.5 * dt * 1.25, h[0]);
      axpy(partial, -0.5 * dt * 0.25, h[1]);
    } else {
      axpy(partial, 0.5 * dt * 0.75, h[m]);
      axpy(partial, 0.5 * dt * 0.25, h[m - 1]);
    }
    out.path.midpoints.push_back(field_of(dyn.state((double(m) + 0.5) * dt, &partial), grid));
    axpy(running, dt, h[m]);
  }
  emit_node(trial.T);
  return out;
}

TrialPath free_path(const CauchyData& data, double T, std::size_t steps) {
  data.validate();
  Dynamics dyn(data);
  TrialPath path{T, {}};
  const double dt = T / double(steps);
  for (std::size_t l = 0; l < steps; ++l)
    path.midpoints.push_back(field_of(dyn.state((double(l) + 0.5) * dt, nullptr), dyn.grid()));
  return path;
}

std::optional<WindowSolution> picard_window(const CauchyData& data, const SolverConfig& cfg, double T) {
  cfg.validate();
  data.validate();
  const std::size_t K = window_steps(T, cfg.quadrature_step);
  TrialPath trial;
  if (cfg.zero_initial_guess) {
    trial = TrialPath{T, std::vector<SampledField>(K, SampledField::zeros(data.u0.grid()))};
  } else {
    trial = free_path(data, T, K);
  }
  double scale = mod_norm(data.u0, cfg.params) + (data.u1 ? mod_norm(*data.u1, cfg.params) : 0.0);
  // Increments below this are rounding noise and say nothing about contraction.
  const double floor = 1e-12 * std::max(scale, 1e-300);

  WindowSolution sol{data, {}, {}, {}, {}, {}};
  for (int iter = 1; iter <= cfg.picard_max_iter; ++iter) {
    auto img = duhamel_map(data, cfg, trial);
    double delta = 0.0;
    for (std::size_t m = 0; m < K; ++m)
      delta = std::max(delta, norm_or_zero(img.path.midpoints[m] - trial.midpoints[m], cfg.params));
    if (!std::isfinite(delta)) throw NumericalFailure("picard", "non-finite increment");
    sol.increments.push_back(delta);
    trial = std::move(img.path);
    if (delta < cfg.picard_tol) {
      sol.path = std::move(trial);
      sol.nodes = std::move(img.nodes);
      sol.node_velocities = std::move(img.node_velocities);
      double factor = 0.0;
      for (std::size_t k = 1; k < sol.increments.size(); ++k)
        if (sol.increments[k] > floor && sol.increments[k - 1] > 0.0)
          factor = std::max(factor, sol.increments[k] / sol.increments[k - 1]);
      double max_norm = 0.0;
      for (const auto& u : sol.nodes) {
        if (!all_finite(u)) throw NumericalFailure("picard", "non-finite state");
        max_norm = std::max(max_norm, mod_norm(u, cfg.params));
      }
      sol.record = WindowRecord{data.t0, T, 0.0, 0.0, 0.0, factor, iter, 0, delta, max_norm};
      return sol;
    }
    // A growing increment far above the data size means the map is not
    // contracting on this window.
    if (delta > 1e6 * std::max(scale, 1.0)) return std::nullopt;
  }
  return std::nullopt;
}

namespace {

WindowSolution solve_with_halving(const CauchyData& data, const SolverConfig& cfg, double T, const Horizon& hz) {
  for (int halvings = 0; halvings <= cfg.max_halvings; ++halvings) {
    auto sol = picard_window(data, cfg, T);
    if (sol) {
      sol->record.T1 = hz.T1;
      sol->record.T2 = hz.T2;
      sol->record.M = hz.M;
      sol->record.halvings = halvings;
      return std::move(*sol);
    }
    T *= 0.5;
  }
  throw NumericalFailure("picard", "no convergence after " + std::to_string(cfg.max_halvings) + " halvings");
}

Horizon horizon_for(const CauchyData& data, const SolverConfig& cfg) {
  double n0 = mod_norm(data.u0, cfg.params);
  double n1 = data.u1 ? mod_norm(*data.u1, cfg.params) : 0.0;
  return step_horizon(n0, n1, cfg.F, cfg.c1, cfg.safety, cfg.horizon_cap);
}

}  // namespace

WindowSolution solve_window(const CauchyData& data, const SolverConfig& cfg, double direction) {
  auto hz = horizon_for(data, cfg);
  return solve_with_halving(data, cfg, direction < 0 ? -hz.T : hz.T, hz);
}

SolutionPath continue_solution(const CauchyData& data, const SolverConfig& cfg, double t_end) {
  cfg.validate();
  data.validate();
  const double dir = t_end >= data.t0 ? 1.0 : -1.0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  SolutionPath path;
  path.times.push_back(data.t0);
  path.states.push_back(data.u0);
  if (data.u1) path.velocities.push_back(*data.u1);

  CauchyData current = data;
  double initial = mod_norm(data.u0, cfg.params) + (data.u1 ? mod_norm(*data.u1, cfg.params) : 0.0);
  while (dir * (t_end - current.t0) > eps) {
    double n0 = mod_norm(current.u0, cfg.params);
    double n1 = current.u1 ? mod_norm(*current.u1, cfg.params) : 0.0;
    if (n0 + n1 > cfg.norm_ceiling * std::max(initial, 1e-300)) {
      path.blow_up = true;
      path.blow_up_reason = "norm ceiling exceeded";
      break;
    }
    auto hz = step_horizon(n0, n1, cfg.F, cfg.c1, cfg.safety, cfg.horizon_cap);
    if (hz.T < cfg.window_floor) {
      path.blow_up = true;
      path.blow_up_reason = "window below floor";
      break;
    }
    double T = dir * std::min(hz.T, std::abs(t_end - current.t0));
    auto sol = solve_with_halving(current, cfg, T, hz);
    double T_used = sol.record.T_used;
    double t_next = std::abs(current.t0 + T_used - t_end) <= eps ? t_end : current.t0 + T_used;
    path.per_window.push_back(sol.record);
    current = CauchyData{current.equation, sol.nodes.back(),
                         sol.node_velocities.empty() ? std::nullopt : std::optional<SampledField>(sol.node_velocities.back()),
                         t_next};
    path.times.push_back(t_next);
    path.states.push_back(current.u0);
    if (current.u1) path.velocities.push_back(*current.u1);
  }
  return path;
}

namespace {

// Weights of the cubic (or lower, for short paths) interpolant through
// midpoint samples, integrated over each step. Entry l lists (sample, weight)
// pairs in units of the step.
std::vector<std::vector<std::pair<std::size_t, double>>> step_weights(std::size_t K) {
  const std::size_t width = std::min<std::size_t>(4, K);
  static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  std::vector<std::vector<std::pair<std::size_t, double>>> out(K);
  for (std::size_t l = 0; l < K; ++l) {
    std::size_t start = l >= 1 ? l - 1 : 0;
    start = std::min(start, K - width);
    for (std::size_t a = 0; a < width; ++a) {
      double w = 0.0;
      for (int g = 0; g < 3; ++g) {
        double z = double(l) + 0.5 + 0.5 * gx[g];
        double basis = 1.0;
        for (std::size_t b = 0; b < width; ++b)
          if (b != a) basis *= (z - (double(start + b) + 0.5)) / (double(a) - double(b));
        w += 0.5 * gw[g] * basis;
      }
      out[l].push_back({start + a, w});
    }
  }
  return out;
}

}  // namespace

double residual(const WindowSolution& window, const SolverConfig& cfg, ResidualKind kind) {
  if (kind == ResidualKind::scheme) {
    auto img = duhamel_map(window.data, cfg, window.path);
    double r = 0.0;
    for (std::size_t m = 0; m < img.path.midpoints.size(); ++m)
      r = std::max(r, norm_or_zero(img.path.midpoints[m] - window.path.midpoints[m], cfg.params));
    return r;
  }
  Dynamics dyn(window.data);
  const auto& grid = dyn.grid();
  const std::size_t K = window.path.midpoints.size();
  const double dt = window.path.T / double(K);
  auto h = integrand_samples(dyn, cfg, window.path);
  auto weights = step_weights(K);
  auto running = zero_parts(dyn.parts(), grid.size());
  double r = 0.0;
  for (std::size_t i = 0; i <= K; ++i) {
    auto ref = field_of(dyn.state(double(i) * dt, &running), grid);
    r = std::max(r, norm_or_zero(window.nodes[i] - ref, cfg.params));
    if (i == K) break;
    for (const auto& [idx, w] : weights[i]) axpy(running, dt * w, h[idx]);
  }
  return r;
}

}  // namespace modspace
