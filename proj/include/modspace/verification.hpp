#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "modspace/duhamel.hpp"
#include "modspace/grid.hpp"
#include "modspace/params.hpp"
#include "modspace/propagators.hpp"
#include "modspace/series.hpp"

namespace modspace {

/// A named catalog function together with the recipe that produced it, so
/// the same function can be resampled on a refined grid.
struct BatteryMember {
  std::string name;
  std::string builtin;
  Params params;
  SampledField field;
};

/// Deterministic test set: gaussian, triangle, jump and plane_wave (the
/// one-dimensional shapes only in dim 1) plus random_bandlimited fill.
class Battery {
 public:
  static Battery standard(const GridSpec& grid, std::uint64_t seed, std::size_t size = 20);

  /// The same recipes sampled on another grid.
  Battery on_grid(const GridSpec& grid) const;

  const GridSpec& grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<BatteryMember>& members() const { return members_; }
  const BatteryMember& operator[](std::size_t i) const { return members_[i]; }

  /// Indices of members that lie in M^{p,q}_s on R^n.
  std::vector<std::size_t> eligible(const ModParams& params) const;

 private:
  Battery(GridSpec grid, std::uint64_t seed) : grid_(grid), seed_(seed) {}
  GridSpec grid_;
  std::uint64_t seed_;
  std::vector<BatteryMember> members_;
};

/// Whether a catalog shape belongs to M^{p,q}_s(R^n). The jump's transform
/// decays like 1/|w| and the triangle's like 1/|w|^2.
bool in_modulation_space(const std::string& builtin, const ModParams& params);

/// Self-pairs (i, i) first, then cross pairs (i, j), i < j, in lexicographic
/// order, up to count pairs.
std::vector<std::pair<std::size_t, std::size_t>> battery_pairs(const std::vector<std::size_t>& members,
                                                               std::size_t count);

struct CheckReport {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  double measured_constant = 0.0;
  double stability = 0.0;  // relative change of the measured constant under N -> 2N
  bool pass = false;
  std::string status;      // pass, fail, outside-hypothesis or exploratory
  std::string criterion;   // the pass rule, stated with its thresholds
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> artifacts;

  nlohmann::json to_json() const;
};

double relative_change(double reference, double value);

/// Largest ||fg|| / (||f|| ||g||) over the battery pairs. Outside the
/// algebra hypothesis (q > 1 with s <= n/q') the result is flagged, never
/// failed.
CheckReport check_algebra(const Battery& battery, const ModParams& params, std::size_t pairs = 50);

/// ||k * f|| <= ||k||_1 ||f|| for k in {gaussian, box, 3 x box}.
CheckReport check_convolution(const Battery& battery, const ModParams& params = {1.0, 1.0, 0.0});

/// ||f * phi_r - f|| along a decreasing sequence of r, phi_r = r^{-n} g(x/r).
CheckReport check_approx_identity(const SampledField& f, const std::vector<double>& radii,
                                  const ModParams& params = {1.0, 1.0, 0.0}, double eps = 1e-2);

/// max |  ||f^|| / ||f|| - 1 | over the battery on M^{p,p}, with an s = 1
/// negative control.
CheckReport check_fourier_isometry(const Battery& battery, double p);

/// Embedding constants (1,1)->(2,1), (1,1)->(inf,1) and (2,2,1)->(inf,1,0).
CheckReport check_embeddings(const Battery& battery);

struct ProbeGrid {
  std::size_t samples = 1024;
  double extent = 8.0;
  std::vector<double> cutoffs{2.0, 4.0, 8.0, 16.0, 32.0};
};

/// Frequency-truncated sums of sup_x |V_g f| for triangle, jump and gaussian.
CheckReport counterexample_probe(const ProbeGrid& probe);

/// Exploratory: ||f|f|^alpha|| / ||f||^{alpha+1} across amplitudes and
/// resolutions.
CheckReport analyticity_probe(const GridSpec& grid, const std::vector<double>& alphas,
                              const std::vector<double>& amplitudes);

/// Smooth cutoff equal to 1 on [-1, 1]^n and 0 outside [-2, 2]^n.
SampledField smooth_cutoff(const GridSpec& grid, double scale, const Point& center);
/// Smooth bump supported in the unit cube [0, 1)^n.
SampledField unit_bump(const GridSpec& grid);

/// Finds the dilation lambda with ||phi^lambda (f - f(x0))||_{M^{1,1}} < eps and
/// the tail radius R with ||(1 - psi_R) f||_{M^{1,1}} < eps.
CheckReport localization_probe(const SampledField& f, const Point& x0, double eps);

/// ||phi f||_{A(T)} / ||f||_{M^{p,1}} over the battery, with N -> 2N stability.
CheckReport torus_restriction_check(const Battery& battery, double p = 1.0);

/// bound_ratio for every propagator family; passes when the normalized ratio
/// shows no upward trend and the identity kinds reproduce the input at t = 0.
CheckReport check_multipliers(const Battery& battery, const std::vector<double>& times, const ModParams& params);

/// c1 = max(1, max over the equation's propagators and the battery of the
/// norm ratio at t = 1).
double measure_c1(Equation equation, const Battery& battery, const ModParams& params);

/// Composition certificates for the given presets with C compared against
/// (algebra constant)^{degree - 1} * 1.1.
CheckReport check_composition(const Battery& battery, const std::vector<std::string>& presets,
                              double algebra_constant, const ModParams& params = {1.0, 1.0, 0.0});

/// Lipschitz estimate over battery pairs, same constant discipline.
CheckReport check_lipschitz(const Battery& battery, const std::vector<std::string>& presets,
                            double algebra_constant, std::size_t pairs = 20,
                            const ModParams& params = {1.0, 1.0, 0.0});

/// Window equivalence ratio between the canonical window and a dilated one.
CheckReport check_window_equivalence(const Battery& battery, const ModParams& params = {1.0, 1.0, 0.0});

/// L^2_s membership of the catalog shapes.
CheckReport check_l2s(const GridSpec& grid, double s);

struct SolverCheckOptions {
  std::size_t samples = 256;
  double extent = 16.0;
  double amplitude = 0.25;
  double t_end = 0.1;
  double quadrature_step = 1e-3;
  double picard_tol = 1e-12;
};

/// Cubic NLS from a Gaussian: contraction at most 0.55 per window, fixed
/// point residual at most 2 tol, norm confinement, and agreement of the zero
/// and free initial guesses.
CheckReport check_solver(const SolverCheckOptions& options, double c1);

struct SuiteOptions {
  GridSpec grid{1, 512, 8.0};
  std::uint64_t seed = 7;
  std::size_t battery_size = 20;
  ProbeGrid probe;
};

const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all", in a fixed order.
std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& options);

}  // namespace modspace
