#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace modspace {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

enum class Domain { space, frequency };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

/// Periodic sampling lattice standing in for R^n: the box [-L/2, L/2)^n with
/// N samples per axis. Frequency nodes are centered, w_j = (j - N/2)/L.
class GridSpec {
 public:
  GridSpec(int dim, std::size_t samples, double extent);

  int dim() const { return dim_; }
  std::size_t samples() const { return samples_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / static_cast<double>(samples_); }
  double dual_spacing() const { return 1.0 / extent_; }
  double dual_extent() const { return static_cast<double>(samples_) / extent_; }

  /// Total lattice points, N^dim.
  std::size_t size() const { return size_; }

  /// Largest |w| representable on the frequency lattice, N/(2L).
  double nyquist() const { return 0.5 * dual_extent(); }

  /// The lattice on which the transform of a field lives, viewed as a space
  /// lattice: N samples with extent N/L.
  GridSpec dual() const { return GridSpec(dim_, samples_, dual_extent()); }

  /// Same extent, twice the samples per axis.
  GridSpec refined() const { return GridSpec(dim_, 2 * samples_, extent_); }

  double node(std::size_t k) const { return -0.5 * extent_ + static_cast<double>(k) * spacing(); }
  double frequency(std::size_t j) const {
    return (static_cast<double>(j) - 0.5 * static_cast<double>(samples_)) / extent_;
  }

  std::array<std::size_t, 3> unravel(std::size_t flat) const;
  std::size_t ravel(const std::array<std::size_t, 3>& idx) const;

  Point position(std::size_t flat) const;
  Point frequency_position(std::size_t flat) const;

  bool operator==(const GridSpec& other) const = default;

 private:
  int dim_;
  std::size_t samples_;
  double extent_;
  std::size_t size_;
};

/// Complex samples of a function on a GridSpec. Space-domain samples sit on
/// the spatial nodes, frequency-domain samples on the centered dual nodes.
class SampledField {
 public:
  SampledField(GridSpec grid, std::vector<Complex> values, Domain domain = Domain::space);
  static SampledField zeros(const GridSpec& grid, Domain domain = Domain::space);

  const GridSpec& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  /// Coordinates of sample i in the field's own domain.
  Point coordinate(std::size_t i) const;

  std::vector<Complex> take_values() && { return std::move(values_); }

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
  Domain domain_;
};

// --- spectral transforms -------------------------------------------------

/// Continuum-normalized transform f^(w) = int f(x) e^{-2 pi i w.x} dx,
/// approximated by spacing^dim times the centered DFT.
SampledField transform(const SampledField& field);
SampledField inverse_transform(const SampledField& field);

/// f^ reinterpreted as a space-domain function on grid.dual().
SampledField fourier_image(const SampledField& field);

// --- time-frequency shifts -----------------------------------------------

/// T_{x0} f(t) = f(t - x0). x0 must be a lattice vector of the field's domain.
SampledField translate(const SampledField& field, const Point& x0);

/// M_{w0} f(t) = e^{2 pi i w0.t} f(t). w0 must lie on the reciprocal lattice.
SampledField modulate(const SampledField& field, const Point& w0);

/// Spectral circular convolution, scaled to approximate int f(x-y) k(y) dy.
SampledField convolve(const SampledField& f, const SampledField& k);

// --- pointwise algebra ---------------------------------------------------

enum class PointwiseOp { add, sub, mul, conj, scale };

SampledField pointwise(PointwiseOp op, const SampledField& a, const SampledField& b);
SampledField pointwise(PointwiseOp op, const SampledField& a, Complex scalar);

SampledField operator+(const SampledField& a, const SampledField& b);
SampledField operator-(const SampledField& a, const SampledField& b);
SampledField operator*(const SampledField& a, const SampledField& b);
SampledField operator*(Complex c, const SampledField& a);
SampledField conj(const SampledField& a);
SampledField real_part(const SampledField& a);
SampledField imag_part(const SampledField& a);

/// Discrete L^2 norm, (cell volume * sum |f|^2)^{1/2}, in the field's domain.
double l2_norm(const SampledField& f);
double max_abs_difference(const SampledField& a, const SampledField& b);
bool all_finite(const SampledField& f);

// --- builtin catalog -----------------------------------------------------

using Params = std::map<std::string, double>;

/// Catalog functions: gaussian, triangle, jump, plane_wave, random_bandlimited.
///   gaussian           amplitude * exp(-pi |x-center|^2 / width^2), optionally
///                      L1-normalized ("normalize" = 1 divides by width^dim)
///   triangle           (1 - |x - center|)_+, dim 1
///   jump               sign(x - center) (1 - |x - center|)_+, dim 1
///   plane_wave         exp(2 pi i m.x), integer m ("m", "m1", "m2")
///   random_bandlimited spectrum supported in |w| < bandwidth, fixed by "seed"
SampledField sample_builtin(const std::string& name, const GridSpec& grid, const Params& params = {});

}  // namespace modspace
