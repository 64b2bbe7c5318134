#include "modspace/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "lattice.hpp"

namespace modspace {

std::string to_string(Domain d) { return d == Domain::space ? "space" : "frequency"; }

Domain domain_from_string(const std::string& s) {
  if (s == "space") return Domain::space;
  if (s == "frequency") return Domain::frequency;
  throw std::invalid_argument("unknown domain tag: " + s);
}

GridSpec::GridSpec(int dim, std::size_t samples, double extent)
    : dim_(dim), samples_(samples), extent_(extent), size_(1) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  if (samples < 4 || (samples & (samples - 1)) != 0)
    throw std::invalid_argument("grid: samples must be a power of two, at least 4");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("grid: extent must be positive");
  for (int d = 0; d < dim; ++d) size_ *= samples;
}

std::array<std::size_t, 3> GridSpec::unravel(std::size_t flat) const {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = flat % samples_;
    flat /= samples_;
  }
  return idx;
}

std::size_t GridSpec::ravel(const std::array<std::size_t, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * samples_ + idx[d];
  return flat;
}

Point GridSpec::position(std::size_t flat) const {
  auto idx = unravel(flat);
  Point p{0, 0, 0};
  for (int d = 0; d < dim_; ++d) p[d] = node(idx[d]);
  return p;
}

Point GridSpec::frequency_position(std::size_t flat) const {
  auto idx = unravel(flat);
  Point p{0, 0, 0};
  for (int d = 0; d < dim_; ++d) p[d] = frequency(idx[d]);
  return p;
}

SampledField::SampledField(GridSpec grid, std::vector<Complex> values, Domain domain)
    : grid_(grid), values_(std::move(values)), domain_(domain) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("field: value count does not match grid");
}

SampledField SampledField::zeros(const GridSpec& grid, Domain domain) {
  return SampledField(grid, std::vector<Complex>(grid.size()), domain);
}

Point SampledField::coordinate(std::size_t i) const {
  return domain_ == Domain::space ? grid_.position(i) : grid_.frequency_position(i);
}

SampledField transform(const SampledField& field) {
  if (field.domain() != Domain::space) throw std::invalid_argument("transform: field is not in the space domain");
  std::vector<Complex> v(field.values().begin(), field.values().end());
  detail::forward_centered(v, field.grid());
  return SampledField(field.grid(), std::move(v), Domain::frequency);
}

SampledField inverse_transform(const SampledField& field) {
  if (field.domain() != Domain::frequency)
    throw std::invalid_argument("inverse_transform: field is not in the frequency domain");
  std::vector<Complex> v(field.values().begin(), field.values().end());
  detail::inverse_centered(v, field.grid());
  return SampledField(field.grid(), std::move(v), Domain::space);
}

SampledField fourier_image(const SampledField& field) {
  auto hat = transform(field);
  return SampledField(field.grid().dual(), std::move(hat).take_values(), Domain::space);
}

namespace {

// Converts a displacement to a whole number of lattice steps, rejecting
// anything off the lattice.
long lattice_steps(double shift, double step, const char* what) {
  double k = shift / step;
  double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
    throw std::invalid_argument(std::string(what) + ": shift is not on the lattice");
  return static_cast<long>(r);
}

void require_same_grid(const SampledField& a, const SampledField& b, const char* what) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
  if (a.domain() != b.domain()) throw std::invalid_argument(std::string(what) + ": domain mismatch");
}

}  // namespace

SampledField translate(const SampledField& field, const Point& x0) {
  const auto& g = field.grid();
  double step = field.domain() == Domain::space ? g.spacing() : g.dual_spacing();
  long n = static_cast<long>(g.samples());
  std::array<long, 3> shift{0, 0, 0};
  for (int d = 0; d < g.dim(); ++d) shift[d] = ((lattice_steps(x0[d], step, "translate") % n) + n) % n;
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    for (int d = 0; d < g.dim(); ++d) idx[d] = (idx[d] + shift[d]) % g.samples();
    out[g.ravel(idx)] = field[i];
  }
  return SampledField(g, std::move(out), field.domain());
}

SampledField modulate(const SampledField& field, const Point& w0) {
  const auto& g = field.grid();
  // Phases must be periodic on the field's own box.
  double period = field.domain() == Domain::space ? g.extent() : g.dual_extent();
  std::array<long, 3> m{0, 0, 0};
  for (int d = 0; d < g.dim(); ++d) m[d] = lattice_steps(w0[d], 1.0 / period, "modulate");
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    double phase = 0.0;
    // x_k = -P/2 + k P/N, so w0 x_k = m(-1/2 + k/N); reduce the integer part exactly.
    for (int d = 0; d < g.dim(); ++d) {
      long num = (m[d] * static_cast<long>(idx[d])) % static_cast<long>(g.samples());
      phase += -0.5 * static_cast<double>(m[d] % 2) + static_cast<double>(num) / static_cast<double>(g.samples());
    }
    out[i] = field[i] * std::polar(1.0, 2.0 * M_PI * phase);
  }
  return SampledField(g, std::move(out), field.domain());
}

SampledField convolve(const SampledField& f, const SampledField& k) {
  require_same_grid(f, k, "convolve");
  if (f.domain() != Domain::space) throw std::invalid_argument("convolve: fields must be in the space domain");
  std::vector<Complex> a(f.values().begin(), f.values().end());
  std::vector<Complex> b(k.values().begin(), k.values().end());
  detail::forward_centered(a, f.grid());
  detail::forward_centered(b, f.grid());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  detail::inverse_centered(a, f.grid());
  return SampledField(f.grid(), std::move(a), Domain::space);
}

SampledField pointwise(PointwiseOp op, const SampledField& a, const SampledField& b) {
  require_same_grid(a, b, "pointwise");
  std::vector<Complex> out(a.size());
  switch (op) {
    case PointwiseOp::add:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
      break;
    case PointwiseOp::sub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
      break;
    case PointwiseOp::mul:
      if (a.domain() != Domain::space) throw std::invalid_argument("pointwise: mul needs space-domain fields");
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
      break;
    default:
      throw std::invalid_argument("pointwise: operation takes a scalar or no operand");
  }
  return SampledField(a.grid(), std::move(out), a.domain());
}

SampledField pointwise(PointwiseOp op, const SampledField& a, Complex scalar) {
  std::vector<Complex> out(a.size());
  switch (op) {
    case PointwiseOp::conj:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(a[i]);
      break;
    case PointwiseOp::scale:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = scalar * a[i];
      break;
    case PointwiseOp::add:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + scalar;
      break;
    case PointwiseOp::sub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - scalar;
      break;
    case PointwiseOp::mul:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * scalar;
      break;
  }
  return SampledField(a.grid(), std::move(out), a.domain());
}

SampledField operator+(const SampledField& a, const SampledField& b) { return pointwise(PointwiseOp::add, a, b); }
SampledField operator-(const SampledField& a, const SampledField& b) { return pointwise(PointwiseOp::sub, a, b); }
SampledField operator*(const SampledField& a, const SampledField& b) { return pointwise(PointwiseOp::mul, a, b); }
SampledField operator*(Complex c, const SampledField& a) { return pointwise(PointwiseOp::scale, a, c); }
SampledField conj(const SampledField& a) { return pointwise(PointwiseOp::conj, a, Complex{}); }

SampledField real_part(const SampledField& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i].real();
  return SampledField(a.grid(), std::move(out), a.domain());
}

SampledField imag_part(const SampledField& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i].imag();
  return SampledField(a.grid(), std::move(out), a.domain());
}

double l2_norm(const SampledField& f) {
  double cell = f.domain() == Domain::space ? f.grid().spacing() : f.grid().dual_spacing();
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * std::pow(cell, f.grid().dim()));
}

double max_abs_difference(const SampledField& a, const SampledField& b) {
  require_same_grid(a, b, "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const SampledField& f) {
  for (const auto& v : f.values())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace modspace
