#include "modspace/stft.hpp"

#include <cmath>
#include <stdexcept>

#include "lattice.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

TFMatrix::TFMatrix(GridSpec grid, std::vector<Complex> values, std::string window_id)
    : grid_(grid), values_(std::move(values)), window_id_(std::move(window_id)) {
  if (values_.size() != grid_.size() * grid_.size()) throw std::invalid_argument("TFMatrix: wrong value count");
}

SampledField canonical_window(const GridSpec& grid) { return sample_builtin("gaussian", grid); }

namespace {

// Shared spectral data for all rows of one V_g f. Row j is the inverse
// transform of f^(xi) conj(g^(xi - w_j)) times the phase e^{-2 pi i x.w_j};
// the shift xi - w_j wraps cyclically on the frequency lattice.
class RowEngine {
 public:
  RowEngine(const SampledField& f, const SampledField& g) : grid_(f.grid()) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("stft: grid mismatch");
    if (f.domain() != Domain::space || g.domain() != Domain::space)
      throw std::invalid_argument("stft: fields must be in the space domain");
    bool zero = true;
    for (const auto& v : g.values())
      if (v != Complex{}) zero = false;
    if (zero) throw std::invalid_argument("stft: window is zero");
    fhat_.assign(f.values().begin(), f.values().end());
    detail::forward_centered(fhat_, grid_);
    // Fold in the recentering signs of the inverse transform.
    detail::checkerboard(fhat_, grid_.samples(), grid_.dim());
    ghat_conj_.assign(g.values().begin(), g.values().end());
    detail::forward_centered(ghat_conj_, grid_);
    for (auto& v : ghat_conj_) v = std::conj(v);
    scale_ = std::pow(grid_.dual_spacing(), grid_.dim());
  }

  const GridSpec& grid() const { return grid_; }
  double scale() const { return scale_; }

  // Unscaled, unphased inverse DFT of row j into work.
  void raw_row(std::size_t j, std::vector<Complex>& work) const {
    const std::size_t n = grid_.samples(), mask = n - 1;
    const int dim = grid_.dim();
    work.resize(grid_.size());
    auto jidx = grid_.unravel(j);
    std::array<std::size_t, 3> off{0, 0, 0}, xi{0, 0, 0};
    for (int a = 0; a < dim; ++a) off[a] = (n / 2 + n - jidx[a]) & mask;
    for (std::size_t i = 0; i < work.size(); ++i) {
      std::size_t src = 0;
      for (int a = 0; a < dim; ++a) src = src * n + ((xi[a] + off[a]) & mask);
      work[i] = fhat_[i] * ghat_conj_[src];
      for (int a = dim - 1; a >= 0; --a) {
        if (++xi[a] < n) break;
        xi[a] = 0;
      }
    }
    detail::dft(work.data(), dim, n, +1);
  }

 private:
  GridSpec grid_;
  std::vector<Complex> fhat_;
  std::vector<Complex> ghat_conj_;
  double scale_ = 1.0;
};

}  // namespace

TFMatrix stft(const SampledField& f, const SampledField& g, const std::string& window_id) {
  RowEngine engine(f, g);
  const auto& grid = engine.grid();
  const std::size_t total = grid.size(), n = grid.samples();
  if (total * total > kMaxTFEntries) throw std::invalid_argument("stft: time-frequency matrix too large");
  std::vector<Complex> roots(n);
  for (std::size_t r = 0; r < n; ++r) roots[r] = std::polar(1.0, -2.0 * M_PI * double(r) / double(n));
  std::vector<Complex> values(total * total);
  parallel_for(total, [&](std::size_t j) {
    thread_local std::vector<Complex> work;
    engine.raw_row(j, work);
    auto jidx = grid.unravel(j);
    std::array<long, 3> m{0, 0, 0};
    for (int a = 0; a < grid.dim(); ++a) m[a] = long(jidx[a]) - long(n / 2);
    Complex* out = values.data() + j * total;
    for (std::size_t k = 0; k < total; ++k) {
      auto kidx = grid.unravel(k);
      // e^{-2 pi i x_k w_j} (-1)^k per axis, with x_k w_j = -m/2 + k m/N.
      Complex phase = engine.scale();
      long sign = 0;
      for (int a = 0; a < grid.dim(); ++a) {
        long km = (long(kidx[a]) * m[a]) % long(n);
        if (km < 0) km += long(n);
        phase *= roots[std::size_t(km)];
        sign += m[a] + long(kidx[a]);
      }
      out[k] = (sign % 2 == 0 ? phase : -phase) * work[k];
    }
  });
  return TFMatrix(grid, std::move(values), window_id);
}

void stft_magnitude_rows(const SampledField& f, const SampledField& g,
                         const std::function<void(std::size_t, const double*)>& visit) {
  RowEngine engine(f, g);
  const std::size_t total = engine.grid().size();
  parallel_for(total, [&](std::size_t j) {
    thread_local std::vector<Complex> work;
    thread_local std::vector<double> mags;
    engine.raw_row(j, work);
    mags.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
      double re = work[k].real(), im = work[k].imag();
      mags[k] = engine.scale() * std::sqrt(re * re + im * im);
    }
    visit(j, mags.data());
  });
}

}  // namespace modspace
