#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/params.hpp"

namespace modspace {

/// Sampled V_g f on the full (x, w) lattice. Row j is the frequency node w_j,
/// column k the spatial node x_k.
class TFMatrix {
 public:
  TFMatrix(GridSpec grid, std::vector<Complex> values, std::string window_id);

  const GridSpec& grid() const { return grid_; }
  const std::string& window_id() const { return window_id_; }
  std::size_t rows() const { return grid_.size(); }
  std::size_t cols() const { return grid_.size(); }
  const Complex& at(std::size_t row, std::size_t col) const { return values_[row * grid_.size() + col]; }
  const Complex* row(std::size_t r) const { return values_.data() + r * grid_.size(); }

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
  std::string window_id_;
};

/// Largest TFMatrix that stft() will materialize. Norms never need it: they
/// stream rows.
constexpr std::size_t kMaxTFEntries = std::size_t{1} << 24;

/// The canonical window e^{-pi |x|^2} on the grid.
SampledField canonical_window(const GridSpec& grid);

TFMatrix stft(const SampledField& f, const SampledField& g, const std::string& window_id = "custom");

/// Computes |V_g f| one frequency row at a time. visit(j, mags) receives the
/// N^dim magnitudes of row j; rows may be visited concurrently, each exactly
/// once.
void stft_magnitude_rows(const SampledField& f, const SampledField& g,
                         const std::function<void(std::size_t, const double*)>& visit);

struct WindowRatio {
  double ratio;     // ||V_{g1} f|| / ||V_{g2} f||
  double bound;     // ||V_{g2} g1|| in L^{1,1}_s
  double constant;  // ratio / bound
};

WindowRatio window_equivalence_ratio(const SampledField& f, const SampledField& g1, const SampledField& g2,
                                     const ModParams& params);

}  // namespace modspace
