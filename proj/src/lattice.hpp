#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fft.hpp"
#include "modspace/grid.hpp"

namespace modspace::detail {

/// Parity of the index sum k_1 + ... + k_dim for a flat row-major index.
/// Valid because N is even.
inline bool odd_index_sum(std::size_t flat, std::size_t n, int dim) {
  std::size_t parity = 0;
  for (int d = 0; d < dim; ++d) {
    parity ^= flat & 1u;
    flat /= n;
  }
  return parity != 0;
}

/// Flips the sign of entries with odd index sum. This recenters a DFT on the
/// symmetric lattice.
inline void checkerboard(std::vector<Complex>& v, std::size_t n, int dim) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (odd_index_sum(i, n, dim)) v[i] = -v[i];
}

/// Centered forward transform with integral scaling, in place.
inline void forward_centered(std::vector<Complex>& v, const GridSpec& grid) {
  checkerboard(v, grid.samples(), grid.dim());
  dft(v.data(), grid.dim(), grid.samples(), -1);
  double scale = std::pow(grid.spacing(), grid.dim());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = odd_index_sum(i, grid.samples(), grid.dim()) ? -scale * v[i] : scale * v[i];
}

/// Inverse of forward_centered, in place.
inline void inverse_centered(std::vector<Complex>& v, const GridSpec& grid) {
  checkerboard(v, grid.samples(), grid.dim());
  dft(v.data(), grid.dim(), grid.samples(), +1);
  double scale = std::pow(grid.dual_spacing(), grid.dim());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = odd_index_sum(i, grid.samples(), grid.dim()) ? -scale * v[i] : scale * v[i];
}

}  // namespace modspace::detail
