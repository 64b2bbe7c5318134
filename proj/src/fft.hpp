#pragma once

#include <complex>
#include <cstddef>

namespace modspace::detail {

/// Unnormalized in-place multidimensional DFT over a dim-fold N^dim array in
/// row-major order. sign = -1 is the forward kernel e^{-2 pi i jk/N}, +1 the
/// backward one. Safe to call concurrently from several threads.
void dft(std::complex<double>* data, int dim, std::size_t n, int sign);

}  // namespace modspace::detail
