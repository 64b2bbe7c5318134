#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/params.hpp"
#include "modspace/stft.hpp"

namespace modspace {

/// Riemann-sum weighted mixed norm (int (int |V|^p dx)^{q/p} <w>^{sq} dw)^{1/q},
/// with lattice maxima for infinite exponents.
double mixed_norm(const TFMatrix& V, const ModParams& params);

/// mixed_norm(stft(f, window), params) without materializing the matrix.
double mod_norm(const SampledField& f, const SampledField& window, const ModParams& params);

/// mod_norm with the canonical Gaussian window.
double mod_norm(const SampledField& f, const ModParams& params);

/// Several norms of the same field from a single STFT pass.
std::vector<double> mod_norms(const SampledField& f, std::span<const ModParams> params);

/// Sum of values by pairwise (tree) reduction, so the result depends only on
/// the input order.
double pairwise_sum(std::span<const double> values);

using LatticePoint = std::array<long, 3>;

struct PeriodicSpectrum {
  std::map<LatticePoint, Complex> coefficients;  // f^(m), |m|_inf <= band
  double off_integer_ratio;                       // largest off-integer bin / largest coefficient
};

/// Largest usable band for integer-frequency reads on this grid.
long torus_band(const GridSpec& grid);

/// Fourier coefficients of 1-periodic content sampled on a box of integer
/// extent.
PeriodicSpectrum periodization_spectrum(const SampledField& f, long band);

/// Sum over integer m of |f^(m)| for 1-periodic content, over the full band.
double torus_algebra_norm(const SampledField& f);

/// Sum over integer shifts k of f(x + k): maps content on the box to its
/// 1-periodic version. Needs integer extent and an integer number of samples
/// per unit length.
SampledField periodize_unit(const SampledField& f);

struct L2sMembership {
  double norm_space;       // (int |f|^2 (1+|x|)^{2s})^{1/2}
  double norm_freq;        // same for f^
  double change_space;     // relative change against the half-resolution subgrid
  double change_freq;
  bool certified;
};

/// Weighted L^2 norms of f and f^, certified when both are stable (within 2%)
/// between the half-resolution subgrid and the full grid.
L2sMembership l2s_membership(const SampledField& f, double s);

}  // namespace modspace
