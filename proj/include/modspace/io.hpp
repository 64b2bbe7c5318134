#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/propagators.hpp"
#include "modspace/stft.hpp"

namespace modspace {

/// Binary container: one line of JSON header {"dim", "N", "L", "domain"}
/// followed by little-endian float64 pairs (re, im) in lattice order.
void write_field(const std::filesystem::path& path, const SampledField& f);
SampledField read_field(const std::filesystem::path& path);

/// CSV with columns index, x, re, im (x is the first coordinate).
void write_field_csv(const std::filesystem::path& path, const SampledField& f);

/// Plain numeric CSV with a header line. Non-finite values are written as nan.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Magnitude of a one-dimensional STFT as CSV (w, x, |V|).
void write_tf_csv(const std::filesystem::path& path, const TFMatrix& V);

/// Grayscale spectrogram of a one-dimensional STFT, max-pooled to at most
/// max_cells cells per axis.
void write_spectrogram_svg(const std::filesystem::path& path, const TFMatrix& V, std::size_t max_cells = 128);

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

/// Line plot of several series sharing one x axis. Non-finite points break
/// the line.
void write_line_plot_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                         const std::vector<double>& x, const std::vector<PlotSeries>& series, bool log_y = false);

/// bound_ratio as CSV (t, ratio, normalized_ratio) and as an SVG plot.
void write_bound_ratio(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
                       const BoundRatioReport& report);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace modspace
