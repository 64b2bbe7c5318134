#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "modspace/io.hpp"

namespace modspace {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 36.0, kBottom = 48.0;
const char* const kPalette[] = {"#1f4e79", "#c0392b", "#27864a", "#8e44ad", "#d35400", "#2c3e50"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void save(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

}  // namespace

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                         const std::vector<double>& x, const std::vector<PlotSeries>& series, bool log_y) {
  auto ty = [&](double v) { return log_y ? (v > 0.0 ? std::log10(v) : NAN) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (double v : x)
    if (std::isfinite(v)) x0 = std::min(x0, v), x1 = std::max(x1, v);
  for (const auto& s : series)
    for (double v : s.y) {
      double t = ty(v);
      if (std::isfinite(t)) y0 = std::min(y0, t), y1 = std::max(y1, t);
    }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
  if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
       << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
       << (log_y ? "1e" + tick_label(yv) : tick_label(yv)) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << escape(x_label)
     << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < std::min(x.size(), series[s].y.size()); ++i) {
      double t = ty(series[s].y[i]);
      if (!std::isfinite(t) || !std::isfinite(x[i])) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : " M") + fixed(px(x[i])) + "," + fixed(py(t));
      pen = true;
    }
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << kLeft + 8 << "\" y=\"" << kTop + 16 + 14 * s << "\" fill=\"" << color << "\">"
       << escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  save(path, os.str());
}

void write_spectrogram_svg(const std::filesystem::path& path, const TFMatrix& V, std::size_t max_cells) {
  const auto& g = V.grid();
  if (g.dim() != 1) throw std::invalid_argument("write_spectrogram_svg: one-dimensional STFT only");
  if (max_cells == 0) throw std::invalid_argument("write_spectrogram_svg: max_cells must be positive");
  const std::size_t n = g.samples();
  const std::size_t block = std::max<std::size_t>(1, (n + max_cells - 1) / max_cells);
  const std::size_t cells = (n + block - 1) / block;
  std::vector<double> pooled(cells * cells, 0.0);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double m = std::abs(V.at(j, k));
      double& c = pooled[(j / block) * cells + k / block];
      c = std::max(c, m);
      peak = std::max(peak, m);
    }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double cw = pw / cells, ch = ph / cells;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">|V_g f| (x horizontal, w "
        "vertical)</text>\n";
  for (std::size_t r = 0; r < cells; ++r)
    for (std::size_t c = 0; c < cells; ++c) {
      // sqrt scaling keeps low-level structure visible.
      double level = peak > 0.0 ? std::sqrt(pooled[r * cells + c] / peak) : 0.0;
      int shade = 255 - static_cast<int>(std::lround(255.0 * level));
      os << "<rect x=\"" << fixed(kLeft + c * cw) << "\" y=\"" << fixed(kTop + (cells - 1 - r) * ch) << "\" width=\""
         << fixed(cw + 0.05) << "\" height=\"" << fixed(ch + 0.05) << "\" fill=\"rgb(" << shade << ',' << shade << ','
         << shade << ")\"/>\n";
    }
  os << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 16 << "\">" << tick_label(g.node(0)) << "</text>\n";
  os << "<text x=\"" << kLeft + pw << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"end\">"
     << tick_label(g.node(n - 1)) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">" << tick_label(g.frequency(0))
     << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
     << tick_label(g.frequency(n - 1)) << "</text>\n";
  os << "</svg>\n";
  save(path, os.str());
}

}  // namespace modspace
