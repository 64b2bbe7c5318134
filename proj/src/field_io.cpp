#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "modspace/io.hpp"

namespace modspace {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void put_le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= std::uint64_t{b[k]} << (8 * k);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field(const std::filesystem::path& path, const SampledField& f) {
  const auto& g = f.grid();
  nlohmann::json header = {{"dim", g.dim()}, {"N", g.samples()}, {"L", g.extent()}, {"domain", to_string(f.domain())}};
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << header.dump() << '\n';
  for (const auto& z : f.values()) {
    put_le(out, z.real());
    put_le(out, z.imag());
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SampledField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad field header in " + path.string() + ": " + e.what());
  }
  GridSpec grid(header.at("dim").get<int>(), header.at("N").get<std::size_t>(), header.at("L").get<double>());
  Domain domain = domain_from_string(header.at("domain").get<std::string>());
  std::vector<unsigned char> raw(16 * grid.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw std::invalid_argument("truncated field data in " + path.string());
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {get_le(&raw[16 * i]), get_le(&raw[16 * i + 8])};
  return SampledField(grid, std::move(v), domain);
}

void write_field_csv(const std::filesystem::path& path, const SampledField& f) {
  auto out = open_out(path);
  out << "index,x,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << i << ',' << format_double(f.coordinate(i)[0]) << ',' << format_double(f[i].real()) << ','
        << format_double(f[i].imag()) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void write_tf_csv(const std::filesystem::path& path, const TFMatrix& V) {
  const auto& g = V.grid();
  if (g.dim() != 1) throw std::invalid_argument("write_tf_csv: one-dimensional STFT only");
  auto out = open_out(path);
  out << "w,x,mag\n";
  for (std::size_t j = 0; j < V.rows(); ++j)
    for (std::size_t k = 0; k < V.cols(); ++k)
      out << format_double(g.frequency(j)) << ',' << format_double(g.node(k)) << ','
          << format_double(std::abs(V.at(j, k))) << '\n';
}

void write_bound_ratio(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
                       const BoundRatioReport& report) {
  std::vector<std::vector<double>> rows;
  std::vector<double> t, ratio, normalized;
  for (const auto& r : report.rows) {
    rows.push_back({r.t, r.ratio, r.normalized});
    t.push_back(r.t);
    ratio.push_back(r.ratio);
    normalized.push_back(r.normalized);
  }
  write_csv(csv_path, {"t", "ratio", "normalized_ratio"}, rows);
  write_line_plot_svg(svg_path, to_string(report.family) + " norm ratio", "t", t,
                      {{"ratio", ratio}, {"normalized", normalized}});
}

}  // namespace modspace
