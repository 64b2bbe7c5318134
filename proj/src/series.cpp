#include "modspace/series.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "modspace/norms.hpp"

namespace modspace {

RealEntireSeries::RealEntireSeries(const std::map<Index, Complex>& coeffs) {
  for (const auto& [idx, c] : coeffs) {
    if (idx.first < 0 || idx.second < 0) throw std::invalid_argument("series: negative exponent");
    if (c != Complex{}) coeffs_[idx] = c;
  }
}

Complex RealEntireSeries::coefficient(int m, int n) const {
  auto it = coeffs_.find({m, n});
  return it == coeffs_.end() ? Complex{} : it->second;
}

int RealEntireSeries::degree() const {
  int d = -1;
  for (const auto& [idx, c] : coeffs_) d = std::max(d, idx.first + idx.second);
  return d;
}

RealEntireSeries RealEntireSeries::from_json(const std::string& text) {
  auto doc = nlohmann::json::parse(text);
  std::map<Index, Complex> coeffs;
  for (const auto& row : doc.at("coeffs")) {
    if (!row.is_array() || row.size() != 4) throw std::invalid_argument("series: each coefficient is [m, n, re, im]");
    int m = row[0].get<int>(), n = row[1].get<int>();
    coeffs[{m, n}] += Complex(row[2].get<double>(), row[3].get<double>());
  }
  return RealEntireSeries(coeffs);
}

std::string RealEntireSeries::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [idx, c] : coeffs_) rows.push_back({idx.first, idx.second, c.real(), c.imag()});
  return nlohmann::json{{"coeffs", rows}}.dump();
}

namespace {

RealEntireSeries monomial(int m, int n, Complex c = 1.0) {
  std::map<RealEntireSeries::Index, Complex> coeffs{{{m, n}, c}};
  return RealEntireSeries(coeffs);
}

RealEntireSeries modulus_squared() { return monomial(2, 0) + monomial(0, 2); }
RealEntireSeries identity_z() { return monomial(1, 0) + monomial(0, 1, Complex(0, 1)); }

}  // namespace

RealEntireSeries RealEntireSeries::preset(const std::string& name) {
  if (name == "zero") return RealEntireSeries();
  if (name == "quadratic") return modulus_squared();
  if (name == "cubic") return modulus_squared() * identity_z();
  if (name == "quintic") return modulus_squared() * modulus_squared() * identity_z();
  if (name.rfind("exp", 0) == 0) {
    int degree = name.size() > 3 ? std::stoi(name.substr(3)) : 7;
    // (e^r - 1) z = sum_{k>=1} r^k z / k!, with r = s^2 + t^2 and degree 2k + 1.
    RealEntireSeries sum, power = modulus_squared();
    double factorial = 1.0;
    for (int k = 1; 2 * k + 1 <= degree; ++k) {
      factorial *= k;
      sum = sum + Complex(1.0 / factorial) * (power * identity_z());
      power = power * modulus_squared();
    }
    return sum;
  }
  throw std::invalid_argument("unknown series preset: " + name);
}

RealEntireSeries operator+(const RealEntireSeries& a, const RealEntireSeries& b) {
  auto c = a.coeffs();
  for (const auto& [idx, v] : b.coeffs()) c[idx] += v;
  return RealEntireSeries(c);
}

RealEntireSeries operator*(const RealEntireSeries& a, const RealEntireSeries& b) {
  std::map<RealEntireSeries::Index, Complex> c;
  for (const auto& [i, u] : a.coeffs())
    for (const auto& [j, v] : b.coeffs()) c[{i.first + j.first, i.second + j.second}] += u * v;
  return RealEntireSeries(c);
}

RealEntireSeries operator*(Complex k, const RealEntireSeries& a) {
  auto c = a.coeffs();
  for (auto& [idx, v] : c) v *= k;
  return RealEntireSeries(c);
}

namespace {

// Dense layout rows[m][n] = a_{mn} for Horner evaluation.
std::vector<std::vector<Complex>> dense(const RealEntireSeries& F) {
  std::vector<std::vector<Complex>> rows;
  for (const auto& [idx, c] : F.coeffs()) {
    if (std::size_t(idx.first) >= rows.size()) rows.resize(idx.first + 1);
    auto& row = rows[idx.first];
    if (std::size_t(idx.second) >= row.size()) row.resize(idx.second + 1);
    row[idx.second] = c;
  }
  return rows;
}

template <class T>
T horner(const std::vector<std::vector<Complex>>& rows, T s, T t) {
  T out{};
  for (std::size_t m = rows.size(); m-- > 0;) {
    T pm{};
    for (std::size_t n = rows[m].size(); n-- > 0;) pm = pm * t + T(rows[m][n]);
    out = out * s + pm;
  }
  return out;
}

}  // namespace

Complex evaluate(const RealEntireSeries& F, Complex s, Complex t) { return horner(dense(F), s, t); }

RealEntireSeries majorant(const RealEntireSeries& F) {
  auto c = F.coeffs();
  for (auto& [idx, v] : c) v = std::abs(v);
  return RealEntireSeries(c);
}

double evaluate_majorant(const RealEntireSeries& F, double x, double y) {
  double out = 0.0;
  for (const auto& [idx, c] : F.coeffs()) out += std::abs(c) * std::pow(x, idx.first) * std::pow(y, idx.second);
  return out;
}

RealEntireSeries partial_x(const RealEntireSeries& F) {
  std::map<RealEntireSeries::Index, Complex> c;
  for (const auto& [idx, v] : F.coeffs())
    if (idx.first > 0) c[{idx.first - 1, idx.second}] = double(idx.first) * v;
  return RealEntireSeries(c);
}

RealEntireSeries partial_y(const RealEntireSeries& F) {
  std::map<RealEntireSeries::Index, Complex> c;
  for (const auto& [idx, v] : F.coeffs())
    if (idx.second > 0) c[{idx.first, idx.second - 1}] = double(idx.second) * v;
  return RealEntireSeries(c);
}

double exp_preset_tail(int degree, double radius) {
  // The majorant of r^k z / k! at (R, R) is (2R^2)^k 2R / k!.
  double x = 2.0 * radius * radius, term = 1.0, tail = 0.0;
  for (int k = 1; k < 400; ++k) {
    term *= x / k;
    if (2 * k + 1 > degree) tail += term * 2.0 * radius;
    if (2 * k + 1 > degree && term < 1e-300) break;
  }
  return tail;
}

SampledField compose(const RealEntireSeries& F, const SampledField& f) {
  if (f.domain() != Domain::space) throw std::invalid_argument("compose: field must be in the space domain");
  auto rows = dense(F);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = horner(rows, Complex(f[i].real()), Complex(f[i].imag()));
  return SampledField(f.grid(), std::move(out));
}

namespace {

void require_constant_free(const RealEntireSeries& F, const char* what) {
  if (!F.constant_free()) throw std::invalid_argument(std::string(what) + ": series has a constant term");
}

}  // namespace

Certificate norm_certificate(const RealEntireSeries& F, const SampledField& f, const ModParams& params) {
  require_constant_free(F, "norm_certificate");
  double lhs = mod_norm(compose(F, f), params);
  double re = mod_norm(real_part(f), params), im = mod_norm(imag_part(f), params);
  double rhs = evaluate_majorant(F, re, im);
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

Certificate lipschitz_bound(const RealEntireSeries& F, const SampledField& u, const SampledField& v,
                            const ModParams& params) {
  require_constant_free(F, "lipschitz_bound");
  double lhs = mod_norm(compose(F, u) - compose(F, v), params);
  double nu = mod_norm(u, params), nv = mod_norm(v, params), nd = mod_norm(u - v, params);
  double r = nu + nv;
  double factor = evaluate_majorant(partial_x(F), r, r) + evaluate_majorant(partial_y(F), r, r);
  double rhs = 2.0 * nd * factor;
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

double OneVariableSeries::operator()(double x) const {
  double out = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) out = out * x + coeffs[k];
  return out;
}

OneVariableSeries g_factor(const RealEntireSeries& F) {
  require_constant_free(F, "g_factor");
  OneVariableSeries g;
  for (const auto& [idx, c] : F.coeffs()) {
    std::size_t k = std::size_t(idx.first + idx.second) - 1;
    if (k >= g.coeffs.size()) g.coeffs.resize(k + 1, 0.0);
    g.coeffs[k] += std::abs(c);
  }
  return g;
}

}  // namespace modspace
