#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/params.hpp"

namespace modspace {

/// Finite double power series F(s, t) = sum a_{mn} s^m t^n with complex
/// coefficients. Zero coefficients are never stored.
class RealEntireSeries {
 public:
  using Index = std::pair<int, int>;

  RealEntireSeries() = default;
  explicit RealEntireSeries(const std::map<Index, Complex>& coeffs);

  const std::map<Index, Complex>& coeffs() const { return coeffs_; }
  Complex coefficient(int m, int n) const;
  /// Largest m + n present; -1 for the zero series.
  int degree() const;
  bool is_zero() const { return coeffs_.empty(); }
  bool constant_free() const { return coefficient(0, 0) == Complex{}; }

  /// Parses {"coeffs": [[m, n, re, im], ...]}.
  static RealEntireSeries from_json(const std::string& text);
  std::string to_json() const;

  /// Named presets: zero, quadratic, cubic, quintic, and exp<D> (the degree-D
  /// truncation of (e^{s^2+t^2} - 1)(s + it)).
  static RealEntireSeries preset(const std::string& name);

  bool operator==(const RealEntireSeries& other) const = default;

 private:
  std::map<Index, Complex> coeffs_;
};

RealEntireSeries operator+(const RealEntireSeries& a, const RealEntireSeries& b);
RealEntireSeries operator*(const RealEntireSeries& a, const RealEntireSeries& b);
RealEntireSeries operator*(Complex c, const RealEntireSeries& a);

Complex evaluate(const RealEntireSeries& F, Complex s, Complex t);

/// Coefficientwise absolute value, the majorant F~.
RealEntireSeries majorant(const RealEntireSeries& F);
/// Majorant evaluated at nonnegative reals.
double evaluate_majorant(const RealEntireSeries& F, double x, double y);

RealEntireSeries partial_x(const RealEntireSeries& F);
RealEntireSeries partial_y(const RealEntireSeries& F);

/// Sum of |a_{mn}| R^{m+n} over m + n > degree for the exp preset: the part
/// of the majorant dropped by truncating at that degree.
double exp_preset_tail(int degree, double radius);

/// F(Re f, Im f) at every node.
SampledField compose(const RealEntireSeries& F, const SampledField& f);

struct Certificate {
  double lhs;
  double rhs;
  double C;
};

/// lhs = ||F(f)||, rhs = F~(||Re f||, ||Im f||), C = lhs / rhs. Requires F(0) = 0.
Certificate norm_certificate(const RealEntireSeries& F, const SampledField& f, const ModParams& params);

/// lhs = ||F(u) - F(v)||, rhs = 2 ||u - v|| (d_xF~ + d_yF~)(||u|| + ||v||, ||u|| + ||v||).
Certificate lipschitz_bound(const RealEntireSeries& F, const SampledField& u, const SampledField& v,
                            const ModParams& params);

/// One-variable series G with F~(x, x) = x G(x).
struct OneVariableSeries {
  std::vector<double> coeffs;  // coeffs[k] multiplies x^k
  double operator()(double x) const;
};

OneVariableSeries g_factor(const RealEntireSeries& F);

}  // namespace modspace
