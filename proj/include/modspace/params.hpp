#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace modspace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exponents and weight of a mixed modulation norm M^{p,q}_s. p and q take
/// values in [1, inf]; the weight is (1 + |w|^2)^{s/2}.
struct ModParams {
  double p = 1.0;
  double q = 1.0;
  double s = 0.0;

  void validate() const;
  std::string label() const;
};

/// Parses an exponent such as "2" or "inf".
double parse_exponent(const std::string& text);
std::string format_exponent(double e);

}  // namespace modspace
