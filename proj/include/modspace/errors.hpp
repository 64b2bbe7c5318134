#pragma once

#include <stdexcept>
#include <string>

namespace modspace {

/// A computation produced NaN/Inf or failed to converge. Distinct from
/// std::invalid_argument, which signals a violated precondition.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace modspace
