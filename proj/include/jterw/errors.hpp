#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "jterw/rational_matrix.hpp"

namespace jterw {

/// An identity that should hold exactly did not. Carries the location of the largest
/// residual entry when one is available.
class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, std::optional<ResidualSummary> residual = std::nullopt)
      : std::runtime_error(what), residual_(std::move(residual)) {}

  const std::optional<ResidualSummary>& residual() const { return residual_; }

 private:
  std::optional<ResidualSummary> residual_;
};

}  // namespace jterw
