#pragma once

#include <string>

#include "semideg/tensor.hpp"

namespace semideg {

enum class CheckStatus { ExactZero, Nonzero, Skipped };

/// Outcome of one exact check. `detail` holds the first nonzero component
/// for Nonzero and the reason for Skipped.
struct CheckOutcome {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  std::string detail;

  bool is_zero() const { return status == CheckStatus::ExactZero; }

  static CheckOutcome of(std::string name, const Tensor& residual);
  static CheckOutcome skipped(std::string name, std::string reason);
};

std::string to_string(CheckStatus status);

}  // namespace semideg
