#include "semideg/checks.hpp"

namespace semideg {

CheckOutcome CheckOutcome::of(std::string name, const Tensor& residual) {
  CheckOutcome out{std::move(name), CheckStatus::ExactZero, {}};
  if (auto idx = residual.first_nonzero()) {
    out.status = CheckStatus::Nonzero;
    out.detail = describe_component(residual, *idx);
  }
  return out;
}

CheckOutcome CheckOutcome::skipped(std::string name, std::string reason) {
  return CheckOutcome{std::move(name), CheckStatus::Skipped, std::move(reason)};
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::ExactZero: return "exact-zero";
    case CheckStatus::Nonzero: return "nonzero";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

}  // namespace semideg
