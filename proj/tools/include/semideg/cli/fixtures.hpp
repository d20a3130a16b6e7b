#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semideg::cli {

struct EmbeddedFixture {
  std::string_view name;
  std::string_view text;
};

/// Fixture files compiled into the binary, sorted by name.
const std::vector<EmbeddedFixture>& embedded_fixtures();

std::optional<std::string_view> find_fixture(std::string_view name);

/// First comment line of a fixture, without the '#'.
std::string fixture_summary(std::string_view text);

}  // namespace semideg::cli
