#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wbmld/polynomial.hpp"

namespace wbmld {

struct ProblemFactor {
  std::vector<Polynomial> generators;
  Rational exponent;
};

// Text format:
//   dim=3
//   factor: <g1>, <g2> ^ <p/q>
//   option weight_bound=8
// '#' starts a comment. The exponent is separated by the last top-level '^' preceded by whitespace.
struct ProblemFile {
  int dimension = 3;
  std::vector<ProblemFactor> factors;
  int weight_bound = 8;
  int catalog_depth = 3;
  std::uint64_t seed = 0;

  static ProblemFile parse(std::string_view text);
  static ProblemFile read(const std::string& path);
  std::string serialize() const;
  RealIdeal ideal() const;
};

std::string read_text_file(const std::string& path);

}  // namespace wbmld
