#pragma once

#include "horolab/algebra.hpp"

#include <optional>
#include <string>

namespace horolab {

// A scalar literal from a config file. `exact` is set when the text is
// built from integers with + - * / and parentheses only.
struct ParsedNumber {
  double value = 0.0;
  std::optional<Rational> exact;
};

// Grammar: sums/products of integers, decimals (1.5, 2e-3), pi, sqrt(expr), (expr).
ParsedNumber parse_number(const std::string& text);

}  // namespace horolab
