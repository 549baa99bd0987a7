#pragma once

#include "horolab/experiments.hpp"
#include "horolab/expr.hpp"

#include <json.hpp>

#include <string>

namespace horolab::cli {

using nlohmann::json;

// Malformed configuration; the front end maps it to the usage exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ParsedNumber number_of(const json& j, const std::string& what);
double real_of(const json& j, const std::string& what);
RealVector vector_of(const json& j, const std::string& what);
// Comma-separated literals, e.g. "1/2, sqrt(2)".
RealVector vector_from_text(const std::string& text, const std::string& what);

struct MatrixInput {
  RealMatrix real;
  std::optional<RationalMatrix> exact;
};

// "identity", or rows of literals.
MatrixInput matrix_of(const json& j, int d, const std::string& what);
// "identity", a path to a JSON file, or inline rows "a,b;c,d".
MatrixInput matrix_from_text(const std::string& text, int d, const std::string& what);

Box box_of(const json& j, int n, const std::string& what);
TargetSpec target_of(const json& j, int d);
ExperimentConfig experiment_of(const json& j);

json load_json_file(const std::string& path);

}  // namespace horolab::cli
