#pragma once
// Matrices travel as JSON arrays of rows, each entry a [re, im] pair.
#include <Eigen/Dense>
#include <json.hpp>
namespace freent {
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);
}  // namespace freent
