#include "freent/matrix_io.hpp"

#include <stdexcept>

namespace freent {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix JSON must be a nonempty array of rows");
  const std::size_t nrows = j.size();
  const std::size_t ncols = j.at(0).is_array() ? j.at(0).size() : 0;
  if (ncols == 0) throw std::invalid_argument("matrix rows must be nonempty arrays");
  Eigen::MatrixXcd m(nrows, ncols);
  for (std::size_t r = 0; r < nrows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != ncols)
      throw std::invalid_argument("matrix rows must all have the same length");
    for (std::size_t c = 0; c < ncols; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
        throw std::invalid_argument("matrix entries must be [re, im] number pairs");
      m(r, c) = std::complex<double>{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return m;
}

}  // namespace freent
