#include "cwm/dataset.hpp"

#include <cmath>
#include <string>

#include "cwm/errors.hpp"

namespace cwm {

std::vector<int> MissingDataset::missing_rows() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i) {
    if (mask[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

std::vector<int> MissingDataset::observed_rows() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

int MissingDataset::n_missing() const {
  int k = 0;
  for (bool m : mask) k += m ? 1 : 0;
  return k;
}

Vector MissingDataset::observed_y() const {
  const auto rows = observed_rows();
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out[static_cast<Eigen::Index>(k)] = y[rows[k]];
  return out;
}

void MissingDataset::validate() const {
  if (n() < 1) throw ValidationError("dataset: no rows");
  if (X.rows() != n()) throw ValidationError("dataset: X and y have different row counts");
  if (static_cast<int>(mask.size()) != n()) throw ValidationError("dataset: mask length mismatch");
  if (!column_names.empty() && static_cast<int>(column_names.size()) != d() + 1) {
    throw ValidationError("dataset: expected " + std::to_string(d() + 1) + " column names");
  }
  for (int i = 0; i < n(); ++i) {
    for (int j = 0; j < d(); ++j) {
      if (!std::isfinite(X(i, j))) {
        throw ValidationError("dataset: covariate (" + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + ") is not finite");
      }
    }
    if (!mask[static_cast<std::size_t>(i)] && !std::isfinite(y[i])) {
      throw ValidationError("dataset: observed response at row " + std::to_string(i + 1) +
                            " is not finite");
    }
  }
}

MissingDataset MissingDataset::select_covariates(const std::vector<int>& columns) const {
  MissingDataset out;
  out.X.resize(n(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const int c = columns[k];
    if (c < 0 || c >= d()) throw ValidationError("dataset: covariate index out of range");
    out.X.col(static_cast<Eigen::Index>(k)) = X.col(c);
  }
  out.y = y;
  out.mask = mask;
  if (!column_names.empty()) {
    for (int c : columns) out.column_names.push_back(column_names[static_cast<std::size_t>(c)]);
    out.column_names.push_back(column_names.back());
  }
  return out;
}

Vector MissingDataset::joint_row(int i, double value) const {
  Vector w(d() + 1);
  w.head(d()) = X.row(i).transpose();
  w[d()] = value;
  return w;
}

Vector complete_response(const MissingDataset& data, const Vector& fill) {
  Vector out = data.y;
  Eigen::Index k = 0;
  for (int i = 0; i < data.n(); ++i) {
    if (data.mask[static_cast<std::size_t>(i)]) {
      if (k >= fill.size()) throw ValidationError("complete_response: too few imputed values");
      out[i] = fill[k++];
    }
  }
  if (k != fill.size()) throw ValidationError("complete_response: too many imputed values");
  return out;
}

}  // namespace cwm
